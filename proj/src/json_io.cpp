#include "lep/json_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "lep/sweep.hpp"

namespace lep {

using nlohmann::json;

json matrix_to_json(const Mat& m) {
  json data = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      data.push_back({m(r, c).real(), m(r, c).imag()});
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Mat matrix_from_json(const json& j) {
  if (!j.contains("rows") || !j.contains("cols") || !j.contains("data"))
    throw Error("matrix JSON: expected keys rows, cols, data");
  const Eigen::Index rows = j.at("rows").get<Eigen::Index>();
  const Eigen::Index cols = j.at("cols").get<Eigen::Index>();
  const auto& data = j.at("data");
  if (!data.is_array() || static_cast<Eigen::Index>(data.size()) != rows * cols)
    throw Error("matrix JSON: data length does not match rows*cols");
  Mat m(rows, cols);
  Eigen::Index k = 0;
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c, ++k) {
      const auto& entry = data.at(k);
      if (!entry.is_array() || entry.size() != 2)
        throw Error("matrix JSON: each entry must be [re, im]");
      m(r, c) = cd(entry.at(0).get<double>(), entry.at(1).get<double>());
    }
  return m;
}

json records_to_json(const std::vector<MeasurementRecord>& records, double dt, double omega) {
  json recs = json::array();
  for (const auto& r : records) {
    json entry = {{"input", probe_name(r.input)}, {"axis", axis_name(r.axis)},
                  {"shots", r.shots}};
    if (r.shots > 0)
      entry["counts"] = {{"plus", r.plus}, {"minus", r.minus}};
    else
      entry["probabilities"] = {{"plus", r.p_plus}, {"minus", r.p_minus}};
    recs.push_back(std::move(entry));
  }
  return {{"dt", dt}, {"omega", omega}, {"records", std::move(recs)}};
}

CountsBundle records_from_json(const json& j) {
  CountsBundle bundle;
  if (!j.contains("dt") || !j.contains("records"))
    throw Error("counts JSON: expected keys dt, records");
  bundle.dt = j.at("dt").get<double>();
  bundle.omega = j.value("omega", 1.0);
  for (const auto& entry : j.at("records")) {
    MeasurementRecord r;
    r.input = probe_index(entry.at("input").get<std::string>());
    r.axis = axis_index(entry.at("axis").get<std::string>());
    r.shots = entry.at("shots").get<long>();
    if (r.shots > 0) {
      const auto& counts = entry.at("counts");
      r.plus = counts.at("plus").get<long>();
      r.minus = counts.at("minus").get<long>();
      if (r.plus + r.minus != r.shots)
        throw Error("counts JSON: counts do not sum to shots");
    } else {
      const auto& p = entry.at("probabilities");
      r.p_plus = p.at("plus").get<double>();
      r.p_minus = p.at("minus").get<double>();
    }
    bundle.records.push_back(r);
  }
  return bundle;
}

json eigensystem_to_json(const Eigensystem& es, const RegimeReport& regime) {
  json values = json::array();
  json types = json::array();
  for (int k = 0; k < es.size(); ++k) {
    values.push_back({es.values(k).real(), es.values(k).imag()});
    types.push_back(mode_type_name(regime.types[k]));
  }
  json defective = json::array();
  for (bool b : es.defective) defective.push_back(b);
  return {{"eigenvalues", std::move(values)},
          {"mode_types", std::move(types)},
          {"regime", regime_label(regime)},
          {"gap", regime.gap},
          {"condition", es.condition},
          {"defective", std::move(defective)}};
}

json dilation_to_json(const KrausSet& k, const DilationUnitary& u) {
  json kraus = json::array();
  for (std::size_t l = 0; l < k.operators.size(); ++l)
    kraus.push_back({{"weight", l < k.weights.size() ? k.weights[l] : 0.0},
                     {"matrix", matrix_to_json(k.operators[l])}});
  return {{"kraus", std::move(kraus)},
          {"unitary", matrix_to_json(u.matrix)},
          {"system_dim", u.system_dim},
          {"env_dim", u.env_dim},
          {"cp_deficit", k.cp_deficit},
          {"completion_residual", u.completion_residual}};
}

json fit_to_json(const TriangularNoiseFit& fit) {
  return {{"gamma_left", fit.gamma_left},   {"gamma_right", fit.gamma_right},
          {"peak_density", fit.peak_density}, {"mass_left", fit.mass_left},
          {"mass_right", fit.mass_right},   {"bar_left", fit.bar_left},
          {"bar_right", fit.bar_right}};
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file for reading: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open file for writing: " + path);
  out << content;
  if (!out) throw Error("failed writing file: " + path);
}

FidelityProfile profile_from_csv(const std::string& text) {
  std::vector<double> grid, values;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw Error("profile CSV: expected two comma-separated columns");
    try {
      grid.push_back(std::stod(line.substr(0, comma)));
      values.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      if (grid.size() == values.size()) continue;  // header line
      grid.pop_back();
      continue;
    }
  }
  return make_fidelity_profile(std::move(grid), std::move(values));
}

}  // namespace lep
