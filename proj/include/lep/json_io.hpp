#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "lep/channels.hpp"
#include "lep/spectral.hpp"
#include "lep/tomography.hpp"
#include "lep/uncertainty.hpp"

namespace lep {

// {"rows": r, "cols": c, "data": [[re, im], ...]} row-major
nlohmann::json matrix_to_json(const Mat& m);
Mat matrix_from_json(const nlohmann::json& j);

struct CountsBundle {
  std::vector<MeasurementRecord> records;
  double dt = 0.0;
  double omega = 1.0;
};

// {"dt":..., "omega":..., "records":[{"input":"x+","axis":"z","shots":N,
//  "counts":{"plus":n,"minus":m}}, ...]}; exact records carry shots=0 and a
// "probabilities" object instead of counts.
nlohmann::json records_to_json(const std::vector<MeasurementRecord>& records, double dt,
                               double omega);
CountsBundle records_from_json(const nlohmann::json& j);

nlohmann::json eigensystem_to_json(const Eigensystem& es, const RegimeReport& regime);
nlohmann::json dilation_to_json(const KrausSet& k, const DilationUnitary& u);
nlohmann::json fit_to_json(const TriangularNoiseFit& fit);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// two-column CSV (gamma_prime, fidelity), optional header line
FidelityProfile profile_from_csv(const std::string& text);

}  // namespace lep
