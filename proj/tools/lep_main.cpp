#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lep/channels.hpp"
#include "lep/driven_qubit.hpp"
#include "lep/json_io.hpp"
#include "lep/sweep.hpp"
#include "lep/tomography.hpp"
#include "lep/uncertainty.hpp"

namespace {

using namespace lep;

long parse_shots(const std::string& text) {
  if (text == "exact") return 0;
  try {
    std::size_t pos = 0;
    const long n = std::stol(text, &pos);
    if (pos != text.size() || n < 0) throw std::invalid_argument("");
    return n;
  } catch (const std::exception&) {
    throw DimensionError("--shots expects a non-negative count or 'exact'");
  }
}

nlohmann::json load_json(const std::string& path) {
  try {
    return nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw DimensionError("invalid JSON in " + path + ": " + e.what());
  }
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty())
    std::cout << text;
  else
    write_text_file(out_path, text);
}

struct ModelFlags {
  double gamma_x = 2.0;
  double gamma_y = 2.0;
  double gamma_minus = 0.0;
  double omega = 1.0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--gamma-x", gamma_x, "sigma_x dephasing rate");
    cmd->add_option("--gamma-y", gamma_y, "sigma_y dephasing rate");
    cmd->add_option("--gamma-minus", gamma_minus, "decay rate");
    cmd->add_option("--omega", omega, "drive frequency");
  }
  DrivenQubitParams params() const {
    DrivenQubitParams p;
    p.omega = omega;
    p.gamma_minus = gamma_minus;
    p.gamma_x = gamma_x;
    p.gamma_y = gamma_y;
    p.validate();
    return p;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"driven-qubit Liouvillian spectroscopy toolkit"};
  app.require_subcommand(1);

  // ---- sweep ----------------------------------------------------------
  SweepConfig cfg;
  std::string sweep_shots = "20000", sweep_method = "m1", sweep_out = "sweep.csv";
  auto* sweep = app.add_subcommand("sweep", "sweep gamma_x: spectra, overlaps, error bars, CSV");
  sweep->add_option("--gamma-x-min", cfg.gamma_x_min, "sweep start");
  sweep->add_option("--gamma-x-max", cfg.gamma_x_max, "sweep end");
  sweep->add_option("--points", cfg.points, "grid point count");
  sweep->add_option("--gamma-y", cfg.gamma_y, "sigma_y dephasing rate");
  sweep->add_option("--gamma-minus", cfg.gamma_minus, "decay rate");
  sweep->add_option("--omega", cfg.omega, "drive frequency");
  auto* sweep_dt = sweep->add_option("--dt", cfg.dt, "tomography time step (default 1/(15 omega))");
  sweep->add_option("--method", sweep_method, "tomography method (m1, m2, m3)");
  sweep->add_option("--shots", sweep_shots, "shots per setting, or 'exact'");
  sweep->add_option("--white-noise", cfg.white_noise, "input white-noise level w");
  sweep->add_option("--seed", cfg.seed, "base RNG seed");
  sweep->add_option("--out", sweep_out, "output CSV path");
  sweep->add_option("--workers", cfg.workers, "concurrent sweep workers");
  sweep->add_flag("--emit-s-matrix", cfg.emit_s_matrix, "also write per-point S matrices (JSON)");
  sweep->callback([&] {
    if (!*sweep_dt) cfg.dt = 1.0 / (15.0 * cfg.omega);
    cfg.method = method_from_name(sweep_method);
    cfg.shots = parse_shots(sweep_shots);
    const SweepResult result = run_sweep(cfg);
    write_text_file(sweep_out, sweep_csv(result));
    if (cfg.emit_s_matrix) {
      nlohmann::json all = nlohmann::json::array();
      for (const SweepRow& row : result.rows)
        all.push_back({{"gamma_x", row.gamma_x}, {"s_matrix", matrix_to_json(*row.s_matrix)}});
      write_text_file(sweep_out + ".s.json", all.dump(2) + "\n");
    }
    std::cout << "wrote " << sweep_out << ": " << result.rows.size() << " rows, "
              << result.leps.size() << " exceptional points\n";
  });

  // ---- spectrum -------------------------------------------------------
  ModelFlags spec_model;
  std::string spec_matrix, spec_out;
  auto* spectrum = app.add_subcommand("spectrum", "eigensystem and regime of a Liouvillian");
  spec_model.attach(spectrum);
  spectrum->add_option("--matrix", spec_matrix, "JSON matrix file (overrides model flags)")
      ->check(CLI::ExistingFile);
  spectrum->add_option("--out", spec_out, "output JSON path (default stdout)");
  spectrum->callback([&] {
    const Mat l = spec_matrix.empty() ? driven_qubit_liouvillian(spec_model.params())
                                      : matrix_from_json(load_json(spec_matrix));
    const Eigensystem es = eig_general(l);
    const RegimeReport regime = classify_modes(es.values);
    nlohmann::json j = eigensystem_to_json(es, regime);
    j["liouvillian"] = matrix_to_json(l);
    if (es.size() > 2) j["overlap_12"] = eigen_overlap(es, 1, 2, OverlapKind::right_right);
    emit(spec_out, j.dump(2) + "\n");
  });

  // ---- qpt-sim --------------------------------------------------------
  ModelFlags sim_model;
  std::string sim_shots = "20000", sim_out;
  NoiseModel sim_noise;
  double sim_dt = 0.0;
  bool sim_exact_prop = false;
  auto* qpt_sim = app.add_subcommand("qpt-sim", "simulate the 18 tomography settings (counts JSON)");
  sim_model.attach(qpt_sim);
  auto* sim_dt_opt = qpt_sim->add_option("--dt", sim_dt, "time step (default 1/(15 omega))");
  qpt_sim->add_option("--shots", sim_shots, "shots per setting, or 'exact'");
  qpt_sim->add_option("--white-noise", sim_noise.white_noise, "input white-noise level w");
  qpt_sim->add_option("--seed", sim_noise.seed, "RNG seed");
  qpt_sim->add_flag("--exact-propagator", sim_exact_prop, "use exp(dt L) instead of 1 + dt L");
  qpt_sim->add_option("--out", sim_out, "output JSON path (default stdout)");
  qpt_sim->callback([&] {
    const DrivenQubitParams p = sim_model.params();
    if (!*sim_dt_opt) sim_dt = 1.0 / (15.0 * p.omega);
    sim_noise.shots = parse_shots(sim_shots);
    const Mat l = driven_qubit_liouvillian(p);
    const Mat s = sim_exact_prop ? propagator(l, sim_dt) : first_order_propagator(l, sim_dt);
    const auto records = simulate_records(s, sim_noise);
    emit(sim_out, records_to_json(records, sim_dt, p.omega).dump(2) + "\n");
  });

  // ---- reconstruct ----------------------------------------------------
  std::string rec_counts, rec_method = "m1", rec_out;
  auto* reconstruct = app.add_subcommand("reconstruct", "Liouvillian from a counts JSON file");
  reconstruct->add_option("--counts", rec_counts, "counts JSON from qpt-sim")
      ->required()
      ->check(CLI::ExistingFile);
  reconstruct->add_option("--method", rec_method, "tomography method (m1, m2, m3)");
  reconstruct->add_option("--out", rec_out, "output JSON path (default stdout)");
  reconstruct->callback([&] {
    const CountsBundle bundle = records_from_json(load_json(rec_counts));
    const Tomogram tomo =
        tomogram_from_records(bundle.records, method_from_name(rec_method), bundle.dt);
    const Reconstruction rec = reconstruct_liouvillian(tomo);
    const Eigensystem es = eig_general(rec.liouvillian);
    nlohmann::json j = eigensystem_to_json(es, classify_modes(es.values));
    j["liouvillian"] = matrix_to_json(rec.liouvillian);
    j["s_matrix"] = matrix_to_json(tomogram_s_form(tomo));
    j["residual"] = rec.residual;
    j["method"] = rec_method;
    j["dt"] = bundle.dt;
    j["overlap_12"] = eigen_overlap(es, 1, 2, OverlapKind::right_right);
    emit(rec_out, j.dump(2) + "\n");
  });

  // ---- dilate ---------------------------------------------------------
  ModelFlags dil_model;
  std::string dil_out;
  double dil_dt = 0.0;
  bool dil_first_order = false;
  auto* dilate = app.add_subcommand("dilate", "Kraus set and 3-qubit dilation of the propagator");
  dil_model.attach(dilate);
  auto* dil_dt_opt = dilate->add_option("--dt", dil_dt, "time step (default 1/(15 omega))");
  dilate->add_flag("--first-order", dil_first_order, "dilate 1 + dt L (clamping tiny negatives)");
  dilate->add_option("--out", dil_out, "output JSON path (default stdout)");
  dilate->callback([&] {
    const DrivenQubitParams p = dil_model.params();
    if (!*dil_dt_opt) dil_dt = 1.0 / (15.0 * p.omega);
    const Mat l = driven_qubit_liouvillian(p);
    const Mat s = dil_first_order ? first_order_propagator(l, dil_dt) : propagator(l, dil_dt);
    const KrausSet kraus = kraus_from_choi(choi_from_superop(s));
    const DilationUnitary u = dilation_unitary(kraus);
    emit(dil_out, dilation_to_json(kraus, u).dump(2) + "\n");
  });

  // ---- errorbars ------------------------------------------------------
  ModelFlags err_model;
  std::string err_profile, err_mode = "symmetric", err_out;
  double err_w = 0.02;
  int err_dim = 2;
  auto* errorbars = app.add_subcommand(
      "errorbars", "triangular gamma-uncertainty fit from a fidelity profile");
  err_model.attach(errorbars);
  errorbars->add_option("--profile", err_profile, "profile CSV (gamma_prime,fidelity)")
      ->check(CLI::ExistingFile);
  errorbars->add_option("--white-noise", err_w, "white-noise level w");
  errorbars->add_option("--dim", err_dim, "Hilbert-space dimension");
  errorbars->add_option("--mode", err_mode, "symmetric or asymmetric");
  errorbars->add_option("--out", err_out, "output JSON path (default stdout)");
  errorbars->callback([&] {
    BarMode mode;
    if (err_mode == "symmetric")
      mode = BarMode::symmetric;
    else if (err_mode == "asymmetric")
      mode = BarMode::asymmetric;
    else
      throw DimensionError("--mode expects 'symmetric' or 'asymmetric'");
    const FidelityProfile profile = err_profile.empty()
                                        ? model_fidelity_profile(err_model.params())
                                        : profile_from_csv(read_text_file(err_profile));
    emit(err_out, fit_to_json(gamma_error_bars(profile, err_w, err_dim, mode)).dump(2) + "\n");
  });

  // ---- time-estimate --------------------------------------------------
  long te_experiments = 0, te_shots = 0;
  double te_shot_time = 0.0;
  auto* time_est = app.add_subcommand("time-estimate", "experiments x shots x shot_time");
  time_est->add_option("--experiments", te_experiments, "experiment count")->required();
  time_est->add_option("--shots", te_shots, "shots per experiment")->required();
  time_est->add_option("--shot-time", te_shot_time, "seconds per shot")->required();
  time_est->callback([&] {
    std::cout << format_double(time_estimate(te_experiments, te_shots, te_shot_time)) << "\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const DimensionError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
