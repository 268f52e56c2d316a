#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lep/driven_qubit.hpp"
#include "lep/spectral.hpp"
#include "lep/tomography.hpp"

namespace lep {

struct SweepConfig {
  double gamma_x_min = 0.0;
  double gamma_x_max = 4.0;
  int points = 30;
  double gamma_y = 2.0;
  double gamma_minus = 0.0;
  double omega = 1.0;
  double dt = 1.0 / 15.0;  // omega*dt = 1/15 at the default omega
  Method method = Method::m1;
  long shots = 20000;  // 0 = exact probabilities
  double white_noise = 0.0;
  std::uint64_t seed = 1;
  int workers = 8;
  bool emit_s_matrix = false;

  void validate() const;
  double gamma_x_at(int index) const;
};

struct SweepRow {
  double gamma_x = 0.0;
  std::array<cd, 4> eigenvalues{};  // sorted: Re descending, Im ascending
  double overlap_12 = 0.0;          // right-right overlap of modes 1 and 2
  std::string regime;
  double gap = 0.0;
  // first-order eigenvalue shifts of the ideal modes under dL = L_rec - L_ideal
  double err_re_l1 = 0.0, err_im_l1 = 0.0, err_re_l2 = 0.0, err_im_l2 = 0.0;
  double gamma_err_left = 0.0, gamma_err_right = 0.0;
  std::optional<Mat> s_matrix;
};

struct SweepResult {
  SweepConfig config;
  std::vector<SweepRow> rows;
  std::vector<LEPReport> leps;  // from the reconstructed-generator family
};

// label for the dominant non-stationary behavior of a spectrum
std::string regime_label(const RegimeReport& report);

// Rows computed concurrently (deterministic per-point seeds), LEPs located on
// the reconstructed family.  Identical config gives identical results
// independent of worker count.
SweepResult run_sweep(const SweepConfig& cfg);

// CSV serialization: fixed header, %.12g fields, LEP report appended as
// "# lep ..." comment lines.
std::string sweep_csv(const SweepResult& result);

// deterministic float formatting used across all text output
std::string format_double(double v);

double time_estimate(long experiments, long shots, double shot_time);

}  // namespace lep
