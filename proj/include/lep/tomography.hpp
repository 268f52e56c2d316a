#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "lep/spectral.hpp"
#include "lep/superop.hpp"
#include "lep/types.hpp"

namespace lep {

// Reconstruction bases: m1 samples the 6x6 probe/projector table, m2 the 4x4
// Pauli-basis table, m3 the 4x4 matrix-unit table.  All three are assembled
// from the same 18 single-qubit measurement settings.
enum class Method { m1, m2, m3 };

Method method_from_name(const std::string& name);
const char* method_name(Method m);

struct NoiseModel {
  double white_noise = 0.0;  // input-state admixture (1-w)rho + (w/2)1
  long shots = 0;            // 0 = exact probabilities, no sampling
  std::uint64_t seed = 0;

  void validate() const;
};

struct MeasurementRecord {
  int input = 0;   // probe index (x+,x-,y+,y-,z+,z-)
  int axis = 0;    // measurement axis 0=x 1=y 2=z
  long shots = 0;  // 0 when the record stores exact probabilities
  long plus = 0;
  long minus = 0;
  double p_plus = 0.0;  // exact outcome probabilities (unclamped)
  double p_minus = 0.0;

  double freq_plus() const { return shots > 0 ? double(plus) / double(shots) : p_plus; }
  double freq_minus() const { return shots > 0 ? double(minus) / double(shots) : p_minus; }
};

enum class TomogramTarget { s_form, l_form };

struct Tomogram {
  Method method = Method::m1;
  Mat matrix;  // 6x6 for m1, 4x4 for m2/m3
  double dt = 0.0;
  TomogramTarget target = TomogramTarget::l_form;
};

Mat add_white_noise(const Mat& rho, double w);

// Multinomial draw by CDF inversion over per-shot uniforms; identical
// (probabilities, shots, seed) give identical counts on every platform.
std::vector<long> sample_counts(const std::vector<double>& probabilities, long shots,
                                std::uint64_t seed);

// The 18 measurement settings (6 probes x 3 axes) applied to the map
// vec(rho_out) = s_form . vec(rho_in), with white noise mixed into the inputs
// before the channel.  Record seeds derive from (noise.seed, setting index).
std::vector<MeasurementRecord> simulate_records(const Mat& s_form, const NoiseModel& noise);

// Assemble a tomogram in L-form, (measured S-table - identity table)/dt.
Tomogram tomogram_from_records(const std::vector<MeasurementRecord>& records, Method method,
                               double dt);

// The S-form table the tomogram was measured from: m1 S' = L'.dt + I',
// m2/m3 S = 1 + dt.L.
Mat tomogram_s_form(const Tomogram& t);

// Printed basis-change pair: 4x6 row-isometry mapping the m1 table to the
// Liouvillian supported on traceless+identity space, and the 4x4 unitary
// relating the Pauli and matrix-unit bases.
std::pair<Mat, Mat> equivalence_transforms();

struct Reconstruction {
  Mat liouvillian;        // 4x4 superoperator in the matrix-unit basis
  double residual = 0.0;  // least-squares residual (m1 only)
};

// m1: least squares over the 12-parameter family of Hermiticity- and
// trace-preserving qubit generators; m2/m3: exact basis change.
Reconstruction reconstruct_liouvillian(const Tomogram& t);

struct QptResult {
  std::vector<MeasurementRecord> records;
  Tomogram tomogram;  // L-form
  Mat liouvillian;    // reconstructed generator
  double residual = 0.0;
  Eigensystem eigensystem;
  RegimeReport regime;
};

// measure -> reconstruct -> diagnose, against the first-order propagator
// 1 + dt.L (default) or the exact exponential of the generator.
QptResult run_qpt(const Mat& liouvillian, Method method, const NoiseModel& noise, double dt,
                  bool exact_propagator = false);

}  // namespace lep
