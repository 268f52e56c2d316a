#pragma once

#include <array>
#include <optional>

#include "lep/superop.hpp"
#include "lep/types.hpp"

namespace lep {

// Qubit with level splitting omega, decay sigma_-, and incoherent sigma_x /
// sigma_y driving channels.
struct DrivenQubitParams {
  double omega = 1.0;
  double gamma_minus = 0.0;
  double gamma_x = 0.0;
  double gamma_y = 2.0;

  void validate() const {
    if (omega <= 0) throw DimensionError("omega must be positive");
    if (gamma_minus < 0 || gamma_x < 0 || gamma_y < 0)
      throw DimensionError("rates must be nonnegative");
  }
};

LindbladModel driven_qubit_model(const DrivenQubitParams& p);
Mat driven_qubit_liouvillian(const DrivenQubitParams& p);

// Closed-form spectrum, sorted descending by real part, ties by ascending
// imaginary part: 0, -gm/2 - gx - gy +/- Omega, -gm - 2(gx + gy), with
// Omega^2 = (gx - gy)^2 - omega^2.
std::array<cd, 4> driven_qubit_analytic_eigenvalues(const DrivenQubitParams& p);

// Closed-form right eigenmatrices in the same order as the eigenvalues.
// The coherence pair degenerates when gx = gy or at (gx-gy)^2 = omega^2.
std::array<Mat2, 4> driven_qubit_analytic_eigenmatrices(const DrivenQubitParams& p);

// diag(gx + gy, gx + gy + gm) normalized; undefined at all rates zero.
Mat2 driven_qubit_steady_state(const DrivenQubitParams& p);

// The gamma_x values where the coherence pair coalesces: gy -/+ omega,
// present only when gy > omega (else the lower one leaves the physical range).
std::optional<std::pair<double, double>> driven_qubit_lep_gammas(const DrivenQubitParams& p);

// Closed-form tomography tables for the gy = 2*omega family at x = gx/omega.
// damping_case 1 fixes gm = 0, case 2 fixes gm = omega.
struct ClosedFormTables {
  Mat probe_table;  // 6x6 generator on (x+,x-,y+,y-,z+,z-) frequencies
  Mat pauli_table;  // 4x4 generator on Bloch components
  std::array<cd, 3> nonzero_eigenvalues;
};

// Case 1's tables use Bloch order (1, x, y, z) and equal the measured tables
// directly; case 2's pauli_table is ordered (1, y, z, x) - the order produced
// by conjugating the probe table with the probe-combination isometry of
// equivalence_transforms - and its probe_table labels the z probes in the
// opposite order to probe_ket (conjugate by the z+/z- swap to compare).
ClosedFormTables driven_qubit_closed_form_tables(int damping_case, double x, double omega = 1.0);

}  // namespace lep
