#pragma once

#include <vector>

#include "lep/superop.hpp"
#include "lep/types.hpp"

namespace lep {

// Choi matrix in input-tensor-output index convention:
//   chi[(i,k),(j,l)] = S[(k,l),(i,j)],  so  rho_out = tr_in[chi (rho_in^T ⊗ 1)].
struct ChoiMatrix {
  int dim = 0;          // Hilbert-space dimension d; matrix is d²×d²
  Mat matrix;
  double cp_deficit = 0.0;  // most negative eigenvalue seen before clamping

  double hermiticity_defect() const;
  // ‖tr_out chi − 1‖_max; zero for trace-preserving channels
  double trace_preservation_defect() const;
};

struct KrausSet {
  std::vector<Mat> operators;
  std::vector<double> weights;  // Choi eigenvalues r_l the operators came from
  double cp_deficit = 0.0;

  int dim() const { return operators.empty() ? 0 : static_cast<int>(operators.front().rows()); }
  // ‖Σ A†A − 1‖_max
  double completeness_defect() const;
};

struct DilationUnitary {
  int system_dim = 0;
  int env_dim = 0;  // power of two ≥ Kraus count
  Mat matrix;       // (system_dim·env_dim) square, system ⊗ environment ordering
  double completion_residual = 0.0;  // ‖U†U − 1‖_max after column completion

  // environment is prepared in |0⟩; block column at env=|0⟩ stacks the Kraus ops
  Mat kraus_block(int l) const;
};

ChoiMatrix choi_from_superop(const Mat& superop);
Mat superop_from_choi(const ChoiMatrix& chi);

// Eigendecompose chi; eigenvalues > rank_tol·tr(chi) become Kraus operators
// A_l[k,i] = sqrt(r_l)·pi_l[(i,k)].  Eigenvalues in [−clamp·tr, 0) are clamped
// to zero with the deficit recorded; anything below −clamp·tr aborts.
KrausSet kraus_from_choi(const ChoiMatrix& chi, double rank_tol = 1e-12,
                         double clamp_threshold = 1e-8);

// All d² columns of the positive square root of chi, reshaped to operators.
// Gauge-free (no eigenvector phase choices), hence smooth in channel parameters.
KrausSet kraus_canonical_sqrt(const ChoiMatrix& chi, double clamp_threshold = 1e-8);

Mat superop_from_kraus(const KrausSet& k);

Mat apply_channel(const Mat& superop, const Mat& rho);
Mat apply_channel(const ChoiMatrix& chi, const Mat& rho);
Mat apply_channel(const KrausSet& k, const Mat& rho);
Mat apply_channel(const DilationUnitary& u, const Mat& rho);

// U = Σ_l A_l ⊗ |l⟩⟨0|_env, remaining columns completed deterministically by
// orthogonalizing canonical basis vectors.  env_dim = smallest power of two
// that fits the Kraus count, never below 2.
DilationUnitary dilation_unitary(const KrausSet& k, double completeness_tol = 1e-8);

struct WeightedUnitary {
  double probability = 0.0;
  Mat unitary;
};

// Kraus ops sorted by descending weight, padded to four, paired (0,1),(2,3).
// Each pair must satisfy Σ_pair A†A = q·1; V_m dilates the rescaled pair.
std::vector<WeightedUnitary> pairwise_two_qubit_scheme(const KrausSet& k,
                                                       double feasibility_tol = 1e-8);

// Succeeds iff every A_l = sqrt(p_l)·W_l with W_l unitary (equal singular values).
std::vector<WeightedUnitary> random_unitary_scheme(const KrausSet& k,
                                                   double singular_spread_tol = 1e-8);

Mat partial_trace(const Mat& rho, const std::vector<int>& dims, const std::vector<int>& keep);

// Single-qubit channel read off qubit `output_qubit` of the three-qubit circuit
// U acting on system ⊗ env with both environment qubits starting in |0⟩.
Mat induced_qubit_channel(const DilationUnitary& u, int output_qubit);

// exp(t·L) and its first-order approximation 1 + dt·L
Mat propagator(const Mat& liouvillian, double t);
Mat first_order_propagator(const Mat& liouvillian, double dt);

}  // namespace lep
