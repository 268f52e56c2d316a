#pragma once

#include <utility>
#include <vector>

#include "lep/types.hpp"

namespace lep {

// Row-major vectorization: vec(|i><j|) sits at index i*d + j, so that
// vec(A rho B) = (A kron B^T) vec(rho).
Vec vectorize(const Mat& m);
Mat unvectorize(const Vec& v);

Mat kron(const Mat& a, const Mat& b);

// Superoperator for rho -> A rho B.
Mat sandwich(const Mat& a, const Mat& b);

// Unit-rate dissipator rho -> G rho G^dag - (1/2){G^dag G, rho}.
Mat dissipator(const Mat& g);

struct LindbladModel {
  Mat hamiltonian;
  std::vector<std::pair<double, Mat>> jumps;  // (rate, operator)

  int dim() const { return static_cast<int>(hamiltonian.rows()); }
};

// Generator assembled term by term from the Hamiltonian commutator and the
// dissipators.
Mat liouvillian_direct(const LindbladModel& model);

// H - (i/2) sum_k rate_k G_k^dag G_k
Mat effective_hamiltonian(const LindbladModel& model);

// Same generator split into the non-Hermitian-Hamiltonian part plus the jump
// terms: -i(Heff kron 1 - 1 kron conj(Heff)) + sum rate G kron conj(G).
// Equals liouvillian_direct to rounding.
Mat liouvillian_from_nhh(const LindbladModel& model);

Mat apply_superop(const Mat& superop, const Mat& rho);

// max |vec(1)^dag L| column sum; zero iff L annihilates trace
double trace_defect(const Mat& liouvillian);

}  // namespace lep
