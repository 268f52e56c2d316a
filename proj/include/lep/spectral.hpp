#pragma once

#include <functional>
#include <vector>

#include "lep/types.hpp"

namespace lep {

struct Eigensystem {
  Vec values;                   // sorted: descending Re, ties ascending Im
  Mat right;                    // unit columns, right[i] paired with values[i]
  Mat left;                     // unit columns; left[i]^dag M = values[i] left[i]^dag
  std::vector<bool> defective;  // per-mode Jordan-proximity flag
  double condition = 1.0;       // condition number of the right eigenbasis
  bool biorthonormal = false;   // true once left^dag right == identity

  int size() const { return static_cast<int>(values.size()); }
};

struct EigOptions {
  double defect_overlap_tol = 1e-6;  // |<left_i|right_i>| below this flags mode i
  double defect_cond_tol = 1e8;      // right-basis condition above this flags the closest pair
};

// Full left/right eigensystem of a general complex matrix. Left vectors come
// from the adjoint problem and are matched to conjugate eigenvalues.
Eigensystem eig_general(const Mat& m, const EigOptions& opts = {});

// max_i |M r_i - lambda_i r_i| and the left-pair analogue
double max_right_residual(const Mat& m, const Eigensystem& es);
double max_left_residual(const Mat& m, const Eigensystem& es);

// Rescales (and recombines, for repeated eigenvalues) the left vectors so
// that <left_i|right_j> = delta_ij. Right vectors keep unit norm. Throws
// NearDefectiveError when any left/right pair is too close to orthogonal,
// reporting the pairing condition number - the signature of a nearby LEP.
void biorthonormalize(Eigensystem& es, double min_pair_overlap = 0.05);

enum class ModeType {
  stationary,  // lambda == 0
  overdamped,  // real negative
  spiraling,   // complex pair, decaying
  oscillatory  // purely imaginary
};

struct RegimeReport {
  std::vector<ModeType> types;
  double gap = 0.0;  // min |Re lambda| over non-stationary modes
  bool spiraling = false;
};

const char* mode_type_name(ModeType t);

// tol < 0 selects the default 1e-9 * max(1, max|lambda|)
RegimeReport classify_modes(const Vec& values, double tol = -1.0);

enum class OverlapKind { right_right, left_right };

// |<a_i|b_j>| of unit-normalized eigenvectors. right_right tends to 1 as two
// modes coalesce and is the indicator used for LEP detection; left_right is
// ~0 between distinct modes by biorthogonality.
double eigen_overlap(const Eigensystem& es, int i, int j, OverlapKind kind);

struct LEPReport {
  double param = 0.0;        // refined coalescence parameter
  int mode_a = 0, mode_b = 0;
  double separation = 0.0;   // |lambda_a - lambda_b| at the refined point
  double overlap = 0.0;      // right_right at the refined point
  double bracket_lo = 0.0, bracket_hi = 0.0;  // coarse-grid bracket
};

struct LEPOptions {
  double separation_rel_tol = 1e-6;  // times ||L|| Frobenius
  double overlap_min = 0.99;
  int max_bisections = 80;
};

// Scans a one-parameter matrix family for eigenvalue coalescences: direct
// grid hits of the separation gate plus real<->complex transitions of the
// spectrum, each refined by bisection.
std::vector<LEPReport> detect_leps(const std::function<Mat(double)>& family,
                                   const std::vector<double>& grid,
                                   const LEPOptions& opts = {});

struct Perturbation {
  Vec dvalues;  // first-order eigenvalue shifts
  Mat dright;   // first-order right-vector corrections (columns)
  Mat dleft;    // first-order left-vector corrections (columns)
};

// First-order non-Hermitian perturbation theory on a biorthonormalized
// system: dlambda_n = <left_n|dL|right_n>, vector corrections via the
// spectral sums with denominators lambda_i - lambda_n.
Perturbation perturb_first_order(const Eigensystem& es, const Mat& dl,
                                 double degenerate_tol = -1.0);

// Single eigenvalue shift in raw-ratio form; returns NaN when the left/right
// pair is numerically orthogonal instead of throwing.
cd perturb_eigenvalue_raw(const Eigensystem& es, int n, const Mat& dl);

enum class OverlapBarVariant { phase_sensitive, phase_robust };

// Error bar for the mode-1/mode-2 left_right overlap under perturbation dl.
// phase_robust: root-sum-square of the three first-order terms
// <dleft_1|right_2>, <left_1|dright_2>, <dleft_1|dright_2> - invariant under
// independent rephasing of eigenvectors. phase_sensitive: |<l_1'|r_2'> -
// <l_1|r_2>| against a fresh diagonalization of m + dl, which inherits the
// solver's arbitrary phases (the behaviour the robust variant avoids).
double overlap_error_bar(const Mat& m, const Eigensystem& es, const Mat& dl,
                         OverlapBarVariant variant, int i = 1, int j = 2);

}  // namespace lep
