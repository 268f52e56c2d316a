#pragma once

#include <functional>
#include <vector>

#include "lep/driven_qubit.hpp"
#include "lep/types.hpp"

namespace lep {

// F(g') = |<psi(gamma)|psi(gamma+g')>|² tabulated around g'=0.  When `exact`
// is set it overrides the table (the table still defines the domain); used so
// root finding is not limited by interpolation error.
struct FidelityProfile {
  std::vector<double> grid;    // ascending, brackets 0
  std::vector<double> values;  // same length, values in [0,1], F(0)=1
  std::function<double(double)> exact;
  bool flat = false;

  double domain_left() const { return grid.front(); }
  double domain_right() const { return grid.back(); }
  double operator()(double gamma_prime) const;  // exact if set, else linear interpolation
};

// table constructor; validates shape and sets the flat flag
FidelityProfile make_fidelity_profile(std::vector<double> grid, std::vector<double> values);

// Triangular density peaked at 0, vanishing at -gamma_left and +gamma_right.
struct TriangularNoiseFit {
  double gamma_left = 0.0;
  double gamma_right = 0.0;
  double peak_density = 0.0;  // 2/(gamma_left+gamma_right)
  double mass_left = 0.0;
  double mass_right = 0.0;
  double bar_left = 0.0;   // mass_left * gamma_left / sqrt(6)
  double bar_right = 0.0;  // mass_right * gamma_right / sqrt(6)
};

enum class BarMode { symmetric, asymmetric };

// Solve ∫ p(g') F(g') dg' = 1 - w(1 - 1/d) for the triangular support by
// adaptive-Simpson quadrature and bisection.  Symmetric mode forces equal
// half-widths; asymmetric mode additionally matches the first moment of p·F
// to the profile's own centroid.
TriangularNoiseFit gamma_error_bars(const FidelityProfile& profile, double w, int d,
                                    BarMode mode = BarMode::symmetric);

struct ProfileOptions {
  int blocks = 15;        // circuit depth; ~1/(omega dt) single-step dilations
  int grid_points = 81;   // odd, so the grid contains 0
  double half_width = 2.0;  // tabulation window in units of omega, clipped to gamma_x >= 0
};

// Overlap-squared of the n-block dilation-circuit states |psi(gamma)> built
// from a single-step propagator family: each block applies the canonical
// (square-root-of-Choi) Kraus isometry with a fresh ancilla register to the
// probe |0>.  Gauge-free, so the profile is smooth in gamma.
FidelityProfile circuit_fidelity_profile(const std::function<Mat(double)>& propagator_family,
                                         double gamma, const std::vector<double>& offsets,
                                         int blocks);

// Stand-in prepared-state family for the driven qubit: the circuit profile of
// exp(dt L) with gamma_x swept, dt = 1/(blocks * omega).
FidelityProfile model_fidelity_profile(const DrivenQubitParams& params,
                                       const ProfileOptions& opts = {});

// adaptive composite Simpson quadrature, absolute tolerance
double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-10);

}  // namespace lep
