#include "lep/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lep/channels.hpp"

namespace lep {

double FidelityProfile::operator()(double gamma_prime) const {
  if (exact) return exact(gamma_prime);
  if (grid.size() < 2) throw DimensionError("FidelityProfile: need at least two grid points");
  if (gamma_prime < grid.front() - 1e-12 || gamma_prime > grid.back() + 1e-12)
    throw NumericalError("FidelityProfile: evaluation outside tabulated domain");
  const auto hi = std::upper_bound(grid.begin(), grid.end(), gamma_prime);
  std::size_t k = hi == grid.begin() ? 1 : static_cast<std::size_t>(hi - grid.begin());
  if (k >= grid.size()) k = grid.size() - 1;
  const double x0 = grid[k - 1], x1 = grid[k];
  const double frac = (gamma_prime - x0) / (x1 - x0);
  return values[k - 1] + frac * (values[k] - values[k - 1]);
}

FidelityProfile make_fidelity_profile(std::vector<double> grid, std::vector<double> values) {
  if (grid.size() != values.size() || grid.size() < 2)
    throw DimensionError("make_fidelity_profile: grid/value length mismatch");
  if (!std::is_sorted(grid.begin(), grid.end()))
    throw DimensionError("make_fidelity_profile: grid must be ascending");
  if (grid.front() > 0.0 || grid.back() < 0.0)
    throw DimensionError("make_fidelity_profile: domain must bracket 0");
  FidelityProfile p;
  p.grid = std::move(grid);
  p.values = std::move(values);
  double dev = 0.0;
  for (double v : p.values) dev = std::max(dev, std::abs(v - 1.0));
  p.flat = dev < 1e-12;
  return p;
}

namespace {

double simpson(const std::function<double(double)>& f, double a, double fa, double m, double fm,
               double b, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a, double fa, double b,
                     double fb, double m, double fm, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(f, a, fa, lm, flm, m, fm);
  const double right = simpson(f, m, fm, rm, frm, b, fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adaptive_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  return adaptive_step(f, a, fa, b, fb, m, fm, simpson(f, a, fa, m, fm, b, fb), tol, 40);
}

namespace {

struct SupportSolver {
  const FidelityProfile& profile;
  double target;

  // ∫ p F with triangular p of half-widths (gl, gr); integrand split at the kink
  double fidelity_integral(double gl, double gr) const {
    const double b = 2.0 / (gl + gr);
    double total = 0.0;
    if (gl > 0)
      total += integrate([&](double x) { return b * (1.0 + x / gl) * profile(x); }, -gl, 0.0,
                         1e-11);
    if (gr > 0)
      total += integrate([&](double x) { return b * (1.0 - x / gr) * profile(x); }, 0.0, gr,
                         1e-11);
    return total;
  }

  double moment_integral(double gl, double gr) const {
    const double b = 2.0 / (gl + gr);
    double total = 0.0;
    if (gl > 0)
      total += integrate([&](double x) { return x * b * (1.0 + x / gl) * profile(x); }, -gl, 0.0,
                         1e-11);
    if (gr > 0)
      total += integrate([&](double x) { return x * b * (1.0 - x / gr) * profile(x); }, 0.0, gr,
                         1e-11);
    return total;
  }

  // bisect the overall scale h for fixed asymmetry: gl = h(1-s), gr = h(1+s)
  double solve_scale(double s) const {
    const double left_room = -profile.domain_left(), right_room = profile.domain_right();
    double hmax = std::numeric_limits<double>::infinity();
    if (1.0 - s > 0) hmax = std::min(hmax, left_room / (1.0 - s));
    if (1.0 + s > 0) hmax = std::min(hmax, right_room / (1.0 + s));
    if (!(hmax > 0)) throw NumericalError("gamma_error_bars: profile domain has no interior");
    if (fidelity_integral(hmax * (1.0 - s), hmax * (1.0 + s)) > target) {
      std::ostringstream msg;
      msg << "gamma_error_bars: fidelity equation infeasible on the profile domain "
          << "(target " << target << " not reached at maximal support)";
      throw NumericalError(msg.str());
    }
    double lo = 0.0, hi = hmax;  // fidelity -> 1 as h -> 0
    for (int it = 0; it < 200 && hi - lo > 1e-10; ++it) {
      const double mid = 0.5 * (lo + hi);
      (fidelity_integral(mid * (1.0 - s), mid * (1.0 + s)) > target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }
};

TriangularNoiseFit fill_fit(double gl, double gr) {
  TriangularNoiseFit fit;
  fit.gamma_left = gl;
  fit.gamma_right = gr;
  fit.peak_density = 2.0 / (gl + gr);
  fit.mass_left = gl / (gl + gr);
  fit.mass_right = gr / (gl + gr);
  fit.bar_left = fit.mass_left * gl / std::sqrt(6.0);
  fit.bar_right = fit.mass_right * gr / std::sqrt(6.0);
  return fit;
}

}  // namespace

TriangularNoiseFit gamma_error_bars(const FidelityProfile& profile, double w, int d,
                                    BarMode mode) {
  if (w < 0.0 || w >= 1.0) throw DimensionError("gamma_error_bars: w must lie in [0,1)");
  if (d < 2) throw DimensionError("gamma_error_bars: dimension must be at least 2");
  if (w == 0.0) return TriangularNoiseFit{};  // perfect fidelity: point support

  if (profile.flat)
    throw NumericalError(
        "gamma_error_bars: flat fidelity profile cannot account for white noise (w > 0)");

  SupportSolver solver{profile, 1.0 - w * (1.0 - 1.0 / d)};

  if (mode == BarMode::symmetric) {
    const double h = solver.solve_scale(0.0);
    return fill_fit(h, h);
  }

  // profile centroid over its full domain
  const double denom =
      integrate([&](double x) { return profile(x); }, profile.domain_left(),
                profile.domain_right(), 1e-11);
  const double centroid =
      integrate([&](double x) { return x * profile(x); }, profile.domain_left(),
                profile.domain_right(), 1e-11) /
      denom;

  auto mismatch = [&](double s) {
    const double h = solver.solve_scale(s);
    return solver.moment_integral(h * (1.0 - s), h * (1.0 + s)) / solver.target - centroid;
  };

  // bracket the asymmetry by scanning, then bisect
  const int scan = 19;
  double prev_s = -0.9, prev_d;
  try {
    prev_d = mismatch(prev_s);
  } catch (const NumericalError&) {
    prev_d = std::numeric_limits<double>::quiet_NaN();
  }
  double lo = 0, hi = 0;
  bool bracketed = false;
  for (int k = 1; k <= scan && !bracketed; ++k) {
    const double s = -0.9 + 1.8 * k / scan;
    double dval;
    try {
      dval = mismatch(s);
    } catch (const NumericalError&) {
      dval = std::numeric_limits<double>::quiet_NaN();
    }
    if (std::isfinite(prev_d) && std::isfinite(dval) &&
        ((prev_d <= 0 && dval >= 0) || (prev_d >= 0 && dval <= 0))) {
      lo = prev_s;
      hi = s;
      bracketed = true;
    }
    prev_s = s;
    prev_d = dval;
  }
  if (!bracketed)
    throw NumericalError("gamma_error_bars: asymmetric closure has no root in the domain");

  double dlo = mismatch(lo);
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double dmid = mismatch(mid);
    if ((dlo <= 0) == (dmid <= 0)) {
      lo = mid;
      dlo = dmid;
    } else {
      hi = mid;
    }
  }
  const double s = 0.5 * (lo + hi);
  const double h = solver.solve_scale(s);
  return fill_fit(h * (1.0 - s), h * (1.0 + s));
}

namespace {

double circuit_overlap(const KrausSet& base, const KrausSet& shifted, int blocks) {
  Mat m = Mat::Identity(2, 2);
  for (int step = 0; step < blocks; ++step) {
    Mat next = Mat::Zero(2, 2);
    for (std::size_t l = 0; l < base.operators.size(); ++l)
      next += base.operators[l].adjoint() * m * shifted.operators[l];
    m = std::move(next);
  }
  return std::norm(m(0, 0));  // probe |0>
}

}  // namespace

FidelityProfile circuit_fidelity_profile(const std::function<Mat(double)>& propagator_family,
                                         double gamma, const std::vector<double>& offsets,
                                         int blocks) {
  if (offsets.size() < 2) throw DimensionError("circuit_fidelity_profile: need a grid");
  const KrausSet base = kraus_canonical_sqrt(choi_from_superop(propagator_family(gamma)));

  auto evaluate = [propagator_family, gamma, blocks, base](double gp) {
    const KrausSet shifted =
        kraus_canonical_sqrt(choi_from_superop(propagator_family(gamma + gp)));
    return std::min(1.0, circuit_overlap(base, shifted, blocks));
  };

  std::vector<double> values;
  values.reserve(offsets.size());
  for (double gp : offsets) values.push_back(evaluate(gp));

  FidelityProfile p = make_fidelity_profile(offsets, std::move(values));
  p.exact = evaluate;
  return p;
}

FidelityProfile model_fidelity_profile(const DrivenQubitParams& params,
                                       const ProfileOptions& opts) {
  params.validate();
  if (opts.blocks < 1 || opts.grid_points < 3)
    throw DimensionError("model_fidelity_profile: invalid options");
  const double dt = 1.0 / (opts.blocks * params.omega);

  auto family = [params, dt](double gamma_x) {
    DrivenQubitParams q = params;
    q.gamma_x = gamma_x;
    return propagator(driven_qubit_liouvillian(q), dt);
  };

  const double width = opts.half_width * params.omega;
  const double left = -std::min(width, params.gamma_x);  // keep gamma_x + g' >= 0
  std::vector<double> offsets;
  offsets.reserve(opts.grid_points);
  for (int k = 0; k < opts.grid_points; ++k)
    offsets.push_back(left + (width - left) * k / (opts.grid_points - 1));
  // make sure 0 is exactly on the grid
  double closest = offsets[0];
  for (double& x : offsets)
    if (std::abs(x) < std::abs(closest)) closest = x;
  for (double& x : offsets)
    if (x == closest) x = 0.0;

  FidelityProfile p = circuit_fidelity_profile(family, params.gamma_x, offsets, opts.blocks);
  p.exact = nullptr;  // quadrature against the table keeps sweep points cheap
  return p;
}

}  // namespace lep
