#include "lep/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace lep {

namespace {

bool spectral_before(const cd& a, const cd& b) {
  if (a.real() != b.real()) return a.real() > b.real();
  return a.imag() < b.imag();
}

double spectrum_scale(const Vec& values) {
  return std::max(1.0, values.cwiseAbs().maxCoeff());
}

// descending Re with near-ties (1e-9 relative) resolved by ascending Im, so
// that a conjugate pair split at rounding level still lands in pair order
void sort_spectral(std::vector<int>& order, const Vec& values) {
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return spectral_before(values(a), values(b)); });
  const double tie_tol = 1e-9 * spectrum_scale(values);
  std::size_t start = 0;
  while (start < order.size()) {
    std::size_t stop = start + 1;
    while (stop < order.size() &&
           values(order[start]).real() - values(order[stop]).real() <= tie_tol)
      ++stop;
    std::sort(order.begin() + start, order.begin() + stop, [&](int a, int b) {
      if (values(a).imag() != values(b).imag()) return values(a).imag() < values(b).imag();
      return values(a).real() > values(b).real();
    });
    start = stop;
  }
}

}  // namespace

Eigensystem eig_general(const Mat& m, const EigOptions& opts) {
  const int n = static_cast<int>(m.rows());
  if (m.cols() != n) throw DimensionError("eig_general: matrix must be square");

  Eigen::ComplexEigenSolver<Mat> right_solver(m, true);
  Eigen::ComplexEigenSolver<Mat> adjoint_solver(m.adjoint().eval(), true);
  if (right_solver.info() != Eigen::Success || adjoint_solver.info() != Eigen::Success)
    throw NumericalError("eig_general: eigensolver failed to converge");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  const Vec raw_values = right_solver.eigenvalues();
  sort_spectral(order, raw_values);

  Eigensystem es;
  es.values.resize(n);
  es.right.resize(n, n);
  es.left.resize(n, n);
  es.defective.assign(n, false);

  for (int k = 0; k < n; ++k) {
    es.values(k) = raw_values(order[k]);
    es.right.col(k) = right_solver.eigenvectors().col(order[k]).normalized();
  }

  // Adjoint eigenpairs (M^dag w = mu w) give left vectors of M at conj(mu);
  // match each sorted eigenvalue to the nearest unused conjugate.
  const Vec adj_values = adjoint_solver.eigenvalues();
  std::vector<bool> used(n, false);
  for (int k = 0; k < n; ++k) {
    int best = -1;
    double best_dist = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
      if (used[j]) continue;
      const double dist = std::abs(std::conj(adj_values(j)) - es.values(k));
      if (dist < best_dist) {
        best_dist = dist;
        best = j;
      }
    }
    used[best] = true;
    es.left.col(k) = adjoint_solver.eigenvectors().col(best).normalized();
  }

  Eigen::JacobiSVD<Mat> svd(es.right);
  const double smin = svd.singularValues()(n - 1);
  es.condition = smin > 0 ? svd.singularValues()(0) / smin
                          : std::numeric_limits<double>::infinity();

  for (int k = 0; k < n; ++k) {
    if (std::abs(cd(es.left.col(k).adjoint() * es.right.col(k))) < opts.defect_overlap_tol)
      es.defective[k] = true;
  }
  if (es.condition > opts.defect_cond_tol) {
    // flag the closest pair as the culprit
    int ia = 0, ib = 1;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const double d = std::abs(es.values(i) - es.values(j));
        if (d < best) {
          best = d;
          ia = i;
          ib = j;
        }
      }
    es.defective[ia] = es.defective[ib] = true;
  }
  return es;
}

double max_right_residual(const Mat& m, const Eigensystem& es) {
  double worst = 0.0;
  for (int k = 0; k < es.size(); ++k)
    worst = std::max(worst, (m * es.right.col(k) - es.values(k) * es.right.col(k)).norm() /
                                es.right.col(k).norm());
  return worst;
}

double max_left_residual(const Mat& m, const Eigensystem& es) {
  double worst = 0.0;
  for (int k = 0; k < es.size(); ++k)
    worst = std::max(worst, (es.left.col(k).adjoint() * m -
                             es.values(k) * es.left.col(k).adjoint())
                                    .norm() /
                                es.left.col(k).norm());
  return worst;
}

void biorthonormalize(Eigensystem& es, double min_pair_overlap) {
  const int n = es.size();
  if (std::any_of(es.defective.begin(), es.defective.end(), [](bool b) { return b; }))
    throw NearDefectiveError("biorthonormalize: eigensystem carries defective flags");

  const double cluster_tol = 1e-8 * spectrum_scale(es.values);

  std::vector<int> cluster_of(n, -1);
  std::vector<std::vector<int>> clusters;
  for (int i = 0; i < n; ++i) {
    if (cluster_of[i] >= 0) continue;
    clusters.push_back({i});
    cluster_of[i] = static_cast<int>(clusters.size()) - 1;
    for (int j = i + 1; j < n; ++j)
      if (cluster_of[j] < 0 && std::abs(es.values(i) - es.values(j)) <= cluster_tol) {
        clusters.back().push_back(j);
        cluster_of[j] = cluster_of[i];
      }
  }

  for (const auto& cluster : clusters) {
    const int k = static_cast<int>(cluster.size());
    Mat lc(n, k), rc(n, k);
    for (int c = 0; c < k; ++c) {
      lc.col(c) = es.left.col(cluster[c]);
      rc.col(c) = es.right.col(cluster[c]);
    }
    const Mat gram = lc.adjoint() * rc;
    Eigen::JacobiSVD<Mat> svd(gram);
    const double smin = svd.singularValues()(k - 1);
    if (smin < min_pair_overlap) {
      std::ostringstream msg;
      msg << "biorthonormalize: near-defective eigensystem (min left/right pairing "
          << smin << ", right-basis condition " << es.condition
          << "); the generator is close to an exceptional point";
      throw NearDefectiveError(msg.str());
    }
    const Mat fixed = lc * gram.inverse().adjoint();
    for (int c = 0; c < k; ++c) es.left.col(cluster[c]) = fixed.col(c);
  }
  es.biorthonormal = true;
}

const char* mode_type_name(ModeType t) {
  switch (t) {
    case ModeType::stationary: return "stationary";
    case ModeType::overdamped: return "overdamped";
    case ModeType::spiraling: return "spiraling";
    case ModeType::oscillatory: return "oscillatory";
  }
  return "unknown";
}

RegimeReport classify_modes(const Vec& values, double tol) {
  if (tol < 0) tol = 1e-9 * spectrum_scale(values);
  RegimeReport report;
  report.types.reserve(values.size());
  double gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < values.size(); ++i) {
    const cd v = values(i);
    ModeType t;
    if (std::abs(v) <= tol)
      t = ModeType::stationary;
    else if (std::abs(v.real()) <= tol && std::abs(v.imag()) > tol)
      t = ModeType::oscillatory;
    else if (v.real() < -tol && std::abs(v.imag()) > tol)
      t = ModeType::spiraling;
    else
      t = ModeType::overdamped;
    report.types.push_back(t);
    if (t != ModeType::stationary) gap = std::min(gap, std::abs(v.real()));
    if (t == ModeType::spiraling) report.spiraling = true;
  }
  report.gap = std::isfinite(gap) ? gap : 0.0;
  return report;
}

double eigen_overlap(const Eigensystem& es, int i, int j, OverlapKind kind) {
  if (i < 0 || j < 0 || i >= es.size() || j >= es.size())
    throw DimensionError("eigen_overlap: index out of range");
  const Vec a = (kind == OverlapKind::right_right ? es.right.col(i) : es.left.col(i)).normalized();
  const Vec b = es.right.col(j).normalized();
  return std::abs(cd(a.adjoint() * b));
}

namespace {

struct PointSpectrum {
  Vec values;
  double fro_norm;
};

PointSpectrum spectrum_at(const std::function<Mat(double)>& family, double param) {
  const Mat m = family(param);
  Eigen::ComplexEigenSolver<Mat> solver(m, false);
  if (solver.info() != Eigen::Success)
    throw NumericalError("detect_leps: eigensolver failed");
  return {solver.eigenvalues(), m.norm()};
}

bool has_complex_mode(const Vec& values) {
  const double tol = 1e-7 * spectrum_scale(values);
  for (int i = 0; i < values.size(); ++i)
    if (std::abs(values(i).imag()) > tol) return true;
  return false;
}

std::pair<int, int> closest_pair(const Vec& values) {
  int ia = 0, ib = 1;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < values.size(); ++i)
    for (int j = i + 1; j < values.size(); ++j) {
      const double d = std::abs(values(i) - values(j));
      if (d < best) {
        best = d;
        ia = i;
        ib = j;
      }
    }
  return {ia, ib};
}

}  // namespace

std::vector<LEPReport> detect_leps(const std::function<Mat(double)>& family,
                                   const std::vector<double>& grid,
                                   const LEPOptions& opts) {
  if (grid.size() < 3) throw DimensionError("detect_leps: need at least 3 grid points");

  std::vector<PointSpectrum> spectra;
  spectra.reserve(grid.size());
  for (double g : grid) spectra.push_back(spectrum_at(family, g));

  // candidate refinement around a parameter; returns true if validated
  auto examine = [&](double param, double lo, double hi, std::vector<LEPReport>& out) {
    const Mat m = family(param);
    Eigensystem es = eig_general(m);
    const auto [ia, ib] = closest_pair(es.values);
    const double separation = std::abs(es.values(ia) - es.values(ib));
    const double overlap = eigen_overlap(es, ia, ib, OverlapKind::right_right);
    if (separation < opts.separation_rel_tol * m.norm() && overlap > opts.overlap_min)
      out.push_back({param, ia, ib, separation, overlap, lo, hi});
  };

  std::vector<LEPReport> reports;

  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    const bool flag_lo = has_complex_mode(spectra[k].values);
    const bool flag_hi = has_complex_mode(spectra[k + 1].values);
    if (flag_lo == flag_hi) continue;
    double lo = grid[k], hi = grid[k + 1];
    for (int it = 0; it < opts.max_bisections; ++it) {
      if (hi - lo <= 1e-12 * std::max(1.0, std::abs(hi))) break;
      const double mid = 0.5 * (lo + hi);
      if (has_complex_mode(spectrum_at(family, mid).values) == flag_lo)
        lo = mid;
      else
        hi = mid;
    }
    examine(0.5 * (lo + hi), grid[k], grid[k + 1], reports);
  }

  // direct hits: grid points already inside the separation gate
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto [ia, ib] = closest_pair(spectra[k].values);
    if (std::abs(spectra[k].values(ia) - spectra[k].values(ib)) <
        opts.separation_rel_tol * spectra[k].fro_norm) {
      const double step =
          k + 1 < grid.size() ? grid[k + 1] - grid[k] : grid[k] - grid[k - 1];
      examine(grid[k], grid[k] - step, grid[k] + step, reports);
    }
  }

  std::sort(reports.begin(), reports.end(),
            [](const LEPReport& a, const LEPReport& b) { return a.param < b.param; });
  // merge duplicates (a transition refined to a point that is also a grid hit)
  std::vector<LEPReport> unique;
  const double span = std::abs(grid.back() - grid.front());
  for (const auto& r : reports) {
    if (!unique.empty() && std::abs(r.param - unique.back().param) < 1e-9 * std::max(1.0, span))
      continue;
    unique.push_back(r);
  }
  return unique;
}

Perturbation perturb_first_order(const Eigensystem& es, const Mat& dl, double degenerate_tol) {
  if (!es.biorthonormal)
    throw NumericalError("perturb_first_order: eigensystem must be biorthonormalized first");
  const int n = es.size();
  if (dl.rows() != n || dl.cols() != n)
    throw DimensionError("perturb_first_order: perturbation dimension mismatch");
  if (degenerate_tol < 0) degenerate_tol = 1e-8 * spectrum_scale(es.values);

  Perturbation p;
  p.dvalues.resize(n);
  p.dright = Mat::Zero(n, n);
  p.dleft = Mat::Zero(n, n);

  const Mat amp = es.left.adjoint() * dl * es.right;  // amp(i,j) = <sigma_i|dL|rho_j>

  for (int m = 0; m < n; ++m) p.dvalues(m) = amp(m, m);

  for (int m = 0; m < n; ++m) {
    for (int i = 0; i < n; ++i) {
      if (i == m) continue;
      const cd den = es.values(i) - es.values(m);
      if (std::abs(den) < degenerate_tol)
        throw NearDefectiveError(
            "perturb_first_order: degenerate eigenvalue pair, first-order theory invalid");
      p.dright.col(m) -= (amp(i, m) / den) * es.right.col(i);
      p.dleft.col(m) -= std::conj(amp(m, i) / den) * es.left.col(i);
    }
  }
  return p;
}

cd perturb_eigenvalue_raw(const Eigensystem& es, int n, const Mat& dl) {
  if (n < 0 || n >= es.size()) throw DimensionError("perturb_eigenvalue_raw: index out of range");
  const cd pair = cd(es.left.col(n).adjoint() * es.right.col(n));
  if (std::abs(pair) < 1e-10)
    return cd(std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN());
  return cd(es.left.col(n).adjoint() * dl * es.right.col(n)) / pair;
}

namespace {

// First-order corrections to the unit-normalized left (bra) of mode i and
// right (ket) of mode j, in raw-ratio form so the result is independent of
// the phases and scales of the stored eigenvectors.
struct UnitCorrections {
  Vec dleft_bra;  // stored as a ket; the bra is its adjoint
  Vec dright;
};

UnitCorrections unit_corrections(const Eigensystem& es, const Mat& dl, int i, int j) {
  const int n = es.size();
  const double tol = 1e-8 * spectrum_scale(es.values);
  Vec dsig = Vec::Zero(n), drho = Vec::Zero(n);
  const Vec li = es.left.col(i).normalized();
  const Vec rj = es.right.col(j).normalized();
  const cd pair_i = cd(li.adjoint() * es.right.col(i).normalized());
  for (int k = 0; k < n; ++k) {
    if (k != j) {
      const Vec lk = es.left.col(k).normalized();
      const cd pair_k = cd(lk.adjoint() * es.right.col(k).normalized());
      const cd den = (es.values(k) - es.values(j)) * pair_k;
      if (std::abs(den) < tol)
        throw NearDefectiveError("overlap_error_bar: degenerate eigenvalue pair");
      drho -= (cd(lk.adjoint() * dl * rj) / den) * es.right.col(k).normalized();
    }
    if (k != i) {
      const cd den = (es.values(k) - es.values(i)) * pair_i;
      if (std::abs(den) < tol)
        throw NearDefectiveError("overlap_error_bar: degenerate eigenvalue pair");
      // bra expansion <dsigma_i| = -sum_k coeff_k <sigma_k|; kept as ket
      const cd coeff = cd(li.adjoint() * dl * es.right.col(k).normalized()) / den;
      const Vec lk = es.left.col(k).normalized();
      const cd pair_k = cd(lk.adjoint() * es.right.col(k).normalized());
      dsig -= std::conj(coeff / pair_k) * lk;
    }
  }
  // keep only the direction change of the unit vectors
  const Vec li_unit = li;
  const Vec rj_unit = rj;
  dsig -= li_unit * cd(li_unit.adjoint() * dsig);
  drho -= rj_unit * cd(rj_unit.adjoint() * drho);
  return {dsig, drho};
}

}  // namespace

double overlap_error_bar(const Mat& m, const Eigensystem& es, const Mat& dl,
                         OverlapBarVariant variant, int i, int j) {
  if (i < 0 || j < 0 || i >= es.size() || j >= es.size())
    throw DimensionError("overlap_error_bar: index out of range");

  if (variant == OverlapBarVariant::phase_robust) {
    const UnitCorrections c = unit_corrections(es, dl, i, j);
    const Vec li = es.left.col(i).normalized();
    const Vec rj = es.right.col(j).normalized();
    const cd t1 = cd(c.dleft_bra.adjoint() * rj);
    const cd t2 = cd(li.adjoint() * c.dright);
    const cd t3 = cd(c.dleft_bra.adjoint() * c.dright);
    return std::sqrt(std::norm(t1) + std::norm(t2) + std::norm(t3));
  }

  // phase_sensitive: literal difference of the complex overlaps, the second
  // one from a fresh diagonalization whose eigenvector phases are the
  // solver's own choice.
  Eigensystem perturbed = eig_general(m + dl);
  const cd base = cd(es.left.col(i).normalized().adjoint() * es.right.col(j).normalized());
  const cd shifted = cd(perturbed.left.col(i).normalized().adjoint() *
                        perturbed.right.col(j).normalized());
  return std::abs(shifted - base);
}

}  // namespace lep
