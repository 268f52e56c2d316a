#include "lep/driven_qubit.hpp"

#include <algorithm>
#include <cmath>

namespace lep {

LindbladModel driven_qubit_model(const DrivenQubitParams& p) {
  p.validate();
  LindbladModel m;
  m.hamiltonian = 0.5 * p.omega * sigma_z();
  m.jumps = {{p.gamma_minus, sigma_minus()}, {p.gamma_x, sigma_x()}, {p.gamma_y, sigma_y()}};
  return m;
}

Mat driven_qubit_liouvillian(const DrivenQubitParams& p) {
  return liouvillian_direct(driven_qubit_model(p));
}

namespace {

struct AnalyticPieces {
  cd lam_plus, lam_minus, lam_relax;
  cd omega_gap;  // sqrt((gx-gy)^2 - omega^2), principal branch
};

AnalyticPieces pieces(const DrivenQubitParams& p) {
  const double g = p.gamma_x - p.gamma_y;
  const double sig = 0.5 * p.gamma_minus + p.gamma_x + p.gamma_y;
  const cd gap = std::sqrt(cd(g * g - p.omega * p.omega, 0.0));
  return {-sig + gap, -sig - gap, cd(-p.gamma_minus - 2.0 * (p.gamma_x + p.gamma_y), 0.0), gap};
}

bool spectral_before(const cd& a, const cd& b) {
  if (a.real() != b.real()) return a.real() > b.real();
  return a.imag() < b.imag();
}

}  // namespace

std::array<cd, 4> driven_qubit_analytic_eigenvalues(const DrivenQubitParams& p) {
  p.validate();
  const AnalyticPieces a = pieces(p);
  std::array<cd, 4> out{cd(0, 0), a.lam_plus, a.lam_minus, a.lam_relax};
  std::sort(out.begin(), out.end(), spectral_before);
  return out;
}

std::array<Mat2, 4> driven_qubit_analytic_eigenmatrices(const DrivenQubitParams& p) {
  p.validate();
  const AnalyticPieces a = pieces(p);
  const double g = p.gamma_x - p.gamma_y;

  Mat2 steady;
  steady << p.gamma_x + p.gamma_y, 0, 0, p.gamma_x + p.gamma_y + p.gamma_minus;
  Mat2 coh_plus;
  coh_plus << 0, cd(0, -p.omega) + a.omega_gap, g, 0;
  Mat2 coh_minus;
  coh_minus << 0, cd(0, -p.omega) - a.omega_gap, g, 0;
  Mat2 relax;
  relax << -1, 0, 0, 1;

  std::array<std::pair<cd, Mat2>, 4> pairs{{{cd(0, 0), steady},
                                            {a.lam_plus, coh_plus},
                                            {a.lam_minus, coh_minus},
                                            {a.lam_relax, relax}}};
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const auto& l, const auto& r) { return spectral_before(l.first, r.first); });
  return {pairs[0].second, pairs[1].second, pairs[2].second, pairs[3].second};
}

Mat2 driven_qubit_steady_state(const DrivenQubitParams& p) {
  p.validate();
  const double a = p.gamma_x + p.gamma_y;
  const double b = p.gamma_x + p.gamma_y + p.gamma_minus;
  if (a + b <= 0) throw NumericalError("steady state undefined with all rates zero");
  Mat2 rho;
  rho << a / (a + b), 0, 0, b / (a + b);
  return rho;
}

std::optional<std::pair<double, double>> driven_qubit_lep_gammas(const DrivenQubitParams& p) {
  p.validate();
  if (p.gamma_y < p.omega) return std::nullopt;
  return std::make_pair(p.gamma_y - p.omega, p.gamma_y + p.omega);
}

ClosedFormTables driven_qubit_closed_form_tables(int damping_case, double x, double omega) {
  if (damping_case != 1 && damping_case != 2)
    throw DimensionError("driven_qubit_closed_form_tables: damping_case must be 1 or 2");
  if (x < 0 || omega <= 0)
    throw DimensionError("driven_qubit_closed_form_tables: need x >= 0 and omega > 0");

  ClosedFormTables t;
  const double y2 = 2 * (x + 2);
  const double y3 = 2 * (x + 3);
  if (damping_case == 1) {
    const cd z = std::sqrt(cd(x * x - 4 * x + 3, 0));
    Mat p(6, 6);
    p << -4, 4, -1, 1, 0, 0,
         4, -4, 1, -1, 0, 0,
         1, -1, -2 * x, 2 * x, 0, 0,
         -1, 1, 2 * x, -2 * x, 0, 0,
         0, 0, 0, 0, -y2, y2,
         0, 0, 0, 0, y2, -y2;
    t.probe_table = (omega / 2) * p;
    Mat q(4, 4);
    q << 0, 0, 0, 0,
         0, -4, -1, 0,
         0, 1, -2 * x, 0,
         0, 0, 0, -y2;
    t.pauli_table = omega * q;
    t.nonzero_eigenvalues = {-2 * omega * (2 + x), -omega * (cd(2 + x, 0) - z),
                             -omega * (cd(2 + x, 0) + z)};
  } else {
    const cd z = std::sqrt(cd(x * x - 4 * x + 3, 0));
    Mat p(6, 6);
    p << -9, 9, -2, 2, 2, -2,
         9, -9, 2, -2, 2, -2,
         2, -2, -4 * x - 1, 4 * x + 1, 2, -2,
         -2, 2, 4 * x + 1, -4 * x - 1, 2, -2,
         0, 0, 0, 0, -2 * y2, 2 * y2,
         0, 0, 0, 0, 2 * y3, -2 * y3;
    t.probe_table = (omega / 4) * p;
    Mat q(4, 4);
    q << 0, 0, -2, 0,
         0, -4 * x - 1, 0, 2,
         0, 0, -4 * x - 10, 0,
         0, -2, 0, -9;
    t.pauli_table = (omega / 2) * q;
    t.nonzero_eigenvalues = {-omega * (2 * x + 5), -(omega / 2) * (cd(2 * x + 5, 0) + 2.0 * z),
                             -(omega / 2) * (cd(2 * x + 5, 0) - 2.0 * z)};
  }
  return t;
}

}  // namespace lep
