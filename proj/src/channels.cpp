#include "lep/channels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

namespace lep {

namespace {

int isqrt_dim(Eigen::Index n, const char* who) {
  const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  if (static_cast<Eigen::Index>(d) * d != n)
    throw DimensionError(std::string(who) + ": size is not a perfect square");
  return d;
}

}  // namespace

double ChoiMatrix::hermiticity_defect() const {
  return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
}

double ChoiMatrix::trace_preservation_defect() const {
  Mat reduced = Mat::Zero(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k) reduced(i, j) += matrix(i * dim + k, j * dim + k);
  return (reduced - Mat::Identity(dim, dim)).cwiseAbs().maxCoeff();
}

double KrausSet::completeness_defect() const {
  const int d = dim();
  if (d == 0) return 1.0;
  Mat sum = Mat::Zero(d, d);
  for (const Mat& a : operators) sum += a.adjoint() * a;
  return (sum - Mat::Identity(d, d)).cwiseAbs().maxCoeff();
}

Mat DilationUnitary::kraus_block(int l) const {
  Mat a(system_dim, system_dim);
  for (int s = 0; s < system_dim; ++s)
    for (int t = 0; t < system_dim; ++t) a(s, t) = matrix(s * env_dim + l, t * env_dim);
  return a;
}

ChoiMatrix choi_from_superop(const Mat& superop) {
  if (superop.rows() != superop.cols()) throw DimensionError("choi_from_superop: not square");
  const int d = isqrt_dim(superop.rows(), "choi_from_superop");
  ChoiMatrix chi;
  chi.dim = d;
  chi.matrix.resize(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k)
      for (int j = 0; j < d; ++j)
        for (int l = 0; l < d; ++l)
          chi.matrix(i * d + k, j * d + l) = superop(k * d + l, i * d + j);
  return chi;
}

Mat superop_from_choi(const ChoiMatrix& chi) {
  const int d = chi.dim;
  Mat s(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k)
      for (int j = 0; j < d; ++j)
        for (int l = 0; l < d; ++l)
          s(k * d + l, i * d + j) = chi.matrix(i * d + k, j * d + l);
  return s;
}

KrausSet kraus_from_choi(const ChoiMatrix& chi, double rank_tol, double clamp_threshold) {
  const int d = chi.dim;
  const double trace = std::max(1e-300, chi.matrix.trace().real());
  Eigen::SelfAdjointEigenSolver<Mat> solver(0.5 * (chi.matrix + chi.matrix.adjoint()));
  if (solver.info() != Eigen::Success)
    throw NumericalError("kraus_from_choi: eigensolver failed");

  const RVec evs = solver.eigenvalues();
  const double most_negative = std::min(0.0, evs.minCoeff());
  if (most_negative < -clamp_threshold * trace) {
    std::ostringstream msg;
    msg << "kraus_from_choi: channel is not completely positive (eigenvalue " << most_negative
        << " below -" << clamp_threshold * trace << ")";
    throw NotCompletelyPositiveError(msg.str());
  }

  KrausSet k;
  k.cp_deficit = -most_negative;
  for (int idx = static_cast<int>(evs.size()) - 1; idx >= 0; --idx) {  // descending
    const double r = evs(idx);
    if (r <= rank_tol * trace) continue;
    Mat a(d, d);
    for (int row = 0; row < d; ++row)
      for (int col = 0; col < d; ++col)
        a(row, col) = std::sqrt(r) * solver.eigenvectors()(col * d + row, idx);
    k.operators.push_back(std::move(a));
    k.weights.push_back(r);
  }
  return k;
}

KrausSet kraus_canonical_sqrt(const ChoiMatrix& chi, double clamp_threshold) {
  const int d = chi.dim;
  const double trace = std::max(1e-300, chi.matrix.trace().real());
  Eigen::SelfAdjointEigenSolver<Mat> solver(0.5 * (chi.matrix + chi.matrix.adjoint()));
  if (solver.info() != Eigen::Success)
    throw NumericalError("kraus_canonical_sqrt: eigensolver failed");
  RVec evs = solver.eigenvalues();
  const double most_negative = std::min(0.0, evs.minCoeff());
  if (most_negative < -clamp_threshold * trace)
    throw NotCompletelyPositiveError("kraus_canonical_sqrt: channel is not completely positive");
  for (auto& e : evs.reshaped()) e = e > 0 ? std::sqrt(e) : 0.0;
  const Mat root =
      solver.eigenvectors() * evs.cast<cd>().asDiagonal() * solver.eigenvectors().adjoint();

  KrausSet k;
  k.cp_deficit = -most_negative;
  for (int l = 0; l < d * d; ++l) {
    Mat a(d, d);
    for (int row = 0; row < d; ++row)
      for (int col = 0; col < d; ++col) a(row, col) = root(col * d + row, l);
    k.weights.push_back(a.squaredNorm());
    k.operators.push_back(std::move(a));
  }
  return k;
}

Mat superop_from_kraus(const KrausSet& k) {
  const int d = k.dim();
  if (d == 0) throw DimensionError("superop_from_kraus: empty Kraus set");
  Mat s = Mat::Zero(d * d, d * d);
  for (const Mat& a : k.operators) s += kron(a, a.conjugate());
  return s;
}

Mat apply_channel(const Mat& superop, const Mat& rho) {
  return apply_superop(superop, rho);
}

Mat apply_channel(const ChoiMatrix& chi, const Mat& rho) {
  const int d = chi.dim;
  if (rho.rows() != d || rho.cols() != d)
    throw DimensionError("apply_channel: state dimension mismatch");
  const Mat contracted = chi.matrix * kron(rho.transpose().eval(), Mat::Identity(d, d));
  Mat out = Mat::Zero(d, d);
  for (int k = 0; k < d; ++k)
    for (int l = 0; l < d; ++l)
      for (int i = 0; i < d; ++i) out(k, l) += contracted(i * d + k, i * d + l);
  return out;
}

Mat apply_channel(const KrausSet& k, const Mat& rho) {
  const int d = k.dim();
  if (rho.rows() != d || rho.cols() != d)
    throw DimensionError("apply_channel: state dimension mismatch");
  Mat out = Mat::Zero(d, d);
  for (const Mat& a : k.operators) out += a * rho * a.adjoint();
  return out;
}

Mat apply_channel(const DilationUnitary& u, const Mat& rho) {
  const int d = u.system_dim;
  if (rho.rows() != d || rho.cols() != d)
    throw DimensionError("apply_channel: state dimension mismatch");
  Mat env0 = Mat::Zero(u.env_dim, u.env_dim);
  env0(0, 0) = 1.0;
  const Mat evolved = u.matrix * kron(rho, env0) * u.matrix.adjoint();
  return partial_trace(evolved, {d, u.env_dim}, {0});
}

DilationUnitary dilation_unitary(const KrausSet& k, double completeness_tol) {
  const int d = k.dim();
  if (d == 0) throw DimensionError("dilation_unitary: empty Kraus set");
  const double defect = k.completeness_defect();
  if (defect > completeness_tol) {
    std::ostringstream msg;
    msg << "dilation_unitary: incomplete Kraus set (completeness defect " << defect << ")";
    throw NumericalError(msg.str());
  }

  int env_dim = 2;
  while (env_dim < static_cast<int>(k.operators.size())) env_dim *= 2;
  const int total = d * env_dim;

  DilationUnitary u;
  u.system_dim = d;
  u.env_dim = env_dim;
  u.matrix = Mat::Zero(total, total);

  for (int l = 0; l < static_cast<int>(k.operators.size()); ++l)
    for (int s = 0; s < d; ++s)
      for (int t = 0; t < d; ++t) u.matrix(s * env_dim + l, t * env_dim) = k.operators[l](s, t);

  // complete remaining columns: orthogonalize canonical basis vectors, in
  // order, against everything placed so far (twice, for numerical stability)
  std::vector<int> placed;
  for (int t = 0; t < d; ++t) placed.push_back(t * env_dim);
  for (int col = 0; col < total; ++col) {
    if (col % env_dim == 0) continue;
    for (int candidate = 0; candidate < total; ++candidate) {
      Vec v = Vec::Zero(total);
      v(candidate) = 1.0;
      for (int pass = 0; pass < 2; ++pass)
        for (int p : placed) v -= u.matrix.col(p) * cd(u.matrix.col(p).adjoint() * v);
      if (v.norm() > 0.5) {
        u.matrix.col(col) = v.normalized();
        placed.push_back(col);
        break;
      }
    }
  }
  u.completion_residual =
      (u.matrix.adjoint() * u.matrix - Mat::Identity(total, total)).cwiseAbs().maxCoeff();
  return u;
}

std::vector<WeightedUnitary> pairwise_two_qubit_scheme(const KrausSet& k, double feasibility_tol) {
  const int d = k.dim();
  if (d != 2) throw DimensionError("pairwise_two_qubit_scheme: qubit channels only");
  if (k.operators.size() > 4)
    throw DimensionError("pairwise_two_qubit_scheme: more than four Kraus operators");

  std::vector<int> order(k.operators.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return k.operators[a].squaredNorm() > k.operators[b].squaredNorm();
  });
  std::vector<Mat> ops;
  for (int idx : order) ops.push_back(k.operators[idx]);
  while (ops.size() < 4) ops.push_back(Mat::Zero(d, d));

  std::vector<WeightedUnitary> scheme;
  for (int m = 0; m < 4; m += 2) {
    const Mat sum = ops[m].adjoint() * ops[m] + ops[m + 1].adjoint() * ops[m + 1];
    const double q = sum.trace().real() / d;
    if (q < 1e-14) continue;  // padding-only pair
    const double deviation = (sum - q * Mat::Identity(d, d)).cwiseAbs().maxCoeff();
    if (deviation > feasibility_tol) {
      std::ostringstream msg;
      msg << "pairwise_two_qubit_scheme: pair (" << m << "," << m + 1
          << ") is not proportional to identity (deviation " << deviation << ")";
      throw NumericalError(msg.str());
    }
    KrausSet pair;
    pair.operators = {ops[m] / std::sqrt(q), ops[m + 1] / std::sqrt(q)};
    pair.weights = {ops[m].squaredNorm() / q, ops[m + 1].squaredNorm() / q};
    scheme.push_back({q, dilation_unitary(pair).matrix});
  }
  return scheme;
}

std::vector<WeightedUnitary> random_unitary_scheme(const KrausSet& k, double singular_spread_tol) {
  const int d = k.dim();
  if (d == 0) throw DimensionError("random_unitary_scheme: empty Kraus set");
  std::vector<WeightedUnitary> scheme;
  for (std::size_t l = 0; l < k.operators.size(); ++l) {
    const Mat& a = k.operators[l];
    if (a.cwiseAbs().maxCoeff() < 1e-14) continue;
    Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const RVec sv = svd.singularValues();
    const double spread = sv(0) - sv(d - 1);
    if (spread > singular_spread_tol * std::max(sv(0), 1e-300)) {
      std::ostringstream msg;
      msg << "random_unitary_scheme: operator " << l
          << " is not proportional to a unitary (singular-value spread " << spread << ")";
      throw NumericalError(msg.str());
    }
    scheme.push_back({sv.squaredNorm() / d, Mat(svd.matrixU() * svd.matrixV().adjoint())});
  }
  return scheme;
}

Mat partial_trace(const Mat& rho, const std::vector<int>& dims, const std::vector<int>& keep) {
  long total = 1;
  for (int d : dims) total *= d;
  if (rho.rows() != total || rho.cols() != total)
    throw DimensionError("partial_trace: factor dimensions do not multiply to the state size");
  for (int q : keep)
    if (q < 0 || q >= static_cast<int>(dims.size()))
      throw DimensionError("partial_trace: keep index out of range");

  const int nf = static_cast<int>(dims.size());
  std::vector<long> stride(nf, 1);
  for (int f = nf - 2; f >= 0; --f) stride[f] = stride[f + 1] * dims[f + 1];

  std::vector<int> traced;
  for (int f = 0; f < nf; ++f)
    if (std::find(keep.begin(), keep.end(), f) == keep.end()) traced.push_back(f);

  long kept_dim = 1;
  for (int q : keep) kept_dim *= dims[q];
  long traced_dim = 1;
  for (int q : traced) traced_dim *= dims[q];

  auto expand = [&](long packed, const std::vector<int>& factors) {
    long full = 0;
    for (int f = static_cast<int>(factors.size()) - 1; f >= 0; --f) {
      const int dim = dims[factors[f]];
      full += (packed % dim) * stride[factors[f]];
      packed /= dim;
    }
    return full;
  };

  Mat out = Mat::Zero(kept_dim, kept_dim);
  for (long r = 0; r < kept_dim; ++r)
    for (long c = 0; c < kept_dim; ++c) {
      const long row_base = expand(r, keep), col_base = expand(c, keep);
      cd sum = 0;
      for (long t = 0; t < traced_dim; ++t) {
        const long off = expand(t, traced);
        sum += rho(row_base + off, col_base + off);
      }
      out(r, c) = sum;
    }
  return out;
}

Mat induced_qubit_channel(const DilationUnitary& u, int output_qubit) {
  if (u.system_dim != 2 || u.env_dim != 4)
    throw DimensionError("induced_qubit_channel: expects a 2x4 (three-qubit) dilation");
  if (output_qubit < 0 || output_qubit > 2)
    throw DimensionError("induced_qubit_channel: qubit index out of range");

  Mat s(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      // input E_ij ⊗ |00⟩⟨00| evolves to (U col 4i)(U col 4j)†
      const Mat evolved = u.matrix.col(4 * i) * u.matrix.col(4 * j).adjoint();
      const Mat reduced = partial_trace(evolved, {2, 2, 2}, {output_qubit});
      s.col(i * 2 + j) = vectorize(reduced);
    }
  return s;
}

Mat propagator(const Mat& liouvillian, double t) {
  if (liouvillian.rows() != liouvillian.cols())
    throw DimensionError("propagator: generator must be square");
  return Mat((t * liouvillian).exp());
}

Mat first_order_propagator(const Mat& liouvillian, double dt) {
  if (liouvillian.rows() != liouvillian.cols())
    throw DimensionError("first_order_propagator: generator must be square");
  return Mat::Identity(liouvillian.rows(), liouvillian.cols()) + dt * liouvillian;
}

}  // namespace lep
