#include "lep/superop.hpp"

#include <unsupported/Eigen/KroneckerProduct>

namespace lep {

Vec vectorize(const Mat& m) {
  const int d = static_cast<int>(m.rows());
  if (m.cols() != d) throw DimensionError("vectorize: matrix must be square");
  Vec v(d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) v(i * d + j) = m(i, j);
  return v;
}

Mat unvectorize(const Vec& v) {
  const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(v.size()))));
  if (d * d != v.size()) throw DimensionError("unvectorize: length is not a square");
  Mat m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = v(i * d + j);
  return m;
}

Mat kron(const Mat& a, const Mat& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

Mat sandwich(const Mat& a, const Mat& b) {
  return kron(a, b.transpose());
}

Mat dissipator(const Mat& g) {
  const int d = static_cast<int>(g.rows());
  if (g.cols() != d) throw DimensionError("dissipator: operator must be square");
  const Mat gg = g.adjoint() * g;
  const Mat id = Mat::Identity(d, d);
  return sandwich(g, g.adjoint()) - 0.5 * (sandwich(gg, id) + sandwich(id, gg));
}

Mat liouvillian_direct(const LindbladModel& model) {
  const int d = model.dim();
  if (model.hamiltonian.cols() != d)
    throw DimensionError("liouvillian: Hamiltonian must be square");
  const Mat id = Mat::Identity(d, d);
  Mat L = cd(0, -1) * (sandwich(model.hamiltonian, id) - sandwich(id, model.hamiltonian));
  for (const auto& [rate, g] : model.jumps) {
    if (g.rows() != d || g.cols() != d)
      throw DimensionError("liouvillian: jump operator dimension mismatch");
    L += rate * dissipator(g);
  }
  return L;
}

Mat effective_hamiltonian(const LindbladModel& model) {
  Mat h = model.hamiltonian;
  for (const auto& [rate, g] : model.jumps) h -= cd(0, 0.5) * rate * (g.adjoint() * g);
  return h;
}

Mat liouvillian_from_nhh(const LindbladModel& model) {
  const int d = model.dim();
  const Mat id = Mat::Identity(d, d);
  const Mat heff = effective_hamiltonian(model);
  Mat L = cd(0, -1) * (kron(heff, id) - kron(id, heff.conjugate()));
  for (const auto& [rate, g] : model.jumps) L += rate * kron(g, g.conjugate());
  return L;
}

Mat apply_superop(const Mat& superop, const Mat& rho) {
  if (superop.cols() != rho.size())
    throw DimensionError("apply_superop: dimension mismatch");
  return unvectorize(superop * vectorize(rho));
}

double trace_defect(const Mat& liouvillian) {
  const int d2 = static_cast<int>(liouvillian.rows());
  const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(d2))));
  const Vec tr_vec = vectorize(Mat::Identity(d, d));
  return (tr_vec.adjoint() * liouvillian).cwiseAbs().maxCoeff();
}

}  // namespace lep
