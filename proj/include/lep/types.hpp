#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace lep {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using Vec2 = Eigen::Vector2cd;
using Vec4 = Eigen::Vector4cd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DimensionError : Error {
  using Error::Error;
};
struct NumericalError : Error {
  using Error::Error;
};
struct NotCompletelyPositiveError : NumericalError {
  using NumericalError::NumericalError;
};
struct NearDefectiveError : NumericalError {
  using NumericalError::NumericalError;
};

// Basis convention: index 0 is the sigma_z = +1 (upper/excited) level.
// sigma_y carries the phase that makes |y+> = (|0> - i|1>)/sqrt(2) its +1
// eigenvector, and sigma_- = (sigma_x + i sigma_y)/2 = |1><0| lowers 0 -> 1.
inline Mat2 sigma_x() {
  Mat2 m;
  m << 0, 1, 1, 0;
  return m;
}
inline Mat2 sigma_y() {
  Mat2 m;
  m << 0, cd(0, 1), cd(0, -1), 0;
  return m;
}
inline Mat2 sigma_z() {
  Mat2 m;
  m << 1, 0, 0, -1;
  return m;
}
inline Mat2 sigma_id() { return Mat2::Identity(); }
inline Mat2 sigma_minus() {
  Mat2 m;
  m << 0, 0, 1, 0;
  return m;
}
inline Mat2 sigma_plus() {
  Mat2 m;
  m << 0, 1, 0, 0;
  return m;
}

// pauli(0..3) = identity, x, y, z
inline Mat2 pauli(int k) {
  switch (k) {
    case 0: return sigma_id();
    case 1: return sigma_x();
    case 2: return sigma_y();
    case 3: return sigma_z();
  }
  throw DimensionError("pauli index out of range");
}

// Cardinal probe states in fixed order x+, x-, y+, y-, z+, z-.
inline Vec2 probe_ket(int idx) {
  const double s = 1.0 / std::sqrt(2.0);
  Vec2 v;
  switch (idx) {
    case 0: v << s, s; return v;
    case 1: v << s, -s; return v;
    case 2: v << s, cd(0, -s); return v;
    case 3: v << s, cd(0, s); return v;
    case 4: v << 1, 0; return v;
    case 5: v << 0, 1; return v;
  }
  throw DimensionError("probe index out of range");
}

inline Mat2 probe_density(int idx) {
  Vec2 v = probe_ket(idx);
  return v * v.adjoint();
}

inline const char* probe_name(int idx) {
  static const char* names[6] = {"x+", "x-", "y+", "y-", "z+", "z-"};
  if (idx < 0 || idx > 5) throw DimensionError("probe index out of range");
  return names[idx];
}

inline int probe_index(const std::string& name) {
  for (int i = 0; i < 6; ++i)
    if (name == probe_name(i)) return i;
  throw DimensionError("unknown probe name: " + name);
}

inline const char* axis_name(int axis) {
  static const char* names[3] = {"x", "y", "z"};
  if (axis < 0 || axis > 2) throw DimensionError("axis index out of range");
  return names[axis];
}

inline int axis_index(const std::string& name) {
  for (int i = 0; i < 3; ++i)
    if (name == axis_name(i)) return i;
  throw DimensionError("unknown axis name: " + name);
}

}  // namespace lep
