#include "lep/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/SVD>

#include "lep/channels.hpp"
#include "lep/rng.hpp"

namespace lep {

Method method_from_name(const std::string& name) {
  if (name == "m1") return Method::m1;
  if (name == "m2") return Method::m2;
  if (name == "m3") return Method::m3;
  throw Error("unknown tomography method '" + name + "' (expected m1, m2, or m3)");
}

const char* method_name(Method m) {
  switch (m) {
    case Method::m1: return "m1";
    case Method::m2: return "m2";
    case Method::m3: return "m3";
  }
  return "?";
}

void NoiseModel::validate() const {
  if (white_noise < 0.0 || white_noise > 1.0)
    throw DimensionError("NoiseModel: white_noise must lie in [0,1]");
  if (shots < 0) throw DimensionError("NoiseModel: negative shot count");
}

Mat add_white_noise(const Mat& rho, double w) {
  if (w < 0.0 || w > 1.0) throw DimensionError("add_white_noise: w must lie in [0,1]");
  const int d = static_cast<int>(rho.rows());
  if (rho.cols() != d) throw DimensionError("add_white_noise: state must be square");
  return (1.0 - w) * rho + (w / d) * rho.trace() * Mat::Identity(d, d);
}

std::vector<long> sample_counts(const std::vector<double>& probabilities, long shots,
                                std::uint64_t seed) {
  if (probabilities.empty()) throw DimensionError("sample_counts: empty distribution");
  double sum = 0.0;
  for (double p : probabilities) {
    if (p < -1e-9) throw NumericalError("sample_counts: negative probability");
    sum += std::max(0.0, p);
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw NumericalError("sample_counts: probabilities do not sum to 1");

  SplitMix64 rng(seed);
  std::vector<long> counts(probabilities.size(), 0);
  for (long s = 0; s < shots; ++s) {
    const double u = rng.uniform() * sum;
    double acc = 0.0;
    std::size_t pick = probabilities.size() - 1;
    for (std::size_t k = 0; k < probabilities.size(); ++k) {
      acc += std::max(0.0, probabilities[k]);
      if (u < acc) {
        pick = k;
        break;
      }
    }
    ++counts[pick];
  }
  return counts;
}

std::vector<MeasurementRecord> simulate_records(const Mat& s_form, const NoiseModel& noise) {
  noise.validate();
  if (s_form.rows() != 4 || s_form.cols() != 4)
    throw DimensionError("simulate_records: expected a 4x4 qubit map");

  std::vector<MeasurementRecord> records;
  records.reserve(18);
  for (int input = 0; input < 6; ++input) {
    const Mat rho_in = add_white_noise(probe_density(input), noise.white_noise);
    const Mat rho_out = apply_superop(s_form, rho_in);
    for (int axis = 0; axis < 3; ++axis) {
      MeasurementRecord rec;
      rec.input = input;
      rec.axis = axis;
      const Vec2 up = probe_ket(2 * axis);
      const Vec2 down = probe_ket(2 * axis + 1);
      rec.p_plus = std::real(cd(up.adjoint() * rho_out * up));
      rec.p_minus = std::real(cd(down.adjoint() * rho_out * down));
      if (noise.shots > 0) {
        rec.shots = noise.shots;
        const double p = std::clamp(rec.p_plus, 0.0, 1.0);
        rec.plus = sample_counts({p, 1.0 - p}, noise.shots,
                                 mix_seed(noise.seed, std::uint64_t(input) * 3 + axis))[0];
        rec.minus = noise.shots - rec.plus;
      }
      records.push_back(rec);
    }
  }
  return records;
}

namespace {

// freq(i, 2a+s): outcome frequency of projector s on axis a for probe i
RMat frequency_table(const std::vector<MeasurementRecord>& records) {
  RMat f = RMat::Constant(6, 6, std::numeric_limits<double>::quiet_NaN());
  for (const auto& rec : records) {
    if (rec.input < 0 || rec.input > 5 || rec.axis < 0 || rec.axis > 2)
      throw DimensionError("tomogram_from_records: record labels out of range");
    f(rec.input, 2 * rec.axis) = rec.freq_plus();
    f(rec.input, 2 * rec.axis + 1) = rec.freq_minus();
  }
  if (f.hasNaN()) throw DimensionError("tomogram_from_records: incomplete record set");
  return f;
}

Mat probe_overlap_table() {
  Mat overlap(6, 6);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      overlap(i, j) = std::norm(cd(probe_ket(j).adjoint() * probe_ket(i)));
  return overlap;
}

// Bloch components tr[S(rho_i) sigma_n] recovered per probe
RMat bloch_table(const RMat& f) {
  RMat t(6, 4);
  for (int i = 0; i < 6; ++i) {
    t(i, 0) = f(i, 0) + f(i, 1);
    for (int axis = 0; axis < 3; ++axis) t(i, axis + 1) = f(i, 2 * axis) - f(i, 2 * axis + 1);
  }
  return t;
}

Mat output_state(const RMat& bloch, int i) {
  Mat rho = Mat::Zero(2, 2);
  for (int n = 0; n < 4; ++n) rho += 0.5 * bloch(i, n) * pauli(n);
  return rho;
}

// the 12 Hermiticity- and trace-preserving qubit generators spanning every
// Lindblad-form L: three commutators, three diagonal dissipators, and the
// six Hermitian combinations of off-diagonal dissipator cross terms
std::vector<Mat> generator_basis() {
  const Mat id = Mat::Identity(2, 2);
  std::vector<Mat> basis;
  for (int k = 1; k < 4; ++k)
    basis.push_back(cd(0, -1) * (kron(pauli(k), id) - kron(id, pauli(k).conjugate().eval())));
  for (int m = 1; m < 4; ++m)
    basis.push_back(kron(pauli(m), pauli(m).conjugate().eval()) - Mat::Identity(4, 4));
  auto cross = [&](int m, int n) {
    const Mat prod = pauli(n) * pauli(m);
    return Mat(kron(pauli(m), pauli(n).conjugate().eval()) -
               0.5 * (kron(prod, id) + kron(id, prod.transpose().eval())));
  };
  for (auto [m, n] : {std::pair{1, 2}, {1, 3}, {2, 3}}) {
    const Mat t = cross(m, n), u = cross(n, m);
    basis.push_back(t + u);
    basis.push_back(cd(0, 1) * (t - u));
  }
  return basis;
}

}  // namespace

Tomogram tomogram_from_records(const std::vector<MeasurementRecord>& records, Method method,
                               double dt) {
  if (dt <= 0.0) throw DimensionError("tomogram_from_records: dt must be positive");
  const RMat f = frequency_table(records);

  Tomogram t;
  t.method = method;
  t.dt = dt;
  t.target = TomogramTarget::l_form;

  if (method == Method::m1) {
    t.matrix = (f.cast<cd>() - probe_overlap_table()) / dt;
    return t;
  }

  const RMat bloch = bloch_table(f);

  if (method == Method::m2) {
    // S in the Pauli basis: row m from the probe combinations recovering sigma_m
    RMat s(4, 4);
    s.row(0) = 0.5 * (bloch.row(0) + bloch.row(1));
    for (int k = 1; k < 4; ++k)
      s.row(k) = 0.5 * (bloch.row(2 * (k - 1)) - bloch.row(2 * (k - 1) + 1));
    t.matrix = (s.cast<cd>() - Mat::Identity(4, 4)) / dt;
    return t;
  }

  // m3: matrix-unit table T_kl = tr[(S(E_k))† E_l]
  std::array<Mat, 6> out;
  for (int i = 0; i < 6; ++i) out[i] = output_state(bloch, i);
  std::array<Mat, 4> unit_out;  // images of E_00, E_01, E_10, E_11
  const Mat dx = out[0] - out[1], dy = out[2] - out[3];
  unit_out[0] = out[4];
  unit_out[1] = 0.5 * (dx - cd(0, 1) * dy);
  unit_out[2] = 0.5 * (dx + cd(0, 1) * dy);
  unit_out[3] = out[5];

  Mat s(4, 4);
  for (int k = 0; k < 4; ++k)
    for (int l = 0; l < 4; ++l) s(k, l) = std::conj(unit_out[k](l / 2, l % 2));
  t.matrix = (s - Mat::Identity(4, 4)) / dt;
  return t;
}

Mat tomogram_s_form(const Tomogram& t) {
  if (t.target == TomogramTarget::s_form) return t.matrix;
  if (t.method == Method::m1) return Mat(t.matrix * t.dt + probe_overlap_table());
  return Mat(Mat::Identity(4, 4) + t.dt * t.matrix);
}

std::pair<Mat, Mat> equivalence_transforms() {
  const double s = 1.0 / std::sqrt(2.0);
  Mat uprime = Mat::Zero(4, 6);
  uprime(0, 0) = s;
  uprime(0, 1) = s;
  uprime(1, 2) = s;
  uprime(1, 3) = -s;
  uprime(2, 4) = s;
  uprime(2, 5) = -s;
  uprime(3, 0) = s;
  uprime(3, 1) = -s;

  Mat udouble(4, 4);
  udouble << 1, 0, 0, 1,
             0, 1, cd(0, -1), 0,
             0, 1, cd(0, 1), 0,
             1, 0, 0, -1;
  udouble *= s;
  return {uprime, udouble};
}

Reconstruction reconstruct_liouvillian(const Tomogram& t) {
  if (t.target != TomogramTarget::l_form)
    throw DimensionError("reconstruct_liouvillian: tomogram must be in L-form");
  const int expected = t.method == Method::m1 ? 6 : 4;
  if (t.matrix.rows() != expected || t.matrix.cols() != expected)
    throw DimensionError("reconstruct_liouvillian: tomogram matrix has the wrong shape");

  if (t.method == Method::m2) {
    Mat b(4, 4);
    for (int k = 0; k < 4; ++k) b.col(k) = vectorize(pauli(k)) / std::sqrt(2.0);
    return {Mat(b * t.matrix.transpose() * b.adjoint()), 0.0};
  }
  if (t.method == Method::m3) return {Mat(t.matrix.adjoint()), 0.0};

  const std::vector<Mat> basis = generator_basis();
  RMat design(36, 12);
  RVec rhs(36);
  for (int i = 0; i < 6; ++i) {
    const Mat rho = probe_density(i);
    for (int j = 0; j < 6; ++j) {
      const Vec2 out = probe_ket(j);
      const int row = i * 6 + j;
      rhs(row) = std::real(t.matrix(i, j));
      for (int p = 0; p < 12; ++p)
        design(row, p) = std::real(cd(out.adjoint() * apply_superop(basis[p], rho) * out));
    }
  }
  Eigen::JacobiSVD<RMat> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-10);
  if (svd.rank() < 12)
    throw NumericalError("reconstruct_liouvillian: rank-deficient design matrix");
  const RVec x = svd.solve(rhs);

  Mat l = Mat::Zero(4, 4);
  for (int p = 0; p < 12; ++p) l += x(p) * basis[p];
  return {l, (design * x - rhs).norm()};
}

QptResult run_qpt(const Mat& liouvillian, Method method, const NoiseModel& noise, double dt,
                  bool exact_propagator) {
  noise.validate();
  const Mat s = exact_propagator ? propagator(liouvillian, dt)
                                 : first_order_propagator(liouvillian, dt);
  QptResult result;
  result.records = simulate_records(s, noise);
  result.tomogram = tomogram_from_records(result.records, method, dt);
  Reconstruction rec = reconstruct_liouvillian(result.tomogram);
  result.liouvillian = std::move(rec.liouvillian);
  result.residual = rec.residual;
  result.eigensystem = eig_general(result.liouvillian);
  result.regime = classify_modes(result.eigensystem.values);
  return result;
}

}  // namespace lep
