#include <doctest.h>

#include <random>
#include <string>

#include "helpers.hpp"
#include "lep/channels.hpp"
#include "lep/driven_qubit.hpp"

using namespace lep;
using test::random_complex;

namespace {

// random CPTP superoperator built from a random Choi matrix
Mat random_channel(int d, std::mt19937_64& rng) {
  Mat a = random_complex(d * d, d * d, rng);
  Mat chi = a * a.adjoint();
  // impose trace preservation: tr_out chi = identity on the input factor
  Mat marginal = Mat::Zero(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      cd s = 0;
      for (int k = 0; k < d; ++k) s += chi(i * d + k, j * d + k);
      marginal(i, j) = s;
    }
  Mat half = marginal.llt().matrixL();
  Mat fix = kron(half.inverse(), Mat::Identity(d, d));
  ChoiMatrix c;
  c.dim = d;
  c.matrix = fix * chi * fix.adjoint();
  return superop_from_choi(c);
}

Mat bitflip_superop(double p) {
  Mat2 x = sigma_x();
  return p * sandwich(Mat::Identity(2, 2), Mat::Identity(2, 2)) +
         (1 - p) * sandwich(x, x);
}

KrausSet scaled_unitaries(const std::vector<double>& w,
                          const std::vector<Mat>& u) {
  KrausSet k;
  for (std::size_t i = 0; i < w.size(); ++i) {
    k.operators.push_back(std::sqrt(w[i]) * u[i]);
    k.weights.push_back(w[i] * static_cast<double>(u[i].rows()));
  }
  return k;
}

Mat env_ground(int env_dim) {
  Mat e = Mat::Zero(env_dim, env_dim);
  e(0, 0) = 1.0;
  return e;
}

}  // namespace

TEST_SUITE("channels") {
  TEST_CASE("identity channel has a rank-one Choi matrix of trace d") {
    for (int d : {2, 3}) {
      auto chi = choi_from_superop(Mat::Identity(d * d, d * d));
      CHECK(chi.dim == d);
      CHECK(std::abs(chi.matrix.trace() - cd(d, 0)) < 1e-14);
      Eigen::SelfAdjointEigenSolver<Mat> es(chi.matrix);
      CHECK(es.eigenvalues()(d * d - 1) == doctest::Approx(d).epsilon(1e-12));
      CHECK(es.eigenvalues()(d * d - 2) < 1e-12);
      CHECK(chi.hermiticity_defect() < 1e-15);
      CHECK(chi.trace_preservation_defect() < 1e-15);
    }
  }

  TEST_CASE("superop <-> choi round trip") {
    std::mt19937_64 rng(3);
    for (int d : {2, 3}) {
      Mat s = random_channel(d, rng);
      CHECK((superop_from_choi(choi_from_superop(s)) - s).norm() < 1e-12);
    }
  }

  TEST_CASE("choi -> kraus -> superop round trip") {
    std::mt19937_64 rng(5);
    Mat s = random_channel(2, rng);
    auto chi = choi_from_superop(s);
    for (const KrausSet& k :
         {kraus_from_choi(chi), kraus_canonical_sqrt(chi)}) {
      CHECK(k.completeness_defect() < 1e-10);
      CHECK((superop_from_kraus(k) - s).norm() < 1e-10);
    }
  }

  TEST_CASE("bit-flip channel decomposes into identity and flip") {
    double gamma = 0.7, t = 0.4;
    double p = (1 + std::exp(-2 * gamma * t)) / 2;
    auto k = kraus_from_choi(choi_from_superop(bitflip_superop(p)));
    REQUIRE(k.operators.size() == 2);
    std::vector<cd> weights(k.weights.begin(), k.weights.end());
    CHECK(test::multiset_distance(weights, {2 * p, 2 * (1 - p)}) < 1e-12);
    for (std::size_t l = 0; l < 2; ++l) {
      const Mat& a = k.operators[l];
      // each operator is a phase times sqrt(weight/2) * (1 or sigma_x)
      double diag = std::abs(a(0, 0)) + std::abs(a(1, 1));
      double off = std::abs(a(0, 1)) + std::abs(a(1, 0));
      CHECK(std::min(diag, off) < 1e-12);
      CHECK(std::max(diag, off) ==
            doctest::Approx(2 * std::sqrt(k.weights[l] / 2)).epsilon(1e-10));
    }
  }

  TEST_CASE("negative choi eigenvalues clamp or abort") {
    Mat s = bitflip_superop(0.9);
    auto chi = choi_from_superop(s);
    chi.matrix -= 1e-10 * Mat::Identity(4, 4);  // slightly indefinite
    auto k = kraus_from_choi(chi);
    CHECK(k.cp_deficit > 0.0);
    CHECK(k.cp_deficit < 1e-9);

    chi.matrix -= 0.2 * Mat::Identity(4, 4);  // strongly indefinite
    CHECK_THROWS_AS(kraus_from_choi(chi), NotCompletelyPositiveError);
    CHECK_THROWS_AS(kraus_canonical_sqrt(chi), NotCompletelyPositiveError);
  }

  TEST_CASE("four representations act identically") {
    std::mt19937_64 rng(7);
    Mat s = random_channel(2, rng);
    auto chi = choi_from_superop(s);
    auto k = kraus_from_choi(chi);
    auto u = dilation_unitary(k);
    for (int probe = 0; probe < 6; ++probe) {
      Mat rho = probe_density(probe);
      Mat via_s = apply_channel(s, rho);
      CHECK((apply_channel(chi, rho) - via_s).norm() < 1e-10);
      CHECK((apply_channel(k, rho) - via_s).norm() < 1e-10);
      CHECK((apply_channel(u, rho) - via_s).norm() < 1e-10);
    }
  }

  TEST_CASE("dilation pads the environment to a power of two") {
    std::mt19937_64 rng(11);
    // rank-1: a unitary channel
    KrausSet one = scaled_unitaries({1.0}, {sigma_x()});
    CHECK(dilation_unitary(one).env_dim == 2);
    // rank-3 and rank-4 channels land in a two-qubit environment
    Mat s = random_channel(2, rng);
    auto k = kraus_from_choi(choi_from_superop(s));
    REQUIRE(k.operators.size() == 4);
    CHECK(dilation_unitary(k).env_dim == 4);
    // five operators (redundant but valid) need dimension eight
    KrausSet five = scaled_unitaries({0.2, 0.2, 0.2, 0.2, 0.2},
                                     {pauli(0), pauli(1), pauli(2), pauli(3),
                                      Mat(sigma_z())});
    CHECK(dilation_unitary(five).env_dim == 8);
  }

  TEST_CASE("dilation is unitary and stacks the kraus operators") {
    std::mt19937_64 rng(13);
    Mat s = random_channel(2, rng);
    auto k = kraus_from_choi(choi_from_superop(s));
    auto u = dilation_unitary(k);
    CHECK((u.matrix.adjoint() * u.matrix -
           Mat::Identity(u.matrix.rows(), u.matrix.cols()))
              .norm() < 1e-10);
    CHECK(u.completion_residual < 1e-10);
    for (std::size_t l = 0; l < k.operators.size(); ++l)
      CHECK((u.kraus_block(static_cast<int>(l)) - k.operators[l]).norm() <
            1e-12);
  }

  TEST_CASE("incomplete kraus sets cannot be dilated") {
    KrausSet k = scaled_unitaries({0.5}, {Mat(sigma_id())});
    CHECK_THROWS_AS(dilation_unitary(k), NumericalError);
  }

  TEST_CASE("pairwise scheme splits paired scaled unitaries") {
    Mat h = (sigma_x() + sigma_z()) / std::sqrt(2.0);
    KrausSet k = scaled_unitaries(
        {0.3, 0.3, 0.2, 0.2},
        {Mat(sigma_id()), Mat(sigma_x()), Mat(sigma_y()), h});
    auto scheme = pairwise_two_qubit_scheme(k);
    REQUIRE(scheme.size() == 2);
    CHECK(scheme[0].probability == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(scheme[1].probability == doctest::Approx(0.4).epsilon(1e-12));

    std::mt19937_64 rng(17);
    Mat rho = random_complex(2, 2, rng);
    rho = (rho * rho.adjoint()).eval();
    rho /= rho.trace();
    Mat out = Mat::Zero(2, 2);
    for (const auto& wu : scheme) {
      CHECK((wu.unitary.adjoint() * wu.unitary - Mat::Identity(4, 4)).norm() <
            1e-10);
      Mat joint = wu.unitary * kron(rho, env_ground(2)) * wu.unitary.adjoint();
      out += wu.probability * partial_trace(joint, {2, 2}, {0});
    }
    CHECK((out - apply_channel(superop_from_kraus(k), rho)).norm() < 1e-10);
  }

  TEST_CASE("pairwise scheme rejects unbalanced pairs by name") {
    // measurement-and-reset channel: pair sums are not identity multiples
    Mat a0 = Mat::Zero(2, 2), a1 = Mat::Zero(2, 2), a2 = Mat::Zero(2, 2);
    a0(0, 0) = 1.0;
    a1(1, 1) = 1.0 / std::sqrt(2.0);
    a2(1, 0) = 1.0 / std::sqrt(2.0);
    KrausSet k;
    k.operators = {a0, a1, a2};
    k.weights = {1.0, 0.5, 0.5};
    try {
      pairwise_two_qubit_scheme(k);
      FAIL("expected NumericalError");
    } catch (const NumericalError& e) {
      CHECK(std::string(e.what()).find("pair") != std::string::npos);
    }
  }

  TEST_CASE("random-unitary scheme recovers a pauli channel") {
    std::vector<double> w = {0.55, 0.25, 0.12, 0.08};
    KrausSet k = scaled_unitaries(
        w, {pauli(0), pauli(1), pauli(2), pauli(3)});
    auto scheme = random_unitary_scheme(k);
    REQUIRE(scheme.size() == 4);
    double total = 0.0;
    Mat s = Mat::Zero(4, 4);
    for (const auto& wu : scheme) {
      CHECK((wu.unitary.adjoint() * wu.unitary - Mat::Identity(2, 2)).norm() <
            1e-10);
      total += wu.probability;
      s += wu.probability * sandwich(wu.unitary, wu.unitary.adjoint());
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((s - superop_from_kraus(k)).norm() < 1e-10);
  }

  TEST_CASE("random-unitary scheme rejects amplitude damping") {
    double p = 0.3;
    Mat a0 = Mat::Zero(2, 2), a1 = Mat::Zero(2, 2);
    a0(0, 0) = std::sqrt(1 - p);
    a0(1, 1) = 1.0;
    a1(1, 0) = std::sqrt(p);
    KrausSet k;
    k.operators = {a0, a1};
    k.weights = {2 - p, p};
    CHECK_THROWS_AS(random_unitary_scheme(k), NumericalError);
  }

  TEST_CASE("partial trace contracts product states") {
    std::mt19937_64 rng(19);
    Mat a = random_complex(2, 2, rng);
    a = (a * a.adjoint()).eval();
    a /= a.trace();
    Mat b = random_complex(3, 3, rng);
    b = (b * b.adjoint()).eval();
    b /= b.trace();
    Mat joint = kron(a, b);
    CHECK((partial_trace(joint, {2, 3}, {0}) - a).norm() < 1e-13);
    CHECK((partial_trace(joint, {2, 3}, {1}) - b).norm() < 1e-13);
    CHECK_THROWS_AS(partial_trace(joint, {2, 2}, {0}), DimensionError);
    CHECK_THROWS_AS(partial_trace(joint, {2, 3}, {2}), DimensionError);
  }

  TEST_CASE("three-qubit dilation induces the original channel on qubit zero") {
    std::mt19937_64 rng(23);
    Mat s = random_channel(2, rng);
    auto k = kraus_from_choi(choi_from_superop(s));
    auto u = dilation_unitary(k);
    REQUIRE(u.env_dim == 4);
    CHECK((induced_qubit_channel(u, 0) - s).norm() < 1e-10);
    for (int q : {1, 2}) {
      Mat complementary = induced_qubit_channel(u, q);
      CHECK(trace_defect(complementary - Mat::Identity(4, 4)) < 1e-10);
    }
    // a single-qubit environment cannot be read as a three-qubit circuit
    auto small = dilation_unitary(scaled_unitaries({1.0}, {Mat(sigma_z())}));
    CHECK_THROWS_AS(induced_qubit_channel(small, 0), DimensionError);
  }

  TEST_CASE("propagator matches the qubit relaxation closed form") {
    DrivenQubitParams p;
    p.gamma_x = 0.0;
    p.gamma_y = 0.0;
    p.gamma_minus = 0.8;
    Mat l = driven_qubit_liouvillian(p);
    double t = 0.6;
    Mat u = propagator(l, t);
    // excited population decays as exp(-gm t)
    Mat rho0 = Mat::Zero(2, 2);
    rho0(0, 0) = 1.0;
    Mat rho = apply_channel(u, rho0);
    CHECK(std::abs(rho(0, 0) - std::exp(-p.gamma_minus * t)) < 1e-12);
    CHECK(std::abs(rho.trace() - cd(1, 0)) < 1e-12);

    CHECK((first_order_propagator(l, 1e-3) -
           (Mat::Identity(4, 4) + 1e-3 * l))
              .norm() < 1e-15);
  }
}
