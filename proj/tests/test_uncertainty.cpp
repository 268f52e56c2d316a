#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "lep/uncertainty.hpp"

using namespace lep;

namespace {

// gaussian-overlap model: F = 1 - g'^2 on a window where it stays positive
FidelityProfile quadratic_profile(double half_width = 0.9) {
  std::vector<double> grid, values;
  for (int i = 0; i <= 80; ++i) {
    double g = -half_width + 2 * half_width * i / 80;
    grid.push_back(g);
    values.push_back(1.0 - g * g);
  }
  auto profile = make_fidelity_profile(grid, values);
  profile.exact = [](double g) { return 1.0 - g * g; };
  return profile;
}

}  // namespace

TEST_SUITE("uncertainty") {
  TEST_CASE("integrate reproduces closed-form integrals") {
    CHECK(integrate([](double x) { return x * x; }, 0.0, 1.0) ==
          doctest::Approx(1.0 / 3).epsilon(1e-12));
    CHECK(integrate([](double x) { return std::sin(x); }, 0.0, M_PI) ==
          doctest::Approx(2.0).epsilon(1e-10));
    CHECK(integrate([](double x) { return std::exp(-x * x); }, -8.0, 8.0) ==
          doctest::Approx(std::sqrt(M_PI)).epsilon(1e-9));
  }

  TEST_CASE("profile construction validates its table") {
    CHECK_THROWS_AS(make_fidelity_profile({0.0}, {1.0}), DimensionError);
    CHECK_THROWS_AS(make_fidelity_profile({-1.0, 1.0}, {1.0}), DimensionError);
    CHECK_THROWS_AS(make_fidelity_profile({1.0, 2.0}, {1.0, 1.0}),
                    DimensionError);  // does not bracket zero
    CHECK_THROWS_AS(make_fidelity_profile({1.0, -1.0}, {1.0, 1.0}),
                    DimensionError);  // not ascending

    auto flat = make_fidelity_profile({-1.0, 0.0, 1.0}, {1.0, 1.0, 1.0});
    CHECK(flat.flat);
    auto sloped = make_fidelity_profile({-1.0, 0.0, 1.0}, {0.5, 1.0, 0.5});
    CHECK(!sloped.flat);
    CHECK(sloped(0.5) == doctest::Approx(0.75).epsilon(1e-12));  // interpolated
  }

  TEST_CASE("golden quadratic fit") {
    // integral of the triangular density against 1-g'^2 with half-width h is
    // 1 - h^2/6; the target 1 - w/2 at w=0.02, d=2 gives h = sqrt(0.06)
    auto fit = gamma_error_bars(quadratic_profile(), 0.02, 2);
    double h = std::sqrt(0.06);
    CHECK(fit.gamma_left == doctest::Approx(h).epsilon(1e-9));
    CHECK(fit.gamma_right == doctest::Approx(h).epsilon(1e-9));
    CHECK(fit.peak_density == doctest::Approx(1.0 / h).epsilon(1e-9));
    CHECK(fit.mass_left == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(fit.mass_right == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(fit.bar_left == doctest::Approx(0.05).epsilon(1e-7));
    CHECK(fit.bar_right == doctest::Approx(0.05).epsilon(1e-7));
  }

  TEST_CASE("no noise means no bars") {
    auto fit = gamma_error_bars(quadratic_profile(), 0.0, 2);
    CHECK(fit.gamma_left == 0.0);
    CHECK(fit.gamma_right == 0.0);
    CHECK(fit.bar_left == 0.0);
    CHECK(fit.bar_right == 0.0);
  }

  TEST_CASE("bars grow monotonically with the noise level") {
    auto profile = quadratic_profile();
    double previous = 0.0;
    for (double w : {0.005, 0.01, 0.02, 0.05, 0.1}) {
      auto fit = gamma_error_bars(profile, w, 2);
      CHECK(fit.bar_left > previous);
      previous = fit.bar_left;
    }
  }

  TEST_CASE("flat profiles cannot localize the rate") {
    auto flat = make_fidelity_profile({-1.0, 0.0, 1.0}, {1.0, 1.0, 1.0});
    CHECK_THROWS_AS(gamma_error_bars(flat, 0.02, 2), NumericalError);
  }

  TEST_CASE("even profiles make both modes coincide") {
    auto profile = quadratic_profile();
    auto sym = gamma_error_bars(profile, 0.02, 2, BarMode::symmetric);
    auto asym = gamma_error_bars(profile, 0.02, 2, BarMode::asymmetric);
    CHECK(asym.gamma_left == doctest::Approx(sym.gamma_left).epsilon(1e-6));
    CHECK(asym.gamma_right == doctest::Approx(sym.gamma_right).epsilon(1e-6));
  }

  TEST_CASE("asymmetric fit leans into the shallow side") {
    // fidelity falls faster to the left: the density leans right
    auto steep_left = [](double g) {
      return g < 0 ? 1.0 - 1.2 * g * g : 1.0 - g * g;
    };
    std::vector<double> grid, values;
    for (int i = 0; i <= 100; ++i) {
      double g = -0.9 + 1.8 * i / 100;
      grid.push_back(g);
      values.push_back(steep_left(g));
    }
    auto profile = make_fidelity_profile(grid, values);
    profile.exact = steep_left;
    auto fit = gamma_error_bars(profile, 0.02, 2, BarMode::asymmetric);
    CHECK(fit.gamma_right > fit.gamma_left);
    // both modes still hit the fidelity target
    auto sym = gamma_error_bars(profile, 0.02, 2, BarMode::symmetric);
    CHECK(sym.gamma_left == doctest::Approx(sym.gamma_right).epsilon(1e-12));
  }

  TEST_CASE("model profile peaks at zero offset and stays symmetric-ish") {
    DrivenQubitParams p;
    p.gamma_x = 2.0;
    p.gamma_y = 2.0;
    auto profile = model_fidelity_profile(p);
    CHECK(profile.grid.size() == 81);
    CHECK(profile(0.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(!profile.flat);
    for (double g : {0.1, 0.2, 0.25}) {
      CHECK(profile(g) < 1.0);
      CHECK(std::abs(profile(g) - profile(-g)) < 1e-3);
    }
    // fidelity decays with distance
    CHECK(profile(0.3) < profile(0.1));
  }

  TEST_CASE("model profile clips the grid at the physical boundary") {
    DrivenQubitParams p;
    p.gamma_x = 0.5;  // closer to zero than the default half-width
    p.gamma_y = 2.0;
    auto profile = model_fidelity_profile(p);
    CHECK(profile.domain_left() == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(profile.domain_right() == doctest::Approx(2.0).epsilon(1e-12));
  }

  TEST_CASE("circuit profile of an offset-free family is flat") {
    auto family = [](double) { return Mat(Mat::Identity(4, 4)); };
    std::vector<double> offsets;
    for (int i = 0; i <= 10; ++i) offsets.push_back(-1.0 + 0.2 * i);
    auto profile = circuit_fidelity_profile(family, 1.0, offsets, 5);
    CHECK(profile.flat);
    CHECK_THROWS_AS(gamma_error_bars(profile, 0.02, 2), NumericalError);
  }

  TEST_CASE("bad fit arguments are rejected") {
    auto profile = quadratic_profile();
    CHECK_THROWS_AS(gamma_error_bars(profile, -0.1, 2), DimensionError);
    CHECK_THROWS_AS(gamma_error_bars(profile, 0.02, 0), DimensionError);
  }
}
