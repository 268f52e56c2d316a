#include <doctest.h>

#include <cstdio>
#include <random>

#include "helpers.hpp"
#include "lep/driven_qubit.hpp"
#include "lep/json_io.hpp"

using namespace lep;
using test::random_complex;

TEST_SUITE("json_io") {
  TEST_CASE("matrix round trip keeps every entry") {
    std::mt19937_64 rng(3);
    Mat m = random_complex(3, 5, rng);
    auto j = matrix_to_json(m);
    CHECK(j["rows"] == 3);
    CHECK(j["cols"] == 5);
    CHECK(j["data"].size() == 15);
    CHECK((matrix_from_json(j) - m).norm() == 0.0);
  }

  TEST_CASE("malformed matrices are rejected") {
    auto j = matrix_to_json(Mat::Identity(2, 2));
    j["data"] = nlohmann::json::array({nlohmann::json::array({1.0, 0.0})});
    CHECK_THROWS_AS(matrix_from_json(j), Error);
    nlohmann::json empty;
    CHECK_THROWS_AS(matrix_from_json(empty), Error);
  }

  TEST_CASE("sampled records round trip through json") {
    DrivenQubitParams p;
    p.gamma_x = 1.0;
    Mat l = driven_qubit_liouvillian(p);
    NoiseModel noise;
    noise.shots = 777;
    noise.seed = 4;
    double dt = 1.0 / 15;
    auto records = simulate_records(first_order_propagator(l, dt), noise);
    auto bundle = records_from_json(records_to_json(records, dt, 1.0));
    CHECK(bundle.dt == dt);
    CHECK(bundle.omega == 1.0);
    REQUIRE(bundle.records.size() == records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
      CHECK(bundle.records[i].input == records[i].input);
      CHECK(bundle.records[i].axis == records[i].axis);
      CHECK(bundle.records[i].shots == records[i].shots);
      CHECK(bundle.records[i].plus == records[i].plus);
      CHECK(bundle.records[i].minus == records[i].minus);
    }
  }

  TEST_CASE("exact records serialize probabilities instead of counts") {
    DrivenQubitParams p;
    p.gamma_x = 1.0;
    Mat l = driven_qubit_liouvillian(p);
    NoiseModel exact;
    double dt = 1.0 / 15;
    auto records = simulate_records(first_order_propagator(l, dt), exact);
    auto j = records_to_json(records, dt, 1.0);
    CHECK(j["records"][0].contains("probabilities"));
    CHECK(!j["records"][0].contains("counts"));
    auto bundle = records_from_json(j);
    for (std::size_t i = 0; i < records.size(); ++i) {
      CHECK(bundle.records[i].shots == 0);
      CHECK(bundle.records[i].p_plus ==
            doctest::Approx(records[i].p_plus).epsilon(1e-15));
    }
    // the round-tripped records rebuild the same tomogram
    Mat before = tomogram_from_records(records, Method::m2, dt).matrix;
    Mat after = tomogram_from_records(bundle.records, Method::m2, dt).matrix;
    CHECK((before - after).norm() < 1e-12);
  }

  TEST_CASE("count records must conserve their shot budget") {
    DrivenQubitParams p;
    Mat l = driven_qubit_liouvillian(p);
    NoiseModel noise;
    noise.shots = 100;
    auto records = simulate_records(first_order_propagator(l, 0.01), noise);
    auto j = records_to_json(records, 0.01, 1.0);
    j["records"][0]["counts"]["plus"] = 999;
    CHECK_THROWS_AS(records_from_json(j), Error);
  }

  TEST_CASE("eigensystem export carries values, types, and regime label") {
    Mat l = driven_qubit_liouvillian(DrivenQubitParams{});
    auto es = eig_general(l);
    auto regime = classify_modes(es.values);
    auto j = eigensystem_to_json(es, regime);
    REQUIRE(j["eigenvalues"].size() == 4);
    CHECK(j["eigenvalues"][0].size() == 2);
    CHECK(j["mode_types"].size() == 4);
    CHECK(j["regime"].is_string());
    CHECK(j.contains("gap"));
    CHECK(j.contains("condition"));
    CHECK(j["defective"].size() == 4);
  }

  TEST_CASE("dilation export names every block") {
    Mat s = 0.25 * sandwich(sigma_x(), sigma_x()) +
            0.75 * sandwich(Mat::Identity(2, 2), Mat::Identity(2, 2));
    auto k = kraus_from_choi(choi_from_superop(s));
    auto u = dilation_unitary(k);
    auto j = dilation_to_json(k, u);
    REQUIRE(j["kraus"].size() == k.operators.size());
    CHECK(j["kraus"][0]["weight"].get<double>() ==
          doctest::Approx(k.weights[0]).epsilon(1e-15));
    CHECK((matrix_from_json(j["kraus"][0]["matrix"]) - k.operators[0]).norm() <
          1e-15);
    CHECK(j["env_dim"] == u.env_dim);
    CHECK(j["system_dim"] == u.system_dim);
    CHECK((matrix_from_json(j["unitary"]) - u.matrix).norm() < 1e-15);
  }

  TEST_CASE("fit export is flat json") {
    TriangularNoiseFit fit;
    fit.gamma_left = 0.1;
    fit.gamma_right = 0.2;
    fit.bar_left = 0.01;
    fit.bar_right = 0.02;
    auto j = fit_to_json(fit);
    CHECK(j["gamma_left"] == 0.1);
    CHECK(j["bar_right"] == 0.02);
  }

  TEST_CASE("text files round trip") {
    std::string path = "/tmp/lep_test_io.txt";
    write_text_file(path, "line one\nline two\n");
    CHECK(read_text_file(path) == "line one\nline two\n");
    std::remove(path.c_str());
    CHECK_THROWS_AS(read_text_file("/nonexistent/path/file.txt"), Error);
  }

  TEST_CASE("profiles parse from csv with headers and comments") {
    std::string csv =
        "gamma_prime,fidelity\n"
        "# tabulated around the operating point\n"
        "-0.4,0.84\n"
        "-0.2,0.96\n"
        "0,1\n"
        "0.2,0.96\n"
        "0.4,0.84\n";
    auto profile = profile_from_csv(csv);
    CHECK(profile.grid.size() == 5);
    CHECK(profile(0.0) == 1.0);
    CHECK(profile(0.3) == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(!profile.flat);

    CHECK_THROWS_AS(profile_from_csv("a,b\n"), Error);
    CHECK_THROWS_AS(profile_from_csv("0,1\n0.1\n"), Error);
  }
}
