#include "catch_amalgamated.hpp"

#include <cmath>

#include "projlab/sequence_lab.hpp"

using namespace projlab;

TEST_CASE("geometric prefix: ratio exact, harmonic sum below 1") {
  SequenceReport rep =
      analyze_sequence(SequenceSpec::geometric_seq(2.0, 2.0), 30, {2, 30});
  CHECK(rep.prefix_length == 30);
  CHECK(rep.min_tail_ratio == 2.0);  // spec parameter, not a float quotient
  CHECK(rep.harmonic_partial < 1.0);
  CHECK(rep.harmonic_partial == Catch::Approx(1.0 - std::pow(2.0, -30.0)).epsilon(1e-12));
}

TEST_CASE("linear prefix: bounded gaps, log-divergent harmonic sum") {
  SequenceReport rep =
      analyze_sequence(SequenceSpec::polynomial_seq(1.0, 1.0), 1000000,
                       {10, 1000, 1000000});
  CHECK(rep.max_tail_gap == Catch::Approx(1.0).margin(1e-9));
  CHECK(rep.min_tail_ratio > 1.0);
  CHECK(rep.min_tail_ratio < 1.0 + 4.0 / 1000000);
  // H_K ~ ln K + gamma = 14.3927 at K = 1e6
  CHECK(rep.harmonic_partial == Catch::Approx(14.3927).margin(0.01));
  // Dvoretzky quantity for r_k = k is H_N / ln N -> 1
  REQUIRE(rep.dvoretzky_values.size() == 3);
  CHECK(rep.dvoretzky_values.back().first == 1000000);
  CHECK(rep.dvoretzky_values.back().second >= 0.99);
  CHECK(rep.dvoretzky_values.back().second <= 1.05);
}

TEST_CASE("quadratic prefix: convergent harmonic sum") {
  SequenceReport rep =
      analyze_sequence(SequenceSpec::polynomial_seq(2.0, 1.0), 10000, {100, 10000});
  double pi2_6 = 1.6449340668482264;
  CHECK(rep.harmonic_partial <= pi2_6);
  CHECK(std::abs(rep.harmonic_partial - (pi2_6 - 1.0 / 10000)) < 1e-4);
}

TEST_CASE("harmonic partial is strictly increasing in K") {
  double prev = 0.0;
  for (std::int64_t K : {8, 16, 64, 256, 1024}) {
    double h = analyze_sequence(SequenceSpec::polynomial_seq(1.5, 1.0), K, {})
                   .harmonic_partial;
    CHECK(h > prev);
    prev = h;
  }
}

TEST_CASE("schedule and prefix validation") {
  SequenceSpec lin = SequenceSpec::polynomial_seq(1.0, 1.0);
  CHECK_THROWS_AS(analyze_sequence(lin, 4, {}), ValidationError);           // K < 8
  CHECK_THROWS_AS(analyze_sequence(lin, 100, {1, 50}), ValidationError);    // N < 2
  CHECK_THROWS_AS(analyze_sequence(lin, 100, {50, 200}), ValidationError);  // N > K
  CHECK_THROWS_AS(analyze_sequence(lin, 100, {50, 50}), ValidationError);   // not increasing
  CHECK_THROWS_AS(
      analyze_sequence(SequenceSpec::explicit_seq({1, 2, 3, 4, 5, 6, 7, 7, 9, 10}),
                       10, {}),
      ValidationError);  // non-rising prefix
}

TEST_CASE("report serializes with the documented field names") {
  json j = analyze_sequence(SequenceSpec::geometric_seq(3.0, 1.0), 12, {2, 8}).to_json();
  CHECK(j.contains("prefix_length"));
  CHECK(j.contains("min_tail_ratio"));
  CHECK(j.contains("max_tail_gap"));
  CHECK(j.contains("harmonic_partial"));
  CHECK(j.contains("dvoretzky_values"));
  CHECK(j.contains("dvoretzky_monotone_growth"));
  CHECK(j["dvoretzky_values"].size() == 2);
}
