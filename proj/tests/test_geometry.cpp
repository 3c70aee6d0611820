#include "catch_amalgamated.hpp"

#include <cmath>
#include <random>

#include "projlab/generators.hpp"
#include "projlab/geometry.hpp"

using namespace projlab;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("project_phi basic values") {
  CHECK(project_phi({1, 0}, Direction::from_angle(0)) == Catch::Approx(1.0));
  CHECK(project_phi({0, 1}, Direction::from_angle(kPi / 2)) == Catch::Approx(1.0));
  CHECK(project_phi({3, 4}, Direction::from_angle(kPi)) == Catch::Approx(-3.0));
}

TEST_CASE("project_psi basic values and vertical rejection") {
  CHECK(project_psi({3, 4}, 2.0) == Catch::Approx(11.0));
  CHECK(project_psi({5, 7}, 0.0) == Catch::Approx(5.0));
  CHECK(project_psi({1, 1}, -1.0) == Catch::Approx(0.0));

  Direction vert = Direction::from_angle(kPi / 2);
  REQUIRE(vert.vertical);
  CHECK_THROWS_AS(project_psi(Point2{1, 1}, vert), std::invalid_argument);
  CHECK_THROWS_AS(phi_psi_consistency(Point2{1, 1}, vert), std::invalid_argument);
}

TEST_CASE("project_psi exact rational path round-trips") {
  RationalPoint p{Rational(3, 7), Rational(-5, 11)};
  Rational beta(2, 3);
  Rational v = project_psi_exact(p, beta);
  CHECK(v == Rational(3, 7) + Rational(2, 3) * Rational(-5, 11));
  // equality of rationals, no rounding anywhere
  CHECK(project_psi_exact({v - beta * p.x2, p.x2}, beta) == v);
}

TEST_CASE("phi/psi conjugacy residual within contract") {
  CHECK(phi_psi_consistency({1, 0}, Direction::from_angle(0)) == 0.0);
  Point2 p{2, 3};
  CHECK(phi_psi_consistency(p, Direction::from_angle(kPi / 4)) <=
        kIdentityTol * (1 + p.norm()));
  Point2 big{1e6, 1e6};
  CHECK(phi_psi_consistency(big, Direction::from_angle(1.0)) <=
        kIdentityTol * (1 + big.norm()));
}

TEST_CASE("phi/psi conjugacy holds on random pairs") {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> coord(-1e4, 1e4);
  std::uniform_real_distribution<double> ang(0.0, 2 * kPi);
  for (int i = 0; i < 20000; ++i) {
    Point2 p{coord(rng), coord(rng)};
    Direction d = Direction::from_angle(ang(rng));
    if (d.vertical || std::abs(std::cos(d.angle)) < 1e-8) continue;
    REQUIRE(phi_psi_consistency(p, d) <= kIdentityTol * (1 + p.norm()));
  }
}

TEST_CASE("project_truncated sorts and preserves multiplicity") {
  TruncatedSet ts;
  ts.points = {{0, 0}, {1, 0}, {2, 0}};
  ts.radius = 3;
  auto v = project_truncated(ts, Direction::from_angle(0), ProjectionForm::phi);
  CHECK(v == std::vector<double>{0, 1, 2});

  TruncatedSet ts2;
  ts2.points = {{1, 2}, {3, 4}};
  ts2.radius = 6;
  auto w = project_truncated(ts2, Direction::from_slope(1.0), ProjectionForm::psi);
  CHECK(w == std::vector<double>{3, 7});

  // hand-listed squares prefix, beta = 1: duplicates kept
  TruncatedSet m0;
  m0.points = {{1, 1}, {1, 4}, {4, 1}, {4, 4}, {1, 9}, {9, 1}};
  m0.radius = 10;
  auto u = project_truncated(m0, Direction::from_slope(1.0), ProjectionForm::psi);
  CHECK(u == std::vector<double>{2, 5, 5, 8, 10, 10});
}

TEST_CASE("project_truncated is a sorted permutation of elementwise projection") {
  TruncatedSet ts = materialize(GeneratorSpec::integer_lattice_spec(), 12.0);
  Direction d = Direction::from_slope(0.7312);
  auto v = project_truncated(ts, d, ProjectionForm::psi);
  REQUIRE(v.size() == ts.size());
  CHECK(std::is_sorted(v.begin(), v.end()));
  std::vector<double> raw;
  for (const Point2& p : ts.points) raw.push_back(project_psi(p, d));
  std::sort(raw.begin(), raw.end());
  CHECK(v == raw);
}

TEST_CASE("project_truncated rejects empty set and vertical psi") {
  TruncatedSet empty;
  CHECK_THROWS_AS(
      project_truncated(empty, Direction::from_angle(0), ProjectionForm::phi),
      std::invalid_argument);
  TruncatedSet one;
  one.points = {{1, 1}};
  CHECK_THROWS_AS(
      project_truncated(one, Direction::from_angle(kPi / 2), ProjectionForm::psi),
      std::invalid_argument);
}

TEST_CASE("Window validates endpoints") {
  CHECK_THROWS_AS(Window(Rational(1), Rational(1)), std::invalid_argument);
  CHECK_THROWS_AS(Window(Rational(2), Rational(1)), std::invalid_argument);
  Window w(Rational(-1, 2), Rational(1, 2));
  CHECK(w.length() == Rational(1));
  CHECK(w.contains(Rational(0)));
  CHECK_FALSE(w.contains(Rational(1, 2)));  // open interval
}

TEST_CASE("rational string round-trip") {
  CHECK(rational_to_string(Rational(-13, 20)) == "-13/20");
  CHECK(rational_from_string("-13/20") == Rational(-13, 20));
  CHECK(rational_to_string(Rational(7)) == "7");
  CHECK(rational_from_string("7") == Rational(7));
  CHECK_THROWS(rational_from_string("1/0"));
}
