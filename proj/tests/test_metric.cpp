#include "catch_amalgamated.hpp"

#include <cmath>
#include <random>

#include "projlab/generators.hpp"
#include "projlab/metric.hpp"

using namespace projlab;

namespace {

std::vector<Point2> random_cloud(std::mt19937_64& rng, std::size_t n, double extent) {
  std::uniform_real_distribution<double> u(-extent, extent);
  std::vector<Point2> pts;
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) pts.push_back({u(rng), u(rng)});
  return pts;
}

}  // namespace

TEST_CASE("directed distance examples") {
  std::vector<Point2> a{{0, 0}, {10, 0}}, b{{1, 0}};
  CHECK(directed_hausdorff_brute(b, a) == Catch::Approx(1.0));
  std::vector<Point2> c{{1, 0}}, d{{0, 0}, {10, 0}};
  CHECK(directed_hausdorff_brute(d, c) == Catch::Approx(9.0));
  CHECK(directed_hausdorff_brute(a, a) == 0.0);
  // one-sided never exceeds the symmetric distance
  CHECK(directed_hausdorff_brute(d, c) <= hausdorff_brute(c, d));
}

TEST_CASE("hausdorff distance examples") {
  CHECK(hausdorff_brute({{0, 0}}, {{3, 4}}) == Catch::Approx(5.0));
  CHECK(hausdorff_brute({{1, 0}}, {{0, 0}, {10, 0}}) == Catch::Approx(9.0));
  CHECK_THROWS_AS(hausdorff_brute({}, {{1, 1}}), ValidationError);
  CHECK_THROWS_AS(hausdorff_grid({}, {{1, 1}}), ValidationError);
}

TEST_CASE("grid and brute paths agree to 1e-12") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 25; ++trial) {
    auto a = random_cloud(rng, 60 + trial, 50.0);
    auto b = random_cloud(rng, 40 + trial, 50.0);
    CHECK(hausdorff_grid(a, b) == Catch::Approx(hausdorff_brute(a, b)).margin(1e-12));
  }
}

TEST_CASE("hausdorff metric properties on random triples") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    auto a = random_cloud(rng, 30, 20.0);
    auto b = random_cloud(rng, 25, 20.0);
    auto c = random_cloud(rng, 35, 20.0);
    double ab = hausdorff(a, b), ba = hausdorff(b, a);
    CHECK(ab == Catch::Approx(ba).margin(1e-12));         // symmetry
    CHECK(hausdorff(a, a) == 0.0);                        // identity
    CHECK(hausdorff(a, c) <= ab + hausdorff(b, c) + 1e-12);  // triangle
  }
}

TEST_CASE("separated subset: greedy hand examples") {
  std::vector<Point2> pts{{0, 0}, {0.5, 0}, {2, 0}};
  std::vector<std::size_t> kept = separated_subset(pts, 1.0);
  REQUIRE(kept.size() == 2);
  CHECK(kept[0] == 0);
  CHECK(kept[1] == 2);

  // the unit lattice is already 1-separated: everything survives
  TruncatedSet lat = materialize(GeneratorSpec::integer_lattice_spec(), 3.0);
  CHECK(separated_subset(lat.points, 1.0).size() == lat.size());

  CHECK_THROWS_AS(separated_subset(pts, 0.0), ValidationError);
}

TEST_CASE("separated subset: separation and covering, exhaustively") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    auto pts = random_cloud(rng, 200, 10.0);
    double s = 0.5 + 0.3 * trial;
    std::vector<std::size_t> kept = separated_subset(pts, s);
    // pairwise separation >= s
    for (std::size_t i = 0; i < kept.size(); ++i)
      for (std::size_t j = i + 1; j < kept.size(); ++j)
        REQUIRE(std::sqrt(detail::dist2(pts[kept[i]], pts[kept[j]])) >= s - 1e-12);
    // every input point within < s of the subset
    for (const Point2& p : pts) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t k : kept) best = std::min(best, detail::dist2(p, pts[k]));
      REQUIRE(std::sqrt(best) < s);
    }
    // both extraction paths agree index-for-index
    CHECK(kept == separated_subset_brute(pts, s));
  }
}

TEST_CASE("separated subset of a jittered lattice covers it within 1") {
  TruncatedSet jit = materialize(GeneratorSpec::jittered_lattice_spec(0.4, 8), 10.0);
  std::vector<std::size_t> kept = separated_subset(jit.points, 1.0);
  std::vector<Point2> sub;
  for (std::size_t k : kept) sub.push_back(jit.points[k]);
  CHECK(directed_hausdorff_brute(jit.points, sub) < 1.0);
}

TEST_CASE("min pair distance") {
  std::vector<Point2> a{{0, 0}, {5, 5}}, b{{3, 4}, {10, 0}};
  CHECK(min_pair_dist(a, b) == Catch::Approx(std::sqrt(5.0)));
  CHECK_THROWS_AS(min_pair_dist({}, b), ValidationError);
}
