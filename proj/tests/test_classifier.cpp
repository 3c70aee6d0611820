#include "catch_amalgamated.hpp"

#include <cmath>
#include <numeric>

#include "projlab/classifier.hpp"

using namespace projlab;

TEST_CASE("window_count on sorted values, open intervals") {
  std::vector<double> v{0, 1, 2, 3};
  CHECK(window_count(v, Window::from_doubles(0.5, 2.5)) == 2);
  CHECK(window_count(std::vector<double>{}, Window::from_doubles(0.5, 2.5)) == 0);

  // squares truncation at R=10 under beta = 1; only 5,5,8 fall in (4,9)
  SweepContext ctx = SweepContext::build(GeneratorSpec::squares_m0_spec(),
                                         RadiiSchedule::make(10, 2, 2));
  std::vector<double> proj;
  for (std::size_t i = 0; i < ctx.prefix[0]; ++i)
    proj.push_back(ctx.pts[i].x1 + ctx.pts[i].x2);
  std::sort(proj.begin(), proj.end());
  CHECK(window_count(proj, Window(Rational(4), Rational(9))) == 3);
}

TEST_CASE("gap statistics with boundary and duplicate rules") {
  GapStats a = gap_stats({-1, 0, 1}, 1.0);
  CHECK(a.max_gap == Catch::Approx(1.0));
  CHECK(a.min_gap == Catch::Approx(1.0));
  CHECK(a.count == 3);

  GapStats b = gap_stats({0}, 2.0);
  CHECK(b.max_gap == Catch::Approx(2.0));
  CHECK(std::isinf(b.min_gap));
  CHECK(b.count == 1);

  GapStats c = gap_stats({0, 0, 1}, 1.0);
  CHECK(c.max_gap == Catch::Approx(1.0));
  CHECK(c.min_gap == Catch::Approx(1.0));  // duplicate excluded from min
  CHECK(c.count == 3);
  CHECK(c.distinct_count == 2);

  GapStats d = gap_stats({5.0, 6.0}, 1.0);  // nothing inside [-1,1]
  CHECK(d.max_gap == Catch::Approx(2.0));
  CHECK(d.count == 0);
}

TEST_CASE("integer lattice at a rational slope is discrete evidence") {
  ClassifierParams params;
  params.T = 10;
  Classification c = classify_direction(
      GeneratorSpec::integer_lattice_spec(), Direction::from_slope(Real(Rational(1, 2))),
      RadiiSchedule::make(20, 2, 3), params);
  CHECK(c.verdict == Verdict::discrete_evidence);
  // image lies in (1/2)Z: min gap is exactly one half
  CHECK(c.stats.back().gaps.min_gap == Catch::Approx(0.5));
}

TEST_CASE("linear product set at sqrt(2) is dense evidence") {
  ClassifierParams params;
  params.T = 1;
  Classification c = classify_direction(
      GeneratorSpec::product_set_spec(SequenceSpec::polynomial_seq(1.0, 1.0)),
      Direction::from_slope(Real(QuadIrr::sqrt2())), RadiiSchedule::make(50, 2, 4),
      params);
  CHECK(c.verdict == Verdict::dense_evidence);
}

TEST_CASE("squares under the L convention at phi^2 are exceptional evidence") {
  ClassifierParams params;
  params.T = 10;
  params.growth_rho = 1.25;  // in-window counts grow ~log R for this family
  Classification c = classify_direction(
      GeneratorSpec::squares_m0_L_spec(),
      Direction::from_slope(Real(QuadIrr::phi_squared())),
      RadiiSchedule::make(100, 16, 3), params);
  CHECK(c.verdict == Verdict::exceptional_evidence);
  REQUIRE(c.exc_q.has_value());
  // the empty window stays empty: an exact BA-margin consequence
  CHECK(c.exc_q->length() == Rational(5, 8));  // dyadic grid cell, width T/16
}

TEST_CASE("classification is deterministic") {
  ClassifierParams params;
  params.T = 5;
  GeneratorSpec spec =
      GeneratorSpec::random_polar_spec(SequenceSpec::polynomial_seq(1.0, 1.0), 21);
  RadiiSchedule sched = RadiiSchedule::make(50, 2, 3);
  Direction d = Direction::from_slope(0.37);
  Classification a = classify_direction(spec, d, sched, params);
  Classification b = classify_direction(spec, d, sched, params);
  CHECK(a.to_json() == b.to_json());
}

TEST_CASE("grid counts partition the [-T,T] count") {
  // randomized generator + irrational-ish slope: no value lands exactly on a
  // dyadic window boundary, so the open-window counts tile the full count
  ClassifierParams params;
  params.T = 10;
  GeneratorSpec spec =
      GeneratorSpec::random_polar_spec(SequenceSpec::polynomial_seq(1.0, 1.0), 3);
  Classification c = classify_direction(spec, Direction::from_slope(0.6180339887),
                                        RadiiSchedule::make(50, 2, 3), params);
  for (const RadiusStats& rs : c.stats) {
    std::size_t total =
        std::accumulate(rs.grid_counts.begin(), rs.grid_counts.end(), std::size_t{0});
    CHECK(total == rs.gaps.count);
  }
}

TEST_CASE("verdict monotone in the dense threshold") {
  ClassifierParams params;
  params.T = 1;
  GeneratorSpec spec =
      GeneratorSpec::product_set_spec(SequenceSpec::polynomial_seq(1.0, 1.0));
  Classification c = classify_direction(
      spec, Direction::from_slope(Real(QuadIrr::sqrt2())),
      RadiiSchedule::make(50, 2, 4), params);
  REQUIRE(c.verdict == Verdict::dense_evidence);
  // same stats, looser threshold: still dense
  ClassifierParams loose = params;
  loose.delta_dense = params.delta_dense * 10;
  Classification c2 = c;
  c2.conflict = false;
  c2.notes.clear();
  derive_verdict(c2, loose, loose.effective_grid());
  CHECK(c2.verdict == Verdict::dense_evidence);
}

TEST_CASE("classifier parameter validation and JSON round-trip") {
  ClassifierParams p;
  p.T = 8;
  p.delta_dense = 0.1;
  p.window_grid.push_back(Window(Rational(-1), Rational(1)));
  ClassifierParams back = ClassifierParams::from_json(p.to_json());
  CHECK(back.to_json() == p.to_json());

  json bad = p.to_json();
  bad["mystery_knob"] = 3;
  CHECK_THROWS_AS(ClassifierParams::from_json(bad), ValidationError);

  ClassifierParams outside;
  outside.T = 1;
  outside.window_grid.push_back(Window(Rational(-5), Rational(5)));
  CHECK_THROWS_AS(outside.validate(), ValidationError);

  CHECK_THROWS_AS(RadiiSchedule::make(100, 1.0, 4), ValidationError);
  CHECK_THROWS_AS(RadiiSchedule::make(100, 2.0, 1), ValidationError);
  CHECK_THROWS_AS(RadiiSchedule::make(-1, 2.0, 4), ValidationError);
}

TEST_CASE("resource cap during classification carries partial stats") {
  ClassifierParams params;
  params.point_cap = 500;
  CHECK_THROWS_AS(
      classify_direction(GeneratorSpec::integer_lattice_spec(),
                         Direction::from_slope(0.5), RadiiSchedule::make(20, 2, 3),
                         params),
      ClassifyCapError);
}

TEST_CASE("exceptional witness construction and exact invariants") {
  TruncatedSet ts = materialize(GeneratorSpec::squares_m0_L_spec(), 25600.0);
  Window P(Rational(-9, 2), Rational(9, 2));
  Window Q(Rational(-13, 20), Rational(13, 20));
  ExceptionalWitness w =
      build_exceptional_witness(ts, Real(QuadIrr::phi_squared()), P, Q);
  CHECK(w.steps.size() >= 5);
  // ratio = q / (2d), d = diam(P u Q) = 9, q = 13/10
  CHECK(w.ratio == Rational(13, 180));
  Rational prev_y(0);
  for (const auto& s : w.steps) {
    CHECK(s.y > prev_y);
    prev_y = s.y;
    CHECK(s.eps * s.y == 1);
    CHECK(s.q_k.length() / (2 * s.d_k) == w.ratio);
    CHECK(real_compare(w.beta, s.p_k.lo) > 0);
    CHECK(real_compare(w.beta, s.p_k.hi) < 0);
  }
}

TEST_CASE("witness fails cleanly on thin data") {
  // tiny truncation: fewer than 3 qualifying points
  TruncatedSet ts = materialize(GeneratorSpec::squares_m0_L_spec(), 10.0);
  CHECK_THROWS_AS(
      build_exceptional_witness(ts, Real(QuadIrr::phi_squared()),
                                Window(Rational(-9, 2), Rational(9, 2)),
                                Window(Rational(-13, 20), Rational(13, 20))),
      ValidationError);

  // float slopes carry no exactness: rejected
  TruncatedSet ok = materialize(GeneratorSpec::squares_m0_L_spec(), 25600.0);
  CHECK_THROWS_AS(build_exceptional_witness(ok, Real(2.618),
                                            Window(Rational(-9, 2), Rational(9, 2)),
                                            Window(Rational(-13, 20), Rational(13, 20))),
                  ValidationError);

  // no exact coordinates: rejected
  TruncatedSet fl;
  fl.points = {{0.5, 1.0}, {0.25, 2.0}, {0.125, 3.0}};
  CHECK_THROWS_AS(build_exceptional_witness(fl, Real(QuadIrr::phi_squared()),
                                            Window(Rational(-1), Rational(1)),
                                            Window(Rational(2), Rational(3))),
                  ValidationError);
}

TEST_CASE("P-boundedness evidence: growing and stabilized cases") {
  // lattice along the anti-diagonal: (n,-n) projects to 0 under phi at pi/4
  PBoundednessReport lat = pboundedness_evidence(
      GeneratorSpec::integer_lattice_spec(), Direction::from_angle(0.7853981633974483),
      Window::from_doubles(-0.1, 0.1), RadiiSchedule::make(10, 2, 3));
  CHECK(lat.growing);

  // finite explicit set stabilizes as soon as R swallows it
  GeneratorSpec fin = GeneratorSpec::explicit_points_spec({{1, 1}, {2, -1}, {0, 3}});
  PBoundednessReport fr = pboundedness_evidence(
      fin, Direction::from_angle(1.0), Window::from_doubles(-10, 10),
      RadiiSchedule::make(10, 2, 3));
  CHECK_FALSE(fr.growing);

  // geometric product set at an irrational slope keeps finding far preimages
  PBoundednessReport ps = pboundedness_evidence(
      GeneratorSpec::product_set_spec(SequenceSpec::geometric_seq(2.0, 2.0)),
      Direction::from_slope(Real(QuadIrr::sqrt2())), Window::from_doubles(-0.1, 0.1),
      RadiiSchedule::make(250, 2, 3), ProjectionForm::psi);
  CHECK(ps.growing);
}
