#include "catch_amalgamated.hpp"

#include <cmath>
#include <random>

#include "projlab/diophantine.hpp"

using namespace projlab;

TEST_CASE("fractional distance basics") {
  CHECK(frac_dist(1.25) == Catch::Approx(0.25));
  CHECK(frac_dist(-0.3) == Catch::Approx(0.3));
  CHECK(frac_dist(7.0) == 0.0);
  CHECK(frac_dist(Rational(5, 4)) == Rational(1, 4));
  CHECK(frac_dist(Rational(-3, 10)) == Rational(3, 10));
  CHECK(frac_dist(Rational(7)) == Rational(0));
}

TEST_CASE("fractional distance symmetry and periodicity") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-100.0, 100.0);
  for (int i = 0; i < 20000; ++i) {
    double x = u(rng);
    CHECK(frac_dist(x + 1.0) == Catch::Approx(frac_dist(x)).margin(1e-12));
    CHECK(frac_dist(-x) == Catch::Approx(frac_dist(x)).margin(1e-12));
  }
  // exact on rationals
  std::uniform_int_distribution<int> num(-500, 500), den(1, 97);
  for (int i = 0; i < 2000; ++i) {
    Rational r(num(rng), den(rng));
    Rational shifted = r + 1, negated = -r;
    CHECK(frac_dist(shifted) == frac_dist(r));
    CHECK(frac_dist(negated) == frac_dist(r));
  }
}

TEST_CASE("continued fraction of a rational terminates in canonical form") {
  ContinuedFraction cf = cf_expand(Rational(355, 113));
  CHECK(cf.exactness == ContinuedFraction::Exactness::terminating_rational);
  CHECK(cf.a0 == 3);
  REQUIRE(cf.quotients.size() == 2);
  CHECK(cf.quotients[0] == 7);
  CHECK(cf.quotients[1] == 16);  // canonical: last quotient >= 2

  std::vector<Rational> conv = convergents(cf, 3);
  REQUIRE(conv.size() == 3);
  CHECK(conv[1] == Rational(22, 7));
  CHECK(conv.back() == Rational(355, 113));
}

TEST_CASE("classical periodic expansions") {
  ContinuedFraction s2 = cf_expand(QuadIrr::sqrt2());
  CHECK(s2.a0 == 1);
  CHECK(s2.period == 1);
  CHECK(s2.quotient(1) == 2);
  CHECK(s2.quotient(9) == 2);  // cycle extension

  ContinuedFraction ph = cf_expand(QuadIrr::phi());
  CHECK(ph.a0 == 1);
  CHECK(ph.period == 1);
  CHECK(ph.quotient(1) == 1);

  ContinuedFraction ph2 = cf_expand(QuadIrr::phi_squared());
  CHECK(ph2.a0 == 2);
  CHECK(ph2.period == 1);
  CHECK(ph2.quotient(1) == 1);
}

TEST_CASE("convergents match the classical tables") {
  std::vector<Rational> f = convergents(cf_expand(QuadIrr::phi()), 4);
  REQUIRE(f.size() == 4);
  CHECK(f[0] == Rational(1));
  CHECK(f[1] == Rational(2));
  CHECK(f[2] == Rational(3, 2));
  CHECK(f[3] == Rational(5, 3));

  std::vector<Rational> r = convergents(cf_expand(QuadIrr::sqrt2()), 3);
  CHECK(r[0] == Rational(1));
  CHECK(r[1] == Rational(3, 2));
  CHECK(r[2] == Rational(7, 5));
}

TEST_CASE("convergent determinant identity holds at every depth") {
  std::vector<Rational> c = convergents(cf_expand(QuadIrr::sqrt_of(7)), 20);
  for (std::size_t k = 1; k < c.size(); ++k) {
    BigInt det = numerator(c[k]) * denominator(c[k - 1]) -
                 numerator(c[k - 1]) * denominator(c[k]);
    CHECK(det == (k % 2 == 1 ? 1 : -1));
  }
}

TEST_CASE("float continued fractions stop instead of guessing") {
  ContinuedFraction cf = cf_expand(2.718281828459045, 40);
  // e = [2;1,2,1,1,4,1,1,6,...]; a double can only certify a prefix
  CHECK(cf.a0 == 2);
  REQUIRE(cf.depth() >= 5);
  CHECK(cf.quotients[0] == 1);
  CHECK(cf.quotients[1] == 2);
  CHECK(cf.quotients[2] == 1);
  CHECK(cf.truncated);  // reliability limit hit before depth 40
  CHECK_THROWS_AS(convergents(cf, cf.depth() + 10), std::out_of_range);
}

TEST_CASE("badly-approximable margins") {
  // <phi> = dist(1.618.., Z) = 2 - phi = 0.3819..; no later m beats the m=1 term
  BAMargin one = ba_margin(Real(QuadIrr::phi()), 1);
  CHECK(one.margin == Catch::Approx(0.3819660113).epsilon(1e-9));
  CHECK(one.argmin_m == 1);

  BAMargin deep = ba_margin(Real(QuadIrr::phi()), 10000);
  CHECK(deep.margin == Catch::Approx(0.3819660113).epsilon(1e-9));
  CHECK(deep.margin <= one.margin);  // non-increasing in M

  BAMargin rat = ba_margin(Real(Rational(1, 3)), 10);
  CHECK(rat.margin == 0.0);
  CHECK(rat.argmin_m == 3);  // margin hits zero at the denominator
}

TEST_CASE("ba_margin is non-increasing in depth") {
  double prev = std::numeric_limits<double>::infinity();
  for (std::int64_t M : {1, 2, 5, 20, 100, 500}) {
    double m = ba_margin(Real(QuadIrr::sqrt2()), M).margin;
    CHECK(m <= prev + 1e-15);
    prev = m;
  }
}

TEST_CASE("good approximation pairs from convergents") {
  auto s2 = good_approx_pairs(Real(QuadIrr::sqrt2()), 3);
  REQUIRE(s2.size() == 3);
  CHECK(s2[0] == std::make_pair(BigInt(1), BigInt(1)));
  CHECK(s2[1] == std::make_pair(BigInt(2), BigInt(3)));
  CHECK(s2[2] == std::make_pair(BigInt(5), BigInt(7)));

  auto ph = good_approx_pairs(Real(QuadIrr::phi()), 2);
  REQUIRE(ph.size() == 2);
  CHECK(ph[0] == std::make_pair(BigInt(1), BigInt(1)));
  CHECK(ph[1] == std::make_pair(BigInt(2), BigInt(3)));

  // float mode: each pair re-verified numerically
  auto ep = good_approx_pairs(Real(2.718281828459045), 2);
  REQUIRE(ep.size() == 2);
  for (const auto& [m, n] : ep) {
    double md = static_cast<double>(m), nd = static_cast<double>(n);
    CHECK(std::abs(md * 2.718281828459045 - nd) < 1.0 / md);
  }

  CHECK_THROWS_AS(good_approx_pairs(Real(Rational(3, 7)), 2), ValidationError);
}

TEST_CASE("every emitted pair satisfies the strict inequality") {
  for (const auto& [m, n] : good_approx_pairs(Real(QuadIrr::sqrt_of(3)), 6))
    CHECK(good_approx_ok(Real(QuadIrr::sqrt_of(3)), m, n));
}

TEST_CASE("L(alpha) window restriction") {
  // integer alpha: all values are integers, none in (-1/2, 1/2) unless zero
  CHECK(l_alpha_points(Real(Rational(2)), 3, Window(Rational(-1, 2), Rational(1, 2)))
            .empty());

  // alpha = phi^2: the BA margin keeps a window around 0 empty
  double phi_d = QuadIrr::phi().to_double();
  Window tight = Window::from_doubles(-0.4 * phi_d, 0.4 * phi_d);
  CHECK(l_alpha_points(Real(QuadIrr::phi_squared()), 200, tight).empty());

  // wider window catches values; frozen count from a direct m,n scan
  Window wide(Rational(-4), Rational(4));
  std::vector<double> vals = l_alpha_points(Real(QuadIrr::phi_squared()), 100, wide);
  CHECK(vals.size() == 11);
  CHECK(vals.front() == Catch::Approx(-1.4471837).epsilon(1e-6));
}

TEST_CASE("L(alpha) values are monotone in m_max") {
  Window w(Rational(-5), Rational(5));
  auto small = l_alpha_points(Real(QuadIrr::phi_squared()), 50, w);
  auto large = l_alpha_points(Real(QuadIrr::phi_squared()), 200, w);
  CHECK(small.size() <= large.size());
  for (double v : small) {
    bool found = false;
    for (double u : large)
      if (std::abs(u - v) < 1e-12) { found = true; break; }
    CHECK(found);
  }
}

TEST_CASE("difference-of-squares factorization residual") {
  CHECK(factorization_check(2.0, 2, 3) <= 1e-12);
  double phi2 = QuadIrr::phi_squared().to_double();
  CHECK(factorization_check(phi2, 1, 1) <= 1e-12);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> alpha(0.01, 50.0);
  std::uniform_int_distribution<std::int64_t> mn(1, 200);
  for (int i = 0; i < 10000; ++i) {
    double a = alpha(rng);
    std::int64_t m = mn(rng), n = mn(rng);
    double res = factorization_check(a, m, n);
    REQUIRE(res <= 1e-10 * (1.0 + a * m * m + double(n) * n));
  }
}
