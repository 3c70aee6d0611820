#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "projlab/errors.hpp"
#include "projlab/quadratic.hpp"
#include "projlab/rational.hpp"

namespace projlab {

inline BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// <x> = dist(x, Z), in [0, 1/2]. Exact on rationals.
inline Rational frac_dist(const Rational& x) {
  BigInt fl = floor_rational(x);
  Rational f = x - Rational(fl);
  return std::min(f, Rational(1) - f);
}

inline long double frac_dist(long double x) {
  long double f = x - floorl(x);
  return std::min(f, 1.0L - f);
}

inline double frac_dist(double x) {
  return static_cast<double>(frac_dist(static_cast<long double>(x)));
}

inline double frac_dist(const Real& x) {
  if (x.index() == 0)
    return static_cast<double>(frac_dist(std::get<Rational>(x)));
  return static_cast<double>(frac_dist(real_to_long_double(x)));
}

struct ContinuedFraction {
  enum class Exactness { terminating_rational, eventually_periodic, float_truncated };

  BigInt a0;
  std::vector<BigInt> quotients;  // a1, a2, ... (for periodic: preperiod then one cycle)
  Exactness exactness = Exactness::terminating_rational;
  std::size_t preperiod = 0;  // # of quotients before the cycle starts
  std::size_t period = 0;     // cycle length (eventually_periodic only)
  bool truncated = false;     // float mode hit its reliability limit
  double input_error = 0.0;   // float mode input uncertainty

  // a_i for i >= 1, extending the cycle for periodic expansions
  BigInt quotient(std::size_t i) const {
    if (i == 0) return a0;
    std::size_t idx = i - 1;
    if (idx < quotients.size()) return quotients[idx];
    if (exactness == Exactness::eventually_periodic && period > 0) {
      std::size_t off = (idx - preperiod) % period;
      return quotients[preperiod + off];
    }
    throw std::out_of_range("ContinuedFraction: quotient beyond reliable depth");
  }

  // Number of quotients available without cyclic extension (a0 not counted).
  std::size_t depth() const { return quotients.size(); }
  bool infinite() const { return exactness == Exactness::eventually_periodic && period > 0; }
};

// Full terminating expansion by Euclid, canonical form (last quotient >= 2
// unless the value is an integer).
inline ContinuedFraction cf_expand(const Rational& x) {
  ContinuedFraction cf;
  cf.exactness = ContinuedFraction::Exactness::terminating_rational;
  BigInt num = numerator(x), den = denominator(x);
  cf.a0 = floor_div(num, den);
  BigInt rem = num - cf.a0 * den;
  while (rem != 0) {
    num = den;
    den = rem;
    BigInt a = num / den;  // den > 0, rem in [0, den) throughout
    cf.quotients.push_back(a);
    rem = num - a * den;
  }
  return cf;
}

// Periodic expansion of a quadratic irrational, exact state-repetition detection.
// max_steps is a safety bound on the period search.
inline ContinuedFraction cf_expand(const QuadIrr& x, std::size_t max_steps = 4096) {
  if (auto r = x.as_rational()) return cf_expand(*r);
  // Normalize to (P + sqrt(D)) / Q with Q | D - P^2.
  BigInt a = x.a(), b = x.b(), c = x.c();
  if (b < 0) { a = -a; b = -b; c = -c; }
  BigInt D = b * b * x.d();
  BigInt P = a, Q = c;
  if ((D - P * P) % Q != 0) {
    BigInt absQ = Q < 0 ? -Q : Q;
    P *= absQ;
    D *= absQ * absQ;
    Q *= absQ;
  }
  BigInt s = isqrt(D);

  auto floor_step = [&](const BigInt& Pi, const BigInt& Qi) {
    // floor((Pi + sqrt(D)) / Qi), sqrt(D) irrational
    if (Qi > 0) return floor_div(Pi + s, Qi);
    return floor_div(Pi + s + 1, Qi);
  };

  ContinuedFraction cf;
  cf.exactness = ContinuedFraction::Exactness::eventually_periodic;
  cf.a0 = floor_step(P, Q);
  P = cf.a0 * Q - P;
  Q = (D - P * P) / Q;

  std::map<std::pair<BigInt, BigInt>, std::size_t> seen;
  for (std::size_t i = 1; i <= max_steps; ++i) {
    auto state = std::make_pair(P, Q);
    auto it = seen.find(state);
    if (it != seen.end()) {
      cf.preperiod = it->second - 1;
      cf.period = i - it->second;
      cf.quotients.resize(cf.preperiod + cf.period);
      return cf;
    }
    seen.emplace(state, i);
    BigInt ai = floor_step(P, Q);
    cf.quotients.push_back(ai);
    P = ai * Q - P;
    Q = (D - P * P) / Q;
  }
  throw std::runtime_error("cf_expand: period not found within max_steps");
}

// Float expansion with interval tracking: stops at the first quotient whose
// uncertainty interval spans an integer (no silent guessing).
inline ContinuedFraction cf_expand(double x, std::size_t depth, double input_error = 1e-15) {
  ContinuedFraction cf;
  cf.exactness = ContinuedFraction::Exactness::float_truncated;
  cf.input_error = input_error;
  long double lo = static_cast<long double>(x) - input_error;
  long double hi = static_cast<long double>(x) + input_error;
  long double fl = floorl(lo), fh = floorl(hi);
  if (fl != fh) {
    cf.truncated = true;
    cf.a0 = static_cast<long long>(fl);
    return cf;
  }
  cf.a0 = static_cast<long long>(fl);
  lo -= fl;
  hi -= fl;
  for (std::size_t i = 0; i < depth; ++i) {
    if (lo <= 0.0L) { cf.truncated = true; break; }
    // reciprocal flips the interval
    long double nlo = 1.0L / hi, nhi = 1.0L / lo;
    long double ql = floorl(nlo), qh = floorl(nhi);
    if (ql != qh || ql < 1) { cf.truncated = true; break; }
    cf.quotients.push_back(static_cast<long long>(ql));
    lo = nlo - ql;
    hi = nhi - ql;
  }
  return cf;
}

inline ContinuedFraction cf_expand(const Real& x, std::size_t depth) {
  switch (x.index()) {
    case 0: return cf_expand(std::get<Rational>(x));
    case 1: return cf_expand(std::get<QuadIrr>(x));
    default: return cf_expand(std::get<double>(x), depth);
  }
}

// First k convergents p_i/q_i (i = 0..k-1), standard recurrence.
inline std::vector<Rational> convergents(const ContinuedFraction& cf, std::size_t k) {
  if (!cf.infinite() && k > cf.depth() + 1) {
    if (cf.exactness == ContinuedFraction::Exactness::float_truncated)
      throw std::out_of_range("convergents: beyond reliable float depth");
    k = cf.depth() + 1;  // terminating expansion just ends
  }
  std::vector<Rational> out;
  BigInt p_prev = 1, q_prev = 0;  // p_{-1}/q_{-1}
  BigInt p = cf.a0, q = 1;
  out.emplace_back(p, q);
  for (std::size_t i = 1; i < k; ++i) {
    BigInt a = cf.quotient(i);
    BigInt pn = a * p + p_prev;
    BigInt qn = a * q + q_prev;
    p_prev = std::exchange(p, pn);
    q_prev = std::exchange(q, qn);
    out.emplace_back(p, q);
  }
  return out;
}

struct BAMargin {
  double value_x = 0.0;
  std::int64_t depth_M = 0;
  double margin = 0.0;    // min over 1 <= m <= M of m * <m x>
  std::int64_t argmin_m = 0;
};

// Exhaustive finite-depth badly-approximable margin.
inline BAMargin ba_margin(const Real& x, std::int64_t M) {
  if (M < 1) throw std::invalid_argument("ba_margin: M >= 1 required");
  BAMargin out;
  out.value_x = real_to_double(x);
  out.depth_M = M;
  if (x.index() == 0) {
    const Rational& r = std::get<Rational>(x);
    Rational best(-1);
    std::int64_t best_m = 0;
    BigInt p = numerator(r), q = denominator(r);
    BigInt acc = 0;  // (m*p) mod q
    for (std::int64_t m = 1; m <= M; ++m) {
      acc += p;
      acc %= q;
      BigInt res = acc < 0 ? BigInt(acc + q) : acc;
      BigInt alt = q - res;
      BigInt d = std::min(res, alt);
      Rational val = Rational(m) * Rational(d, q);
      if (best < 0 || val < best) { best = val; best_m = m; }
      if (best == 0) break;
    }
    out.margin = static_cast<double>(best);
    out.argmin_m = best_m;
    return out;
  }
  long double xv = real_to_long_double(x);
  long double best = -1.0L;
  std::int64_t best_m = 0;
  for (std::int64_t m = 1; m <= M; ++m) {
    long double val = static_cast<long double>(m) * frac_dist(m * xv);
    if (best < 0 || val < best) { best = val; best_m = m; }
  }
  out.margin = static_cast<double>(best);
  out.argmin_m = best_m;
  return out;
}

// |m beta - n| < 1/m, exact when beta is a quadratic irrational.
inline bool good_approx_ok(const Real& beta, const BigInt& m, const BigInt& n) {
  if (beta.index() == 1) {
    const QuadIrr& q = std::get<QuadIrr>(beta);
    QuadIrr t = q.scaled(Rational(m)) - Rational(n);  // m*beta - n
    return t.compare(Rational(1, m)) < 0 && t.compare(Rational(-1, m)) > 0;
  }
  long double b = real_to_long_double(beta);
  long double t = static_cast<long double>(m) * b - static_cast<long double>(n);
  return fabsl(t) * static_cast<long double>(m) < 1.0L;
}

// First `count` pairs (m, n) with |m beta - n| < 1/m, taken from convergents
// in order, at most one pair per denominator m.
inline std::vector<std::pair<BigInt, BigInt>> good_approx_pairs(const Real& beta,
                                                                std::size_t count) {
  if (count < 1) throw std::invalid_argument("good_approx_pairs: count >= 1");
  if (beta.index() == 0)
    throw ValidationError("good_approx_pairs: rational slope rejected");
  ContinuedFraction cf = cf_expand(beta, 256);
  std::vector<std::pair<BigInt, BigInt>> out;
  BigInt last_m = -1;
  // request generously; periodic expansions extend as needed
  std::size_t want = count * 4 + 8;
  std::size_t avail = cf.infinite() ? want : std::min(want, cf.depth() + 1);
  std::vector<Rational> conv = convergents(cf, avail);
  for (const Rational& c : conv) {
    BigInt m = denominator(c), n = numerator(c);
    if (m == last_m) continue;
    if (!good_approx_ok(beta, m, n)) continue;
    out.emplace_back(m, n);
    last_m = m;
    if (out.size() == count) break;
  }
  if (out.size() < count)
    throw std::runtime_error("good_approx_pairs: expansion too short for requested count");
  return out;
}

// L(alpha) = { alpha m^2 - n^2 : m, n in N } restricted to `window`,
// n-ranges derived from the window bounds. Sorted multiset of values.
inline std::vector<double> l_alpha_points(const Real& alpha, std::int64_t m_max,
                                          const Window& window) {
  if (m_max < 1) throw std::invalid_argument("l_alpha_points: m_max >= 1");
  const long double av = real_to_long_double(alpha);
  const long double lo = static_cast<long double>(window.lo);
  const long double hi = static_cast<long double>(window.hi);
  std::vector<double> out;
  for (std::int64_t m = 1; m <= m_max; ++m) {
    long double am2 = av * static_cast<long double>(m) * static_cast<long double>(m);
    // alpha m^2 - n^2 in (lo,hi)  <=>  am2 - hi < n^2 < am2 - lo
    long double lo_n2 = am2 - hi, hi_n2 = am2 - lo;
    if (hi_n2 < 1.0L) continue;  // no n >= 1 can land in the window
    std::int64_t n_lo = static_cast<std::int64_t>(floorl(sqrtl(std::max(lo_n2, 0.0L)))) - 2;
    std::int64_t n_hi = static_cast<std::int64_t>(ceill(sqrtl(std::max(hi_n2, 0.0L)))) + 2;
    n_lo = std::max<std::int64_t>(n_lo, 1);
    for (std::int64_t n = n_lo; n <= n_hi; ++n) {
      if (alpha.index() == 1) {
        const QuadIrr& q = std::get<QuadIrr>(alpha);
        QuadIrr v = q.scaled(Rational(BigInt(m) * m)) - Rational(BigInt(n) * n);
        if (v.compare(window.lo) > 0 && v.compare(window.hi) < 0)
          out.push_back(v.to_double());
      } else if (alpha.index() == 0) {
        Rational v = std::get<Rational>(alpha) * Rational(BigInt(m) * m) -
                     Rational(BigInt(n) * n);
        if (window.lo < v && v < window.hi) out.push_back(static_cast<double>(v));
      } else {
        long double v = am2 - static_cast<long double>(n) * n;
        if (lo < v && v < hi) out.push_back(static_cast<double>(v));
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// | |alpha m^2 - n^2| - |m sqrt(alpha) - n| * |m sqrt(alpha) + n| |
inline double factorization_check(double alpha, std::int64_t m, std::int64_t n) {
  if (!(alpha > 0)) throw std::invalid_argument("factorization_check: alpha > 0 required");
  long double a = alpha;
  long double lhs = fabsl(a * m * m - static_cast<long double>(n) * n);
  long double b = sqrtl(a);
  long double rhs = fabsl(m * b - n) * fabsl(m * b + n);
  return static_cast<double>(fabsl(lhs - rhs));
}

}  // namespace projlab
