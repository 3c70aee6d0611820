#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

#include "projlab/rational.hpp"

namespace projlab {

// Exact quadratic irrational (a + b*sqrt(d)) / c with integer a,b,c,d.
// c > 0 after normalization; d >= 0. b == 0 (or d a perfect square) means the
// value is actually rational; callers that require irrationality check is_rational().
class QuadIrr {
 public:
  QuadIrr(BigInt a, BigInt b, BigInt c, BigInt d)
      : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
    if (c_ == 0) throw std::invalid_argument("QuadIrr: zero denominator");
    if (d_ < 0) throw std::invalid_argument("QuadIrr: negative radicand");
    if (c_ < 0) { a_ = -a_; b_ = -b_; c_ = -c_; }
    if (d_ == 0) b_ = 0;
  }

  static QuadIrr sqrt_of(const BigInt& d) { return QuadIrr(0, 1, 1, d); }
  static QuadIrr sqrt2() { return QuadIrr(0, 1, 1, 2); }
  static QuadIrr phi() { return QuadIrr(1, 1, 2, 5); }          // (1+sqrt5)/2
  static QuadIrr phi_squared() { return QuadIrr(3, 1, 2, 5); }  // (3+sqrt5)/2
  static QuadIrr from_rational(const Rational& r) {
    return QuadIrr(numerator(r), 0, denominator(r), 0);
  }

  const BigInt& a() const { return a_; }
  const BigInt& b() const { return b_; }
  const BigInt& c() const { return c_; }
  const BigInt& d() const { return d_; }

  bool is_rational() const {
    if (b_ == 0 || d_ == 0) return true;
    BigInt s = isqrt(d_);
    return s * s == d_;
  }

  std::optional<Rational> as_rational() const {
    if (b_ == 0 || d_ == 0) return Rational(a_, c_);
    BigInt s = isqrt(d_);
    if (s * s == d_) return Rational(a_ + b_ * s, c_);
    return std::nullopt;
  }

  long double to_long_double() const {
    long double sq = sqrtl(static_cast<long double>(d_));
    return (static_cast<long double>(a_) + static_cast<long double>(b_) * sq) /
           static_cast<long double>(c_);
  }
  double to_double() const { return static_cast<double>(to_long_double()); }

  // sign of (a + b*sqrt(d))/c - p/q, exact.
  int compare(const Rational& r) const {
    // b*sqrt(d) ? r*c - a   (c > 0)
    Rational rhs = r * Rational(c_) - Rational(a_);
    Rational lhs_sq = Rational(b_ * b_ * d_);
    int sb = b_ > 0 ? 1 : (b_ < 0 ? -1 : 0);
    int sr = rhs > 0 ? 1 : (rhs < 0 ? -1 : 0);
    if (sb != sr) return sb < sr ? -1 : (sb > sr ? 1 : 0);
    if (sb == 0) return 0;
    // same strict sign: compare squares, flip if both negative
    Rational rhs_sq = rhs * rhs;
    int cmp = lhs_sq < rhs_sq ? -1 : (lhs_sq > rhs_sq ? 1 : 0);
    return sb > 0 ? cmp : -cmp;
  }
  bool operator<(const Rational& r) const { return compare(r) < 0; }
  bool operator>(const Rational& r) const { return compare(r) > 0; }

  QuadIrr operator+(const Rational& r) const {
    // (a + b sqrt d)/c + p/q = (aq + pc + bq sqrt d)/(cq)
    return QuadIrr(a_ * denominator(r) + numerator(r) * c_, b_ * denominator(r),
                   c_ * denominator(r), d_);
  }
  QuadIrr operator-(const Rational& r) const { return *this + (-r); }
  QuadIrr scaled(const Rational& r) const {
    return QuadIrr(a_ * numerator(r), b_ * numerator(r), c_ * denominator(r), d_);
  }
  QuadIrr squared() const {
    // ((a + b sqrt d)/c)^2 = (a^2 + b^2 d + 2ab sqrt d)/c^2
    return QuadIrr(a_ * a_ + b_ * b_ * d_, 2 * a_ * b_, c_ * c_, d_);
  }

  std::string str() const {
    return "(" + a_.str() + "+" + b_.str() + "*sqrt(" + d_.str() + "))/" + c_.str();
  }

 private:
  BigInt a_, b_, c_, d_;
};

// A real number carried either exactly (rational / quadratic irrational) or as
// a plain double. Exactness propagates through the diophantine and witness
// machinery; floats fall back to long-double evaluation.
using Real = std::variant<Rational, QuadIrr, double>;

inline bool is_exact(const Real& x) { return x.index() != 2; }

inline double real_to_double(const Real& x) {
  switch (x.index()) {
    case 0: return static_cast<double>(std::get<Rational>(x));
    case 1: return std::get<QuadIrr>(x).to_double();
    default: return std::get<double>(x);
  }
}

inline long double real_to_long_double(const Real& x) {
  switch (x.index()) {
    case 0: return static_cast<long double>(std::get<Rational>(x));
    case 1: return std::get<QuadIrr>(x).to_long_double();
    default: return static_cast<long double>(std::get<double>(x));
  }
}

// sign of x - r, exact when x is exact.
inline int real_compare(const Real& x, const Rational& r) {
  switch (x.index()) {
    case 0: {
      const Rational& q = std::get<Rational>(x);
      return q < r ? -1 : (q > r ? 1 : 0);
    }
    case 1:
      return std::get<QuadIrr>(x).compare(r);
    default: {
      double v = std::get<double>(x), w = static_cast<double>(r);
      return v < w ? -1 : (v > w ? 1 : 0);
    }
  }
}

// Named diophantine constants accepted by CLIs and experiment configs.
inline Real real_from_name(const std::string& name) {
  if (name == "phi") return QuadIrr::phi();
  if (name == "phi_squared") return QuadIrr::phi_squared();
  if (name == "sqrt2") return QuadIrr::sqrt2();
  if (name == "sqrt3") return QuadIrr::sqrt_of(3);
  if (name == "sqrt5") return QuadIrr::sqrt_of(5);
  if (name == "e") return 2.718281828459045235360287;
  if (name == "pi") return 3.141592653589793238462643;
  // otherwise expect a rational literal "p/q" or integer
  return rational_from_string(name);
}

}  // namespace projlab
