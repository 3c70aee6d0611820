#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace projlab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Global tolerances: tau for algebraic identities, tau_gap for gap/count
// comparisons on the floating path.
inline constexpr double kIdentityTol = 1e-12;
inline constexpr double kGapTol = 1e-9;

inline double to_double(const Rational& r) {
  return static_cast<double>(r);
}

// Exact conversion: every finite double is a dyadic rational.
inline Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("rational_from_double: non-finite");
  int exp = 0;
  double mant = std::frexp(x, &exp);  // x = mant * 2^exp, |mant| in [0.5,1)
  // 53 doublings make the mantissa integral.
  BigInt num = static_cast<long long>(std::ldexp(mant, 53));
  exp -= 53;
  Rational r(num);
  if (exp >= 0) {
    r *= Rational(BigInt(1) << exp);
  } else {
    r /= Rational(BigInt(1) << -exp);
  }
  return r;
}

inline std::string rational_to_string(const Rational& r) {
  std::string s = numerator(r).str();
  if (denominator(r) != 1) s += "/" + denominator(r).str();
  return s;
}

inline Rational rational_from_string(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rational(BigInt(s));
  BigInt num(s.substr(0, slash));
  BigInt den(s.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("rational_from_string: zero denominator");
  return Rational(num, den);
}

inline BigInt floor_rational(const Rational& r) {
  BigInt q = numerator(r) / denominator(r);
  if (r < 0 && q * denominator(r) != numerator(r)) --q;
  return q;
}

// Integer square root (floor).
inline BigInt isqrt(const BigInt& n) {
  if (n < 0) throw std::domain_error("isqrt of negative");
  return boost::multiprecision::sqrt(n);
}

// An interval with exactly rational endpoints, lo < hi. Used open throughout.
struct Window {
  Rational lo;
  Rational hi;

  Window(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) {
    if (!(lo < hi)) throw std::invalid_argument("Window: requires lo < hi");
  }
  static Window from_doubles(double l, double h) {
    return Window(rational_from_double(l), rational_from_double(h));
  }

  Rational length() const { return hi - lo; }
  bool contains(const Rational& x) const { return lo < x && x < hi; }
  bool contains(double x) const {
    return static_cast<double>(lo) < x && x < static_cast<double>(hi);
  }
  double lo_d() const { return static_cast<double>(lo); }
  double hi_d() const { return static_cast<double>(hi); }
};

}  // namespace projlab
