#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "projlab/quadratic.hpp"
#include "projlab/rational.hpp"

namespace projlab {

struct Point2 {
  double x1 = 0.0;
  double x2 = 0.0;

  double norm() const { return std::hypot(x1, x2); }
  friend bool operator==(const Point2&, const Point2&) = default;
};

// Exact integer view of a point; present for integer-valued generators.
struct IntPoint {
  std::int64_t x1 = 0;
  std::int64_t x2 = 0;
  friend bool operator==(const IntPoint&, const IntPoint&) = default;
};

struct RationalPoint {
  Rational x1;
  Rational x2;
};

// A projection direction in both angle and slope form. The slope carries an
// exactness tag when it originates from a rational or quadratic irrational.
struct Direction {
  double angle = 0.0;         // in [0, 2*pi)
  double slope = 0.0;         // tan(angle); meaningless when vertical
  bool vertical = false;      // cos(angle) == 0
  std::optional<Real> exact_slope;

  static Direction from_angle(double a) {
    constexpr double two_pi = 6.283185307179586476925287;
    double r = std::fmod(a, two_pi);
    if (r < 0) r += two_pi;
    Direction d;
    d.angle = r;
    double c = std::cos(r);
    // the double nearest pi/2 has cos ~6e-17; anything this close is vertical
    // for every practical purpose (the slope would exceed 1e15)
    d.vertical = (std::abs(c) < 1e-15);
    d.slope = d.vertical ? std::numeric_limits<double>::infinity() : std::tan(r);
    return d;
  }

  static Direction from_slope(double beta) {
    Direction d;
    d.angle = std::atan(beta);
    if (d.angle < 0) d.angle += 6.283185307179586476925287;
    d.slope = beta;
    d.vertical = false;
    return d;
  }

  static Direction from_slope(const Real& beta) {
    Direction d = from_slope(real_to_double(beta));
    d.exact_slope = beta;
    return d;
  }
};

enum class ProjectionForm { phi, psi };

inline ProjectionForm form_from_string(const std::string& s) {
  if (s == "phi") return ProjectionForm::phi;
  if (s == "psi") return ProjectionForm::psi;
  throw std::invalid_argument("unknown projection form: " + s);
}

// Finite truncation of a set family: the points of spec `spec_id` inside the
// closed ball of radius `radius`. Integer families also carry exact coords,
// index-aligned with `points`.
struct TruncatedSet {
  std::vector<Point2> points;
  double radius = 0.0;
  std::string spec_id;
  std::optional<std::uint64_t> seed;
  std::optional<std::vector<IntPoint>> int_coords;

  bool has_exact() const { return int_coords.has_value(); }
  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }

  RationalPoint exact_at(std::size_t i) const {
    if (!int_coords) throw std::logic_error("TruncatedSet: no exact coordinates");
    const IntPoint& p = (*int_coords)[i];
    return {Rational(p.x1), Rational(p.x2)};
  }
};

// Phi_alpha(x) = x1 cos(alpha) + x2 sin(alpha)
inline double project_phi(const Point2& p, const Direction& d) {
  return p.x1 * std::cos(d.angle) + p.x2 * std::sin(d.angle);
}

// Psi_beta(x) = x1 + beta x2. Rejects vertical directions.
inline double project_psi(const Point2& p, double beta) {
  if (std::isinf(beta) || std::isnan(beta))
    throw std::invalid_argument("project_psi: vertical or invalid slope");
  return p.x1 + beta * p.x2;
}

inline double project_psi(const Point2& p, const Direction& d) {
  if (d.vertical) throw std::invalid_argument("project_psi: vertical direction");
  return project_psi(p, d.slope);
}

// Exact path: rational point, rational slope, no rounding.
inline Rational project_psi_exact(const RationalPoint& p, const Rational& beta) {
  return p.x1 + beta * p.x2;
}

// |Phi_alpha(x) - cos(alpha) * Psi_{tan alpha}(x)|; contract <= 1e-12*(1+|x|).
inline double phi_psi_consistency(const Point2& p, const Direction& d) {
  if (d.vertical) throw std::invalid_argument("phi_psi_consistency: vertical direction");
  double phi = project_phi(p, d);
  double psi = project_psi(p, d.slope);
  return std::abs(phi - std::cos(d.angle) * psi);
}

inline double project_point(const Point2& p, const Direction& d, ProjectionForm form) {
  return form == ProjectionForm::phi ? project_phi(p, d) : project_psi(p, d);
}

// Ascending projected values, multiplicities preserved.
inline std::vector<double> project_truncated(const TruncatedSet& ts, const Direction& d,
                                             ProjectionForm form) {
  if (ts.empty()) throw std::invalid_argument("project_truncated: empty set");
  if (form == ProjectionForm::psi && d.vertical)
    throw std::invalid_argument("project_truncated: psi form with vertical direction");
  std::vector<double> out;
  out.reserve(ts.size());
  for (const Point2& p : ts.points) out.push_back(project_point(p, d, form));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace projlab
