#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "projlab/errors.hpp"
#include "projlab/geometry.hpp"
#include "projlab/rng.hpp"

namespace projlab {

using nlohmann::json;

// Rising-to-infinity sequence r_k, k >= 1.
struct SequenceSpec {
  enum class Kind { geometric, polynomial, arithmetic, explicit_list };
  Kind kind = Kind::polynomial;
  double ratio = 2.0;     // geometric
  double r0 = 1.0;        // geometric / arithmetic
  double exponent = 1.0;  // polynomial
  double scale = 1.0;     // polynomial
  double step = 1.0;      // arithmetic
  std::vector<double> values_list;  // explicit

  static SequenceSpec geometric_seq(double ratio, double r0) {
    SequenceSpec s;
    s.kind = Kind::geometric;
    s.ratio = ratio;
    s.r0 = r0;
    if (!(ratio > 1.0) || !(r0 > 0.0))
      throw ValidationError("geometric sequence requires ratio > 1 and r0 > 0");
    return s;
  }
  static SequenceSpec polynomial_seq(double exponent, double scale) {
    SequenceSpec s;
    s.kind = Kind::polynomial;
    s.exponent = exponent;
    s.scale = scale;
    if (!(exponent > 0.0) || !(scale > 0.0))
      throw ValidationError("polynomial sequence requires exponent > 0 and scale > 0");
    return s;
  }
  static SequenceSpec arithmetic_seq(double step, double r0) {
    SequenceSpec s;
    s.kind = Kind::arithmetic;
    s.step = step;
    s.r0 = r0;
    if (!(step > 0.0) || !(r0 > 0.0))
      throw ValidationError("arithmetic sequence requires step > 0 and r0 > 0");
    return s;
  }
  static SequenceSpec explicit_seq(std::vector<double> values) {
    SequenceSpec s;
    s.kind = Kind::explicit_list;
    s.values_list = std::move(values);
    return s;
  }

  // r_k, k >= 1
  double value(std::int64_t k) const {
    switch (kind) {
      case Kind::geometric: return r0 * std::pow(ratio, static_cast<double>(k - 1));
      case Kind::polynomial: return scale * std::pow(static_cast<double>(k), exponent);
      case Kind::arithmetic: return r0 + step * static_cast<double>(k - 1);
      case Kind::explicit_list:
        if (k < 1 || static_cast<std::size_t>(k) > values_list.size())
          throw std::out_of_range("explicit sequence index");
        return values_list[static_cast<std::size_t>(k - 1)];
    }
    throw std::logic_error("unreachable");
  }

  std::vector<double> prefix(std::int64_t K) const {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(K));
    for (std::int64_t k = 1; k <= K; ++k) out.push_back(value(k));
    validate_rising(out);
    return out;
  }

  static void validate_rising(const std::vector<double>& v) {
    for (std::size_t i = 0; i + 1 < v.size(); ++i)
      if (!(v[i] < v[i + 1]))
        throw ValidationError("sequence prefix is not strictly increasing");
    if (!v.empty() && !(v.front() > 0))
      throw ValidationError("sequence must be positive");
  }

  json to_json() const {
    json j;
    switch (kind) {
      case Kind::geometric:
        j["kind"] = "geometric";
        j["ratio"] = ratio;
        j["r0"] = r0;
        break;
      case Kind::polynomial:
        j["kind"] = "polynomial";
        j["exponent"] = exponent;
        j["scale"] = scale;
        break;
      case Kind::arithmetic:
        j["kind"] = "arithmetic";
        j["step"] = step;
        j["r0"] = r0;
        break;
      case Kind::explicit_list:
        j["kind"] = "explicit";
        j["values"] = values_list;
        break;
    }
    return j;
  }

  static SequenceSpec from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "geometric")
      return geometric_seq(j.at("ratio").get<double>(), j.at("r0").get<double>());
    if (kind == "polynomial")
      return polynomial_seq(j.at("exponent").get<double>(), j.at("scale").get<double>());
    if (kind == "arithmetic")
      return arithmetic_seq(j.at("step").get<double>(), j.at("r0").get<double>());
    if (kind == "explicit")
      return explicit_seq(j.at("values").get<std::vector<double>>());
    throw ValidationError("unknown sequence kind: " + kind);
  }
};

// Declarative description of a point-set family.
struct GeneratorSpec {
  enum class Kind {
    explicit_points,
    integer_lattice,
    squares_m0,    // {(m^2, n^2) : m,n >= 1}
    squares_m0_L,  // {(-n^2, m^2) : m,n >= 1}, so Psi_beta gives beta m^2 - n^2
    signed_powers,
    product_set,
    jittered_lattice,
    random_polar,
  };
  Kind kind = Kind::integer_lattice;
  std::vector<Point2> explicit_list;
  double power_a = 1.0;                // signed_powers
  double jitter_bound = 0.0;           // jittered_lattice
  std::optional<SequenceSpec> rseq;    // product_set / random_polar
  std::optional<std::uint64_t> seed;   // randomized kinds

  bool randomized() const {
    return kind == Kind::jittered_lattice || kind == Kind::random_polar;
  }

  static GeneratorSpec explicit_points_spec(std::vector<Point2> pts) {
    GeneratorSpec g;
    g.kind = Kind::explicit_points;
    g.explicit_list = std::move(pts);
    return g;
  }
  static GeneratorSpec integer_lattice_spec() {
    return GeneratorSpec{};
  }
  static GeneratorSpec squares_m0_spec() {
    GeneratorSpec g;
    g.kind = Kind::squares_m0;
    return g;
  }
  static GeneratorSpec squares_m0_L_spec() {
    GeneratorSpec g;
    g.kind = Kind::squares_m0_L;
    return g;
  }
  static GeneratorSpec signed_powers_spec(double a) {
    if (!(a > 0)) throw ValidationError("signed_powers requires a > 0");
    GeneratorSpec g;
    g.kind = Kind::signed_powers;
    g.power_a = a;
    return g;
  }
  static GeneratorSpec product_set_spec(SequenceSpec rs) {
    GeneratorSpec g;
    g.kind = Kind::product_set;
    g.rseq = std::move(rs);
    return g;
  }
  static GeneratorSpec jittered_lattice_spec(double jitter, std::uint64_t seed) {
    if (jitter < 0) throw ValidationError("jitter_bound must be >= 0");
    GeneratorSpec g;
    g.kind = Kind::jittered_lattice;
    g.jitter_bound = jitter;
    g.seed = seed;
    return g;
  }
  static GeneratorSpec random_polar_spec(SequenceSpec rs, std::uint64_t seed) {
    GeneratorSpec g;
    g.kind = Kind::random_polar;
    g.rseq = std::move(rs);
    g.seed = seed;
    return g;
  }

  json to_json() const {
    json j;
    json params = json::object();
    switch (kind) {
      case Kind::explicit_points: {
        j["kind"] = "explicit";
        json pts = json::array();
        for (const auto& p : explicit_list) pts.push_back({p.x1, p.x2});
        params["points"] = pts;
        break;
      }
      case Kind::integer_lattice: j["kind"] = "integer_lattice"; break;
      case Kind::squares_m0: j["kind"] = "squares_m0"; break;
      case Kind::squares_m0_L: j["kind"] = "squares_m0_L"; break;
      case Kind::signed_powers:
        j["kind"] = "signed_powers";
        params["a"] = power_a;
        break;
      case Kind::product_set:
        j["kind"] = "product_set";
        params["rseq"] = rseq->to_json();
        break;
      case Kind::jittered_lattice:
        j["kind"] = "jittered_lattice";
        params["jitter_bound"] = jitter_bound;
        break;
      case Kind::random_polar:
        j["kind"] = "random_polar";
        params["rseq"] = rseq->to_json();
        break;
    }
    j["params"] = params;
    if (seed) j["seed"] = *seed;
    return j;
  }

  static GeneratorSpec from_json(const json& j) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it.key() != "kind" && it.key() != "params" && it.key() != "seed")
        throw ValidationError("GeneratorSpec: unknown field '" + it.key() + "'");
    }
    const std::string kind = j.at("kind").get<std::string>();
    const json params = j.value("params", json::object());
    GeneratorSpec g;
    if (kind == "explicit") {
      std::vector<Point2> pts;
      for (const auto& p : params.at("points"))
        pts.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
      g = explicit_points_spec(std::move(pts));
    } else if (kind == "integer_lattice") {
      g = integer_lattice_spec();
    } else if (kind == "squares_m0") {
      g = squares_m0_spec();
    } else if (kind == "squares_m0_L") {
      g = squares_m0_L_spec();
    } else if (kind == "signed_powers") {
      g = signed_powers_spec(params.at("a").get<double>());
    } else if (kind == "product_set") {
      g = product_set_spec(SequenceSpec::from_json(params.at("rseq")));
    } else if (kind == "jittered_lattice") {
      g.kind = Kind::jittered_lattice;
      g.jitter_bound = params.at("jitter_bound").get<double>();
      if (g.jitter_bound < 0) throw ValidationError("jitter_bound must be >= 0");
    } else if (kind == "random_polar") {
      g.kind = Kind::random_polar;
      g.rseq = SequenceSpec::from_json(params.at("rseq"));
    } else {
      throw ValidationError("unknown generator kind: " + kind);
    }
    if (j.contains("seed")) g.seed = j.at("seed").get<std::uint64_t>();
    return g;
  }

  std::string id() const { return to_json().dump(); }
};

namespace detail {

inline constexpr std::size_t kDefaultPointCap = 60'000'000;

inline bool int_norm_le(std::int64_t x, std::int64_t y, long double r2) {
  long double n2 = static_cast<long double>(x) * x + static_cast<long double>(y) * y;
  return n2 <= r2;
}

struct Builder {
  std::vector<Point2> pts;
  std::vector<IntPoint> ints;
  bool exact;
  std::size_t cap;

  explicit Builder(bool exact_, std::size_t cap_) : exact(exact_), cap(cap_) {}

  void add(double x, double y) {
    if (pts.size() >= cap) throw ResourceCapError("materialize: point cap exceeded", pts.size());
    pts.push_back({x, y});
  }
  void add_int(std::int64_t x, std::int64_t y) {
    if (pts.size() >= cap) throw ResourceCapError("materialize: point cap exceeded", pts.size());
    pts.push_back({static_cast<double>(x), static_cast<double>(y)});
    ints.push_back({x, y});
  }

  // lexicographic order + dedup, int view kept aligned
  void finish() {
    if (exact) {
      std::vector<std::size_t> idx(pts.size());
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
      std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (ints[a].x1 != ints[b].x1) return ints[a].x1 < ints[b].x1;
        return ints[a].x2 < ints[b].x2;
      });
      std::vector<Point2> p2;
      std::vector<IntPoint> i2;
      p2.reserve(pts.size());
      i2.reserve(pts.size());
      for (std::size_t i : idx) {
        if (!i2.empty() && i2.back() == ints[i]) continue;
        p2.push_back(pts[i]);
        i2.push_back(ints[i]);
      }
      pts = std::move(p2);
      ints = std::move(i2);
    } else {
      std::sort(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) {
        if (a.x1 != b.x1) return a.x1 < b.x1;
        return a.x2 < b.x2;
      });
      pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    }
  }
};

}  // namespace detail

// Deterministic materialization of spec inside the closed ball of radius R.
inline TruncatedSet materialize(const GeneratorSpec& spec, double R,
                                std::optional<std::uint64_t> seed = std::nullopt,
                                std::size_t point_cap = detail::kDefaultPointCap) {
  if (!(R > 0)) throw ValidationError("materialize: radius must be positive");
  std::optional<std::uint64_t> use_seed = seed ? seed : spec.seed;
  if (spec.randomized() && !use_seed)
    throw ValidationError("materialize: randomized spec requires a seed");

  const long double r2 = static_cast<long double>(R) * R;
  using Kind = GeneratorSpec::Kind;
  bool exact = spec.kind == Kind::integer_lattice || spec.kind == Kind::squares_m0 ||
               spec.kind == Kind::squares_m0_L ||
               (spec.kind == Kind::signed_powers &&
                spec.power_a == std::floor(spec.power_a) && spec.power_a <= 20);
  detail::Builder b(exact, point_cap);
  bool keep_order = false;  // random_polar keeps k order (prefix property)

  switch (spec.kind) {
    case Kind::explicit_points: {
      for (const Point2& p : spec.explicit_list)
        if (static_cast<long double>(p.x1) * p.x1 + static_cast<long double>(p.x2) * p.x2 <= r2)
          b.add(p.x1, p.x2);
      break;
    }
    case Kind::integer_lattice: {
      std::int64_t mmax = static_cast<std::int64_t>(std::floor(R));
      for (std::int64_t m = -mmax; m <= mmax; ++m) {
        long double rem = r2 - static_cast<long double>(m) * m;
        std::int64_t nmax = static_cast<std::int64_t>(std::floor(sqrtl(std::max(rem, 0.0L))));
        while (!detail::int_norm_le(m, nmax, r2)) --nmax;
        for (std::int64_t n = -nmax; n <= nmax; ++n) b.add_int(m, n);
      }
      break;
    }
    case Kind::squares_m0:
    case Kind::squares_m0_L: {
      std::int64_t mmax = static_cast<std::int64_t>(std::floor(std::sqrt(R))) + 1;
      for (std::int64_t m = 1; m <= mmax; ++m) {
        for (std::int64_t n = 1;; ++n) {
          std::int64_t x = m * m, y = n * n;
          if (!detail::int_norm_le(x, y, r2)) break;
          if (spec.kind == Kind::squares_m0)
            b.add_int(x, y);
          else
            b.add_int(-y, x);  // L convention: Psi_beta -> beta m^2 - n^2
        }
        if (!detail::int_norm_le(m * m, 1, r2)) break;
      }
      break;
    }
    case Kind::signed_powers: {
      const double a = spec.power_a;
      std::int64_t mmax = static_cast<std::int64_t>(std::floor(std::pow(R, 1.0 / a))) + 1;
      std::vector<double> powd(static_cast<std::size_t>(mmax) + 1, 0.0);
      for (std::int64_t m = 1; m <= mmax; ++m)
        powd[static_cast<std::size_t>(m)] = std::pow(static_cast<double>(m), a);
      for (std::int64_t m = 1; m <= mmax; ++m) {
        double xm = powd[static_cast<std::size_t>(m)];
        if (xm > R) break;
        for (std::int64_t n = 1; n <= mmax; ++n) {
          double yn = powd[static_cast<std::size_t>(n)];
          if (exact) {
            std::int64_t xi = static_cast<std::int64_t>(std::llround(xm));
            std::int64_t yi = static_cast<std::int64_t>(std::llround(yn));
            if (!detail::int_norm_le(xi, yi, r2)) break;
            b.add_int(xi, yi);
            b.add_int(xi, -yi);
            b.add_int(-xi, yi);
            b.add_int(-xi, -yi);
          } else {
            long double n2 =
                static_cast<long double>(xm) * xm + static_cast<long double>(yn) * yn;
            if (n2 > r2) break;
            b.add(xm, yn);
            b.add(xm, -yn);
            b.add(-xm, yn);
            b.add(-xm, -yn);
          }
        }
      }
      break;
    }
    case Kind::product_set: {
      double prev = 0.0;
      for (std::int64_t k = 1;; ++k) {
        double rk = spec.rseq->value(k);
        if (k > 1 && !(rk > prev))
          throw ValidationError("product_set: sequence prefix not rising");
        prev = rk;
        if (rk > R) break;
        long double rem = r2 - static_cast<long double>(rk) * rk;
        std::int64_t nmax = static_cast<std::int64_t>(std::floor(sqrtl(std::max(rem, 0.0L))));
        for (std::int64_t n = -nmax; n <= nmax; ++n)
          b.add(static_cast<double>(n), rk);
      }
      break;
    }
    case Kind::jittered_lattice: {
      const double jb = spec.jitter_bound;
      std::int64_t mmax = static_cast<std::int64_t>(std::floor(R + jb)) + 1;
      for (std::int64_t m = -mmax; m <= mmax; ++m) {
        for (std::int64_t n = -mmax; n <= mmax; ++n) {
          double lat = std::hypot(static_cast<double>(m), static_cast<double>(n));
          if (lat > R + jb) continue;
          std::uint64_t key = key_pair(m, n);
          double rad = jb * std::sqrt(keyed_unit(*use_seed, key));
          double ang = 6.283185307179586 * keyed_unit(*use_seed, key ^ 0xabcdef123456789ULL);
          double x = static_cast<double>(m) + rad * std::cos(ang);
          double y = static_cast<double>(n) + rad * std::sin(ang);
          if (std::hypot(x, y) <= R) b.add(x, y);
        }
      }
      break;
    }
    case Kind::random_polar: {
      keep_order = true;
      double prev = 0.0;
      for (std::int64_t k = 1;; ++k) {
        double rk = spec.rseq->value(k);
        if (k > 1 && !(rk > prev))
          throw ValidationError("random_polar: sequence prefix not rising");
        prev = rk;
        if (rk > R) break;
        double ang = 6.283185307179586 * keyed_unit(*use_seed, static_cast<std::uint64_t>(k));
        b.add(rk * std::cos(ang), rk * std::sin(ang));
      }
      break;
    }
  }

  if (!keep_order) b.finish();
  TruncatedSet ts;
  ts.points = std::move(b.pts);
  ts.radius = R;
  ts.spec_id = spec.id();
  ts.seed = use_seed;
  if (exact) ts.int_coords = std::move(b.ints);
  return ts;
}

// All slopes beta at which Psi_beta identifies two distinct points of ts
// (the finite surrogate of W(M)). Exact rationals on the integer path.
struct PairSlopes {
  bool exact = false;
  std::vector<Rational> rationals;  // sorted, distinct
  std::vector<double> floats;       // sorted, distinct
};

inline PairSlopes pair_slope_set(const TruncatedSet& ts) {
  PairSlopes out;
  out.exact = ts.has_exact();
  if (out.exact) {
    std::set<Rational> acc;
    const auto& ic = *ts.int_coords;
    for (std::size_t i = 0; i < ic.size(); ++i)
      for (std::size_t j = i + 1; j < ic.size(); ++j) {
        std::int64_t dy = ic[i].x2 - ic[j].x2;
        if (dy == 0) continue;  // no finite slope merges them
        std::int64_t dx = -(ic[i].x1 - ic[j].x1);
        if (dy < 0) { dx = -dx; dy = -dy; }  // cpp_rational wants den > 0
        acc.insert(Rational(BigInt(dx), BigInt(dy)));
      }
    out.rationals.assign(acc.begin(), acc.end());
  } else {
    std::set<double> acc;
    const auto& p = ts.points;
    for (std::size_t i = 0; i < p.size(); ++i)
      for (std::size_t j = i + 1; j < p.size(); ++j) {
        double dy = p[i].x2 - p[j].x2;
        if (dy == 0.0) continue;
        acc.insert(-(p[i].x1 - p[j].x1) / dy);
      }
    out.floats.assign(acc.begin(), acc.end());
  }
  return out;
}

// Grid estimate (from below) of the covering radius D_0(M, R^2).
inline double syndetic_check(const TruncatedSet& ts, double probe_radius, double grid_step) {
  if (ts.empty()) throw ValidationError("syndetic_check: empty set");
  if (!(grid_step > 0)) throw ValidationError("syndetic_check: grid_step must be positive");
  double worst = 0.0;
  std::int64_t steps = static_cast<std::int64_t>(std::floor(probe_radius / grid_step));
  for (std::int64_t i = -steps; i <= steps; ++i) {
    for (std::int64_t j = -steps; j <= steps; ++j) {
      double gx = i * grid_step, gy = j * grid_step;
      if (std::hypot(gx, gy) > probe_radius) continue;
      double best = std::numeric_limits<double>::infinity();
      for (const Point2& p : ts.points) {
        double d2 = (p.x1 - gx) * (p.x1 - gx) + (p.x2 - gy) * (p.x2 - gy);
        if (d2 < best) best = d2;
      }
      worst = std::max(worst, std::sqrt(best));
    }
  }
  return worst;
}

}  // namespace projlab
