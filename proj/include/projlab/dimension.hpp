#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "json.hpp"
#include "projlab/errors.hpp"
#include "projlab/generators.hpp"
#include "projlab/rational.hpp"

namespace projlab {

// A set of slopes on the line, either sampled points or a disjoint sorted
// union of rational intervals.
struct DirectionSet {
  enum class Rep { point_sample, interval_union };
  Rep rep = Rep::point_sample;
  std::vector<double> points;
  std::vector<Window> intervals;
  double ambient_lo = 0.0;
  double ambient_hi = 1.0;

  static DirectionSet from_points(std::vector<double> pts, double lo = 0.0, double hi = 1.0) {
    DirectionSet d;
    d.rep = Rep::point_sample;
    d.points = std::move(pts);
    d.ambient_lo = lo;
    d.ambient_hi = hi;
    d.validate();
    return d;
  }

  static DirectionSet from_intervals(std::vector<Window> iv, double lo = 0.0, double hi = 1.0) {
    DirectionSet d;
    d.rep = Rep::interval_union;
    d.intervals = std::move(iv);
    d.ambient_lo = lo;
    d.ambient_hi = hi;
    d.validate();
    return d;
  }

  void validate() const {
    if (!(ambient_lo < ambient_hi))
      throw ValidationError("DirectionSet: ambient interval degenerate");
    for (double p : points)
      if (p < ambient_lo || p > ambient_hi)
        throw ValidationError("DirectionSet: point outside ambient interval");
    for (std::size_t i = 0; i < intervals.size(); ++i) {
      if (static_cast<double>(intervals[i].lo) < ambient_lo - kGapTol ||
          static_cast<double>(intervals[i].hi) > ambient_hi + kGapTol)
        throw ValidationError("DirectionSet: interval outside ambient");
      if (i > 0 && !(intervals[i - 1].hi <= intervals[i].lo))
        throw ValidationError("DirectionSet: intervals overlap or unsorted");
    }
  }

  bool empty() const {
    return rep == Rep::point_sample ? points.empty() : intervals.empty();
  }

  // total length of the interval union (exact), for diagnostics
  Rational measure() const {
    Rational m(0);
    for (const Window& w : intervals) m += w.length();
    return m;
  }
};

struct BoxCountReport {
  std::vector<double> scales;        // box widths, as given
  std::vector<std::size_t> counts;   // N(w) per scale
  double slope = 0.0;
  double residual = 0.0;
  bool degenerate = false;  // empty input set
  std::int64_t depth_label = 0;  // construction depth K, echoed for reports

  json to_json() const {
    json j;
    j["quantity"] = "box-dimension estimate at finite depth";
    j["scales"] = scales;
    j["counts"] = counts;
    j["slope"] = slope;
    j["residual"] = residual;
    j["degenerate"] = degenerate;
    j["depth_label"] = depth_label;
    return j;
  }

  std::string to_csv() const {
    std::string out = "log_inv_w,log_count\n";
    for (std::size_t i = 0; i < scales.size(); ++i) {
      out += std::to_string(std::log(1.0 / scales[i])) + "," +
             std::to_string(counts[i] > 0 ? std::log(static_cast<double>(counts[i])) : 0.0) +
             "\n";
    }
    return out;
  }
};

// Grid boxes (width 2^-grid_depth on [0,1]) whose center beta keeps
// frac(beta * r_k) outside `target` for every k <= K. Centers only — a cheap
// inner proxy; exact integer arithmetic when the sequence prefix is integral.
inline DirectionSet survivors_nd(const SequenceSpec& rseq, std::int64_t K,
                                 const Window& target, int grid_depth) {
  if (K < 4) throw ValidationError("survivors_nd: K >= 4 required");
  if (grid_depth < 1 || grid_depth > 30)
    throw ValidationError("survivors_nd: grid_depth in [1,30] required");
  if (!(target.lo >= 0 && target.hi <= 1))
    throw ValidationError("survivors_nd: target must lie inside (0,1)");

  std::vector<double> rk = rseq.prefix(K);  // validates rising
  bool integral = true;
  for (double r : rk)
    if (r != std::floor(r) || r > 9.0e15) { integral = false; break; }

  const std::int64_t boxes = std::int64_t(1) << grid_depth;
  const std::int64_t den = boxes * 2;  // centers (2i+1)/den
  std::vector<bool> alive(static_cast<std::size_t>(boxes), true);

  if (integral) {
    // frac(center * r_k) = ((2i+1) * (r_k mod den)) mod den, over den
    std::vector<std::int64_t> rmod;
    rmod.reserve(rk.size());
    for (double r : rk) rmod.push_back(static_cast<std::int64_t>(r) % den);
    // target bounds scaled to numerator space: num in target <=>
    // lo*den < num < hi*den (open window, exact rational bounds)
    const Rational lo_s = target.lo * den, hi_s = target.hi * den;
    auto in_target = [&](std::int64_t num) {
      return lo_s < num && Rational(num) < hi_s;
    };
    for (std::int64_t i = 0; i < boxes; ++i) {
      std::int64_t c = 2 * i + 1;
      for (std::int64_t rm : rmod) {
        std::int64_t num = (c * rm) % den;
        if (in_target(num)) { alive[static_cast<std::size_t>(i)] = false; break; }
      }
    }
  } else {
    const double lo = static_cast<double>(target.lo), hi = static_cast<double>(target.hi);
    for (std::int64_t i = 0; i < boxes; ++i) {
      double c = (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(den);
      for (double r : rk) {
        double f = c * r;
        f -= std::floor(f);
        if (f > lo && f < hi) { alive[static_cast<std::size_t>(i)] = false; break; }
      }
    }
  }

  // merge consecutive surviving boxes [i/boxes, (i+1)/boxes]
  std::vector<Window> out;
  std::int64_t run_start = -1;
  for (std::int64_t i = 0; i <= boxes; ++i) {
    bool on = i < boxes && alive[static_cast<std::size_t>(i)];
    if (on && run_start < 0) run_start = i;
    if (!on && run_start >= 0) {
      out.push_back(Window{Rational(run_start, boxes), Rational(i, boxes)});
      run_start = -1;
    }
  }
  return DirectionSet::from_intervals(std::move(out));
}

namespace detail {

// number of grid boxes [j*w, (j+1)*w) whose interior meets the set; exact
// rational arithmetic on interval unions, so dyadic/ternary edge alignment
// never miscounts
inline std::size_t boxes_hit(const DirectionSet& ds, const Rational& w) {
  std::size_t n = 0;
  if (ds.rep == DirectionSet::Rep::point_sample) {
    double wd = static_cast<double>(w);
    std::vector<std::int64_t> idx;
    idx.reserve(ds.points.size());
    for (double p : ds.points)
      idx.push_back(static_cast<std::int64_t>(std::floor(p / wd)));
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    n = idx.size();
  } else {
    BigInt last = -(BigInt(1) << 62);
    for (const Window& iv : ds.intervals) {
      // boxes j with j*w < hi and (j+1)*w > lo
      BigInt a = floor_rational(iv.lo / w);  // lo on an edge: box a starts there
      Rational hq = iv.hi / w;
      BigInt b = floor_rational(hq);
      if (Rational(b) == hq) --b;  // hi exactly on an edge: next box stays closed
      if (a <= last) a = last + 1;
      if (b >= a) {
        n += static_cast<std::size_t>(b - a + 1);
        last = b;
      } else if (b > last) {
        last = b;
      }
    }
  }
  return n;
}

}  // namespace detail

// Least-squares slope of log N(w) vs log(1/w), regression over the finest
// half of the scale list (coarse scales saturate). Exact-rational scales.
inline BoxCountReport box_dim_estimate(const DirectionSet& ds, std::vector<Rational> scales) {
  if (scales.size() < 4)
    throw ValidationError("box_dim_estimate: need at least 4 scales");
  std::sort(scales.begin(), scales.end(), std::greater<>());  // coarse -> fine
  BoxCountReport rep;
  for (const Rational& w : scales) rep.scales.push_back(static_cast<double>(w));
  if (ds.empty()) {
    rep.degenerate = true;
    rep.counts.assign(scales.size(), 0);
    return rep;
  }
  for (const Rational& w : scales) {
    if (!(w > 0)) throw ValidationError("box_dim_estimate: scales must be positive");
    rep.counts.push_back(detail::boxes_hit(ds, w));
  }
  // regression on the finest half
  std::size_t n = rep.scales.size();
  std::size_t from = n / 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t m = 0;
  for (std::size_t i = from; i < n; ++i) {
    double x = std::log(1.0 / rep.scales[i]);
    double y = std::log(static_cast<double>(std::max<std::size_t>(rep.counts[i], 1)));
    sx += x; sy += y; sxx += x * x; sxy += x * y;
    ++m;
  }
  double denom = m * sxx - sx * sx;
  rep.slope = denom != 0.0 ? (m * sxy - sx * sy) / denom : 0.0;
  double intercept = (sy - rep.slope * sx) / m;
  double rss = 0;
  for (std::size_t i = from; i < n; ++i) {
    double x = std::log(1.0 / rep.scales[i]);
    double y = std::log(static_cast<double>(std::max<std::size_t>(rep.counts[i], 1)));
    double e = y - (rep.slope * x + intercept);
    rss += e * e;
  }
  rep.residual = std::sqrt(rss / m);
  return rep;
}

// double scales convert through their exact binary representation
inline BoxCountReport box_dim_estimate(const DirectionSet& ds,
                                       const std::vector<double>& scales) {
  std::vector<Rational> rs;
  rs.reserve(scales.size());
  for (double w : scales) rs.push_back(rational_from_double(w));
  return box_dim_estimate(ds, std::move(rs));
}

// convenience scale lists
inline std::vector<Rational> dyadic_scales(int from_pow, int to_pow) {
  std::vector<Rational> s;
  for (int p = from_pow; p <= to_pow; ++p)
    s.push_back(Rational(1, BigInt(1) << p));
  return s;
}

inline std::vector<Rational> ternary_scales(int from_pow, int to_pow) {
  std::vector<Rational> s;
  BigInt d = 1;
  for (int p = 0; p < from_pow; ++p) d *= 3;
  for (int p = from_pow; p <= to_pow; ++p) {
    s.push_back(Rational(1, d));
    d *= 3;
  }
  return s;
}

}  // namespace projlab
