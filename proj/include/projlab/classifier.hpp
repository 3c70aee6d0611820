#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "projlab/diophantine.hpp"
#include "projlab/errors.hpp"
#include "projlab/generators.hpp"
#include "projlab/geometry.hpp"

namespace projlab {

// Finite surrogate for R -> infinity: radii R_j = R0 * factor^j, j = 0..steps-1.
struct RadiiSchedule {
  double R0 = 100.0;
  double factor = 4.0;
  int steps = 6;

  static RadiiSchedule defaults() { return RadiiSchedule{}; }
  static RadiiSchedule make(double R0, double factor, int steps) {
    RadiiSchedule s{R0, factor, steps};
    s.validate();
    return s;
  }

  void validate() const {
    if (!(R0 > 0)) throw ValidationError("RadiiSchedule: R0 > 0 required");
    if (!(factor > 1)) throw ValidationError("RadiiSchedule: factor > 1 required");
    if (steps < 2) throw ValidationError("RadiiSchedule: steps >= 2 required");
  }

  std::vector<double> radii() const {
    validate();
    std::vector<double> out;
    double r = R0;
    for (int j = 0; j < steps; ++j) {
      out.push_back(r);
      r *= factor;
    }
    return out;
  }

  json to_json() const { return json{{"R0", R0}, {"factor", factor}, {"steps", steps}}; }
  static RadiiSchedule from_json(const json& j) {
    return make(j.at("R0").get<double>(), j.at("factor").get<double>(),
                j.at("steps").get<int>());
  }
};

struct ClassifierParams {
  double T = 10.0;
  double delta_dense = 0.05;
  double gamma_disc = 0.01;
  double growth_rho = 1.5;
  ProjectionForm form = ProjectionForm::psi;
  std::vector<Window> window_grid;  // empty -> default dyadic grid of width T/16
  std::size_t point_cap = detail::kDefaultPointCap;
  bool flag_pair_membership = false;  // expensive; small truncations only

  // all dyadic-rational windows of width T/16 inside [-T, T]
  static std::vector<Window> dyadic_grid(double T) {
    Rational t = rational_from_double(T);
    Rational w = t / 16;
    std::vector<Window> grid;
    for (int i = 0; i < 32; ++i) {
      Rational lo = -t + w * i;
      grid.push_back(Window{lo, lo + w});
    }
    return grid;
  }

  std::vector<Window> effective_grid() const {
    if (!window_grid.empty()) return window_grid;
    return dyadic_grid(T);
  }

  void validate() const {
    if (!(T > 0) || !(delta_dense > 0) || !(gamma_disc > 0) || !(growth_rho > 0))
      throw ValidationError("ClassifierParams: all thresholds must be positive");
    Rational t = rational_from_double(T);
    for (const Window& w : window_grid)
      if (w.lo < -t || w.hi > t)
        throw ValidationError("ClassifierParams: grid window outside [-T, T]");
  }

  json to_json() const {
    json j;
    j["T"] = T;
    j["delta_dense"] = delta_dense;
    j["gamma_disc"] = gamma_disc;
    j["growth_rho"] = growth_rho;
    j["form"] = form == ProjectionForm::phi ? "phi" : "psi";
    if (!window_grid.empty()) {
      json g = json::array();
      for (const Window& w : window_grid)
        g.push_back({rational_to_string(w.lo), rational_to_string(w.hi)});
      j["window_grid"] = g;
    }
    return j;
  }

  static ClassifierParams from_json(const json& j) {
    ClassifierParams p;
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string& k = it.key();
      if (k != "T" && k != "delta_dense" && k != "gamma_disc" && k != "growth_rho" &&
          k != "form" && k != "window_grid")
        throw ValidationError("ClassifierParams: unknown field '" + k + "'");
    }
    p.T = j.value("T", p.T);
    p.delta_dense = j.value("delta_dense", p.delta_dense);
    p.gamma_disc = j.value("gamma_disc", p.gamma_disc);
    p.growth_rho = j.value("growth_rho", p.growth_rho);
    if (j.contains("form")) p.form = form_from_string(j.at("form").get<std::string>());
    if (j.contains("window_grid")) {
      for (const auto& w : j.at("window_grid"))
        p.window_grid.push_back(Window{rational_from_string(w.at(0).get<std::string>()),
                                       rational_from_string(w.at(1).get<std::string>())});
    }
    p.validate();
    return p;
  }
};

inline json window_to_json(const Window& w) {
  return json::array({rational_to_string(w.lo), rational_to_string(w.hi)});
}

inline Window window_from_json(const json& j) {
  return Window{rational_from_string(j.at(0).get<std::string>()),
                rational_from_string(j.at(1).get<std::string>())};
}

// Number of values v with J.lo < v < J.hi (open interval), binary search.
inline std::size_t window_count(const std::vector<double>& projected, const Window& w) {
  double lo = static_cast<double>(w.lo), hi = static_cast<double>(w.hi);
  auto a = std::upper_bound(projected.begin(), projected.end(), lo);
  auto b = std::lower_bound(projected.begin(), projected.end(), hi);
  return a < b ? static_cast<std::size_t>(b - a) : 0;
}

// Exact-comparison variant for rational projected values.
inline std::size_t window_count(const std::vector<Rational>& projected, const Window& w) {
  std::size_t n = 0;
  for (const Rational& v : projected)
    if (w.lo < v && v < w.hi) ++n;
  return n;
}

struct GapStats {
  double max_gap = 0.0;
  double min_gap = std::numeric_limits<double>::infinity();
  std::size_t count = 0;
  std::size_t distinct_count = 0;
};

// Restrict to [-T, T]; max_gap includes the boundary gaps from -T to the
// first value and from the last to T; min_gap is the smallest strictly
// positive consecutive difference (duplicates contribute zero, excluded).
inline GapStats gap_stats(const std::vector<double>& projected, double T) {
  if (!(T > 0)) throw ValidationError("gap_stats: T > 0 required");
  GapStats gs;
  auto a = std::lower_bound(projected.begin(), projected.end(), -T);
  auto b = std::upper_bound(projected.begin(), projected.end(), T);
  if (a >= b) {
    gs.max_gap = 2 * T;
    return gs;
  }
  gs.count = static_cast<std::size_t>(b - a);
  gs.distinct_count = 1;
  gs.max_gap = *a - (-T);
  double prev = *a;
  for (auto it = a + 1; it != b; ++it) {
    double gap = *it - prev;
    gs.max_gap = std::max(gs.max_gap, gap);
    if (gap > 0.0) gs.min_gap = std::min(gs.min_gap, gap);
    if (gap > kGapTol) ++gs.distinct_count;
    prev = *it;
  }
  gs.max_gap = std::max(gs.max_gap, T - prev);
  return gs;
}

struct RadiusStats {
  double radius = 0.0;
  std::size_t n_points = 0;
  GapStats gaps;
  std::vector<std::size_t> grid_counts;

  json to_json() const {
    json j;
    j["radius"] = radius;
    j["n_points"] = n_points;
    j["count"] = gaps.count;
    j["distinct_count"] = gaps.distinct_count;
    j["max_gap"] = gaps.max_gap;
    j["min_gap"] = std::isinf(gaps.min_gap) ? json("inf") : json(gaps.min_gap);
    j["grid_counts"] = grid_counts;
    return j;
  }
};

enum class Verdict { dense_evidence, discrete_evidence, exceptional_evidence, undetermined };

inline std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::dense_evidence: return "DenseEvidence";
    case Verdict::discrete_evidence: return "DiscreteEvidence";
    case Verdict::exceptional_evidence: return "ExceptionalEvidence";
    default: return "Undetermined";
  }
}

struct Classification {
  Verdict verdict = Verdict::undetermined;
  std::optional<Window> exc_p;
  std::optional<Window> exc_q;
  std::vector<RadiusStats> stats;
  bool conflict = false;
  std::vector<std::string> notes;
  double beta = 0.0;
  json params_echo;

  json to_json() const {
    json j;
    j["verdict"] = verdict_name(verdict);
    if (exc_p) j["exceptional_P"] = {rational_to_string(exc_p->lo), rational_to_string(exc_p->hi)};
    if (exc_q) j["exceptional_Q"] = {rational_to_string(exc_q->lo), rational_to_string(exc_q->hi)};
    json st = json::array();
    for (const RadiusStats& s : stats) st.push_back(s.to_json());
    j["stats"] = st;
    j["conflict"] = conflict;
    j["notes"] = notes;
    j["beta"] = beta;
    j["params"] = params_echo;
    return j;
  }
};

// Verdict from the per-radius stats alone; re-derivable from a serialized
// Classification.
inline void derive_verdict(Classification& c, const ClassifierParams& params,
                           const std::vector<Window>& grid) {
  const auto& st = c.stats;
  const std::size_t J = st.size();
  if (J < 2) throw ValidationError("derive_verdict: need at least 2 radii");

  // dense: final max_gap small and non-increasing over the last three radii
  bool dense = st.back().gaps.max_gap <= params.delta_dense;
  std::size_t look = std::min<std::size_t>(3, J);
  for (std::size_t i = J - look; i + 1 < J && dense; ++i)
    if (st[i + 1].gaps.max_gap > st[i].gaps.max_gap + kGapTol) dense = false;

  // discrete: distinct count stable over the last two radii, min_gap large.
  // Distinct values rather than raw multiplicity: a projection that keeps
  // hitting the same finitely many values is discrete evidence even though
  // ever more points land on them.
  bool discrete = st[J - 1].gaps.distinct_count == st[J - 2].gaps.distinct_count &&
                  st[J - 1].gaps.min_gap >= params.gamma_disc;

  // exceptional: some grid window empty at every radius while the [-T,T]
  // count grows by >= rho across each of the last two steps
  bool exceptional = false;
  std::optional<std::size_t> empty_idx;
  if (J >= 3 && !grid.empty()) {
    bool growth = st[J - 1].gaps.count > 0;
    for (std::size_t j = J - 2; j < J && growth; ++j) {
      double prev = static_cast<double>(st[j - 1].gaps.count);
      double cur = static_cast<double>(st[j].gaps.count);
      if (!(cur > prev) || cur < params.growth_rho * prev) growth = false;
    }
    if (growth) {
      for (std::size_t g = 0; g < grid.size(); ++g) {
        bool empty = true;
        for (const RadiusStats& s : st)
          if (s.grid_counts[g] != 0) { empty = false; break; }
        if (empty) { empty_idx = g; break; }
      }
      exceptional = empty_idx.has_value();
    }
  }

  int fired = (dense ? 1 : 0) + (discrete ? 1 : 0) + (exceptional ? 1 : 0);
  c.conflict = fired > 1;
  if (c.conflict) {
    std::string who;
    if (exceptional) who += "exceptional ";
    if (dense) who += "dense ";
    if (discrete) who += "discrete ";
    c.notes.push_back("conflicting evidence: " + who);
  }
  if (exceptional) {
    c.verdict = Verdict::exceptional_evidence;
    Rational t = rational_from_double(params.T);
    c.exc_p = Window{-t, t};
    c.exc_q = grid[*empty_idx];
  } else if (dense) {
    c.verdict = Verdict::dense_evidence;
  } else if (discrete) {
    c.verdict = Verdict::discrete_evidence;
  } else {
    c.verdict = Verdict::undetermined;
  }
}

// Error carrying whatever per-radius stats were completed before the cap hit.
struct ClassifyCapError : ResourceCapError {
  std::vector<RadiusStats> partial_stats;
  ClassifyCapError(const std::string& msg, std::size_t n, std::vector<RadiusStats> st)
      : ResourceCapError(msg, n), partial_stats(std::move(st)) {}
};

namespace detail {

inline RadiusStats stats_from_values(std::vector<double>& vals, double radius,
                                     std::size_t n_points, const ClassifierParams& params,
                                     const std::vector<Window>& grid) {
  std::sort(vals.begin(), vals.end());
  RadiusStats rs;
  rs.radius = radius;
  rs.n_points = n_points;
  rs.gaps = gap_stats(vals, params.T);
  rs.grid_counts.reserve(grid.size());
  for (const Window& w : grid) rs.grid_counts.push_back(window_count(vals, w));
  return rs;
}

}  // namespace detail

// Points pre-sorted by norm so every radius is a prefix; shared across the
// directions of a sweep.
struct SweepContext {
  std::vector<Point2> pts;        // ascending by norm
  std::vector<std::size_t> prefix;  // prefix[j] = #points with norm <= R_j
  std::vector<double> radii;

  static SweepContext build(const GeneratorSpec& spec, const RadiiSchedule& sched,
                            std::optional<std::uint64_t> seed = std::nullopt,
                            std::size_t point_cap = detail::kDefaultPointCap) {
    SweepContext ctx;
    ctx.radii = sched.radii();
    TruncatedSet ts = materialize(spec, ctx.radii.back(), seed, point_cap);
    ctx.pts = std::move(ts.points);
    std::sort(ctx.pts.begin(), ctx.pts.end(), [](const Point2& a, const Point2& b) {
      double na = a.x1 * a.x1 + a.x2 * a.x2, nb = b.x1 * b.x1 + b.x2 * b.x2;
      if (na != nb) return na < nb;
      if (a.x1 != b.x1) return a.x1 < b.x1;
      return a.x2 < b.x2;
    });
    for (double r : ctx.radii) {
      double r2 = r * r;
      auto it = std::upper_bound(ctx.pts.begin(), ctx.pts.end(), r2,
                                 [](double v, const Point2& p) {
                                   return v < p.x1 * p.x1 + p.x2 * p.x2;
                                 });
      ctx.prefix.push_back(static_cast<std::size_t>(it - ctx.pts.begin()));
    }
    return ctx;
  }
};

inline Classification classify_with_context(const SweepContext& ctx, const Direction& dir,
                                            const ClassifierParams& params) {
  params.validate();
  if (params.form == ProjectionForm::psi && dir.vertical)
    throw ValidationError("classify: psi form with vertical direction");
  const std::vector<Window> grid = params.effective_grid();
  const double ca = std::cos(dir.angle), sa = std::sin(dir.angle);
  const double beta = dir.slope;
  const bool phi = params.form == ProjectionForm::phi;

  Classification c;
  c.beta = beta;
  c.params_echo = params.to_json();
  for (std::size_t j = 0; j < ctx.radii.size(); ++j) {
    std::size_t n = ctx.prefix[j];
    std::vector<double> vals;
    for (std::size_t i = 0; i < n; ++i) {
      const Point2& p = ctx.pts[i];
      double v = phi ? p.x1 * ca + p.x2 * sa : p.x1 + beta * p.x2;
      if (v >= -params.T && v <= params.T) vals.push_back(v);
    }
    c.stats.push_back(detail::stats_from_values(vals, ctx.radii[j], n, params, grid));
  }
  derive_verdict(c, params, grid);
  return c;
}

inline Classification classify_direction(const GeneratorSpec& spec, const Direction& dir,
                                         const RadiiSchedule& sched,
                                         const ClassifierParams& params,
                                         std::optional<std::uint64_t> seed = std::nullopt) {
  SweepContext ctx;
  std::vector<RadiusStats> done;
  try {
    ctx = SweepContext::build(spec, sched, seed, params.point_cap);
  } catch (const ResourceCapError& e) {
    throw ClassifyCapError(e.what(), e.partial_count, std::move(done));
  }
  Classification c = classify_with_context(ctx, dir, params);
  if (params.flag_pair_membership && dir.exact_slope && is_exact(*dir.exact_slope) &&
      dir.exact_slope->index() == 0) {
    TruncatedSet ts = materialize(spec, ctx.radii.front(), seed, params.point_cap);
    if (ts.has_exact()) {
      PairSlopes ps = pair_slope_set(ts);
      const Rational& b = std::get<Rational>(*dir.exact_slope);
      if (std::binary_search(ps.rationals.begin(), ps.rationals.end(), b))
        c.notes.push_back("beta lies in the pair-slope set of the base truncation");
    }
  }
  return c;
}

// --- exceptional witness ------------------------------------------------

// Nested-interval witness around an exceptional slope: points z_k hitting P
// under Psi_beta with |y_k| strictly increasing, the rescaled windows
// P_k = (P - x_k) * eps_k and Q_k = (Q - x_k) * eps_k, and the slope
// intervals J_k = (beta - d_k, beta + d_k), eps_k = 1/|y_k|, d_k = d * eps_k
// with d = diam(P u Q). The ratio len(Q_k)/len(J_k) = q/(2d) is k-independent
// by construction and re-verified exactly on every step before returning.
struct ExceptionalWitness {
  Real beta = 0.0;
  Window P{Rational(-1), Rational(1)};
  Window Q{Rational(-1), Rational(1)};

  struct Step {
    Rational x, y;   // witness point (x_k, y_k)
    Rational eps;    // 1/|y_k|
    Window p_k{Rational(-1), Rational(1)};
    Window q_k{Rational(-1), Rational(1)};
    Rational d_k;    // J_k = (beta - d_k, beta + d_k)
  };
  std::vector<Step> steps;
  Rational ratio;  // q / (2d), exact

  json to_json() const {
    json j;
    j["beta"] = real_to_double(beta);
    j["P"] = {rational_to_string(P.lo), rational_to_string(P.hi)};
    j["Q"] = {rational_to_string(Q.lo), rational_to_string(Q.hi)};
    j["ratio"] = rational_to_string(ratio);
    json st = json::array();
    for (const Step& s : steps) {
      json e;
      e["x"] = rational_to_string(s.x);
      e["y"] = rational_to_string(s.y);
      e["eps"] = rational_to_string(s.eps);
      e["P_k"] = {rational_to_string(s.p_k.lo), rational_to_string(s.p_k.hi)};
      e["Q_k"] = {rational_to_string(s.q_k.lo), rational_to_string(s.q_k.hi)};
      e["d_k"] = rational_to_string(s.d_k);
      st.push_back(e);
    }
    j["steps"] = st;
    return j;
  }
};

inline ExceptionalWitness build_exceptional_witness(const TruncatedSet& ts, const Real& beta,
                                                    const Window& P, const Window& Q) {
  if (!ts.has_exact())
    throw ValidationError("witness: requires a generator with exact integer coordinates");
  if (!is_exact(beta))
    throw ValidationError("witness: requires an exact (rational or quadratic) slope");

  // Psi_beta(z) in P, exactly
  auto psi_in = [&](const IntPoint& z, const Window& w) {
    if (beta.index() == 0) {
      Rational v = Rational(z.x1) + std::get<Rational>(beta) * Rational(z.x2);
      return w.lo < v && v < w.hi;
    }
    QuadIrr v = std::get<QuadIrr>(beta).scaled(Rational(z.x2)) + Rational(z.x1);
    return v.compare(w.lo) > 0 && v.compare(w.hi) < 0;
  };

  std::vector<IntPoint> hits;
  for (const IntPoint& z : *ts.int_coords)
    if (z.x2 > 0 && psi_in(z, P)) hits.push_back(z);
  std::sort(hits.begin(), hits.end(), [](const IntPoint& a, const IntPoint& b) {
    if (a.x2 != b.x2) return a.x2 < b.x2;
    return a.x1 < b.x1;
  });

  Rational q_len = Q.length();
  Rational d = std::max(P.hi, Q.hi) - std::min(P.lo, Q.lo);  // diam(P u Q)
  if (!(d > 0)) throw ValidationError("witness: degenerate window pair");

  ExceptionalWitness w;
  w.beta = beta;
  w.P = P;
  w.Q = Q;
  w.ratio = q_len / (2 * d);

  Rational last_y(-1);
  for (const IntPoint& z : hits) {
    Rational y(z.x2);
    if (!(y > last_y)) continue;  // enforce strictly increasing |y_k|
    last_y = y;
    ExceptionalWitness::Step s;
    s.x = Rational(z.x1);
    s.y = y;
    s.eps = Rational(1) / y;
    s.p_k = Window{(P.lo - s.x) * s.eps, (P.hi - s.x) * s.eps};
    s.q_k = Window{(Q.lo - s.x) * s.eps, (Q.hi - s.x) * s.eps};
    s.d_k = d * s.eps;
    w.steps.push_back(std::move(s));
  }

  if (w.steps.size() < 3)
    throw ValidationError("witness too short: fewer than 3 qualifying points");

  // exact re-verification of every invariant before returning
  for (const auto& s : w.steps) {
    if (!(real_compare(beta, s.p_k.lo) > 0 && real_compare(beta, s.p_k.hi) < 0))
      throw std::logic_error("witness invariant violated: beta not in P_k");
    // Q_k subset of J_k = (beta - d_k, beta + d_k):
    //   q_k.lo > beta - d_k  <=>  beta < q_k.lo + d_k
    //   q_k.hi < beta + d_k  <=>  beta > q_k.hi - d_k
    if (!(real_compare(beta, s.q_k.lo + s.d_k) < 0 &&
          real_compare(beta, s.q_k.hi - s.d_k) > 0))
      throw std::logic_error("witness invariant violated: Q_k not inside J_k");
    Rational ratio_k = s.q_k.length() / (2 * s.d_k);
    if (ratio_k != w.ratio)
      throw std::logic_error("witness invariant violated: ratio depends on k");
  }
  return w;
}

// --- P-boundedness evidence ----------------------------------------------

struct PBoundednessReport {
  bool growing = false;
  std::vector<double> max_norms;  // per radius; 0 when the preimage is empty

  json to_json() const {
    return json{{"growing", growing}, {"max_norms", max_norms}};
  }
};

inline PBoundednessReport pboundedness_with_context(const SweepContext& ctx,
                                                    const Direction& dir, const Window& J,
                                                    ProjectionForm form) {
  if (form == ProjectionForm::psi && dir.vertical)
    throw ValidationError("pboundedness: psi form with vertical direction");
  const double lo = static_cast<double>(J.lo), hi = static_cast<double>(J.hi);
  const double ca = std::cos(dir.angle), sa = std::sin(dir.angle);
  const bool phi = form == ProjectionForm::phi;
  PBoundednessReport rep;
  for (std::size_t j = 0; j < ctx.radii.size(); ++j) {
    double worst2 = 0.0;
    for (std::size_t i = 0; i < ctx.prefix[j]; ++i) {
      const Point2& p = ctx.pts[i];
      double v = phi ? p.x1 * ca + p.x2 * sa : p.x1 + dir.slope * p.x2;
      if (v > lo && v < hi)
        worst2 = std::max(worst2, p.x1 * p.x1 + p.x2 * p.x2);
    }
    rep.max_norms.push_back(std::sqrt(worst2));
  }
  std::size_t n = rep.max_norms.size();
  rep.growing = std::abs(rep.max_norms[n - 1] - rep.max_norms[n - 2]) > kGapTol;
  return rep;
}

inline PBoundednessReport pboundedness_evidence(const GeneratorSpec& spec,
                                                const Direction& dir, const Window& J,
                                                const RadiiSchedule& sched,
                                                ProjectionForm form = ProjectionForm::phi,
                                                std::optional<std::uint64_t> seed = std::nullopt) {
  SweepContext ctx = SweepContext::build(spec, sched, seed);
  return pboundedness_with_context(ctx, dir, J, form);
}

}  // namespace projlab
