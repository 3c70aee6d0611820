#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "json.hpp"
#include "projlab/errors.hpp"
#include "projlab/generators.hpp"

namespace projlab {

// Finite-prefix statistics of a rising sequence: everything is labeled with
// the prefix length K, no asymptotic claims. Tail statistics use k >= K/2 to
// suppress transients.
struct SequenceReport {
  std::int64_t prefix_length = 0;
  double min_tail_ratio = 0.0;  // min over k >= K/2 of r_{k+1}/r_k
  double max_tail_gap = 0.0;    // max over k >= K/2 of r_{k+1}-r_k
  double harmonic_partial = 0.0;
  // (N, sum_{k<=N} 1/(r_k * ln N)) per schedule entry; natural log.
  std::vector<std::pair<std::int64_t, double>> dvoretzky_values;
  bool dvoretzky_monotone_growth = false;

  json to_json() const {
    json j;
    j["prefix_length"] = prefix_length;
    j["min_tail_ratio"] = min_tail_ratio;
    j["max_tail_gap"] = max_tail_gap;
    j["harmonic_partial"] = harmonic_partial;
    json dv = json::array();
    for (const auto& [n, v] : dvoretzky_values) dv.push_back({{"N", n}, {"value", v}});
    j["dvoretzky_values"] = dv;
    j["dvoretzky_monotone_growth"] = dvoretzky_monotone_growth;
    return j;
  }
};

namespace detail {

// pairwise (tree) reduction: deterministic independent of traversal strategy
inline double tree_sum(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
  if (hi - lo <= 8) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += v[i];
    return s;
  }
  std::size_t mid = lo + (hi - lo) / 2;
  return tree_sum(v, lo, mid) + tree_sum(v, mid, hi);
}

}  // namespace detail

inline SequenceReport analyze_sequence(const SequenceSpec& rseq, std::int64_t K,
                                       const std::vector<std::int64_t>& n_schedule) {
  if (K < 8) throw ValidationError("analyze_sequence: K >= 8 required");
  for (std::size_t i = 0; i < n_schedule.size(); ++i) {
    if (n_schedule[i] < 2 || n_schedule[i] > K)
      throw ValidationError("analyze_sequence: schedule entries must lie in [2, K]");
    if (i > 0 && n_schedule[i] <= n_schedule[i - 1])
      throw ValidationError("analyze_sequence: schedule must be increasing");
  }

  SequenceReport rep;
  rep.prefix_length = K;

  // values computed on the fly; the full prefix can be large (K up to 1e6+)
  std::vector<double> inv;
  inv.reserve(static_cast<std::size_t>(K));
  double prev = 0.0;
  double min_ratio = std::numeric_limits<double>::infinity();
  double max_gap = 0.0;
  const std::int64_t tail_from = K / 2;  // k >= K/2
  for (std::int64_t k = 1; k <= K; ++k) {
    double rk = rseq.value(k);
    if (k > 1) {
      if (!(rk > prev))
        throw ValidationError("analyze_sequence: prefix not strictly increasing");
      if (k - 1 >= tail_from) {
        min_ratio = std::min(min_ratio, rk / prev);
        max_gap = std::max(max_gap, rk - prev);
      }
    } else if (!(rk > 0)) {
      throw ValidationError("analyze_sequence: sequence must be positive");
    }
    prev = rk;
    inv.push_back(1.0 / rk);
  }
  // geometric sequences report the ratio itself: consecutive floating-point
  // quotients wobble by an ulp, the spec parameter does not
  if (rseq.kind == SequenceSpec::Kind::geometric) min_ratio = rseq.ratio;
  rep.min_tail_ratio = min_ratio;
  rep.max_tail_gap = max_gap;
  rep.harmonic_partial = detail::tree_sum(inv, 0, inv.size());

  double prev_dv = -std::numeric_limits<double>::infinity();
  bool monotone = !n_schedule.empty();
  for (std::int64_t n : n_schedule) {
    double s = detail::tree_sum(inv, 0, static_cast<std::size_t>(n));
    double v = s / std::log(static_cast<double>(n));
    rep.dvoretzky_values.emplace_back(n, v);
    if (!(v > prev_dv)) monotone = false;
    prev_dv = v;
  }
  rep.dvoretzky_monotone_growth = monotone;
  return rep;
}

}  // namespace projlab
