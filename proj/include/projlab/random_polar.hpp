#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "projlab/classifier.hpp"
#include "projlab/errors.hpp"
#include "projlab/generators.hpp"
#include "projlab/rng.hpp"

namespace projlab {

// Planar process x_k = (r_k cos a_k, r_k sin a_k) with keyed uniform angles:
// one realization per seed, truncation-monotone in R.
struct PolarProcessSpec {
  SequenceSpec rseq;
  std::uint64_t seed = 0;
  std::int64_t k_max = 20'000'000;

  GeneratorSpec generator() const { return GeneratorSpec::random_polar_spec(rseq, seed); }
};

inline TruncatedSet sample_process(const PolarProcessSpec& spec, double R) {
  if (!(R > 0)) throw ValidationError("sample_process: R > 0 required");
  try {
    return materialize(spec.generator(), R, spec.seed,
                       static_cast<std::size_t>(spec.k_max));
  } catch (const ResourceCapError& e) {
    throw ResourceCapError("sample_process: K_max reached before r_k exceeded R",
                           e.partial_count);
  }
}

struct DichotomyRow {
  double angle = 0.0;
  double beta = 0.0;
  Verdict verdict = Verdict::undetermined;
  double final_max_gap = 0.0;
  double final_min_gap = 0.0;
  std::size_t final_count = 0;
  bool errored = false;
};

struct DichotomyReport {
  std::size_t n_directions = 0;
  std::size_t n_dense = 0, n_disc = 0, n_exc = 0, n_und = 0, n_error = 0;
  std::vector<DichotomyRow> rows;

  Rational dense_frac() const { return Rational(n_dense, n_directions); }
  Rational disc_frac() const { return Rational(n_disc, n_directions); }
  Rational exc_frac() const { return Rational(n_exc, n_directions); }
  Rational und_frac() const { return Rational(n_und + n_error, n_directions); }

  json to_json() const {
    json j;
    j["n_directions"] = n_directions;
    j["dense_frac"] = rational_to_string(dense_frac());
    j["disc_frac"] = rational_to_string(disc_frac());
    j["exc_frac"] = rational_to_string(exc_frac());
    j["und_frac"] = rational_to_string(und_frac());
    j["n_error"] = n_error;
    json rows_j = json::array();
    for (const DichotomyRow& r : rows) {
      rows_j.push_back({{"angle", r.angle},
                        {"beta", r.beta},
                        {"verdict", verdict_name(r.verdict)},
                        {"max_gap", r.final_max_gap},
                        {"min_gap", std::isinf(r.final_min_gap) ? -1.0 : r.final_min_gap},
                        {"count", r.final_count},
                        {"errored", r.errored}});
    }
    j["rows"] = rows_j;
    return j;
  }

  std::string to_csv() const {
    std::string out = "angle,beta,verdict,max_gap,min_gap,count,errored\n";
    for (const DichotomyRow& r : rows) {
      out += std::to_string(r.angle) + "," + std::to_string(r.beta) + "," +
             verdict_name(r.verdict) + "," + std::to_string(r.final_max_gap) + "," +
             (std::isinf(r.final_min_gap) ? std::string("inf")
                                          : std::to_string(r.final_min_gap)) +
             "," + std::to_string(r.final_count) + "," + (r.errored ? "1" : "0") + "\n";
    }
    return out;
  }
};

// Uniform angles on the circle (slopes = tan, vertical excluded by measure),
// keyed off `seed` so the direction sample is reproducible and independent of
// the process realization stream.
inline std::vector<Direction> uniform_directions(std::size_t n, std::uint64_t seed) {
  std::vector<Direction> out;
  out.reserve(n);
  constexpr double two_pi = 6.283185307179586476925287;
  for (std::size_t i = 0; i < n; ++i) {
    double a = two_pi * keyed_unit(seed ^ 0x5bd1e995u, static_cast<std::uint64_t>(i));
    Direction d = Direction::from_angle(a);
    if (d.vertical) d = Direction::from_angle(a + 1e-9);
    out.push_back(d);
  }
  return out;
}

namespace detail {

template <typename Fn>
inline void parallel_for(std::size_t n, Fn&& fn) {
  unsigned hw = std::thread::hardware_concurrency();
  std::size_t nthreads = std::max(1u, hw);
  if (n < 2 * nthreads) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < nthreads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < n; i += nthreads) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace detail

inline DichotomyReport dichotomy_experiment(const PolarProcessSpec& spec,
                                            std::size_t n_directions,
                                            const RadiiSchedule& sched,
                                            const ClassifierParams& params,
                                            std::uint64_t direction_seed = 1) {
  if (n_directions < 30)
    throw ValidationError("dichotomy_experiment: n_directions >= 30 required");
  params.validate();
  SweepContext ctx = SweepContext::build(spec.generator(), sched, spec.seed,
                                         static_cast<std::size_t>(spec.k_max));
  std::vector<Direction> dirs = uniform_directions(n_directions, direction_seed);

  DichotomyReport rep;
  rep.n_directions = n_directions;
  rep.rows.resize(n_directions);
  detail::parallel_for(n_directions, [&](std::size_t i) {
    DichotomyRow& row = rep.rows[i];
    row.angle = dirs[i].angle;
    row.beta = dirs[i].slope;
    try {
      Classification c = classify_with_context(ctx, dirs[i], params);
      row.verdict = c.verdict;
      row.final_max_gap = c.stats.back().gaps.max_gap;
      row.final_min_gap = c.stats.back().gaps.min_gap;
      row.final_count = c.stats.back().gaps.count;
    } catch (const std::exception&) {
      row.errored = true;
      row.verdict = Verdict::undetermined;
    }
  });
  for (const DichotomyRow& r : rep.rows) {
    if (r.errored) { ++rep.n_error; continue; }
    switch (r.verdict) {
      case Verdict::dense_evidence: ++rep.n_dense; break;
      case Verdict::discrete_evidence: ++rep.n_disc; break;
      case Verdict::exceptional_evidence: ++rep.n_exc; break;
      default: ++rep.n_und; break;
    }
  }
  return rep;
}

}  // namespace projlab
