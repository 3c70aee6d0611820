#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "projlab/classifier.hpp"
#include "projlab/errors.hpp"
#include "projlab/generators.hpp"
#include "projlab/metric.hpp"
#include "projlab/quadratic.hpp"
#include "projlab/random_polar.hpp"

namespace projlab {

inline constexpr const char* kFormatVersion = "1";

struct DirectionSource {
  enum class Kind { explicit_list, uniform_random, diophantine_special };
  Kind kind = Kind::uniform_random;
  std::vector<double> betas;         // explicit_list
  std::size_t n = 0;                 // uniform_random
  std::uint64_t seed = 1;            // uniform_random
  std::vector<std::string> names;    // diophantine_special

  static DirectionSource explicit_slopes(std::vector<double> b) {
    DirectionSource d;
    d.kind = Kind::explicit_list;
    d.betas = std::move(b);
    return d;
  }
  static DirectionSource uniform(std::size_t n, std::uint64_t seed) {
    DirectionSource d;
    d.kind = Kind::uniform_random;
    d.n = n;
    d.seed = seed;
    return d;
  }
  static DirectionSource special(std::vector<std::string> names) {
    DirectionSource d;
    d.kind = Kind::diophantine_special;
    d.names = std::move(names);
    return d;
  }

  std::vector<Direction> resolve() const {
    std::vector<Direction> out;
    switch (kind) {
      case Kind::explicit_list:
        for (double b : betas) out.push_back(Direction::from_slope(b));
        break;
      case Kind::uniform_random:
        if (n == 0) throw ValidationError("direction_source: n must be positive");
        out = uniform_directions(n, seed);
        break;
      case Kind::diophantine_special:
        for (const std::string& name : names)
          out.push_back(Direction::from_slope(real_from_name(name)));
        break;
    }
    if (out.empty()) throw ValidationError("direction_source: no directions");
    return out;
  }

  json to_json() const {
    json j;
    switch (kind) {
      case Kind::explicit_list:
        j["kind"] = "explicit";
        j["betas"] = betas;
        break;
      case Kind::uniform_random:
        j["kind"] = "uniform_random";
        j["n"] = n;
        j["seed"] = seed;
        break;
      case Kind::diophantine_special:
        j["kind"] = "diophantine_special";
        j["names"] = names;
        break;
    }
    return j;
  }

  static DirectionSource from_json(const json& j) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string& k = it.key();
      if (k != "kind" && k != "betas" && k != "n" && k != "seed" && k != "names")
        throw ValidationError("direction_source: unknown field '" + k + "'");
    }
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "explicit")
      return explicit_slopes(j.at("betas").get<std::vector<double>>());
    if (kind == "uniform_random")
      return uniform(j.at("n").get<std::size_t>(), j.at("seed").get<std::uint64_t>());
    if (kind == "diophantine_special")
      return special(j.at("names").get<std::vector<std::string>>());
    throw ValidationError("direction_source: unknown kind '" + kind + "'");
  }
};

struct ExperimentConfig {
  std::string name;
  GeneratorSpec generator;
  DirectionSource directions;
  RadiiSchedule schedule;
  ClassifierParams params;
  std::optional<Window> witness_p;
  std::optional<Window> witness_q;
  std::string output_dir;  // empty -> no files written

  void validate() const {
    if (name.empty()) throw ValidationError("config: name required");
    schedule.validate();
    params.validate();
    if (witness_p.has_value() != witness_q.has_value())
      throw ValidationError("config: witness windows must be given as a pair");
  }

  json to_json() const {
    json j;
    j["name"] = name;
    j["generator"] = generator.to_json();
    j["directions"] = directions.to_json();
    j["schedule"] = schedule.to_json();
    j["params"] = params.to_json();
    if (witness_p) j["witness_P"] = window_to_json(*witness_p);
    if (witness_q) j["witness_Q"] = window_to_json(*witness_q);
    if (!output_dir.empty()) j["output_dir"] = output_dir;
    return j;
  }

  static ExperimentConfig from_json(const json& j) {
    static const std::vector<std::string> known = {
        "name", "generator", "directions", "schedule",
        "params", "witness_P", "witness_Q", "output_dir"};
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (std::find(known.begin(), known.end(), it.key()) == known.end())
        throw ValidationError("config: unknown field '" + it.key() + "'");
    }
    ExperimentConfig c;
    c.name = j.at("name").get<std::string>();
    c.generator = GeneratorSpec::from_json(j.at("generator"));
    c.directions = DirectionSource::from_json(j.at("directions"));
    c.schedule = RadiiSchedule::from_json(j.at("schedule"));
    if (j.contains("params")) c.params = ClassifierParams::from_json(j.at("params"));
    if (j.contains("witness_P")) c.witness_p = window_from_json(j.at("witness_P"));
    if (j.contains("witness_Q")) c.witness_q = window_from_json(j.at("witness_Q"));
    if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
    c.validate();
    return c;
  }
};

struct ExperimentReport {
  json config_echo;
  std::vector<Classification> rows;
  std::size_t n_dense = 0, n_disc = 0, n_exc = 0, n_und = 0, n_error = 0;
  std::vector<std::string> row_errors;
  std::vector<ExceptionalWitness> witnesses;
  json telemetry;
  bool failed = false;

  std::size_t n_rows() const { return rows.size(); }

  json to_json() const {
    json j;
    j["format_version"] = kFormatVersion;
    j["config"] = config_echo;
    json rows_j = json::array();
    for (const Classification& c : rows) rows_j.push_back(c.to_json());
    j["rows"] = rows_j;
    std::size_t n = rows.size();
    j["fractions"] = {
        {"dense", n ? rational_to_string(Rational(n_dense, n)) : "0"},
        {"disc", n ? rational_to_string(Rational(n_disc, n)) : "0"},
        {"exc", n ? rational_to_string(Rational(n_exc, n)) : "0"},
        {"und", n ? rational_to_string(Rational(n_und + n_error, n)) : "0"}};
    j["n_error"] = n_error;
    j["row_errors"] = row_errors;
    json w = json::array();
    for (const ExceptionalWitness& x : witnesses) w.push_back(x.to_json());
    j["witnesses"] = w;
    j["failed"] = failed;
    j["telemetry"] = telemetry;
    return j;
  }

  std::string to_csv() const {
    std::string out = "index,beta,verdict,final_count,final_max_gap,final_min_gap\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const Classification& c = rows[i];
      if (c.stats.empty()) {
        out += std::to_string(i) + "," + std::to_string(c.beta) + ",error,0,0,0\n";
        continue;
      }
      const GapStats& g = c.stats.back().gaps;
      out += std::to_string(i) + "," + std::to_string(c.beta) + "," +
             verdict_name(c.verdict) + "," + std::to_string(g.count) + "," +
             std::to_string(g.max_gap) + "," +
             (std::isinf(g.min_gap) ? std::string("inf") : std::to_string(g.min_gap)) + "\n";
    }
    return out;
  }
};

// canonical serialization: nlohmann objects iterate in sorted key order, so a
// plain dump is already canonical; floats print shortest-round-trip
inline std::string canonical_json(const json& j) { return j.dump(2); }

inline void write_report_files(const ExperimentReport& rep, const std::string& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream f(dir + "/report.json");
    if (!f) throw ValidationError("cannot write report.json in " + dir);
    f << canonical_json(rep.to_json()) << "\n";
  }
  {
    std::ofstream f(dir + "/rows.csv");
    if (!f) throw ValidationError("cannot write rows.csv in " + dir);
    f << rep.to_csv();
  }
}

inline ExperimentReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  auto t0 = std::chrono::steady_clock::now();

  SweepContext ctx = SweepContext::build(config.generator, config.schedule, std::nullopt,
                                         config.params.point_cap);
  std::vector<Direction> dirs = config.directions.resolve();

  ExperimentReport rep;
  rep.config_echo = config.to_json();
  rep.rows.resize(dirs.size());
  std::vector<std::string> errors(dirs.size());
  detail::parallel_for(dirs.size(), [&](std::size_t i) {
    try {
      rep.rows[i] = classify_with_context(ctx, dirs[i], config.params);
    } catch (const std::exception& e) {
      errors[i] = e.what();
      rep.rows[i].verdict = Verdict::undetermined;
      rep.rows[i].beta = dirs[i].slope;
    }
  });
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    if (!errors[i].empty()) {
      ++rep.n_error;
      rep.row_errors.push_back("direction " + std::to_string(i) + ": " + errors[i]);
      continue;
    }
    switch (rep.rows[i].verdict) {
      case Verdict::dense_evidence: ++rep.n_dense; break;
      case Verdict::discrete_evidence: ++rep.n_disc; break;
      case Verdict::exceptional_evidence: ++rep.n_exc; break;
      default: ++rep.n_und; break;
    }
  }

  // build witnesses for exceptional directions when windows are configured
  if (config.witness_p) {
    TruncatedSet final_ts =
        materialize(config.generator, config.schedule.radii().back(), std::nullopt,
                    config.params.point_cap);
    for (std::size_t i = 0; i < dirs.size(); ++i) {
      if (rep.rows[i].verdict != Verdict::exceptional_evidence) continue;
      if (!dirs[i].exact_slope || !is_exact(*dirs[i].exact_slope)) continue;
      rep.witnesses.push_back(build_exceptional_witness(
          final_ts, *dirs[i].exact_slope, *config.witness_p, *config.witness_q));
    }
  }

  auto t1 = std::chrono::steady_clock::now();
  rep.telemetry = {
      {"wall_ms", std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count()},
      {"n_points_final", ctx.pts.size()}};
  if (!config.output_dir.empty()) write_report_files(rep, config.output_dir);
  return rep;
}

// --- stability ------------------------------------------------------------

struct StabilityReport {
  std::size_t n_directions = 0;
  std::size_t n_agree = 0;
  std::vector<double> hausdorff_per_radius;
  bool hausdorff_growing = false;  // warning: finite-distance hypothesis doubtful
  std::vector<std::pair<bool, bool>> verdicts;  // (gen1 growing, gen2 growing)
  json telemetry;

  Rational agreement() const { return Rational(n_agree, n_directions); }

  json to_json() const {
    json j;
    j["format_version"] = kFormatVersion;
    j["n_directions"] = n_directions;
    j["agreement"] = rational_to_string(agreement());
    j["hausdorff_per_radius"] = hausdorff_per_radius;
    j["hausdorff_growing_warning"] = hausdorff_growing;
    json v = json::array();
    for (auto [a, b] : verdicts) v.push_back({{"gen1_growing", a}, {"gen2_growing", b}});
    j["verdicts"] = v;
    j["telemetry"] = telemetry;
    return j;
  }
};

inline StabilityReport stability_experiment(const GeneratorSpec& gen1,
                                            const GeneratorSpec& gen2,
                                            std::size_t n_directions,
                                            const RadiiSchedule& sched,
                                            const Window& J = Window{Rational(-1, 2), Rational(1, 2)},
                                            std::uint64_t direction_seed = 1,
                                            ProjectionForm form = ProjectionForm::phi) {
  if (n_directions < 1)
    throw ValidationError("stability_experiment: need at least one direction");
  auto t0 = std::chrono::steady_clock::now();
  SweepContext c1 = SweepContext::build(gen1, sched);
  SweepContext c2 = SweepContext::build(gen2, sched);

  StabilityReport rep;
  rep.n_directions = n_directions;

  // Hausdorff distance of the truncations at every shared radius
  for (std::size_t j = 0; j < c1.radii.size(); ++j) {
    std::vector<Point2> a(c1.pts.begin(), c1.pts.begin() + static_cast<std::ptrdiff_t>(c1.prefix[j]));
    std::vector<Point2> b(c2.pts.begin(), c2.pts.begin() + static_cast<std::ptrdiff_t>(c2.prefix[j]));
    if (a.empty() || b.empty())
      throw ValidationError("stability_experiment: empty truncation");
    rep.hausdorff_per_radius.push_back(hausdorff_grid(a, b));
  }
  // warn when the estimate keeps growing by a clear factor per radius step;
  // mild drift from truncation-boundary effects is expected and ignored
  constexpr double kGrowthFactor = 1.2;
  std::size_t m = rep.hausdorff_per_radius.size();
  if (m >= 3) {
    double h0 = rep.hausdorff_per_radius[m - 3];
    double h1 = rep.hausdorff_per_radius[m - 2];
    double h2 = rep.hausdorff_per_radius[m - 1];
    rep.hausdorff_growing = h2 > kGrowthFactor * h1 && h1 > kGrowthFactor * h0;
  } else {
    rep.hausdorff_growing = rep.hausdorff_per_radius[m - 1] >
                            kGrowthFactor * rep.hausdorff_per_radius[m - 2];
  }

  std::vector<Direction> dirs = uniform_directions(n_directions, direction_seed);
  rep.verdicts.resize(n_directions);
  detail::parallel_for(n_directions, [&](std::size_t i) {
    bool g1 = pboundedness_with_context(c1, dirs[i], J, form).growing;
    bool g2 = pboundedness_with_context(c2, dirs[i], J, form).growing;
    rep.verdicts[i] = {g1, g2};
  });
  for (auto [a, b] : rep.verdicts)
    if (a == b) ++rep.n_agree;

  auto t1 = std::chrono::steady_clock::now();
  rep.telemetry = {
      {"wall_ms", std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count()}};
  return rep;
}

// --- bundled recipes --------------------------------------------------------

inline std::vector<std::string> recipe_names() {
  return {"m0_exceptional", "random_dense",  "random_discrete", "power_discrete",
          "power_dense",    "syndetic_dense"};
}

// Named desk-scale experiment configurations; every acceptance scenario maps
// to exactly one of these (plus the stability run, which has its own entry
// point since it compares two generators).
inline ExperimentConfig bundled_recipe(const std::string& name) {
  ExperimentConfig c;
  c.name = name;
  if (name == "m0_exceptional") {
    c.generator = GeneratorSpec::squares_m0_L_spec();
    c.directions = DirectionSource::special({"phi_squared"});
    c.schedule = RadiiSchedule::make(100, 16, 3);  // 100, 1600, 25600
    c.params.form = ProjectionForm::psi;
    c.params.T = 10;
    c.params.growth_rho = 1.25;
    c.witness_p = Window{Rational(-9, 2), Rational(9, 2)};
    c.witness_q = Window{Rational(-13, 20), Rational(13, 20)};
  } else if (name == "random_dense" || name == "random_discrete") {
    SequenceSpec rs = name == "random_dense" ? SequenceSpec::polynomial_seq(1.0, 1.0)
                                             : SequenceSpec::polynomial_seq(2.0, 1.0);
    c.generator = GeneratorSpec::random_polar_spec(rs, 42);
    c.directions = DirectionSource::uniform(200, 7);
    c.schedule = RadiiSchedule::make(625, 2, 5);  // 625 .. 10^4
    c.params.form = ProjectionForm::phi;
    c.params.T = 10;
    c.params.delta_dense = 3.0;  // sparse process: coarse density threshold
  } else if (name == "power_discrete") {
    c.generator = GeneratorSpec::signed_powers_spec(3.0);
    c.directions = DirectionSource::uniform(100, 11);
    c.schedule = RadiiSchedule::make(62500, 4, 3);  // .. 10^6
    c.params.form = ProjectionForm::phi;
    c.params.T = 5;
  } else if (name == "power_dense") {
    c.generator = GeneratorSpec::signed_powers_spec(1.5);
    c.directions = DirectionSource::uniform(100, 11);
    c.schedule = RadiiSchedule::make(6250, 4, 3);  // .. 10^5
    c.params.form = ProjectionForm::phi;
    c.params.T = 5;
    c.params.delta_dense = 0.25;
  } else if (name == "syndetic_dense") {
    c.generator = GeneratorSpec::jittered_lattice_spec(0.4, 5);
    c.directions = DirectionSource::uniform(100, 13);
    c.schedule = RadiiSchedule::make(100, 2, 4);  // 100 .. 800
    c.params.form = ProjectionForm::phi;
    c.params.T = 10;
  } else {
    throw ValidationError("unknown recipe: " + name);
  }
  return c;
}

// the stability acceptance scenario, packaged like the other recipes
inline StabilityReport run_stability_recipe(const std::string& output_dir = "") {
  StabilityReport rep = stability_experiment(
      GeneratorSpec::integer_lattice_spec(), GeneratorSpec::jittered_lattice_spec(0.4, 5),
      100, RadiiSchedule::make(100, 2, 4), Window{Rational(-1, 2), Rational(1, 2)}, 13);
  if (!output_dir.empty()) {
    std::filesystem::create_directories(output_dir);
    std::ofstream f(output_dir + "/report.json");
    if (!f) throw ValidationError("cannot write report.json in " + output_dir);
    f << canonical_json(rep.to_json()) << "\n";
  }
  return rep;
}

}  // namespace projlab
