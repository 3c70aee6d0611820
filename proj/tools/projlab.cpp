// projlab: experiment driver for planar point-set projection studies.
//
// Subcommands materialize point families, project them along directions,
// classify directions as dense/discrete/exceptional evidence, build
// exceptional witnesses, estimate box dimensions of survivor sets, analyze
// rising sequences, run the random polar dichotomy, and orchestrate named
// experiment recipes.
//
// Exit codes: 0 success, 2 validation error, 3 resource cap, 4 internal
// invariant violation.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "projlab/dimension.hpp"
#include "projlab/experiments.hpp"
#include "projlab/sequence_lab.hpp"

using namespace projlab;
using nlohmann::json;

namespace {

json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot open file: " + path);
  json j;
  f >> j;
  return j;
}

GeneratorSpec parse_generator(const std::string& inline_json, const std::string& file) {
  if (!file.empty()) return GeneratorSpec::from_json(read_json_file(file));
  if (!inline_json.empty()) return GeneratorSpec::from_json(json::parse(inline_json));
  throw ValidationError("a generator is required (--gen or --gen-file)");
}

SequenceSpec parse_rseq(const std::string& inline_json) {
  if (inline_json.empty()) throw ValidationError("a sequence is required (--rseq)");
  return SequenceSpec::from_json(json::parse(inline_json));
}

// "phi", "sqrt2", "3/4", "0.75" all accepted
Real parse_beta(const std::string& s) {
  try {
    return real_from_name(s);
  } catch (...) {
    try {
      std::size_t pos = 0;
      double v = std::stod(s, &pos);
      if (pos == s.size()) return v;
    } catch (...) {
    }
    throw ValidationError("cannot parse slope: " + s);
  }
}

Window parse_window(const std::string& s) {
  auto comma = s.find(',');
  if (comma == std::string::npos)
    throw ValidationError("window must be 'lo,hi' with rational endpoints: " + s);
  return Window{rational_from_string(s.substr(0, comma)),
                rational_from_string(s.substr(comma + 1))};
}

void emit(const json& j, const std::string& out_file) {
  std::string text = canonical_json(j) + "\n";
  if (out_file.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out_file);
    if (!f) throw ValidationError("cannot write: " + out_file);
    f << text;
  }
}

struct SchedOpts {
  double R0 = 100.0;
  double factor = 4.0;
  int steps = 6;
  RadiiSchedule build() const { return RadiiSchedule::make(R0, factor, steps); }
  void attach(CLI::App* cmd) {
    cmd->add_option("--r0", R0, "first truncation radius");
    cmd->add_option("--factor", factor, "radius growth factor");
    cmd->add_option("--steps", steps, "number of radii");
  }
};

struct ParamOpts {
  double T = 10.0, delta_dense = 0.05, gamma_disc = 0.01, growth_rho = 1.5;
  std::string form = "psi";
  ClassifierParams build() const {
    ClassifierParams p;
    p.T = T;
    p.delta_dense = delta_dense;
    p.gamma_disc = gamma_disc;
    p.growth_rho = growth_rho;
    p.form = form_from_string(form);
    return p;
  }
  void attach(CLI::App* cmd) {
    cmd->add_option("-T,--window-bound", T, "classification window half-width");
    cmd->add_option("--delta-dense", delta_dense, "max-gap threshold for dense evidence");
    cmd->add_option("--gamma-disc", gamma_disc, "min-gap threshold for discrete evidence");
    cmd->add_option("--rho", growth_rho, "growth factor for exceptional evidence");
    cmd->add_option("--form", form, "projection form: phi or psi");
  }
};

int run(int argc, char** argv) {
  CLI::App app{"projection experiment lab"};
  app.require_subcommand(1);

  std::string gen_json, gen_file, rseq_json, beta_str, out_file, out_dir;
  std::string window_p, window_q, window_j = "-1/2,1/2";
  std::string recipe, config_file, target_str = "1/32,9/32";
  double radius = 100.0, angle = 0.0;
  bool use_angle = false;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::size_t n_dirs = 100;
  std::uint64_t dir_seed = 1;
  std::int64_t K = 1000;
  int grid_depth = 14;
  int scale_from = 5, scale_to = 13;
  std::vector<std::int64_t> n_schedule;
  std::string gen2_json, gen2_file;

  SchedOpts sched;
  ParamOpts params;

  auto add_gen = [&](CLI::App* c) {
    c->add_option("--gen", gen_json, "generator spec as inline JSON");
    c->add_option("--gen-file", gen_file, "generator spec JSON file");
  };
  auto add_seed = [&](CLI::App* c) {
    c->add_option("--seed", seed, "seed for randomized generators")
        ->each([&](const std::string&) { seed_given = true; });
  };

  // generate
  auto* cg = app.add_subcommand("generate", "materialize a point family inside a ball");
  add_gen(cg);
  add_seed(cg);
  cg->add_option("--radius", radius, "truncation radius")->required();
  cg->add_option("-o,--out", out_file, "output file (default stdout)");

  // project
  auto* cp = app.add_subcommand("project", "project a truncation along one direction");
  add_gen(cp);
  add_seed(cp);
  cp->add_option("--radius", radius, "truncation radius")->required();
  cp->add_option("--beta", beta_str, "slope (rational, named constant, or float)");
  cp->add_option("--angle", angle, "direction angle in radians")
      ->each([&](const std::string&) { use_angle = true; });
  cp->add_option("--form", params.form, "projection form: phi or psi");
  cp->add_option("-o,--out", out_file, "output file (default stdout)");

  // classify
  auto* cc = app.add_subcommand("classify", "classify one direction with full stats");
  add_gen(cc);
  add_seed(cc);
  cc->add_option("--beta", beta_str, "slope")->required();
  sched.attach(cc);
  params.attach(cc);
  cc->add_option("-o,--out", out_file, "output file (default stdout)");

  // sweep
  auto* cs = app.add_subcommand("sweep", "classify many random directions");
  add_gen(cs);
  add_seed(cs);
  cs->add_option("-n,--n-directions", n_dirs, "number of directions");
  cs->add_option("--direction-seed", dir_seed, "seed for the direction sample");
  sched.attach(cs);
  params.attach(cs);
  cs->add_option("--out-dir", out_dir, "directory for report.json and rows.csv");

  // witness
  auto* cw = app.add_subcommand("witness", "build a nested-interval exceptional witness");
  add_gen(cw);
  add_seed(cw);
  cw->add_option("--beta", beta_str, "slope (must be exact)")->required();
  cw->add_option("--radius", radius, "truncation radius")->required();
  cw->add_option("-P,--window-p", window_p, "hit window 'lo,hi'")->required();
  cw->add_option("-Q,--window-q", window_q, "miss window 'lo,hi'")->required();
  cw->add_option("-o,--out", out_file, "output file (default stdout)");

  // dimension
  auto* cd = app.add_subcommand("dimension", "survivor set and box-dimension estimate");
  cd->add_option("--rseq", rseq_json, "sequence spec as inline JSON")->required();
  cd->add_option("-K,--depth", K, "number of sequence constraints");
  cd->add_option("--target", target_str, "avoided window inside (0,1), 'lo,hi'");
  cd->add_option("--grid-depth", grid_depth, "beta grid resolution 2^-depth");
  cd->add_option("--scale-from", scale_from, "coarsest dyadic scale power");
  cd->add_option("--scale-to", scale_to, "finest dyadic scale power");
  cd->add_option("-o,--out", out_file, "output file (default stdout)");

  // sequence
  auto* cq = app.add_subcommand("sequence", "finite-prefix sequence statistics");
  cq->add_option("--rseq", rseq_json, "sequence spec as inline JSON")->required();
  cq->add_option("-K,--prefix", K, "prefix length");
  cq->add_option("--at", n_schedule, "evaluation depths for the covering sum");
  cq->add_option("-o,--out", out_file, "output file (default stdout)");

  // stability
  auto* ct = app.add_subcommand("stability", "compare boundedness evidence of two families");
  ct->add_option("--gen1", gen_json, "first generator inline JSON");
  ct->add_option("--gen1-file", gen_file, "first generator JSON file");
  ct->add_option("--gen2", gen2_json, "second generator inline JSON");
  ct->add_option("--gen2-file", gen2_file, "second generator JSON file");
  ct->add_option("-n,--n-directions", n_dirs, "number of directions");
  ct->add_option("--direction-seed", dir_seed, "seed for the direction sample");
  ct->add_option("-J,--window", window_j, "preimage window 'lo,hi'");
  sched.attach(ct);
  ct->add_option("-o,--out", out_file, "output file (default stdout)");

  // random
  auto* cr = app.add_subcommand("random", "polar process dichotomy experiment");
  cr->add_option("--rseq", rseq_json, "radial sequence inline JSON")->required();
  cr->add_option("--seed", seed, "process seed")->required();
  cr->add_option("-n,--n-directions", n_dirs, "number of directions");
  cr->add_option("--direction-seed", dir_seed, "seed for the direction sample");
  sched.attach(cr);
  params.attach(cr);
  cr->add_option("-o,--out", out_file, "output file (default stdout)");

  // experiment
  auto* ce = app.add_subcommand("experiment", "run a named or file-based recipe");
  ce->add_option("--recipe", recipe, "bundled recipe name");
  ce->add_option("--config", config_file, "config JSON file (overrides --recipe)");
  ce->add_option("--out-dir", out_dir, "directory for report.json and rows.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);  // prints help or the parse error
    return code == 0 ? 0 : 2;
  }

  if (cg->parsed()) {
    GeneratorSpec g = parse_generator(gen_json, gen_file);
    TruncatedSet ts = materialize(g, radius, seed_given ? std::optional(seed) : std::nullopt);
    json j;
    j["format_version"] = kFormatVersion;
    j["spec"] = g.to_json();
    j["radius"] = radius;
    json pts = json::array();
    for (const Point2& p : ts.points) pts.push_back({p.x1, p.x2});
    j["points"] = pts;
    j["count"] = ts.size();
    emit(j, out_file);
  } else if (cp->parsed()) {
    GeneratorSpec g = parse_generator(gen_json, gen_file);
    TruncatedSet ts = materialize(g, radius, seed_given ? std::optional(seed) : std::nullopt);
    Direction d = use_angle ? Direction::from_angle(angle)
                            : Direction::from_slope(parse_beta(beta_str));
    std::vector<double> vals = project_truncated(ts, d, form_from_string(params.form));
    json j;
    j["format_version"] = kFormatVersion;
    j["beta"] = d.slope;
    j["angle"] = d.angle;
    j["form"] = params.form;
    j["values"] = vals;
    emit(j, out_file);
  } else if (cc->parsed()) {
    GeneratorSpec g = parse_generator(gen_json, gen_file);
    Direction d = Direction::from_slope(parse_beta(beta_str));
    Classification c = classify_direction(g, d, sched.build(), params.build(),
                                          seed_given ? std::optional(seed) : std::nullopt);
    json j = c.to_json();
    j["format_version"] = kFormatVersion;
    emit(j, out_file);
  } else if (cs->parsed()) {
    ExperimentConfig cfg;
    cfg.name = "sweep";
    cfg.generator = parse_generator(gen_json, gen_file);
    if (seed_given) cfg.generator.seed = seed;
    cfg.directions = DirectionSource::uniform(n_dirs, dir_seed);
    cfg.schedule = sched.build();
    cfg.params = params.build();
    cfg.output_dir = out_dir;
    ExperimentReport rep = run_experiment(cfg);
    if (out_dir.empty()) emit(rep.to_json(), "");
    if (rep.failed) return 3;
  } else if (cw->parsed()) {
    GeneratorSpec g = parse_generator(gen_json, gen_file);
    TruncatedSet ts = materialize(g, radius, seed_given ? std::optional(seed) : std::nullopt);
    ExceptionalWitness w = build_exceptional_witness(ts, parse_beta(beta_str),
                                                     parse_window(window_p),
                                                     parse_window(window_q));
    json j = w.to_json();
    j["format_version"] = kFormatVersion;
    emit(j, out_file);
  } else if (cd->parsed()) {
    SequenceSpec rs = parse_rseq(rseq_json);
    DirectionSet ds = survivors_nd(rs, K, parse_window(target_str), grid_depth);
    BoxCountReport rep = box_dim_estimate(ds, dyadic_scales(scale_from, scale_to));
    rep.depth_label = K;
    json j = rep.to_json();
    j["format_version"] = kFormatVersion;
    j["survivor_intervals"] = ds.intervals.size();
    j["survivor_measure"] = rational_to_string(ds.measure());
    emit(j, out_file);
  } else if (cq->parsed()) {
    SequenceSpec rs = parse_rseq(rseq_json);
    if (n_schedule.empty()) n_schedule = {K / 4, K / 2, K};
    SequenceReport rep = analyze_sequence(rs, K, n_schedule);
    json j = rep.to_json();
    j["format_version"] = kFormatVersion;
    emit(j, out_file);
  } else if (ct->parsed()) {
    GeneratorSpec g1 = parse_generator(gen_json, gen_file);
    GeneratorSpec g2 = parse_generator(gen2_json, gen2_file);
    StabilityReport rep = stability_experiment(g1, g2, n_dirs, sched.build(),
                                               parse_window(window_j), dir_seed);
    emit(rep.to_json(), out_file);
  } else if (cr->parsed()) {
    PolarProcessSpec ps;
    ps.rseq = parse_rseq(rseq_json);
    ps.seed = seed;
    DichotomyReport rep =
        dichotomy_experiment(ps, n_dirs, sched.build(), params.build(), dir_seed);
    json j = rep.to_json();
    j["format_version"] = kFormatVersion;
    emit(j, out_file);
  } else if (ce->parsed()) {
    if (recipe.empty() && config_file.empty())
      throw ValidationError("experiment: --recipe or --config required");
    if (recipe == "stability_lattice" && config_file.empty()) {
      StabilityReport rep = run_stability_recipe(out_dir);
      if (out_dir.empty()) emit(rep.to_json(), "");
      return 0;
    }
    ExperimentConfig cfg = !config_file.empty()
                               ? ExperimentConfig::from_json(read_json_file(config_file))
                               : bundled_recipe(recipe);
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    ExperimentReport rep = run_experiment(cfg);
    if (cfg.output_dir.empty()) emit(rep.to_json(), "");
    if (rep.failed) return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const ResourceCapError& e) {
    std::cerr << "resource cap: " << e.what() << " (partial count " << e.partial_count
              << ")\n";
    return 3;
  } catch (const std::logic_error& e) {
    std::cerr << "internal invariant violation: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
