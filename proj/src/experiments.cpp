#include "dpsla/experiments.hpp"

#include <cstdlib>
#include <filesystem>
#include <map>

#include <json.hpp>

#include "dpsla/error.hpp"

namespace dpsla {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json vec_json(const Vec& v) { return json(v.values()); }

json oracle_json(const OracleResult& o) {
  return {{"x_star", vec_json(o.x_star)},
          {"f_star", o.f_star},
          {"local_values", o.local_values},
          {"kkt_residual", o.kkt_residual},
          {"iterations", o.iterations}};
}

json invariants_json(const InvariantReport& r) {
  return {{"checked", r.checked},
          {"ok", r.ok()},
          {"stepsize_bound_violations", r.stepsize_bound_violations},
          {"stepsize_monotonicity_violations", r.stepsize_monotonicity_violations},
          {"level_monotonicity_violations", r.level_monotonicity_violations},
          {"feasibility_violations", r.feasibility_violations},
          {"messages", r.messages}};
}

json trace_summary(const RunTrace& t) {
  const TraceRow& last = t.rows.back();
  return {{"algorithm", t.algorithm},
          {"rows", t.rows.size()},
          {"final_k", last.k},
          {"final_residual", last.residual},
          {"final_consensus_error", last.consensus_error},
          {"level_updates", t.level_updates},
          {"diverged", t.diverged},
          {"invariants", invariants_json(t.invariants)}};
}

const char* kConsensusMetric = "mean distance to the network average, (1/n) sum_i ||x_i - xbar||";

// Writes every file or none: a failure part-way removes what was written.
void write_all(const fs::path& dir, const std::vector<std::pair<std::string, std::string>>& files) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
  std::vector<fs::path> done;
  try {
    for (const auto& [name, contents] : files) {
      write_text_file((dir / name).string(), contents);
      done.push_back(dir / name);
    }
  } catch (...) {
    for (const auto& p : done) fs::remove(p, ec);
    throw;
  }
}

}  // namespace

std::string resolve_output_dir(const std::string& dir) {
  fs::path p(dir);
  if (p.is_relative()) {
    if (const char* root = std::getenv(kOutputRootEnv); root && *root) p = fs::path(root) / p;
  }
  return p.string();
}

std::string cmd_run(const RunConfig& cfg, const std::optional<std::string>& out_dir) {
  ProblemInstance inst = build_instance(cfg);
  ensure_oracle(inst);
  RunTrace trace = run(inst, cfg.algorithm_spec(), cfg.run_options());
  trace.config_hash = config_hash(cfg);

  json manifest;
  manifest["config"] = json::parse(config_to_json(cfg));
  manifest["config_hash"] = trace.config_hash;
  manifest["seed"] = cfg.problem.seed;
  manifest["oracle"] = oracle_json(*inst.optimum);
  manifest["trace"] = trace_summary(trace);
  manifest["invariants"] = invariants_json(trace.invariants);
  manifest["consensus_metric"] = kConsensusMetric;
  manifest["residual_form"] = cfg.run.residual_form == ResidualForm::Sum ? "sum" : "average";

  const std::string dir = resolve_output_dir(out_dir.value_or(cfg.output.directory));
  write_all(dir, {{"trace.csv", format_csv(trace)}, {"manifest.json", manifest.dump(2) + "\n"}});
  return dir;
}

std::string cmd_run_file(const std::string& config_path, const std::optional<std::string>& out_dir) {
  return cmd_run(load_config(config_path), out_dir);
}

Experiment parse_experiment(const std::string& name) {
  if (name == "divergence") return Experiment::Divergence;
  if (name == "main") return Experiment::Main;
  if (name == "speedup") return Experiment::Speedup;
  fail(ErrorCode::InvalidArgument, "unknown experiment '" + name + "' (expected divergence, main or speedup)");
}

std::string cmd_reproduce(Experiment which, const ReproduceOptions& opts) {
  std::vector<std::pair<std::string, std::string>> files;
  json manifest;
  manifest["seed"] = opts.seed;
  manifest["consensus_metric"] = kConsensusMetric;
  std::string name;

  switch (which) {
    case Experiment::Divergence: {
      name = "divergence";
      ProblemInstance inst = gen_triangle_demo();
      ensure_oracle(inst);
      RunOptions ro;
      ro.iterations = kDivergenceIterations;
      ro.seed = opts.seed;
      ro.threads = opts.threads;
      const RunTrace dgd = run(inst, AlgorithmSpec::dgd(2.0), ro);
      const RunTrace naive = run(inst, AlgorithmSpec::naive_polyak(NaiveTarget::LocalMin), ro);
      files = {{"dgd.csv", format_csv(dgd)}, {"naive_polyak.csv", format_csv(naive)}};
      manifest["oracle"] = oracle_json(*inst.optimum);
      manifest["runs"] = {trace_summary(dgd), trace_summary(naive)};
      break;
    }
    case Experiment::Main: {
      name = "main";
      Rng rng(opts.seed);
      ProblemInstance inst = gen_paper_instance(4, 6, 2, rng);
      ensure_oracle(inst);
      RunOptions ro;
      ro.iterations = kMainIterations;
      ro.seed = opts.seed;
      ro.threads = opts.threads;
      ro.check_invariants = true;
      const RunTrace dp = run(inst, AlgorithmSpec::dpsla(), ro);
      const RunTrace dgd = run(inst, AlgorithmSpec::dgd(2.0), ro);
      files = {{"dpsla.csv", format_csv(dp)},
               {"dgd.csv", format_csv(dgd)},
               {"level_gap.csv", format_level_gap_csv(dp)},
               {"stepsize.csv", format_stepsize_csv(dp)},
               {"instance.json", instance_to_json(inst)},
               {"graph.txt", inst.graph.to_edge_list()}};
      manifest["oracle"] = oracle_json(*inst.optimum);
      manifest["runs"] = {trace_summary(dp), trace_summary(dgd)};
      break;
    }
    case Experiment::Speedup: {
      name = "speedup";
      SweepSettings st;
      st.threads = opts.threads;
      std::vector<std::uint64_t> seeds;
      for (std::size_t i = 0; i < kSpeedupSeeds; ++i) seeds.push_back(opts.seed + i);
      const SweepResult res = run_speedup_sweep(st, kSpeedupAgents, kSpeedupHorizon, seeds);
      files = {{"speedup.csv", format_sweep_csv(res)}};
      json means = json::array();
      for (const auto& [n, g] : res.mean_gap) means.push_back({{"n", n}, {"mean_gap", g}});
      manifest["horizon"] = kSpeedupHorizon;
      manifest["seeds"] = seeds;
      manifest["mean_gap"] = means;
      break;
    }
  }
  manifest["experiment"] = name;
  files.emplace_back("manifest.json", manifest.dump(2) + "\n");
  const std::string dir = resolve_output_dir(opts.out_dir.value_or("out/reproduce-" + name));
  write_all(dir, files);
  return dir;
}

std::string cmd_oracle(const RunConfig& cfg) {
  ProblemInstance inst = build_instance(cfg);
  return oracle_json(ensure_oracle(inst)).dump(2);
}

}  // namespace dpsla
