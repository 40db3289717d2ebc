#include "dpsla/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "dpsla/error.hpp"
#include "dpsla/topology.hpp"

namespace dpsla {

double StepRule::level(std::size_t) const { return std::numeric_limits<double>::quiet_NaN(); }

namespace {

template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(threads, n);
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < n; i += workers) fn(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

class DpslaRule final : public StepRule {
 public:
  DpslaRule(const StepsizeConfig& cfg, const std::vector<double>& level_init, const ProblemInstance& inst)
      : cfg_(cfg) {
    cfg_.validate();
    const std::size_t n = inst.n_agents();
    if (level_init.size() != 1 && level_init.size() != n)
      fail(ErrorCode::Config, "algorithm.level_init: need one value or one per agent");
    std::optional<Box> domain;
    if (cfg_.feasibility_domain == FeasibilityDomain::ConstraintBox) domain = inst.constraint.bounding_box();
    for (std::size_t i = 0; i < n; ++i) {
      const double lv = level_init.size() == 1 ? level_init[0] : level_init[i];
      if (!std::isfinite(lv)) fail(ErrorCode::Config, "algorithm.level_init: must be finite");
      agents_.push_back(Agent{StepsizeState::initial(cfg_), LevelState(lv, inst.dim(), domain, cfg_.eta_cap), std::nullopt, 0, 0, 0, {}});
    }
  }

  std::string name() const override { return "dpsla"; }

  double stepsize(const AgentContext& ctx) override {
    Agent& a = agents_[ctx.agent];
    a.beta = raw_beta(cfg_, ctx.f_val, a.level.level, norm_sq(ctx.grad));
    const double prev = a.step.prev_alpha;
    const double alpha = decide_alpha(cfg_, a.step, a.beta, ctx.k);

    // Lemma-1 style envelope, evaluated with the same expressions as
    // decide_alpha so the comparison is exact.
    const double ck = c_value(cfg_, ctx.k);
    const double lower = 0.5 * cfg_.c0() * cfg_.alpha0 / ck;
    const double upper = cfg_.c0() * cfg_.alpha0 / ck;
    if (alpha < lower || alpha > upper) {
      ++a.bound_violations;
      note(a, "agent " + std::to_string(ctx.agent) + " k=" + std::to_string(ctx.k) + ": alpha outside bounds");
    }
    if (alpha > prev) {
      ++a.monotonicity_violations;
      note(a, "agent " + std::to_string(ctx.agent) + " k=" + std::to_string(ctx.k) + ": alpha increased");
    }
    return alpha;
  }

  bool after_update(const AgentContext& ctx) override {
    Agent& a = agents_[ctx.agent];
    const double beta = cfg_.constraint_beta == ConstraintBeta::Raw ? a.beta.value_or(0.0) : clamped_beta(cfg_, a.beta);
    const double before = a.level.level;
    const LevelOutcome out = record_step(a.level, cfg_, ctx.z, ctx.f_val, ctx.grad, beta, ctx.k);
    if (out.level < before) {
      ++a.level_violations;
      note(a, "agent " + std::to_string(ctx.agent) + " k=" + std::to_string(ctx.k) + ": level decreased");
    }
    return out.kind == LevelOutcome::Kind::Updated;
  }

  double initial_alpha(std::size_t) const override { return cfg_.alpha0; }
  double level(std::size_t agent) const override { return agents_[agent].level.level; }

  std::int64_t updates(std::size_t agent) const { return agents_[agent].level.update_count; }

  void collect(InvariantReport& rep) const {
    for (const auto& a : agents_) {
      rep.stepsize_bound_violations += a.bound_violations;
      rep.stepsize_monotonicity_violations += a.monotonicity_violations;
      rep.level_monotonicity_violations += a.level_violations;
      for (const auto& m : a.messages)
        if (rep.messages.size() < 16) rep.messages.push_back(m);
    }
  }

 private:
  struct Agent {
    StepsizeState step;
    LevelState level;
    std::optional<double> beta;
    std::int64_t bound_violations = 0;
    std::int64_t monotonicity_violations = 0;
    std::int64_t level_violations = 0;
    std::vector<std::string> messages;
  };

  static void note(Agent& a, std::string msg) {
    if (a.messages.size() < 4) a.messages.push_back(std::move(msg));
  }

  StepsizeConfig cfg_;
  std::vector<Agent> agents_;
};

class DgdRule final : public StepRule {
 public:
  explicit DgdRule(double scale) : scale_(scale) {
    if (!(scale > 0.0)) fail(ErrorCode::Config, "algorithm.dgd_scale: must be positive");
  }
  std::string name() const override { return "dgd"; }
  double stepsize(const AgentContext& ctx) override { return scale_ / (static_cast<double>(ctx.k) + 1.0); }

 private:
  double scale_;
};

class NaivePolyakRule final : public StepRule {
 public:
  explicit NaivePolyakRule(std::vector<double> targets) : targets_(std::move(targets)) {}
  std::string name() const override { return "naive_polyak"; }
  double stepsize(const AgentContext& ctx) override {
    const double gsq = norm_sq(ctx.grad);
    // Zero gradient: no step, as in the centralized rule.
    if (gsq == 0.0) return 0.0;
    return (ctx.f_val - targets_[ctx.agent]) / gsq;
  }
  double level(std::size_t agent) const override { return targets_[agent]; }

 private:
  std::vector<double> targets_;
};

}  // namespace

AlgorithmSpec AlgorithmSpec::dpsla(StepsizeConfig cfg, double level_init) {
  AlgorithmSpec s;
  s.kind = Kind::Dpsla;
  s.stepsize = cfg;
  s.level_init = {level_init};
  return s;
}

AlgorithmSpec AlgorithmSpec::dgd(double scale) {
  AlgorithmSpec s;
  s.kind = Kind::Dgd;
  s.dgd_scale = scale;
  return s;
}

AlgorithmSpec AlgorithmSpec::naive_polyak(NaiveTarget target) {
  AlgorithmSpec s;
  s.kind = Kind::NaivePolyak;
  s.naive_target = target;
  return s;
}

std::string AlgorithmSpec::name() const {
  switch (kind) {
    case Kind::Dpsla: return "dpsla";
    case Kind::Dgd: return "dgd";
    case Kind::NaivePolyak: return "naive_polyak";
  }
  return "?";
}

std::unique_ptr<StepRule> make_rule(const AlgorithmSpec& spec, const ProblemInstance& inst) {
  switch (spec.kind) {
    case AlgorithmSpec::Kind::Dpsla:
      return std::make_unique<DpslaRule>(spec.stepsize, spec.level_init, inst);
    case AlgorithmSpec::Kind::Dgd:
      return std::make_unique<DgdRule>(spec.dgd_scale);
    case AlgorithmSpec::Kind::NaivePolyak: {
      std::vector<double> targets;
      if (spec.naive_target == NaiveTarget::OracleLocal) {
        if (!inst.optimum) fail(ErrorCode::InvalidArgument, "naive_polyak with oracle targets needs a solved instance");
        targets = inst.optimum->local_values;
      } else {
        for (const auto& o : inst.objectives) targets.push_back(o.eval(solve_local(o, inst.constraint)));
      }
      return std::make_unique<NaivePolyakRule>(std::move(targets));
    }
  }
  fail(ErrorCode::InvalidArgument, "unknown algorithm");
}

RunTrace run_with_rule(const ProblemInstance& inst, StepRule& rule, const RunOptions& opts) {
  inst.validate();
  if (opts.iterations < 1) fail(ErrorCode::InvalidArgument, "run: iterations must be at least 1");
  if (opts.record_every < 1) fail(ErrorCode::InvalidArgument, "run: record_every must be at least 1");
  const std::size_t n = inst.n_agents();
  const std::size_t m = inst.dim();
  const MixingMatrix w = metropolis_weights(inst.graph);

  std::vector<Vec> xs;
  if (opts.x0_explicit) {
    xs = *opts.x0_explicit;
    if (xs.size() != n) fail(ErrorCode::Dimension, "run: need one initial point per agent");
    for (const auto& x : xs) {
      if (x.size() != m) fail(ErrorCode::Dimension, "run: initial point has the wrong dimension");
      if (!inst.constraint.contains(x)) fail(ErrorCode::InvalidArgument, "run: initial point is infeasible");
    }
  } else if (opts.x0 == X0Policy::Random) {
    Rng rng(opts.seed);
    const Box bb = inst.constraint.bounding_box();
    for (std::size_t i = 0; i < n; ++i) {
      Vec x(m);
      for (std::size_t j = 0; j < m; ++j) x[j] = rng.uniform(bb.lower[j], bb.upper[j]);
      xs.push_back(inst.constraint.project(x));
    }
  } else {
    xs.assign(n, inst.constraint.center());
  }

  RunTrace trace;
  trace.algorithm = rule.name();
  trace.seed = opts.seed;
  trace.n_agents = n;
  trace.oracle = inst.optimum;
  trace.invariants.checked = opts.check_invariants;
  trace.level_updates.assign(n, 0);

  const double nan = std::numeric_limits<double>::quiet_NaN();
  auto make_row = [&](std::int64_t k, const std::vector<double>& alpha, const std::vector<bool>& updated,
                      bool diverged) {
    TraceRow row;
    row.k = k;
    row.residual = inst.optimum ? residual(inst, xs, opts.residual_form) : nan;
    row.consensus_error = consensus_error(xs);
    row.alpha = alpha;
    row.level.resize(n);
    for (std::size_t i = 0; i < n; ++i) row.level[i] = rule.level(i);
    row.level_updated = updated;
    row.diverged = diverged;
    return row;
  };

  std::vector<double> alpha(n);
  for (std::size_t i = 0; i < n; ++i) alpha[i] = rule.initial_alpha(i);
  std::vector<bool> updated(n, false);
  trace.rows.push_back(make_row(0, alpha, updated, false));

  std::vector<Vec> next(n);
  std::vector<char> upd(n), bad(n);
  for (std::int64_t k = 0; k < opts.iterations; ++k) {
    const std::vector<Vec> zs = mix(w, xs);
    parallel_for(n, opts.threads, [&](std::size_t i) {
      const Vec& z = zs[i];
      const double f = inst.objectives[i].eval(z);
      const Vec g = inst.objectives[i].grad(z);
      const AgentContext ctx{i, k, z, f, g};
      const double a = rule.stepsize(ctx);
      alpha[i] = a;
      Vec y = z - a * g;
      bad[i] = 0;
      for (double v : y) {
        if (!std::isfinite(v)) {
          bad[i] = 1;
          break;
        }
      }
      next[i] = bad[i] ? z : inst.constraint.project(y);
      upd[i] = rule.after_update(ctx) ? 1 : 0;
    });
    bool diverged_now = false;
    for (std::size_t i = 0; i < n; ++i) {
      updated[i] = upd[i] != 0;
      if (updated[i]) ++trace.level_updates[i];
      diverged_now |= bad[i] != 0 || !std::isfinite(alpha[i]);
    }
    xs.swap(next);
    trace.diverged |= diverged_now;

    if (opts.check_invariants) {
      for (std::size_t i = 0; i < n; ++i) {
        if (!inst.constraint.contains(xs[i], 1e-12)) {
          ++trace.invariants.feasibility_violations;
          if (trace.invariants.messages.size() < 16)
            trace.invariants.messages.push_back("agent " + std::to_string(i) + " k=" + std::to_string(k + 1) +
                                                ": iterate left the constraint set");
        }
      }
    }

    const std::int64_t kk = k + 1;
    if (kk % opts.record_every == 0 || kk == opts.iterations)
      trace.rows.push_back(make_row(kk, alpha, updated, trace.diverged));
  }

  if (opts.check_invariants) {
    if (auto* d = dynamic_cast<DpslaRule*>(&rule)) d->collect(trace.invariants);
  }
  trace.final_states = std::move(xs);
  return trace;
}

RunTrace run(const ProblemInstance& inst, const AlgorithmSpec& alg, const RunOptions& opts) {
  auto rule = make_rule(alg, inst);
  return run_with_rule(inst, *rule, opts);
}

double tail_gap(const RunTrace& trace, std::int64_t horizon) {
  if (horizon < 2) fail(ErrorCode::InvalidArgument, "tail_gap: horizon must be at least 2");
  const std::int64_t start = horizon / 2;
  double best = std::numeric_limits<double>::infinity();
  std::int64_t seen = 0;
  for (const auto& row : trace.rows) {
    if (row.k < start || row.k > horizon) continue;
    if (std::isnan(row.residual)) fail(ErrorCode::InvalidArgument, "tail_gap: trace has no residuals");
    best = std::min(best, row.residual);
    ++seen;
  }
  if (seen != horizon - start + 1) fail(ErrorCode::InvalidArgument, "tail_gap: trace does not cover the window");
  return best;
}

SweepResult run_speedup_sweep(const SweepSettings& settings, const std::vector<std::size_t>& agent_counts,
                              std::int64_t horizon, const std::vector<std::uint64_t>& seeds) {
  if (horizon < 2) fail(ErrorCode::InvalidArgument, "sweep: horizon must be at least 2");
  if (!std::is_sorted(agent_counts.begin(), agent_counts.end()))
    fail(ErrorCode::InvalidArgument, "sweep: agent counts must be ascending");
  if (agent_counts.empty() || seeds.empty()) fail(ErrorCode::InvalidArgument, "sweep: nothing to run");

  SweepResult out;
  for (std::size_t n : agent_counts)
    for (std::uint64_t s : seeds) out.cells.push_back({n, s, 0.0});

  std::atomic<std::size_t> next{0};
  const unsigned workers = std::max(1u, settings.threads);
  parallel_for(workers, workers, [&](std::size_t) {
    for (std::size_t c = next++; c < out.cells.size(); c = next++) {
      SweepCell& cell = out.cells[c];
      Rng rng(cell.seed);
      ProblemInstance inst =
          gen_paper_instance(cell.n, settings.dim, settings.rows_per_agent, rng, settings.graph);
      ensure_oracle(inst);
      RunOptions opts;
      opts.iterations = horizon;
      opts.seed = cell.seed;
      cell.gap = tail_gap(run(inst, settings.algorithm, opts), horizon);
    }
  });

  for (std::size_t n : agent_counts) {
    double sum = 0.0;
    for (const auto& cell : out.cells)
      if (cell.n == n) sum += cell.gap;
    out.mean_gap.emplace_back(n, sum / static_cast<double>(seeds.size()));
  }
  return out;
}

std::string format_sweep_csv(const SweepResult& result) {
  std::string s = "n,seed,gap\n";
  for (const auto& c : result.cells)
    s += std::to_string(c.n) + "," + std::to_string(c.seed) + "," + format_real(c.gap) + "\n";
  return s;
}

}  // namespace dpsla
