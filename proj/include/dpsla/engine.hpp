#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dpsla/metrics.hpp"
#include "dpsla/problem.hpp"
#include "dpsla/stepsize.hpp"

namespace dpsla {

/// What a stepsize rule sees for one agent in one round.
struct AgentContext {
  std::size_t agent;
  std::int64_t k;
  const Vec& z;
  double f_val;
  const Vec& grad;
};

/// Per-agent stepsize policy plugged into the shared consensus/projection
/// loop. stepsize() and after_update() are called for distinct agents
/// concurrently when the engine runs multi-threaded, so implementations keep
/// strictly per-agent state.
class StepRule {
 public:
  virtual ~StepRule() = default;
  virtual std::string name() const = 0;
  virtual double stepsize(const AgentContext& ctx) = 0;
  /// Called after x_{i,k+1} is formed. Returns true if the level changed.
  virtual bool after_update(const AgentContext& /*ctx*/) { return false; }
  /// Stepsize reported in the k = 0 trace row.
  virtual double initial_alpha(std::size_t /*agent*/) const { return 0.0; }
  /// Current level-value, NaN when the rule has none.
  virtual double level(std::size_t agent) const;
};

enum class NaiveTarget { LocalMin, OracleLocal };

struct AlgorithmSpec {
  enum class Kind { Dpsla, Dgd, NaivePolyak };
  Kind kind = Kind::Dpsla;
  StepsizeConfig stepsize{};
  /// One value shared by all agents, or one per agent.
  std::vector<double> level_init{-500.0};
  /// DGD: α_k = dgd_scale / (k + 1).
  double dgd_scale = 2.0;
  NaiveTarget naive_target = NaiveTarget::LocalMin;

  static AlgorithmSpec dpsla(StepsizeConfig cfg = {}, double level_init = -500.0);
  static AlgorithmSpec dgd(double scale = 2.0);
  static AlgorithmSpec naive_polyak(NaiveTarget target = NaiveTarget::LocalMin);

  std::string name() const;
};

/// Builds the rule for `spec`. Needs the oracle for oracle-based naive targets.
std::unique_ptr<StepRule> make_rule(const AlgorithmSpec& spec, const ProblemInstance& inst);

enum class X0Policy { Center, Random };

struct RunOptions {
  std::int64_t iterations = 300;
  std::int64_t record_every = 1;
  std::uint64_t seed = 0;
  X0Policy x0 = X0Policy::Center;
  std::optional<std::vector<Vec>> x0_explicit;
  unsigned threads = 1;
  bool check_invariants = false;
  ResidualForm residual_form = ResidualForm::Sum;
};

struct TraceRow {
  std::int64_t k = 0;
  double residual = 0.0;
  double consensus_error = 0.0;
  /// Stepsize that produced x_{i,k} (α_{i,k−1}; the initial value at k = 0).
  std::vector<double> alpha;
  /// Level-value f̄_i^k in effect at iteration k.
  std::vector<double> level;
  std::vector<bool> level_updated;
  bool diverged = false;
};

struct InvariantReport {
  bool checked = false;
  std::int64_t stepsize_bound_violations = 0;
  std::int64_t stepsize_monotonicity_violations = 0;
  std::int64_t level_monotonicity_violations = 0;
  std::int64_t feasibility_violations = 0;
  std::vector<std::string> messages;  // first few violations

  bool ok() const {
    return stepsize_bound_violations == 0 && stepsize_monotonicity_violations == 0 &&
           level_monotonicity_violations == 0 && feasibility_violations == 0;
  }
};

struct RunTrace {
  std::string algorithm;
  std::uint64_t seed = 0;
  std::string config_hash;
  std::size_t n_agents = 0;
  std::optional<OracleResult> oracle;
  std::vector<TraceRow> rows;
  std::vector<std::int64_t> level_updates;
  std::vector<Vec> final_states;
  InvariantReport invariants;
  bool diverged = false;
};

/// Runs `iterations` synchronous rounds: mix, per-agent stepsize from the
/// rule, projected gradient step, then the rule's post-update hook.
RunTrace run_with_rule(const ProblemInstance& inst, StepRule& rule, const RunOptions& opts);

RunTrace run(const ProblemInstance& inst, const AlgorithmSpec& alg, const RunOptions& opts);

/// min over k ∈ [⌊T/2⌋, T] of the residual. The trace must hold every row
/// in that range.
double tail_gap(const RunTrace& trace, std::int64_t horizon);

struct SweepSettings {
  std::size_t dim = 6;
  std::size_t rows_per_agent = 2;
  GraphSpec graph{};
  AlgorithmSpec algorithm{};
  unsigned threads = 1;  // concurrent (n, seed) cells
};

struct SweepCell {
  std::size_t n;
  std::uint64_t seed;
  double gap;
};

struct SweepResult {
  std::vector<SweepCell> cells;
  std::vector<std::pair<std::size_t, double>> mean_gap;  // per n, seed-averaged
};

SweepResult run_speedup_sweep(const SweepSettings& settings, const std::vector<std::size_t>& agent_counts,
                              std::int64_t horizon, const std::vector<std::uint64_t>& seeds);

std::string format_sweep_csv(const SweepResult& result);

}  // namespace dpsla
