#pragma once

#include <cstdint>
#include <limits>
#include <optional>

#include "dpsla/feasibility.hpp"
#include "dpsla/numerics.hpp"

namespace dpsla {

/// Non-decreasing positive scaling sequence c_k.
struct CSchedule {
  enum class Kind { Sqrt, Constant };
  Kind kind = Kind::Sqrt;
  double scale = 0.5;  // sqrt: c_k = scale·√(k+1); constant: c_k = scale

  double operator()(std::int64_t k) const;
};

/// Which β goes into the recorded half-space.
enum class ConstraintBeta { Raw, Clamped };

/// Search region of the Phase-I LP: the bounding box of the constraint set,
/// or all of Rᵐ.
enum class FeasibilityDomain { ConstraintBox, Free };

struct StepsizeConfig {
  double gamma = 1.0;
  double gamma_bar = 1.5;
  double alpha0 = 2.0;
  CSchedule c_schedule{};
  double eps_grad = 1e-12;
  ConstraintBeta constraint_beta = ConstraintBeta::Raw;
  FeasibilityDomain feasibility_domain = FeasibilityDomain::ConstraintBox;
  std::optional<std::size_t> eta_cap;

  double c0() const { return c_schedule(0); }
  /// Throws ErrorCode::Config unless 0 < γ < γ̄ < 2, α0 > 0, c0 > 0, eps_grad > 0.
  void validate() const;
};

double c_value(const StepsizeConfig& cfg, std::int64_t k);

/// γ(f − level)/‖g‖², or nullopt when ‖g‖² ≤ eps_grad² (zero gradient).
std::optional<double> raw_beta(const StepsizeConfig& cfg, double f_val, double level, double grad_sq);

/// α_{k−1} and c_{k−1}, seeded with α0 and c0.
struct StepsizeState {
  double prev_alpha;
  double prev_c;

  static StepsizeState initial(const StepsizeConfig& cfg) { return {cfg.alpha0, cfg.c0()}; }
};

/// The β used once the lower clamp c0α0/2 is applied. A zero gradient counts
/// as the clamp value.
double clamped_beta(const StepsizeConfig& cfg, std::optional<double> beta);

/// α_k = (1/c_k)·min{max{β, c0α0/2}, c_{k−1}α_{k−1}}; advances `st`.
double decide_alpha(const StepsizeConfig& cfg, StepsizeState& st, std::optional<double> beta, std::int64_t k);

/// Per-agent level-value with its window of recorded half-spaces.
struct LevelState {
  double level;
  InequalitySystem window;
  double window_min_f = std::numeric_limits<double>::infinity();
  std::int64_t window_start = 0;
  std::int64_t update_count = 0;

  LevelState(double initial_level, std::size_t dim, std::optional<Box> domain = std::nullopt,
             std::optional<std::size_t> cap = std::nullopt)
      : level(initial_level), window(dim, std::move(domain), cap) {}
};

struct LevelOutcome {
  enum class Kind {
    Kept,     // system still feasible (or no constraint added)
    Updated,  // infeasible; level raised and window cleared
    Reset,    // infeasible, but the window minimum was not above the level:
              // window cleared, level left alone so it never decreases
  };
  Kind kind = Kind::Kept;
  double level = 0.0;
};

/// Appends gᵀx ≤ gᵀz − (1/γ̄)·β·‖g‖², checks feasibility, and on
/// infeasibility moves the level to (γ/γ̄)·level + (1 − γ/γ̄)·min f over the
/// window. Zero gradients add nothing.
LevelOutcome record_step(LevelState& ls, const StepsizeConfig& cfg, const Vec& z, double f_val, const Vec& g,
                         double beta, std::int64_t k);

}  // namespace dpsla
