#include "dpsla/stepsize.hpp"

#include <algorithm>
#include <cmath>

#include "dpsla/error.hpp"

namespace dpsla {

double CSchedule::operator()(std::int64_t k) const {
  if (k < 0) fail(ErrorCode::InvalidArgument, "c schedule: k must be non-negative");
  if (kind == Kind::Constant) return scale;
  return scale * std::sqrt(static_cast<double>(k) + 1.0);
}

void StepsizeConfig::validate() const {
  if (!(0.0 < gamma && gamma < gamma_bar && gamma_bar < 2.0))
    fail(ErrorCode::Config, "algorithm.gamma/gamma_bar: require 0 < gamma < gamma_bar < 2");
  if (!(alpha0 > 0.0) || !std::isfinite(alpha0)) fail(ErrorCode::Config, "algorithm.alpha0: must be positive");
  if (!(c_schedule.scale > 0.0) || !std::isfinite(c_schedule.scale))
    fail(ErrorCode::Config, "algorithm.c_schedule: scale must be positive");
  if (!(eps_grad > 0.0)) fail(ErrorCode::Config, "algorithm.eps_grad: must be positive");
  if (eta_cap && *eta_cap == 0) fail(ErrorCode::Config, "algorithm.eta_cap: must be positive");
}

double c_value(const StepsizeConfig& cfg, std::int64_t k) { return cfg.c_schedule(k); }

std::optional<double> raw_beta(const StepsizeConfig& cfg, double f_val, double level, double grad_sq) {
  if (grad_sq <= cfg.eps_grad * cfg.eps_grad) return std::nullopt;
  return cfg.gamma * (f_val - level) / grad_sq;
}

double clamped_beta(const StepsizeConfig& cfg, std::optional<double> beta) {
  const double floor = 0.5 * cfg.c0() * cfg.alpha0;
  return beta ? std::max(*beta, floor) : floor;
}

double decide_alpha(const StepsizeConfig& cfg, StepsizeState& st, std::optional<double> beta, std::int64_t k) {
  const double ck = c_value(cfg, k);
  const double floor = 0.5 * cfg.c0() * cfg.alpha0;
  const double top = cfg.c0() * cfg.alpha0;
  // c_{k-1}·α_{k-1} already lies in [floor, top] in exact arithmetic; the
  // clamps keep the bounds exact under rounding.
  const double cap = std::clamp(st.prev_c * st.prev_alpha, floor, top);
  const double alpha = std::min(std::min(clamped_beta(cfg, beta), cap) / ck, st.prev_alpha);
  st.prev_alpha = alpha;
  st.prev_c = ck;
  return alpha;
}

LevelOutcome record_step(LevelState& ls, const StepsizeConfig& cfg, const Vec& z, double f_val, const Vec& g,
                         double beta, std::int64_t k) {
  const double gsq = norm_sq(g);
  if (std::sqrt(gsq) <= std::max(cfg.eps_grad, kMinNormal)) return {LevelOutcome::Kind::Kept, ls.level};

  if (ls.window.empty()) {
    ls.window_start = k;
    ls.window_min_f = std::numeric_limits<double>::infinity();
  }
  ls.window.add_constraint({g, dot(g, z) - beta * gsq / cfg.gamma_bar, k});
  ls.window_min_f = std::min(ls.window_min_f, f_val);

  const FeasibilityVerdict verdict = ls.window.check_feasible();
  if (verdict.feasible) return {LevelOutcome::Kind::Kept, ls.level};

  const double ratio = cfg.gamma / cfg.gamma_bar;
  const double min_f = ls.window_min_f;
  ls.window.reset();
  ls.window_min_f = std::numeric_limits<double>::infinity();
  ls.window_start = k + 1;
  if (!(min_f > ls.level)) return {LevelOutcome::Kind::Reset, ls.level};
  ls.level = ratio * ls.level + (1.0 - ratio) * min_f;
  ++ls.update_count;
  return {LevelOutcome::Kind::Updated, ls.level};
}

}  // namespace dpsla
