#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>

#include "dpsla/numerics.hpp"
#include "dpsla/problem.hpp"

namespace dpsla {

/// Half-space aᵀx ≤ b recorded at iteration `iter`.
struct HalfSpace {
  Vec a;
  double b = 0.0;
  std::int64_t iter = 0;
};

struct FeasibilityVerdict {
  bool feasible = false;
  std::optional<Vec> point;
  /// Optimal Phase-I slack s* (largest violation at the best point). Bounded
  /// below by −1, so strictly feasible systems report −1 or slightly more.
  double phase1_value = 0.0;
  bool used_lp = false;
};

inline constexpr double kFeasTol = 1e-9;
inline constexpr double kMinNormal = 1e-12;

/// Accumulating system of linear inequalities with a cached witness point.
///
/// When a domain box is attached the Phase-I LP searches over that box
/// instead of all of Rᵐ. An optional cap drops the oldest constraint once the
/// window exceeds it.
class InequalitySystem {
 public:
  explicit InequalitySystem(std::size_t dim, std::optional<Box> domain = std::nullopt,
                            std::optional<std::size_t> cap = std::nullopt);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return constraints_.size(); }
  bool empty() const noexcept { return constraints_.empty(); }
  const std::deque<HalfSpace>& constraints() const noexcept { return constraints_; }
  const std::optional<Vec>& witness() const noexcept { return witness_; }
  const std::optional<Box>& domain() const noexcept { return domain_; }

  void add_constraint(HalfSpace h);
  /// Skips the LP when the cached witness still satisfies everything, unless
  /// force_lp is set.
  FeasibilityVerdict check_feasible(bool force_lp = false);
  void reset();

  /// One row per constraint: "a_1 ... a_m | b".
  std::string dump() const;

 private:
  double max_violation(const Vec& x) const;
  FeasibilityVerdict solve_phase1();

  std::size_t dim_;
  std::optional<Box> domain_;
  std::optional<std::size_t> cap_;
  std::deque<HalfSpace> constraints_;
  std::optional<Vec> witness_;
};

}  // namespace dpsla
