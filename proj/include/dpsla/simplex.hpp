#pragma once

#include <vector>

#include "dpsla/numerics.hpp"

namespace dpsla {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  double value = 0.0;
  Vec x;
  long pivots = 0;
};

/// maximize cᵀx subject to Ax ≤ b, x ≥ 0.
///
/// Dense two-phase simplex in dictionary form: only the nonbasic columns are
/// stored, so a pivot costs O(rows × cols) even when rows ≫ cols. Phase one
/// adds a single auxiliary variable when b has negative entries. Bland's rule
/// picks both the entering and the leaving variable, so the method cannot
/// cycle. Throws ErrorCode::Solver if more than max_pivots pivots are needed.
LpResult simplex_maximize(const Mat& a, const Vec& b, const Vec& c, long max_pivots);

}  // namespace dpsla
