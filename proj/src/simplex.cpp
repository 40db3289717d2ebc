#include "dpsla/simplex.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include "dpsla/error.hpp"

namespace dpsla {

namespace {

constexpr double kPivotEps = 1e-11;
constexpr double kCostEps = 1e-12;

// x_basis[r] = rhs[r] + Σ_j coef(r, j) · x_nonbasic[j]
// z          = obj0   + Σ_j obj[j]     · x_nonbasic[j]
class Dictionary {
 public:
  Dictionary(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), coef_(rows * cols, 0.0), rhs_(rows, 0.0), obj_(cols, 0.0),
        basis_(rows), nonbasic_(cols) {}

  double& coef(std::size_t r, std::size_t j) { return coef_[r * cols_ + j]; }
  double coef(std::size_t r, std::size_t j) const { return coef_[r * cols_ + j]; }

  std::size_t rows_, cols_;
  std::vector<double> coef_;
  std::vector<double> rhs_;
  std::vector<double> obj_;
  double obj0_ = 0.0;
  std::vector<std::size_t> basis_;     // variable id per row
  std::vector<std::size_t> nonbasic_;  // variable id per column

  void pivot(std::size_t r, std::size_t j) {
    const double p = coef(r, j);
    // Solve row r for the entering variable.
    const double inv = 1.0 / p;
    for (std::size_t k = 0; k < cols_; ++k) coef(r, k) = (k == j) ? inv : -coef(r, k) * inv;
    rhs_[r] = -rhs_[r] * inv;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == r) continue;
      const double a = coef(i, j);
      if (a == 0.0) continue;
      for (std::size_t k = 0; k < cols_; ++k) {
        if (k == j) coef(i, k) = a * coef(r, k);
        else coef(i, k) += a * coef(r, k);
      }
      rhs_[i] += a * rhs_[r];
      if (std::abs(rhs_[i]) < 1e-14) rhs_[i] = 0.0;
    }
    const double a = obj_[j];
    if (a != 0.0) {
      for (std::size_t k = 0; k < cols_; ++k) {
        if (k == j) obj_[k] = a * coef(r, k);
        else obj_[k] += a * coef(r, k);
      }
      obj0_ += a * rhs_[r];
    }
    std::swap(basis_[r], nonbasic_[j]);
  }

  // Bland's rule: lowest-index improving column; ratio-test ties go to the
  // lowest-index basic variable.
  std::optional<std::size_t> entering() const {
    std::optional<std::size_t> best;
    for (std::size_t j = 0; j < cols_; ++j) {
      if (obj_[j] > kCostEps && (!best || nonbasic_[j] < nonbasic_[*best])) best = j;
    }
    return best;
  }

  std::optional<std::size_t> leaving(std::size_t j) const {
    std::optional<std::size_t> best;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < rows_; ++r) {
      const double a = coef(r, j);
      if (a >= -kPivotEps) continue;
      const double ratio = std::max(rhs_[r], 0.0) / -a;
      if (!best || ratio < best_ratio - 1e-15 ||
          (std::abs(ratio - best_ratio) <= 1e-15 && basis_[r] < basis_[*best])) {
        best = r;
        best_ratio = ratio;
      }
    }
    return best;
  }

  // Returns false when unbounded.
  bool optimize(long& pivots, long max_pivots) {
    while (auto j = entering()) {
      auto r = leaving(*j);
      if (!r) return false;
      if (++pivots > max_pivots) fail(ErrorCode::Solver, "simplex: pivot limit exceeded");
      pivot(*r, *j);
    }
    return true;
  }
};

}  // namespace

LpResult simplex_maximize(const Mat& a, const Vec& b, const Vec& c, long max_pivots) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (b.size() != m || c.size() != n) fail(ErrorCode::Dimension, "simplex: inconsistent problem shape");

  // Variable ids: 0..n-1 structural, n..n+m-1 slacks, n+m auxiliary.
  const std::size_t aux = n + m;
  bool need_phase1 = false;
  for (std::size_t i = 0; i < m; ++i) need_phase1 |= b[i] < 0.0;

  const std::size_t cols = n + (need_phase1 ? 1 : 0);
  Dictionary d(m, cols);
  for (std::size_t j = 0; j < n; ++j) d.nonbasic_[j] = j;
  if (need_phase1) d.nonbasic_[n] = aux;
  for (std::size_t i = 0; i < m; ++i) {
    d.basis_[i] = n + i;
    d.rhs_[i] = b[i];
    for (std::size_t j = 0; j < n; ++j) d.coef(i, j) = -a(i, j);
    if (need_phase1) d.coef(i, n) = 1.0;
  }

  LpResult result;
  if (need_phase1) {
    // Phase one: maximize −x_aux. Entering x_aux at the most negative row
    // makes the dictionary feasible in one pivot.
    d.obj_.assign(cols, 0.0);
    d.obj_[n] = -1.0;
    std::size_t worst = 0;
    for (std::size_t i = 1; i < m; ++i)
      if (b[i] < b[worst]) worst = i;
    d.pivot(worst, n);
    ++result.pivots;
    if (!d.optimize(result.pivots, max_pivots))
      fail(ErrorCode::Solver, "simplex: phase one reported unbounded");
    if (d.obj0_ < -1e-9) {
      result.status = LpStatus::Infeasible;
      return result;
    }
    // Drive the auxiliary variable out of the basis if it sits there at zero.
    for (std::size_t r = 0; r < m; ++r) {
      if (d.basis_[r] != aux) continue;
      std::optional<std::size_t> col;
      for (std::size_t j = 0; j < cols; ++j)
        if (std::abs(d.coef(r, j)) > kPivotEps && (!col || std::abs(d.coef(r, j)) > std::abs(d.coef(r, *col)))) col = j;
      if (col) d.pivot(r, *col);
      break;
    }
    // Freeze x_aux at zero by zeroing its column.
    for (std::size_t j = 0; j < cols; ++j) {
      if (d.nonbasic_[j] != aux) continue;
      for (std::size_t r = 0; r < m; ++r) d.coef(r, j) = 0.0;
    }
  }

  // Phase two objective in terms of the current nonbasic variables.
  d.obj_.assign(cols, 0.0);
  d.obj0_ = 0.0;
  for (std::size_t j = 0; j < cols; ++j)
    if (d.nonbasic_[j] < n) d.obj_[j] += c[d.nonbasic_[j]];
  for (std::size_t r = 0; r < m; ++r) {
    const std::size_t v = d.basis_[r];
    if (v >= n) continue;
    d.obj0_ += c[v] * d.rhs_[r];
    for (std::size_t j = 0; j < cols; ++j) d.obj_[j] += c[v] * d.coef(r, j);
  }
  for (std::size_t j = 0; j < cols; ++j)
    if (d.nonbasic_[j] == aux) d.obj_[j] = 0.0;

  if (!d.optimize(result.pivots, max_pivots)) {
    result.status = LpStatus::Unbounded;
    return result;
  }

  result.status = LpStatus::Optimal;
  result.x = Vec(n);
  for (std::size_t r = 0; r < m; ++r)
    if (d.basis_[r] < n) result.x[d.basis_[r]] = std::max(d.rhs_[r], 0.0);
  double value = 0.0;
  for (std::size_t j = 0; j < n; ++j) value += c[j] * result.x[j];
  result.value = value;
  return result;
}

}  // namespace dpsla
