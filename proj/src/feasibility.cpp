#include "dpsla/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dpsla/error.hpp"
#include "dpsla/simplex.hpp"

namespace dpsla {

InequalitySystem::InequalitySystem(std::size_t dim, std::optional<Box> domain, std::optional<std::size_t> cap)
    : dim_(dim), domain_(std::move(domain)), cap_(cap) {
  if (dim_ == 0) fail(ErrorCode::Dimension, "inequality system: dimension must be positive");
  if (domain_ && (domain_->lower.size() != dim_ || domain_->upper.size() != dim_))
    fail(ErrorCode::Dimension, "inequality system: domain box has the wrong dimension");
  if (cap_ && *cap_ == 0) fail(ErrorCode::InvalidArgument, "inequality system: window cap must be positive");
}

void InequalitySystem::add_constraint(HalfSpace h) {
  if (h.a.size() != dim_) fail(ErrorCode::Dimension, "add_constraint: normal has the wrong dimension");
  require_finite(h.a, "add_constraint");
  if (!std::isfinite(h.b)) fail(ErrorCode::Numeric, "add_constraint: non-finite right-hand side");
  if (norm(h.a) <= kMinNormal) fail(ErrorCode::InvalidArgument, "add_constraint: near-zero normal");
  if (witness_ && dot(h.a, *witness_) - h.b > kFeasTol) witness_.reset();
  constraints_.push_back(std::move(h));
  if (cap_ && constraints_.size() > *cap_) constraints_.pop_front();
}

void InequalitySystem::reset() {
  constraints_.clear();
  witness_.reset();
}

double InequalitySystem::max_violation(const Vec& x) const {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& h : constraints_) worst = std::max(worst, dot(h.a, x) - h.b);
  return worst;
}

FeasibilityVerdict InequalitySystem::check_feasible(bool force_lp) {
  if (constraints_.empty()) fail(ErrorCode::InvalidArgument, "check_feasible: system is empty");
  if (witness_ && !force_lp) {
    return {true, witness_, std::max(max_violation(*witness_), -1.0), false};
  }
  return solve_phase1();
}

// minimize s  subject to  a_tᵀx − s ≤ b_t,  s ≥ −1,  x ∈ domain (or free).
//
// Standard form for the simplex: s = σ − 1 with σ ≥ 0; a free x is split as
// x⁺ − x⁻; a boxed x is shifted to y = x − lower with y ≤ upper − lower.
FeasibilityVerdict InequalitySystem::solve_phase1() {
  const std::size_t m = constraints_.size();
  const bool boxed = domain_.has_value();
  const std::size_t nx = boxed ? dim_ : 2 * dim_;
  const std::size_t n = nx + 1;
  const std::size_t rows = m + (boxed ? dim_ : 0);

  Mat a(rows, n);
  Vec b(rows);
  for (std::size_t t = 0; t < m; ++t) {
    const auto& h = constraints_[t];
    double rhs = h.b - 1.0;
    for (std::size_t j = 0; j < dim_; ++j) {
      if (boxed) {
        a(t, j) = h.a[j];
        rhs -= h.a[j] * domain_->lower[j];
      } else {
        a(t, j) = h.a[j];
        a(t, dim_ + j) = -h.a[j];
      }
    }
    a(t, nx) = -1.0;
    b[t] = rhs;
  }
  if (boxed) {
    for (std::size_t j = 0; j < dim_; ++j) {
      a(m + j, j) = 1.0;
      b[m + j] = domain_->upper[j] - domain_->lower[j];
    }
  }
  Vec c(n);
  c[nx] = -1.0;

  const long cap = 10'000L * static_cast<long>(m + dim_);
  const LpResult lp = simplex_maximize(a, b, c, cap);
  if (lp.status != LpStatus::Optimal)
    fail(ErrorCode::Solver, "phase-one LP did not reach an optimum");

  Vec x(dim_);
  for (std::size_t j = 0; j < dim_; ++j) {
    if (boxed) x[j] = std::clamp(domain_->lower[j] + lp.x[j], domain_->lower[j], domain_->upper[j]);
    else x[j] = lp.x[j] - lp.x[dim_ + j];
  }
  const double s_star = lp.x[nx] - 1.0;

  FeasibilityVerdict v;
  v.used_lp = true;
  v.phase1_value = s_star;
  v.feasible = s_star <= kFeasTol;
  if (v.feasible) {
    v.point = x;
    // Cache only if the reconstructed point really satisfies every row.
    if (max_violation(x) <= kFeasTol) witness_ = x;
    else witness_.reset();
  } else {
    witness_.reset();
  }
  return v;
}

std::string InequalitySystem::dump() const {
  std::ostringstream os;
  os.precision(17);
  for (const auto& h : constraints_) {
    for (std::size_t j = 0; j < h.a.size(); ++j) os << (j ? " " : "") << h.a[j];
    os << " | " << h.b << '\n';
  }
  return os.str();
}

}  // namespace dpsla
