#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dpsla/numerics.hpp"
#include "dpsla/topology.hpp"

namespace dpsla {

/// f(θ) = ½‖Aθ − b‖²
struct LeastSquares {
  Mat a;
  Vec b;
};

/// f(x) = xᵀQx + qᵀx + c with Q PSD (not necessarily symmetric as stored).
struct GeneralQuadratic {
  Mat q_mat;
  Vec q;
  double c = 0.0;
};

/// Convex quadratic local objective. Construction validates shapes and
/// convexity.
class QuadraticObjective {
 public:
  explicit QuadraticObjective(LeastSquares ls);
  explicit QuadraticObjective(GeneralQuadratic gq);

  std::size_t dim() const noexcept { return dim_; }
  double eval(const Vec& x) const;
  Vec grad(const Vec& x) const;
  /// Constant Hessian: AᵀA or Q + Qᵀ.
  const Mat& hessian() const noexcept { return hessian_; }

  const std::variant<LeastSquares, GeneralQuadratic>& form() const noexcept { return form_; }

 private:
  std::variant<LeastSquares, GeneralQuadratic> form_;
  std::size_t dim_ = 0;
  Mat hessian_;
};

struct Box {
  Vec lower;
  Vec upper;
};

struct Ball {
  Vec center;
  double radius = 1.0;
};

/// Compact convex feasible set shared by all agents.
class ConstraintSet {
 public:
  explicit ConstraintSet(Box box);
  explicit ConstraintSet(Ball ball);

  std::size_t dim() const noexcept;
  Vec project(const Vec& y) const;
  bool contains(const Vec& x, double tol = 1e-12) const;
  Vec center() const;
  /// Smallest axis-aligned box containing the set.
  Box bounding_box() const;

  const std::variant<Box, Ball>& shape() const noexcept { return shape_; }

 private:
  std::variant<Box, Ball> shape_;
};

struct OracleResult {
  Vec x_star;
  double f_star = 0.0;  // Σ f_i(x*)
  std::vector<double> local_values;
  double kkt_residual = 0.0;
  long iterations = 0;
};

struct ProblemInstance {
  std::vector<QuadraticObjective> objectives;
  ConstraintSet constraint;
  Graph graph;
  std::optional<OracleResult> optimum;

  std::size_t n_agents() const noexcept { return objectives.size(); }
  std::size_t dim() const noexcept { return constraint.dim(); }

  /// Throws when objectives, constraint and graph disagree on sizes.
  void validate() const;
  double total(const Vec& x) const;
  Vec total_grad(const Vec& x) const;
};

struct GraphSpec {
  GraphKind kind = GraphKind::Random;
  double edge_prob = 0.5;
};

/// Random least-squares instance with a shifted box around the unconstrained
/// minimizer; the data, the box and the graph all come from `rng`.
ProblemInstance gen_paper_instance(std::size_t n, std::size_t dim, std::size_t rows_per_agent,
                                   Rng& rng, GraphSpec graph = {});

/// Three agents on a triangle with hand-written quadratics over ‖x‖ ≤ 4.
ProblemInstance gen_triangle_demo();

/// Projected gradient descent on Σ f_i with step 1/L until the fixed-point
/// residual ‖x − P(x − ∇F(x)/L)‖ drops to tol. Throws ErrorCode::Solver when
/// 10⁶ iterations are not enough.
OracleResult solve_reference(const ProblemInstance& inst, double tol = 1e-10);

/// Same solver applied to one objective over the shared constraint set.
Vec solve_local(const QuadraticObjective& obj, const ConstraintSet& cs, double tol = 1e-10);

/// Solves and caches the oracle if the instance has none yet.
const OracleResult& ensure_oracle(ProblemInstance& inst, double tol = 1e-10);

std::string instance_to_json(const ProblemInstance& inst);
ProblemInstance instance_from_json(const std::string& text);

}  // namespace dpsla
