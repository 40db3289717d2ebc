#include "dpsla/problem.hpp"

#include <cmath>
#include <numbers>

#include "dpsla/error.hpp"
#include "json.hpp"

namespace dpsla {

using nlohmann::json;

namespace {

void require_dim(std::size_t expected, const Vec& x, const char* op) {
  if (x.size() != expected)
    fail(ErrorCode::Dimension, std::string(op) + ": expected dimension " + std::to_string(expected) +
                                   ", got " + std::to_string(x.size()));
}

}  // namespace

QuadraticObjective::QuadraticObjective(LeastSquares ls) {
  if (ls.a.rows() == 0 || ls.a.cols() == 0) fail(ErrorCode::Dimension, "least-squares objective: empty A");
  if (ls.b.size() != ls.a.rows()) fail(ErrorCode::Dimension, "least-squares objective: b does not match rows of A");
  require_finite(ls.a, "least-squares A");
  require_finite(ls.b, "least-squares b");
  dim_ = ls.a.cols();
  hessian_ = matmul(ls.a.transpose(), ls.a);
  form_ = std::move(ls);
}

QuadraticObjective::QuadraticObjective(GeneralQuadratic gq) {
  const std::size_t m = gq.q_mat.rows();
  if (m == 0 || gq.q_mat.cols() != m) fail(ErrorCode::Dimension, "quadratic objective: Q must be square");
  if (gq.q.size() != m) fail(ErrorCode::Dimension, "quadratic objective: q does not match Q");
  require_finite(gq.q_mat, "quadratic Q");
  require_finite(gq.q, "quadratic q");
  if (!std::isfinite(gq.c)) fail(ErrorCode::Numeric, "quadratic objective: non-finite constant");
  dim_ = m;
  hessian_ = gq.q_mat + gq.q_mat.transpose();
  // xᵀQx only sees the symmetric part; convexity needs it PSD.
  const auto ev = symmetric_eigenvalues(hessian_);
  if (ev.front() < -2e-10) fail(ErrorCode::InvalidArgument, "quadratic objective is not convex");
  form_ = std::move(gq);
}

double QuadraticObjective::eval(const Vec& x) const {
  require_dim(dim_, x, "eval");
  if (const auto* ls = std::get_if<LeastSquares>(&form_)) {
    const Vec r = matvec(ls->a, x) - ls->b;
    return 0.5 * norm_sq(r);
  }
  const auto& gq = std::get<GeneralQuadratic>(form_);
  return dot(x, matvec(gq.q_mat, x)) + dot(gq.q, x) + gq.c;
}

Vec QuadraticObjective::grad(const Vec& x) const {
  require_dim(dim_, x, "grad");
  if (const auto* ls = std::get_if<LeastSquares>(&form_)) {
    return matvec_transposed(ls->a, matvec(ls->a, x) - ls->b);
  }
  const auto& gq = std::get<GeneralQuadratic>(form_);
  return matvec(hessian_, x) + gq.q;
}

ConstraintSet::ConstraintSet(Box box) {
  if (box.lower.empty() || box.lower.size() != box.upper.size())
    fail(ErrorCode::Dimension, "box: lower and upper must be nonempty and of equal dimension");
  require_finite(box.lower, "box lower");
  require_finite(box.upper, "box upper");
  for (std::size_t j = 0; j < box.lower.size(); ++j)
    if (!(box.lower[j] < box.upper[j])) fail(ErrorCode::InvalidArgument, "box: lower must be below upper");
  shape_ = std::move(box);
}

ConstraintSet::ConstraintSet(Ball ball) {
  if (ball.center.empty()) fail(ErrorCode::Dimension, "ball: empty center");
  require_finite(ball.center, "ball center");
  if (!(ball.radius > 0.0) || !std::isfinite(ball.radius))
    fail(ErrorCode::InvalidArgument, "ball: radius must be positive");
  shape_ = std::move(ball);
}

std::size_t ConstraintSet::dim() const noexcept {
  return std::visit([](const auto& s) {
    if constexpr (std::is_same_v<std::decay_t<decltype(s)>, Box>) return s.lower.size();
    else return s.center.size();
  }, shape_);
}

Vec ConstraintSet::project(const Vec& y) const {
  require_dim(dim(), y, "project");
  if (const auto* box = std::get_if<Box>(&shape_)) {
    Vec x = y;
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = std::clamp(x[j], box->lower[j], box->upper[j]);
    return x;
  }
  const auto& ball = std::get<Ball>(shape_);
  const Vec d = y - ball.center;
  const double r = norm(d);
  if (r <= ball.radius) return y;
  double t = ball.radius / r;
  Vec x = ball.center + t * d;
  while (norm(x - ball.center) > ball.radius) {
    t = std::nextafter(t, 0.0);
    x = ball.center + t * d;
  }
  return x;
}

bool ConstraintSet::contains(const Vec& x, double tol) const {
  require_dim(dim(), x, "contains");
  if (const auto* box = std::get_if<Box>(&shape_)) {
    for (std::size_t j = 0; j < x.size(); ++j)
      if (x[j] < box->lower[j] - tol || x[j] > box->upper[j] + tol) return false;
    return true;
  }
  const auto& ball = std::get<Ball>(shape_);
  return norm(x - ball.center) <= ball.radius + tol;
}

Vec ConstraintSet::center() const {
  if (const auto* box = std::get_if<Box>(&shape_)) return 0.5 * (box->lower + box->upper);
  return std::get<Ball>(shape_).center;
}

Box ConstraintSet::bounding_box() const {
  if (const auto* box = std::get_if<Box>(&shape_)) return *box;
  const auto& ball = std::get<Ball>(shape_);
  Vec lo = ball.center, hi = ball.center;
  for (std::size_t j = 0; j < lo.size(); ++j) {
    lo[j] -= ball.radius;
    hi[j] += ball.radius;
  }
  return {lo, hi};
}

void ProblemInstance::validate() const {
  if (objectives.empty()) fail(ErrorCode::InvalidArgument, "instance has no agents");
  if (objectives.size() != graph.n_agents())
    fail(ErrorCode::Dimension, "instance: number of objectives does not match the graph");
  for (const auto& o : objectives)
    if (o.dim() != constraint.dim()) fail(ErrorCode::Dimension, "instance: objective dimension does not match the constraint set");
}

double ProblemInstance::total(const Vec& x) const {
  double s = 0.0;
  for (const auto& o : objectives) s += o.eval(x);
  return s;
}

Vec ProblemInstance::total_grad(const Vec& x) const {
  Vec g(dim());
  for (const auto& o : objectives) g += o.grad(x);
  return g;
}

ProblemInstance gen_paper_instance(std::size_t n, std::size_t dim, std::size_t rows_per_agent, Rng& rng,
                                   GraphSpec graph) {
  if (n < 2) fail(ErrorCode::InvalidArgument, "gen_paper_instance: need at least 2 agents");
  if (dim < 1 || rows_per_agent < 1) fail(ErrorCode::InvalidArgument, "gen_paper_instance: dim and rows must be positive");

  std::vector<LeastSquares> data;
  data.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    LeastSquares ls{Mat(rows_per_agent, dim), Vec(rows_per_agent)};
    for (std::size_t r = 0; r < rows_per_agent; ++r)
      for (std::size_t c = 0; c < dim; ++c) ls.a(r, c) = rng.uniform(0.0, 0.1);
    for (std::size_t r = 0; r < rows_per_agent; ++r) ls.b[r] = rng.uniform(0.0, 5.0);
    data.push_back(std::move(ls));
  }

  // Unconstrained minimizer of Σ f_i, with a tiny ridge for degenerate draws.
  Mat normal(dim, dim);
  Vec rhs(dim);
  for (const auto& ls : data) {
    normal = normal + matmul(ls.a.transpose(), ls.a);
    rhs += matvec_transposed(ls.a, ls.b);
  }
  for (std::size_t j = 0; j < dim; ++j) normal(j, j) += 1e-10;
  Vec theta_unc;
  try {
    theta_unc = solve_spd(normal, rhs);
  } catch (const Error& e) {
    fail(ErrorCode::Numeric, std::string("gen_paper_instance: singular aggregate system: ") + e.what());
  }

  Box box{Vec(dim), Vec(dim)};
  for (std::size_t j = 0; j < dim; ++j) {
    const double shift = 10.0 * std::sin(static_cast<double>(j + 1) * std::numbers::pi / 120.0);
    box.lower[j] = theta_unc[j] + 10.0 + shift;
    box.upper[j] = theta_unc[j] + 20.0 + shift;
  }

  std::vector<QuadraticObjective> objectives;
  objectives.reserve(n);
  for (auto& ls : data) objectives.emplace_back(std::move(ls));

  ProblemInstance inst{std::move(objectives), ConstraintSet(std::move(box)),
                       build_graph(graph.kind, n, graph.edge_prob, rng), std::nullopt};
  inst.validate();
  return inst;
}

ProblemInstance gen_triangle_demo() {
  std::vector<QuadraticObjective> objs;
  // f1 = 2x1² + 3x2² + x1x2 − 4x1 − 2x2
  objs.emplace_back(GeneralQuadratic{Mat{{2.0, 0.5}, {0.5, 3.0}}, Vec{-4.0, -2.0}, 0.0});
  // f2 = x1² + 4x2² − 2x1x2 + 3x1 − x2
  objs.emplace_back(GeneralQuadratic{Mat{{1.0, -1.0}, {-1.0, 4.0}}, Vec{3.0, -1.0}, 0.0});
  // f3 = 3x1² + 2x2² + x1 − 3x2 + 2
  objs.emplace_back(GeneralQuadratic{Mat{{3.0, 0.0}, {0.0, 2.0}}, Vec{1.0, -3.0}, 2.0});
  Rng unused(0);
  ProblemInstance inst{std::move(objs), ConstraintSet(Ball{Vec{0.0, 0.0}, 4.0}),
                       build_graph(GraphKind::Triangle, 3, 1.0, unused), std::nullopt};
  inst.validate();
  return inst;
}

namespace {

struct PgResult {
  Vec x;
  double residual;
  long iterations;
};

template <typename GradFn>
PgResult projected_gradient(const Mat& hessian, const ConstraintSet& cs, GradFn grad, double tol) {
  if (!(tol > 0.0)) fail(ErrorCode::InvalidArgument, "solver tolerance must be positive");
  constexpr long kMaxIter = 1'000'000;
  const double lmax = power_iteration(hessian);
  // A zero Hessian means a linear objective; any positive step is safe.
  const double step = lmax > 0.0 ? 1.0 / lmax : 1.0;
  Vec x = cs.center();
  for (long it = 0; it <= kMaxIter; ++it) {
    Vec next = cs.project(x - step * grad(x));
    const double res = norm(x - next);
    if (res <= tol) return {x, res, it};
    x = std::move(next);
  }
  fail(ErrorCode::Solver, "reference solver did not reach tolerance within 1e6 iterations");
}

}  // namespace

OracleResult solve_reference(const ProblemInstance& inst, double tol) {
  inst.validate();
  Mat h(inst.dim(), inst.dim());
  for (const auto& o : inst.objectives) h = h + o.hessian();
  auto pg = projected_gradient(h, inst.constraint, [&](const Vec& x) { return inst.total_grad(x); }, tol);
  OracleResult out;
  out.x_star = std::move(pg.x);
  out.kkt_residual = pg.residual;
  out.iterations = pg.iterations;
  for (const auto& o : inst.objectives) out.local_values.push_back(o.eval(out.x_star));
  out.f_star = inst.total(out.x_star);
  return out;
}

Vec solve_local(const QuadraticObjective& obj, const ConstraintSet& cs, double tol) {
  return projected_gradient(obj.hessian(), cs, [&](const Vec& x) { return obj.grad(x); }, tol).x;
}

const OracleResult& ensure_oracle(ProblemInstance& inst, double tol) {
  if (!inst.optimum) inst.optimum = solve_reference(inst, tol);
  return *inst.optimum;
}

// --- JSON ------------------------------------------------------------------

namespace {

json mat_to_json(const Mat& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return rows;
}

Mat mat_from_json(const json& j) {
  if (!j.is_array() || j.empty()) fail(ErrorCode::Config, "instance JSON: matrix must be a nonempty array of rows");
  const std::size_t cols = j.at(0).size();
  Mat m(j.size(), cols);
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols) fail(ErrorCode::Config, "instance JSON: ragged matrix");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = j[r][c].get<double>();
  }
  return m;
}

Vec vec_from_json(const json& j) { return Vec(j.get<std::vector<double>>()); }

}  // namespace

std::string instance_to_json(const ProblemInstance& inst) {
  json doc;
  json objs = json::array();
  for (const auto& o : inst.objectives) {
    if (const auto* ls = std::get_if<LeastSquares>(&o.form())) {
      objs.push_back({{"kind", "least_squares"}, {"A", mat_to_json(ls->a)}, {"b", ls->b.values()}});
    } else {
      const auto& gq = std::get<GeneralQuadratic>(o.form());
      objs.push_back({{"kind", "quadratic"}, {"Q", mat_to_json(gq.q_mat)}, {"q", gq.q.values()}, {"c", gq.c}});
    }
  }
  doc["objectives"] = std::move(objs);
  if (const auto* box = std::get_if<Box>(&inst.constraint.shape())) {
    doc["constraint"] = {{"kind", "box"}, {"lower", box->lower.values()}, {"upper", box->upper.values()}};
  } else {
    const auto& ball = std::get<Ball>(inst.constraint.shape());
    doc["constraint"] = {{"kind", "ball"}, {"center", ball.center.values()}, {"radius", ball.radius}};
  }
  json edges = json::array();
  for (auto [i, j] : inst.graph.edges()) edges.push_back({i, j});
  doc["graph"] = {{"n_agents", inst.graph.n_agents()}, {"edges", std::move(edges)}};
  return doc.dump(2);
}

ProblemInstance instance_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::Config, std::string("instance JSON: ") + e.what());
  }
  try {
    std::vector<QuadraticObjective> objs;
    for (const auto& o : doc.at("objectives")) {
      const auto kind = o.at("kind").get<std::string>();
      if (kind == "least_squares") {
        objs.emplace_back(LeastSquares{mat_from_json(o.at("A")), vec_from_json(o.at("b"))});
      } else if (kind == "quadratic") {
        objs.emplace_back(GeneralQuadratic{mat_from_json(o.at("Q")), vec_from_json(o.at("q")), o.at("c").get<double>()});
      } else {
        fail(ErrorCode::Config, "instance JSON: unknown objective kind '" + kind + "'");
      }
    }
    const auto& c = doc.at("constraint");
    const auto ckind = c.at("kind").get<std::string>();
    std::optional<ConstraintSet> cs;
    if (ckind == "box") cs.emplace(Box{vec_from_json(c.at("lower")), vec_from_json(c.at("upper"))});
    else if (ckind == "ball") cs.emplace(Ball{vec_from_json(c.at("center")), c.at("radius").get<double>()});
    else fail(ErrorCode::Config, "instance JSON: unknown constraint kind '" + ckind + "'");
    std::vector<Graph::Edge> edges;
    for (const auto& e : doc.at("graph").at("edges")) edges.emplace_back(e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>());
    ProblemInstance inst{std::move(objs), std::move(*cs),
                         Graph(doc.at("graph").at("n_agents").get<std::size_t>(), std::move(edges)), std::nullopt};
    inst.validate();
    return inst;
  } catch (const json::exception& e) {
    fail(ErrorCode::Config, std::string("instance JSON: ") + e.what());
  }
}

}  // namespace dpsla
