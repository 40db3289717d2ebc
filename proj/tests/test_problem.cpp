#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dpsla/error.hpp"
#include "dpsla/problem.hpp"
#include "oracles.hpp"

using namespace dpsla;

namespace {

Vec random_vec(Rng& rng, std::size_t n, double lo, double hi) {
  Vec v(n);
  for (auto& x : v) x = rng.uniform(lo, hi);
  return v;
}

Vec random_feasible(Rng& rng, const ConstraintSet& cs) {
  const Box bb = cs.bounding_box();
  Vec x(cs.dim());
  for (std::size_t j = 0; j < x.size(); ++j) x[j] = rng.uniform(bb.lower[j], bb.upper[j]);
  return cs.project(x);
}

}  // namespace

TEST_CASE("least-squares objective") {
  const QuadraticObjective f(LeastSquares{Mat::identity(2), Vec{1, 2}});
  CHECK(f.eval(Vec{0, 0}) == 2.5);
  CHECK(f.grad(Vec{0, 0}) == Vec{-1, -2});
  CHECK(f.eval(Vec{1, 2}) == 0.0);
  CHECK(f.grad(Vec{1, 2}) == Vec{0, 0});
  CHECK_THROWS_AS(f.eval(Vec{1, 2, 3}), Error);
  CHECK_THROWS_AS(QuadraticObjective(LeastSquares{Mat(2, 3), Vec{1}}), Error);
}

TEST_CASE("general quadratic objective") {
  const ProblemInstance tri = gen_triangle_demo();
  CHECK(tri.objectives[2].eval(Vec{0, 0}) == 2.0);
  CHECK(tri.objectives[0].grad(Vec{0, 0}) == Vec{-4, -2});
  CHECK(tri.objectives[0].hessian() == Mat{{4, 1}, {1, 6}});
  CHECK(tri.objectives[1].hessian() == Mat{{2, -2}, {-2, 8}});
  CHECK(tri.objectives[2].hessian() == Mat{{6, 0}, {0, 4}});
  for (const auto& o : tri.objectives) {
    const Mat& h = o.hessian();
    CHECK(h(0, 0) > 0.0);
    CHECK(h(0, 0) * h(1, 1) - h(0, 1) * h(1, 0) > 0.0);
  }
  // Q = [[1, 2], [2, 1]] has eigenvalue −1
  CHECK_THROWS_AS(QuadraticObjective(GeneralQuadratic{Mat{{1, 2}, {2, 1}}, Vec{0, 0}, 0.0}), Error);
  // asymmetric but PSD after symmetrization
  CHECK_NOTHROW(QuadraticObjective(GeneralQuadratic{Mat{{1, 3}, {-3, 1}}, Vec{0, 0}, 0.0}));
}

TEST_CASE("gradients match central differences") {
  Rng rng(21);
  std::vector<QuadraticObjective> objs;
  for (int t = 0; t < 10; ++t) {
    Mat a(3, 4);
    for (std::size_t r = 0; r < 3; ++r)
      for (std::size_t c = 0; c < 4; ++c) a(r, c) = rng.uniform(-1, 1);
    objs.emplace_back(LeastSquares{a, random_vec(rng, 3, -2, 2)});
    Mat m(4, 4);
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t c = 0; c < 4; ++c) m(r, c) = rng.uniform(-1, 1);
    objs.emplace_back(GeneralQuadratic{matmul(m.transpose(), m), random_vec(rng, 4, -3, 3), rng.uniform(-1, 1)});
  }
  for (const auto& o : objs) {
    for (int t = 0; t < 5; ++t) {
      const Vec x = random_vec(rng, 4, -5, 5);
      const auto fd = oracle::fd_gradient([&](const std::vector<double>& p) { return o.eval(Vec(p)); }, x.values());
      const Vec g = o.grad(x);
      for (std::size_t j = 0; j < 4; ++j) CHECK(std::abs(g[j] - fd[j]) <= 1e-6 * (1.0 + std::abs(fd[j])));
    }
  }
}

TEST_CASE("projection") {
  const ConstraintSet box(Box{Vec{0, 0}, Vec{1, 1}});
  CHECK(box.project(Vec{5, -1}) == Vec{1, 0});
  CHECK(box.project(Vec{0.3, 0.7}) == Vec{0.3, 0.7});
  const ConstraintSet ball(Ball{Vec{0, 0}, 4.0});
  CHECK(ball.project(Vec{8, 0}) == Vec{4, 0});
  CHECK(ball.project(Vec{1, 1}) == Vec{1, 1});
  CHECK_THROWS_AS(box.project(Vec{1}), Error);
  CHECK_THROWS_AS(ConstraintSet(Box{Vec{0, 1}, Vec{1, 1}}), Error);
  CHECK_THROWS_AS(ConstraintSet(Ball{Vec{0, 0}, 0.0}), Error);
}

TEST_CASE("projection is idempotent and non-expansive") {
  Rng rng(8);
  const std::vector<ConstraintSet> sets{ConstraintSet(Box{Vec{-1, 0, 2}, Vec{1, 3, 2.5}}),
                                        ConstraintSet(Ball{Vec{1, -1, 0.5}, 2.0})};
  for (const auto& cs : sets) {
    for (int t = 0; t < 200; ++t) {
      const Vec u = random_vec(rng, 3, -10, 10);
      const Vec v = random_vec(rng, 3, -10, 10);
      const Vec pu = cs.project(u);
      CHECK(cs.project(pu) == pu);
      CHECK(cs.contains(pu));
      CHECK(norm(pu - cs.project(v)) <= norm(u - v) + 1e-12);
    }
  }
}

TEST_CASE("paper-style instance") {
  Rng rng(1);
  const ProblemInstance inst = gen_paper_instance(4, 6, 2, rng);
  CHECK(inst.n_agents() == 4);
  CHECK(inst.dim() == 6);
  const auto& box = std::get<Box>(inst.constraint.shape());
  for (std::size_t j = 0; j < 6; ++j) CHECK(box.upper[j] - box.lower[j] == doctest::Approx(10.0).epsilon(1e-12));
  for (const auto& o : inst.objectives) {
    const auto& ls = std::get<LeastSquares>(o.form());
    CHECK(ls.a.rows() == 2);
    for (std::size_t r = 0; r < 2; ++r) {
      for (double v : ls.a.row(r)) {
        CHECK(v >= 0.0);
        CHECK(v < 0.1);
      }
      CHECK(ls.b[r] >= 0.0);
      CHECK(ls.b[r] < 5.0);
    }
  }

  // lower bound offset 10 + 10 sin(π/120) for the first coordinate
  CHECK(10.0 + 10.0 * std::sin(std::numbers::pi / 120.0) == doctest::Approx(10.26177).epsilon(1e-6));

  Rng again(1);
  CHECK(instance_to_json(gen_paper_instance(4, 6, 2, again)) == instance_to_json(inst));
  CHECK_THROWS_AS(gen_paper_instance(1, 6, 2, rng), Error);
}

TEST_CASE("triangle oracle") {
  ProblemInstance tri = gen_triangle_demo();
  const OracleResult& o = ensure_oracle(tri);
  CHECK(std::abs(o.x_star[0] - 6.0 / 215.0) <= 1e-8);
  CHECK(std::abs(o.x_star[1] - 72.0 / 215.0) <= 1e-8);
  CHECK(norm(o.x_star) < 4.0);
  CHECK(o.kkt_residual <= 1e-9);
  double sum = 0.0;
  for (double v : o.local_values) sum += v;
  CHECK(sum == doctest::Approx(o.f_star));
}

TEST_CASE("interior box optimum is the unconstrained minimizer") {
  const QuadraticObjective f(LeastSquares{Mat{{2, 0}, {0, 1}}, Vec{2, 3}});
  ProblemInstance inst{{f, f}, ConstraintSet(Box{Vec{-10, -10}, Vec{10, 10}}), Graph(2, {{0, 1}}), std::nullopt};
  const OracleResult& o = ensure_oracle(inst);
  CHECK(o.x_star[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(o.x_star[1] == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("oracle satisfies first-order optimality") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Rng rng(seed);
    ProblemInstance inst = gen_paper_instance(4, 6, 2, rng);
    const OracleResult& o = ensure_oracle(inst);
    CHECK(inst.constraint.contains(o.x_star));
    CHECK(o.kkt_residual <= 1e-9);
    const Vec g = inst.total_grad(o.x_star);
    for (int t = 0; t < 100; ++t) CHECK(dot(g, random_feasible(rng, inst.constraint) - o.x_star) >= -1e-8);

    // optimum sits on the boundary of the shifted box
    const auto& box = std::get<Box>(inst.constraint.shape());
    bool active = false;
    for (std::size_t j = 0; j < 6; ++j)
      active |= std::abs(o.x_star[j] - box.lower[j]) <= 1e-9 || std::abs(o.x_star[j] - box.upper[j]) <= 1e-9;
    CHECK(active);
  }
}

TEST_CASE("local solve") {
  const ProblemInstance tri = gen_triangle_demo();
  const Vec x = solve_local(tri.objectives[0], tri.constraint);
  CHECK(x[0] == doctest::Approx(22.0 / 23.0).epsilon(1e-9));
  CHECK(x[1] == doctest::Approx(4.0 / 23.0).epsilon(1e-9));
}

TEST_CASE("instance JSON round trip") {
  Rng rng(4);
  ProblemInstance inst = gen_paper_instance(5, 3, 2, rng);
  const std::string text = instance_to_json(inst);
  const ProblemInstance back = instance_from_json(text);
  CHECK(instance_to_json(back) == text);
  CHECK(back.graph.edges() == inst.graph.edges());
  const Vec x{1.5, -2.0, 0.25};
  for (std::size_t i = 0; i < inst.n_agents(); ++i) CHECK(back.objectives[i].eval(x) == inst.objectives[i].eval(x));

  const ProblemInstance tri = gen_triangle_demo();
  CHECK(instance_to_json(instance_from_json(instance_to_json(tri))) == instance_to_json(tri));

  CHECK_THROWS_AS(instance_from_json("{"), Error);
  CHECK_THROWS_AS(instance_from_json(R"({"objectives":[],"constraint":{"kind":"box"}})"), Error);
}
