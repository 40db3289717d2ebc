#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dpsla/engine.hpp"
#include "dpsla/error.hpp"
#include "dpsla/metrics.hpp"

using namespace dpsla;

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  return out;
}

}  // namespace

TEST_CASE("residual") {
  ProblemInstance tri = gen_triangle_demo();
  CHECK_THROWS_AS(residual(tri, {Vec{0, 0}}), Error);
  const OracleResult& o = ensure_oracle(tri);
  CHECK(std::abs(residual(tri, {o.x_star, o.x_star, o.x_star})) <= 1e-9);
  CHECK(residual(tri, {Vec{0, 0}, Vec{0, 0}, Vec{0, 0}}) == doctest::Approx(2.0 - o.f_star));
  CHECK(residual(tri, {Vec{0, 0}, Vec{0, 0}, Vec{0, 0}}, ResidualForm::Average) ==
        doctest::Approx((2.0 - o.f_star) / 3.0));

  Rng rng(3);
  for (int t = 0; t < 100; ++t) {
    std::vector<Vec> xs;
    for (int i = 0; i < 3; ++i) xs.push_back(tri.constraint.project(Vec{rng.uniform(-6, 6), rng.uniform(-6, 6)}));
    CHECK(residual(tri, xs) >= -1e-8);
  }
}

TEST_CASE("residual ignores objective constants") {
  ProblemInstance a = gen_triangle_demo();
  ProblemInstance b = gen_triangle_demo();
  const auto& gq = std::get<GeneralQuadratic>(b.objectives[1].form());
  b.objectives[1] = QuadraticObjective(GeneralQuadratic{gq.q_mat, gq.q, gq.c + 7.5});
  ensure_oracle(a);
  ensure_oracle(b);
  const std::vector<Vec> xs{Vec{1, 1}, Vec{-1, 2}, Vec{0.5, 0}};
  CHECK(residual(a, xs) == doctest::Approx(residual(b, xs)).epsilon(1e-12));
}

TEST_CASE("consensus error") {
  CHECK(consensus_error({Vec{1, 2}, Vec{1, 2}, Vec{1, 2}}) == 0.0);
  CHECK(consensus_error({Vec{0, 0}, Vec{2, 0}}) == 1.0);
  Rng rng(2);
  for (int t = 0; t < 50; ++t) {
    std::vector<Vec> xs, shifted;
    const Vec off{rng.uniform(-5, 5), rng.uniform(-5, 5)};
    for (int i = 0; i < 4; ++i) {
      xs.push_back(Vec{rng.uniform(-1, 1), rng.uniform(-1, 1)});
      shifted.push_back(xs.back() + off);
    }
    const double e = consensus_error(xs);
    CHECK(e > 0.0);
    CHECK(consensus_error(shifted) == doctest::Approx(e).epsilon(1e-12));
  }
  CHECK_THROWS_AS(consensus_error({}), Error);
}

TEST_CASE("format_real") {
  CHECK(format_real(0.1) == "0.10000000000000001");
  CHECK(format_real(2.0) == "2");
  CHECK(format_real(NAN) == "nan");
  CHECK(format_real(1e300) == "1000000000000");
  CHECK(format_real(-INFINITY) == "-1000000000000");
}

TEST_CASE("csv schema and round trip") {
  ProblemInstance inst = gen_triangle_demo();
  ensure_oracle(inst);
  RunOptions opts;
  opts.iterations = 3;
  const RunTrace t = run(inst, AlgorithmSpec::dpsla(), opts);
  const std::string csv = format_csv(t);
  std::stringstream ss(csv);
  std::string header;
  std::getline(ss, header);
  CHECK(header == "k,residual,consensus_error,alpha_0,alpha_1,alpha_2,level_0,level_1,level_2,diverged");
  CHECK(split(header, ',').size() == 3 + 2 * 3 + 1);

  std::string line;
  std::size_t row = 0;
  while (std::getline(ss, line)) {
    const auto cells = split(line, ',');
    REQUIRE(cells.size() == 10);
    const TraceRow& r = t.rows[row];
    CHECK(std::stoll(cells[0]) == r.k);
    CHECK(std::strtod(cells[1].c_str(), nullptr) == r.residual);
    CHECK(std::strtod(cells[2].c_str(), nullptr) == r.consensus_error);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(std::strtod(cells[3 + i].c_str(), nullptr) == r.alpha[i]);
      CHECK(std::strtod(cells[6 + i].c_str(), nullptr) == r.level[i]);
    }
    CHECK(cells[9] == "0");
    ++row;
  }
  CHECK(row == 4);
  CHECK(csv.back() == '\n');
  CHECK(format_csv(t) == csv);
}

TEST_CASE("level gap and stepsize csv") {
  Rng rng(1);
  ProblemInstance inst = gen_paper_instance(4, 6, 2, rng);
  ensure_oracle(inst);
  RunOptions opts;
  opts.iterations = 5;
  const RunTrace t = run(inst, AlgorithmSpec::dpsla(), opts);
  const auto rows = metric_rows(t);
  REQUIRE(rows.size() == 6);
  for (const auto& m : rows) {
    CHECK(m.consensus_error >= 0.0);
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(m.level_gap[i] == inst.optimum->local_values[i] - m.level[i]);
      CHECK(m.level_gap[i] >= -1e-6);
    }
  }
  const std::string gap = format_level_gap_csv(t);
  CHECK(gap.rfind("k,gap_0,gap_1,gap_2,gap_3\n0,", 0) == 0);
  const std::string step = format_stepsize_csv(t);
  CHECK(step.rfind("k,alpha_0,alpha_1,alpha_2,alpha_3\n0,2,2,2,2\n", 0) == 0);
}

TEST_CASE("write_csv") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "dpsla_metrics_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  ProblemInstance inst = gen_triangle_demo();
  ensure_oracle(inst);
  RunOptions opts;
  opts.iterations = 2;
  const RunTrace t = run(inst, AlgorithmSpec::dgd(), opts);
  const std::string path = (dir / "trace.csv").string();
  write_csv(t, path);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == format_csv(t));
  CHECK_FALSE(fs::exists(path + ".tmp"));
  CHECK_THROWS_AS(write_csv(t, (dir / "missing" / "trace.csv").string()), Error);
  fs::remove_all(dir);
}
