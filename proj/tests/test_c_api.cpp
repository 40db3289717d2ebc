#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "dpsla/dpsla.h"

TEST_CASE("problem handles") {
  dpsla_problem* p = nullptr;
  REQUIRE(dpsla_problem_triangle(&p) == DPSLA_OK);
  size_t n = 0, dim = 0;
  REQUIRE(dpsla_problem_dims(p, &n, &dim) == DPSLA_OK);
  CHECK(n == 3);
  CHECK(dim == 2);

  double f_star = 0.0;
  double x[2];
  REQUIRE(dpsla_problem_solve_oracle(p, &f_star, x) == DPSLA_OK);
  CHECK(x[0] == doctest::Approx(6.0 / 215.0).epsilon(1e-8));
  CHECK(x[1] == doctest::Approx(72.0 / 215.0).epsilon(1e-8));

  char* edges = nullptr;
  REQUIRE(dpsla_problem_edge_list(p, &edges) == DPSLA_OK);
  CHECK(std::string(edges) == "0 1\n0 2\n1 2\n");
  dpsla_string_free(edges);

  char* json = nullptr;
  REQUIRE(dpsla_problem_to_json(p, &json) == DPSLA_OK);
  dpsla_problem* q = nullptr;
  REQUIRE(dpsla_problem_from_json(json, &q) == DPSLA_OK);
  char* json2 = nullptr;
  REQUIRE(dpsla_problem_to_json(q, &json2) == DPSLA_OK);
  CHECK(std::strcmp(json, json2) == 0);
  dpsla_string_free(json);
  dpsla_string_free(json2);
  dpsla_problem_free(q);
  dpsla_problem_free(p);
}

TEST_CASE("runs and traces") {
  dpsla_problem* p = nullptr;
  REQUIRE(dpsla_problem_from_config(R"({"problem":{"seed":3}})", &p) == DPSLA_OK);
  dpsla_trace* t = nullptr;
  REQUIRE(dpsla_run(p, R"({"run":{"iterations":25}})", &t) == DPSLA_OK);
  size_t rows = 0, n = 0;
  REQUIRE(dpsla_trace_size(t, &rows, &n) == DPSLA_OK);
  CHECK(rows == 26);
  CHECK(n == 4);

  int64_t k = -1;
  double res = 0, ce = 0;
  int div = -1;
  REQUIRE(dpsla_trace_row(t, 25, &k, &res, &ce, &div) == DPSLA_OK);
  CHECK(k == 25);
  CHECK(res >= -1e-8);
  CHECK(div == 0);

  std::vector<double> alpha(n), level(n);
  REQUIRE(dpsla_trace_agents(t, 0, alpha.data(), level.data()) == DPSLA_OK);
  CHECK(alpha == std::vector<double>(4, 2.0));
  CHECK(level == std::vector<double>(4, -500.0));

  int ok = 0;
  REQUIRE(dpsla_trace_invariants_ok(t, &ok) == DPSLA_OK);
  CHECK(ok == 1);

  char* csv = nullptr;
  REQUIRE(dpsla_trace_csv(t, &csv) == DPSLA_OK);
  CHECK(std::string(csv).rfind("k,residual,consensus_error,", 0) == 0);
  dpsla_string_free(csv);

  CHECK(dpsla_trace_row(t, 26, &k, &res, &ce, &div) == DPSLA_ERR_INVALID_ARGUMENT);
  CHECK(std::string(dpsla_last_error()).find("out of range") != std::string::npos);
  dpsla_trace_free(t);

  dpsla_trace* d = nullptr;
  REQUIRE(dpsla_run(p, nullptr, &d) == DPSLA_OK);
  dpsla_trace_free(d);
  dpsla_problem_free(p);
}

TEST_CASE("error codes") {
  dpsla_problem* p = nullptr;
  CHECK(dpsla_problem_from_config(R"({"algorithm":{"gamma_bar":2.5}})", &p) == DPSLA_ERR_CONFIG);
  CHECK(std::string(dpsla_last_error()).find("gamma_bar") != std::string::npos);
  CHECK(p == nullptr);
  CHECK(dpsla_problem_from_config(nullptr, &p) == DPSLA_ERR_INVALID_ARGUMENT);
  CHECK(dpsla_problem_from_json("{\"objectives\":", &p) == DPSLA_ERR_CONFIG);
  CHECK(dpsla_cmd_run("/nonexistent/config.json", nullptr) == DPSLA_ERR_IO);
  CHECK(dpsla_cmd_reproduce("fig9", nullptr, 1) == DPSLA_ERR_INVALID_ARGUMENT);
  REQUIRE(dpsla_problem_triangle(&p) == DPSLA_OK);
  CHECK(std::string(dpsla_last_error()).empty());
  dpsla_trace* t = nullptr;
  CHECK(dpsla_run(p, R"({"algorithm":{"level_init":[1,2]}})", &t) == DPSLA_ERR_CONFIG);
  dpsla_problem_free(p);
  dpsla_problem_free(nullptr);
  dpsla_trace_free(nullptr);
  CHECK(std::strlen(dpsla_version()) > 0);
}
