#include <doctest.h>

#include <cmath>

#include "dpsla/error.hpp"
#include "dpsla/stepsize.hpp"
#include "oracles.hpp"

using namespace dpsla;

namespace {

StepsizeConfig unit_sqrt() {
  StepsizeConfig cfg;
  cfg.alpha0 = 1.0;
  cfg.c_schedule = {CSchedule::Kind::Sqrt, 1.0};
  return cfg;
}

}  // namespace

TEST_CASE("c schedule") {
  StepsizeConfig cfg;
  CHECK(c_value(cfg, 0) == 0.5);
  cfg.c_schedule.scale = 1.0;
  CHECK(c_value(cfg, 3) == 2.0);
  cfg.c_schedule = {CSchedule::Kind::Constant, 1.0};
  for (std::int64_t k : {0, 1, 10, 1000}) CHECK(c_value(cfg, k) == 1.0);
  StepsizeConfig s;
  for (std::int64_t k = 1; k < 1000; ++k) CHECK(c_value(s, k) >= c_value(s, k - 1));
}

TEST_CASE("config validation") {
  StepsizeConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.gamma_bar = 2.5;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = {};
  cfg.gamma = 1.5;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = {};
  cfg.gamma = 0.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = {};
  cfg.alpha0 = 0.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = {};
  cfg.c_schedule.scale = -1.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("raw beta") {
  StepsizeConfig cfg;
  CHECK(*raw_beta(cfg, 3.0, 1.0, 4.0) == 0.5);
  CHECK(*raw_beta(cfg, 2.0, 2.0, 4.0) == 0.0);
  CHECK(*raw_beta(cfg, 1.0, 2.0, 4.0) < 0.0);
  CHECK_FALSE(raw_beta(cfg, 3.0, 1.0, 0.0));
  CHECK_FALSE(raw_beta(cfg, 3.0, 1.0, 1e-25));

  // ½x² at x = 2 with level 0: one Polyak step halves x
  const double x = 2.0, g = x;
  const double beta = *raw_beta(cfg, 0.5 * x * x, 0.0, g * g);
  CHECK(beta == 0.5);
  CHECK(x - beta * g == 1.0);
}

TEST_CASE("decide alpha examples") {
  const StepsizeConfig cfg = unit_sqrt();
  StepsizeState st = StepsizeState::initial(cfg);
  CHECK(decide_alpha(cfg, st, 10.0, 0) == 1.0);
  CHECK(st.prev_alpha == 1.0);
  CHECK(st.prev_c == 1.0);

  st = StepsizeState::initial(cfg);
  CHECK(decide_alpha(cfg, st, 0.1, 0) == 0.5);

  st = StepsizeState::initial(cfg);
  CHECK(decide_alpha(cfg, st, std::nullopt, 0) == 0.5);
  CHECK(clamped_beta(cfg, std::nullopt) == 0.5);
  CHECK(clamped_beta(cfg, -3.0) == 0.5);
  CHECK(clamped_beta(cfg, 0.7) == 0.7);
}

TEST_CASE("decide alpha matches the case split and stays in its envelope") {
  Rng rng(31);
  for (const auto kind : {CSchedule::Kind::Sqrt, CSchedule::Kind::Constant}) {
    for (int run = 0; run < 50; ++run) {
      StepsizeConfig cfg;
      cfg.alpha0 = rng.uniform(0.01, 10);
      cfg.c_schedule = {kind, rng.uniform(0.1, 3)};
      StepsizeState st = StepsizeState::initial(cfg);
      const double c0 = cfg.c0();
      const double lo = 0.5 * c0 * cfg.alpha0;
      for (std::int64_t k = 0; k < 300; ++k) {
        // mix of tiny, negative, huge and zero-gradient betas
        std::optional<double> beta;
        switch (rng.index(4)) {
          case 0: beta = rng.uniform(-5, 0); break;
          case 1: beta = rng.uniform(0, 2 * c0 * cfg.alpha0); break;
          case 2: beta = rng.uniform(0, 1e6); break;
          default: break;
        }
        const double prev = st.prev_alpha;
        const double cap = st.prev_c * st.prev_alpha;
        const double ck = c_value(cfg, k);
        const double expect = oracle::alpha_case_split(beta.value_or(lo), lo, cap, ck);
        const double alpha = decide_alpha(cfg, st, beta, k);
        CHECK(alpha == doctest::Approx(expect).epsilon(1e-14));
        CHECK(alpha >= 0.5 * c0 * cfg.alpha0 / ck);
        CHECK(alpha <= c0 * cfg.alpha0 / ck);
        CHECK(alpha <= prev);
        CHECK(st.prev_c == ck);
      }
    }
  }
}

TEST_CASE("level update") {
  StepsizeConfig cfg;  // γ = 1, γ̄ = 1.5
  LevelState ls(-500.0, 1);
  // x ≥ 1 then x ≤ −1: second row makes the window infeasible
  const LevelOutcome first = record_step(ls, cfg, Vec{0}, 10.0, Vec{-1}, 1.5, 0);
  CHECK(first.kind == LevelOutcome::Kind::Kept);
  CHECK(ls.window.size() == 1);
  CHECK(ls.window_min_f == 10.0);
  const LevelOutcome second = record_step(ls, cfg, Vec{0}, 20.0, Vec{1}, 1.5, 1);
  CHECK(second.kind == LevelOutcome::Kind::Updated);
  CHECK(second.level == doctest::Approx(-330.0).epsilon(1e-15));
  CHECK(ls.level == second.level);
  CHECK(ls.window.empty());
  CHECK(std::isinf(ls.window_min_f));
  CHECK(ls.update_count == 1);
  CHECK(ls.window_start == 2);
}

TEST_CASE("first row after a reset is always kept") {
  StepsizeConfig cfg;
  Rng rng(6);
  LevelState ls(-10.0, 3);
  for (int t = 0; t < 20; ++t) {
    ls.window.reset();
    ls.window_min_f = INFINITY;
    Vec g{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(0.1, 1)};
    const auto out = record_step(ls, cfg, Vec{rng.uniform(-1, 1), 0, 0}, rng.uniform(-5, 5), g, rng.uniform(0, 10), t);
    CHECK(out.kind == LevelOutcome::Kind::Kept);
  }
}

TEST_CASE("zero gradient adds nothing") {
  StepsizeConfig cfg;
  LevelState ls(-1.0, 2);
  const auto out = record_step(ls, cfg, Vec{1, 1}, 3.0, Vec{0, 0}, 1.0, 0);
  CHECK(out.kind == LevelOutcome::Kind::Kept);
  CHECK(ls.window.empty());
  CHECK(std::isinf(ls.window_min_f));
}

TEST_CASE("level never decreases") {
  StepsizeConfig cfg;
  // window minimum below the level: reset without moving the level
  LevelState ls(5.0, 1);
  record_step(ls, cfg, Vec{0}, 1.0, Vec{-1}, 1.5, 0);
  const auto out = record_step(ls, cfg, Vec{0}, 2.0, Vec{1}, 1.5, 1);
  CHECK(out.kind == LevelOutcome::Kind::Reset);
  CHECK(ls.level == 5.0);
  CHECK(ls.window.empty());

  // updates strictly raise the level when the window minimum is above it
  Rng rng(9);
  LevelState walk(-100.0, 2);
  for (int k = 0; k < 400; ++k) {
    const double before = walk.level;
    Vec g{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    if (norm(g) < 1e-3) continue;
    const double f = rng.uniform(0, 10);
    const auto o = record_step(walk, cfg, Vec{rng.uniform(-1, 1), rng.uniform(-1, 1)}, f, g, rng.uniform(0, 3), k);
    CHECK(walk.level >= before);
    if (o.kind == LevelOutcome::Kind::Updated) CHECK(walk.level > before);
  }
  CHECK(walk.update_count > 0);
}
