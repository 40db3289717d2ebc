#include <doctest.h>

#include <cmath>

#include "dpsla/error.hpp"
#include "dpsla/numerics.hpp"

using namespace dpsla;

TEST_CASE("dot and matvec") {
  CHECK(dot(Vec{1, 2}, Vec{3, 4}) == 11.0);
  CHECK(dot(Vec{1, 0}, Vec{0, 1}) == 0.0);
  CHECK_THROWS_AS(dot(Vec{1, 2}, Vec{1}), Error);

  CHECK(matvec(Mat::identity(2), Vec{3, -1}) == Vec{3, -1});
  CHECK(matvec(Mat(3, 2), Vec{5, 7}) == Vec{0, 0, 0});
  CHECK(matvec(Mat{{1, 2}, {3, 4}}, Vec{1, 1}) == Vec{3, 7});
  CHECK(matvec_transposed(Mat{{1, 2}, {3, 4}}, Vec{1, 1}) == Vec{4, 6});
  CHECK_THROWS_AS(matvec(Mat(2, 3), Vec{1, 1}), Error);

  Rng rng(3);
  for (int t = 0; t < 100; ++t) {
    Vec x(5);
    for (auto& v : x) v = rng.uniform(-10, 10);
    CHECK(dot(x, x) >= 0.0);
    CHECK(norm_sq(x) == doctest::Approx(dot(x, x)));
  }
}

TEST_CASE("non-finite input is rejected") {
  CHECK_THROWS_AS(Vec({1.0, NAN}), Error);
  CHECK_THROWS_AS(Vec({INFINITY}), Error);
  CHECK_THROWS_AS(Mat({{1.0, 2.0}, {NAN, 0.0}}), Error);
}

TEST_CASE("solve_spd") {
  CHECK(solve_spd(Mat::identity(2), Vec{5, 6}) == Vec{5, 6});
  const Vec x = solve_spd(Mat{{12, -1}, {-1, 18}}, Vec{0, 6});
  CHECK(x[0] == doctest::Approx(6.0 / 215).epsilon(1e-14));
  CHECK(x[1] == doctest::Approx(72.0 / 215).epsilon(1e-14));
  const Vec y = solve_spd(Mat{{2, 0}, {0, 2}}, Vec{4, 4});
  CHECK(y[0] == doctest::Approx(2.0));
  CHECK(y[1] == doctest::Approx(2.0));

  CHECK_THROWS_AS(solve_spd(Mat{{1, 2}, {2, 1}}, Vec{1, 1}), Error);
  CHECK_THROWS_AS(solve_spd(Mat(2, 2), Vec{1, 1}), Error);
}

TEST_CASE("solve_spd residual on random systems") {
  Rng rng(11);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + rng.index(16);
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = rng.uniform(-1, 1);
    const Mat a = matmul(m.transpose(), m) + Mat::identity(n);
    Vec b(n);
    for (auto& v : b) v = rng.uniform(-5, 5);
    const Vec x = solve_spd(a, b);
    CHECK(norm(matvec(a, x) - b) / (1.0 + norm(b)) <= 1e-10);
  }
}

TEST_CASE("symmetric eigenvalues and power iteration") {
  const auto ev = symmetric_eigenvalues(Mat{{4, 1}, {1, 6}});
  CHECK(ev[0] == doctest::Approx(5 - std::sqrt(2.0)));
  CHECK(ev[1] == doctest::Approx(5 + std::sqrt(2.0)));
  CHECK(power_iteration(Mat{{4, 1}, {1, 6}}) == doctest::Approx(5 + std::sqrt(2.0)));
}

TEST_CASE("uniform") {
  Rng rng(42);
  for (int i = 0; i < 1000; ++i) {
    const double a = rng.uniform(0, 0.1);
    CHECK(a >= 0.0);
    CHECK(a < 0.1);
    const double b = rng.uniform(0, 5);
    CHECK(b >= 0.0);
    CHECK(b < 5.0);
  }
  CHECK_THROWS_AS(rng.uniform(1, 1), Error);
  CHECK_THROWS_AS(rng.uniform(2, 1), Error);

  Rng r1(7), r2(7);
  for (int i = 0; i < 100; ++i) CHECK(r1.uniform(-3, 3) == r2.uniform(-3, 3));

  // mean within 3 standard errors
  Rng r(99);
  const int n = 100000;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += r.uniform(2, 6);
  const double se = (4.0 / std::sqrt(12.0)) / std::sqrt(static_cast<double>(n));
  CHECK(std::abs(s / n - 4.0) <= 3.0 * se);
}

TEST_CASE("uniform stays below hi on a narrow interval") {
  Rng rng(5);
  const double lo = 1.0;
  const double hi = std::nextafter(1.0, 2.0);
  for (int i = 0; i < 1000; ++i) {
    const double v = rng.uniform(lo, hi);
    CHECK(v >= lo);
    CHECK(v < hi);
  }
}
