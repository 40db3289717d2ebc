#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <vector>

namespace dpsla {

/// Dense real vector. All entries are required to be finite.
class Vec {
 public:
  Vec() = default;
  explicit Vec(std::size_t dim, double fill = 0.0);
  Vec(std::initializer_list<double> values);
  explicit Vec(std::vector<double> values);

  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  std::span<double> span() noexcept { return data_; }
  std::span<const double> span() const noexcept { return data_; }
  const std::vector<double>& values() const noexcept { return data_; }

  auto begin() noexcept { return data_.begin(); }
  auto end() noexcept { return data_.end(); }
  auto begin() const noexcept { return data_.begin(); }
  auto end() const noexcept { return data_.end(); }

  Vec& operator+=(const Vec& o);
  Vec& operator-=(const Vec& o);
  Vec& operator*=(double s);

  bool operator==(const Vec&) const = default;

 private:
  std::vector<double> data_;
};

Vec operator+(Vec a, const Vec& b);
Vec operator-(Vec a, const Vec& b);
Vec operator*(double s, Vec a);

/// Dense row-major matrix.
class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols, double fill = 0.0);
  Mat(std::initializer_list<std::initializer_list<double>> rows);

  static Mat identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  Mat transpose() const;
  bool operator==(const Mat&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

double dot(const Vec& a, const Vec& b);
double norm(const Vec& a);
double norm_sq(const Vec& a);

Vec matvec(const Mat& a, const Vec& x);
/// Aᵀx without forming the transpose.
Vec matvec_transposed(const Mat& a, const Vec& x);
Mat matmul(const Mat& a, const Mat& b);
Mat operator+(const Mat& a, const Mat& b);

/// Solves Ax = b for symmetric positive definite A by Cholesky factorization.
/// Throws ErrorCode::Numeric when a pivot falls below 1e-12.
Vec solve_spd(const Mat& a, const Vec& b);

/// Eigenvalues of a symmetric matrix (cyclic Jacobi), ascending.
std::vector<double> symmetric_eigenvalues(const Mat& a);

/// Largest eigenvalue of a symmetric PSD matrix by power iteration.
double power_iteration(const Mat& a, int max_iter = 10000, double tol = 1e-12);

void require_finite(const Vec& v, const char* what);
void require_finite(const Mat& m, const char* what);

/// Seeded generator: std::mt19937_64, with uniform reals built from the top
/// 53 bits of each draw. Deterministic per seed on every conforming platform.
/// Single owner; never share one across threads.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  /// Value in [lo, hi). Throws when lo >= hi.
  double uniform(double lo, double hi);
  /// Integer in [0, n).
  std::size_t index(std::size_t n);
  std::uint64_t next_u64() { return engine_(); }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace dpsla
