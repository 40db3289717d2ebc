#include "dpsla/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dpsla/error.hpp"

namespace dpsla {

namespace {

void require_same_dim(std::size_t a, std::size_t b, const char* op) {
  if (a != b) {
    std::ostringstream os;
    os << op << ": dimension mismatch (" << a << " vs " << b << ")";
    fail(ErrorCode::Dimension, os.str());
  }
}

}  // namespace

Vec::Vec(std::size_t dim, double fill) : data_(dim, fill) {
  if (!std::isfinite(fill)) fail(ErrorCode::Numeric, "Vec: non-finite fill");
}
Vec::Vec(std::initializer_list<double> values) : data_(values) { require_finite(*this, "Vec"); }
Vec::Vec(std::vector<double> values) : data_(std::move(values)) { require_finite(*this, "Vec"); }

Vec& Vec::operator+=(const Vec& o) {
  require_same_dim(size(), o.size(), "Vec::operator+=");
  for (std::size_t i = 0; i < size(); ++i) data_[i] += o.data_[i];
  return *this;
}

Vec& Vec::operator-=(const Vec& o) {
  require_same_dim(size(), o.size(), "Vec::operator-=");
  for (std::size_t i = 0; i < size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

Vec& Vec::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

Vec operator+(Vec a, const Vec& b) { return a += b; }
Vec operator-(Vec a, const Vec& b) { return a -= b; }
Vec operator*(double s, Vec a) { return a *= s; }

Mat::Mat(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
  if (!std::isfinite(fill)) fail(ErrorCode::Numeric, "Mat: non-finite fill");
}

Mat::Mat(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) fail(ErrorCode::Dimension, "Mat: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
  require_finite(*this, "Mat");
}

Mat Mat::identity(std::size_t n) {
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Mat Mat::transpose() const {
  Mat t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

void require_finite(const Vec& v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) fail(ErrorCode::Numeric, std::string(what) + ": non-finite entry");
  }
}

void require_finite(const Mat& m, const char* what) {
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (double x : m.row(r))
      if (!std::isfinite(x)) fail(ErrorCode::Numeric, std::string(what) + ": non-finite entry");
}

double dot(const Vec& a, const Vec& b) {
  require_same_dim(a.size(), b.size(), "dot");
  require_finite(a, "dot");
  require_finite(b, "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm_sq(const Vec& a) { return dot(a, a); }
double norm(const Vec& a) { return std::sqrt(norm_sq(a)); }

Vec matvec(const Mat& a, const Vec& x) {
  require_same_dim(a.cols(), x.size(), "matvec");
  require_finite(x, "matvec");
  Vec y(a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < a.cols(); ++c) s += a(r, c) * x[c];
    y[r] = s;
  }
  return y;
}

Vec matvec_transposed(const Mat& a, const Vec& x) {
  require_same_dim(a.rows(), x.size(), "matvec_transposed");
  require_finite(x, "matvec_transposed");
  Vec y(a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) y[c] += a(r, c) * x[r];
  return y;
}

Mat matmul(const Mat& a, const Mat& b) {
  require_same_dim(a.cols(), b.rows(), "matmul");
  Mat out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

Mat operator+(const Mat& a, const Mat& b) {
  require_same_dim(a.rows(), b.rows(), "Mat::operator+");
  require_same_dim(a.cols(), b.cols(), "Mat::operator+");
  Mat out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) + b(i, j);
  return out;
}

Vec solve_spd(const Mat& a, const Vec& b) {
  const std::size_t n = a.rows();
  if (a.cols() != n) fail(ErrorCode::Dimension, "solve_spd: matrix is not square");
  require_same_dim(n, b.size(), "solve_spd");
  require_finite(a, "solve_spd");
  require_finite(b, "solve_spd");

  // Lower-triangular Cholesky factor, L Lᵀ = A.
  Mat l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (d < 1e-12) fail(ErrorCode::Numeric, "solve_spd: matrix is singular or not positive definite");
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }

  Vec y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y[k];
    y[i] = s / l(i, i);
  }
  Vec x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    double s = y[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= l(k, ii) * x[k];
    x[ii] = s / l(ii, ii);
  }
  return x;
}

std::vector<double> symmetric_eigenvalues(const Mat& input) {
  const std::size_t n = input.rows();
  if (input.cols() != n) fail(ErrorCode::Dimension, "symmetric_eigenvalues: matrix is not square");
  Mat a = input;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

double power_iteration(const Mat& a, int max_iter, double tol) {
  const std::size_t n = a.rows();
  if (a.cols() != n) fail(ErrorCode::Dimension, "power_iteration: matrix is not square");
  // Start off any eigenvector likely to be degenerate with a fixed non-uniform vector.
  Vec v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 0.1 * static_cast<double>(i);
  v *= 1.0 / norm(v);
  double lambda = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Vec w = matvec(a, v);
    const double nw = norm(w);
    if (nw == 0.0) return 0.0;
    const double next = dot(v, w);
    w *= 1.0 / nw;
    v = std::move(w);
    if (std::abs(next - lambda) <= tol * std::max(1.0, std::abs(next))) return next;
    lambda = next;
  }
  return lambda;
}

double Rng::uniform(double lo, double hi) {
  if (!(lo < hi)) fail(ErrorCode::InvalidArgument, "uniform: requires lo < hi");
  const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  const double v = lo + (hi - lo) * u;
  // Rounding can land exactly on hi for wide ranges.
  return v < hi ? v : std::nextafter(hi, lo);
}

std::size_t Rng::index(std::size_t n) {
  if (n == 0) fail(ErrorCode::InvalidArgument, "index: empty range");
  return static_cast<std::size_t>(uniform(0.0, static_cast<double>(n)));
}

}  // namespace dpsla
