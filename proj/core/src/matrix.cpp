#include "hsl/matrix.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hsl {

namespace {

void check_finite(std::span<const double> data) {
  for (double x : data) {
    if (!std::isfinite(x)) throw std::invalid_argument("DenseMatrix: non-finite entry");
  }
}

[[noreturn]] void dim_error(const char* op, const DenseMatrix& a, const DenseMatrix& b) {
  throw std::invalid_argument(std::string(op) + ": dimension mismatch " +
                              std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                              " vs " + std::to_string(b.rows()) + "x" +
                              std::to_string(b.cols()));
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
  if (!std::isfinite(fill)) throw std::invalid_argument("DenseMatrix: non-finite fill");
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols)
    throw std::invalid_argument("DenseMatrix: data length " + std::to_string(data_.size()) +
                                " != " + std::to_string(rows) + "*" + std::to_string(cols));
  check_finite(data_);
}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw std::invalid_argument("DenseMatrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
  check_finite(data_);
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) dim_error("matmul", a, b);
  DenseMatrix c(a.rows(), b.cols());
  const std::size_t n = b.cols();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* ci = c.row(i);
    const double* ai = a.row(i);
    for (std::size_t l = 0; l < a.cols(); ++l) {
      const double v = ai[l];
      if (v == 0.0) continue;
      const double* bl = b.row(l);
      for (std::size_t j = 0; j < n; ++j) ci[j] += v * bl[j];
    }
  }
  return c;
}

DenseMatrix matmul_ta(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows()) dim_error("matmul_ta", a, b);
  DenseMatrix c(a.cols(), b.cols());
  const std::size_t n = b.cols();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double* ai = a.row(i);
    const double* bi = b.row(i);
    for (std::size_t l = 0; l < a.cols(); ++l) {
      const double v = ai[l];
      if (v == 0.0) continue;
      double* cl = c.row(l);
      for (std::size_t j = 0; j < n; ++j) cl[j] += v * bi[j];
    }
  }
  return c;
}

DenseMatrix matmul_tb(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.cols()) dim_error("matmul_tb", a, b);
  DenseMatrix c(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double* ai = a.row(i);
    double* ci = c.row(i);
    for (std::size_t j = 0; j < b.rows(); ++j) {
      ci[j] = dot({ai, a.cols()}, {b.row(j), b.cols()});
    }
  }
  return c;
}

DenseMatrix add(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) dim_error("add", a, b);
  DenseMatrix c = a;
  auto cd = c.data();
  auto bd = b.data();
  for (std::size_t i = 0; i < cd.size(); ++i) cd[i] += bd[i];
  return c;
}

DenseMatrix sub(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) dim_error("sub", a, b);
  DenseMatrix c = a;
  auto cd = c.data();
  auto bd = b.data();
  for (std::size_t i = 0; i < cd.size(); ++i) cd[i] -= bd[i];
  return c;
}

DenseMatrix scale(const DenseMatrix& m, double alpha) {
  if (!std::isfinite(alpha)) throw std::invalid_argument("scale: non-finite factor");
  DenseMatrix c = m;
  for (double& x : c.data()) x *= alpha;
  return c;
}

DenseMatrix hadamard(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) dim_error("hadamard", a, b);
  DenseMatrix c = a;
  auto cd = c.data();
  auto bd = b.data();
  for (std::size_t i = 0; i < cd.size(); ++i) cd[i] *= bd[i];
  return c;
}

DenseMatrix transpose(const DenseMatrix& m) {
  DenseMatrix t(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) t(j, i) = m(i, j);
  return t;
}

DenseMatrix column_scale(const DenseMatrix& m, std::span<const double> v) {
  if (v.size() != m.cols())
    throw std::invalid_argument("column_scale: vector length " + std::to_string(v.size()) +
                                " != cols " + std::to_string(m.cols()));
  DenseMatrix c = m;
  for (std::size_t i = 0; i < c.rows(); ++i) {
    double* ci = c.row(i);
    for (std::size_t j = 0; j < c.cols(); ++j) ci[j] *= v[j];
  }
  return c;
}

double frobenius_norm_sq(const DenseMatrix& m) {
  double s = 0.0;
  for (double x : m.data()) s += x * x;
  return s;
}

double frobenius_norm(const DenseMatrix& m) { return std::sqrt(frobenius_norm_sq(m)); }

std::vector<double> column_l2_norms(const DenseMatrix& m) {
  std::vector<double> s(m.cols(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const double* ri = m.row(i);
    for (std::size_t j = 0; j < m.cols(); ++j) s[j] += ri[j] * ri[j];
  }
  for (double& x : s) x = std::sqrt(x);
  return s;
}

double max_abs(const DenseMatrix& m) {
  double s = 0.0;
  for (double x : m.data()) s = std::max(s, std::abs(x));
  return s;
}

double vector_l2_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

}  // namespace hsl
