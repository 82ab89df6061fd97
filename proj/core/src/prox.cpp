#include "hsl/prox.hpp"

#include <cmath>
#include <stdexcept>

namespace hsl {

namespace {

void check_threshold(double u) {
  if (!(u >= 0.0)) throw std::invalid_argument("prox: negative threshold");
}

}  // namespace

DenseMatrix lf_project(const DenseMatrix& m) {
  if (m.empty()) throw std::invalid_argument("lf_project: empty matrix");
  const double nrm = frobenius_norm(m);
  if (nrm <= 1.0) return m;
  return scale(m, 1.0 / nrm);
}

std::vector<double> l2_prox(std::span<const double> a, double u) {
  check_threshold(u);
  const double nrm = vector_l2_norm(a);
  std::vector<double> out(a.size(), 0.0);
  if (nrm <= u) return out;  // includes a = 0 (the 0/0 -> 0 convention)
  const double shrink = (nrm - u) / nrm;
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * shrink;
  return out;
}

double l1_prox(double b, double u) {
  check_threshold(u);
  if (b > u) return b - u;
  if (b < -u) return b + u;
  return 0.0;
}

DenseMatrix columnwise_l2_prox(const DenseMatrix& m, std::span<const double> thresholds) {
  if (thresholds.size() != m.cols())
    throw std::invalid_argument("columnwise_l2_prox: threshold length != cols");
  for (double u : thresholds) check_threshold(u);

  std::vector<double> col_norms = column_l2_norms(m);
  DenseMatrix out = m;
  std::vector<double> shrink(m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j) {
    shrink[j] = col_norms[j] <= thresholds[j] ? 0.0 : (col_norms[j] - thresholds[j]) / col_norms[j];
  }
  for (std::size_t i = 0; i < out.rows(); ++i) {
    double* ri = out.row(i);
    for (std::size_t j = 0; j < out.cols(); ++j) ri[j] *= shrink[j];
  }
  return out;
}

std::vector<double> elementwise_l1_prox(std::span<const double> v,
                                        std::span<const double> thresholds) {
  if (thresholds.size() != v.size())
    throw std::invalid_argument("elementwise_l1_prox: threshold length != size");
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = l1_prox(v[i], thresholds[i]);
  return out;
}

}  // namespace hsl
