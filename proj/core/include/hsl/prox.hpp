#pragma once

#include <span>
#include <vector>

#include "hsl/matrix.hpp"

namespace hsl {

/// Projection onto the unit Frobenius ball: m / max{1, ||m||_F}.
/// Inputs already inside the ball pass through bit-exact.
DenseMatrix lf_project(const DenseMatrix& m);

/// Block soft threshold: a * max{0, ||a||_2 - u} / ||a||_2, with 0/0 -> 0.
std::vector<double> l2_prox(std::span<const double> a, double u);

/// Scalar soft threshold: sgn(b) * max{0, |b| - u}.
double l1_prox(double b, double u);

/// Per-column l2_prox with per-column thresholds.
DenseMatrix columnwise_l2_prox(const DenseMatrix& m, std::span<const double> thresholds);

/// Per-element l1_prox with per-element thresholds.
std::vector<double> elementwise_l1_prox(std::span<const double> v,
                                        std::span<const double> thresholds);

}  // namespace hsl
