#pragma once

#include <vector>

#include "hsl/matrix.hpp"

namespace hsl {

/// Full decomposition m = U diag(s) Vt with r = min(rows, cols) triplets.
/// U has orthonormal columns, Vt orthonormal rows, s sorted non-increasing.
/// Callers truncate as needed.
struct SvdResult {
  DenseMatrix U;                       // rows x r
  std::vector<double> singular_values; // length r
  DenseMatrix Vt;                      // r x cols

  DenseMatrix reconstruct() const;
  /// Best rank-k approximation U_k diag(s_k) Vt_k.
  DenseMatrix truncated(std::size_t k) const;
};

/// One-sided Jacobi. Throws std::runtime_error if the sweep cap is hit
/// before the off-diagonal couplings fall below tolerance.
SvdResult svd(const DenseMatrix& m);

/// Singular values only (same algorithm, skips U assembly).
std::vector<double> singular_values(const DenseMatrix& m);

}  // namespace hsl
