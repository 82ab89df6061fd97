#pragma once

#include <cstddef>

#include "hsl/matrix.hpp"

namespace hsl {

/// Output of the comparison decompositions X ~ L + S.
struct LowRankSparseDecomposition {
  DenseMatrix L;
  DenseMatrix S;
  std::size_t rank_of_L = 0;
  std::size_t iterations = 0;
  bool converged = true;
  double lambda_used = 0.0;
};

/// Best rank-k approximation by truncated SVD; S = 0.
LowRankSparseDecomposition pca(const DenseMatrix& X, std::size_t k);

struct RpcaOptions {
  double tol = 1e-7;  // feasibility gap ||X - L - S||_F / ||X||_F
  std::size_t max_iters = 1000;
};

/// Robust PCA, min ||L||_* + lambda ||S||_1 s.t. X = L + S, by inexact
/// augmented Lagrangian (singular-value thresholding of L, elementwise soft
/// thresholding of S, multiplier updates). lambda <= 0 selects 1/sqrt(n).
LowRankSparseDecomposition rpca(const DenseMatrix& X, double lambda = 0.0,
                                const RpcaOptions& options = {});

struct OutlierPursuitOptions {
  double tol = 1e-7;
  std::size_t max_iters = 1000;
};

/// Outlier Pursuit on the transposed data: min ||L||_* + lambda ||S||_{1,2}
/// s.t. X^T = L + S, with the block norm over per-feature vectors, solved in
/// the feature-column orientation (the two forms coincide because the
/// nuclear and Frobenius norms are transpose-invariant). The returned S is
/// n x p and column-sparse over features.
LowRankSparseDecomposition outlier_pursuit(const DenseMatrix& X, double lambda,
                                           const OutlierPursuitOptions& options = {});

/// Bisection-tunes lambda until rank(L) equals target_rank; if no lambda in
/// the bracket achieves it exactly, returns the solve with the nearest rank.
LowRankSparseDecomposition outlier_pursuit_with_rank(const DenseMatrix& X,
                                                     std::size_t target_rank,
                                                     const OutlierPursuitOptions& options = {});

}  // namespace hsl
