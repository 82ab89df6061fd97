#pragma once

#include <cstdint>
#include <vector>

#include "hsl/matrix.hpp"

namespace hsl {

/// Hyperparameters for the alternating proximal-gradient solver and the
/// warm-start continuation driver.
struct HslConfig {
  std::size_t k = 1;          // latent dimension
  double lambda = 0.0;        // l1 weight on the feature gate b
  double gamma = 0.0;         // exclusivity weight on ||A diag(b)||_{1,2}
  double alpha0 = 1.0;        // initial proximal step size
  double eta = 0.0;           // gamma increment for the warm-start path; 0 = auto
  double inner_tol = 1e-7;    // relative objective change, inner loops
  double outer_tol = 1e-6;    // relative objective change, outer loop
  std::size_t max_inner_iters = 500;
  std::size_t max_outer_iters = 100;
  double overlap_eps = 1e-8;  // zero threshold for ||A diag(b)||_{1,2}
  std::uint64_t seed = 0;

  void validate() const;
};

/// Fitted factors: X ~ Z A + W diag(b), with ||Z||_F <= 1 and ||W||_F <= 1.
struct HslModel {
  DenseMatrix Z;               // n x k scores
  DenseMatrix A;               // k x p loadings
  DenseMatrix W;               // n x p high-dimensional component
  std::vector<double> b;       // length-p feature gate
  double gamma_at_fit = 0.0;
  std::vector<double> objective_trace;  // full objective per outer iteration
  bool converged = false;
  std::size_t outer_iterations = 0;

  /// L_hat = Z A.
  DenseMatrix low_rank() const { return matmul(Z, A); }
  /// S_hat = W diag(b).
  DenseMatrix high_dim() const { return column_scale(W, b); }
};

}  // namespace hsl
