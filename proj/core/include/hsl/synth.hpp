#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "hsl/matrix.hpp"

namespace hsl {

/// Generator parameters. theta = (theta1, theta2, theta3) gives the
/// per-feature probability of joining only the low-rank component, only the
/// high-dimensional component, or both.
struct SynthSpec {
  std::size_t n = 100;
  std::size_t p = 200;
  std::size_t k = 20;
  double sigma2 = 1.0;
  std::array<double, 3> theta = {0.9, 0.1, 0.0};
  std::uint64_t seed = 0;

  void validate() const;
};

/// A generated dataset together with the ground truth that produced it:
/// X = true_Z * true_A + true_W diag(true_b) + E.
struct SynthInstance {
  SynthSpec spec;
  DenseMatrix X;
  DenseMatrix true_Z;          // n x k
  DenseMatrix true_A;          // k x p
  DenseMatrix true_W;          // n x p
  std::vector<double> true_b;  // length p
  std::vector<std::size_t> support_lowr;   // j with A(:,j) != 0
  std::vector<std::size_t> support_highd;  // j with b(j) != 0

  /// L = true_Z * true_A.
  DenseMatrix true_low_rank() const { return matmul(true_Z, true_A); }
  /// S = true_W diag(true_b).
  DenseMatrix true_high_dim() const { return column_scale(true_W, true_b); }
};

/// Recovery-benchmark generator: Z rows ~ N(0, I_k), W rows ~ N(0, I_p),
/// A entries uniform on [-1.5,-0.5] U [0.5,1.5], b entries uniform on
/// sqrt(k) times that set, memberships drawn i.i.d. from theta, then
/// i.i.d. Gaussian noise of variance sigma2 per entry.
SynthInstance generate_hybrid(const SynthSpec& spec);

/// Same construction but with exactly s features assigned to the
/// high-dimensional component (all others low-rank); used by the
/// phase-transition sweep where s is controlled.
SynthInstance generate_hybrid_fixed_count(const SynthSpec& spec, std::size_t s);

/// Spectrum-study generator: per feature j, either X(:,j) ~ N(Z A(:,j),
/// sigma2 I) or X(:,j) ~ N(W(:,j), sigma2 I). Requires theta3 = 0.
SynthInstance generate_categorical(const SynthSpec& spec);

}  // namespace hsl
