#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hsl/matrix.hpp"
#include "hsl/model.hpp"

namespace hsl {

/// Metrics bundle for one (method, dataset) fit, serialized by the harness.
struct FitReport {
  std::string method_name;
  double subspace_error = 0.0;
  double s_error = 0.0;             // raw ||S_hat - S_true||_F
  double s_error_normalized = 0.0;  // divided by ||S_true||_F when nonzero
  double f1 = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double reconstruction_error = 0.0;
  std::optional<double> silhouette;
  std::optional<double> aic;
  std::size_t iterations = 0;
  bool converged = true;
  double wall_time_seconds = 0.0;
  std::uint64_t seed = 0;
};

/// Normalized projector distance ||V V^T - Vhat Vhat^T||_F / sqrt(2k) between
/// the true subspace basis V (p x k, orthonormal columns) and the span of the
/// top-k right singular vectors of L_hat. 0 = same subspace, 1 = orthogonal.
double subspace_error(const DenseMatrix& L_hat, const DenseMatrix& V_true, std::size_t k);

/// Orthonormal basis (p x k) of the top-k right singular subspace of m.
DenseMatrix top_right_singular_basis(const DenseMatrix& m, std::size_t k);

struct SRecoveryError {
  double raw = 0.0;
  double normalized = 0.0;
};
SRecoveryError s_recovery_error(const DenseMatrix& S_hat, const DenseMatrix& S_true);

struct SupportScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};
/// Predicted support = { j : |b_hat(j)| > zero_tol }. Both supports empty
/// scores 1; exactly one empty scores 0.
SupportScore support_f1(std::span<const double> b_hat,
                        std::span<const std::size_t> support_true, double zero_tol = 1e-6);

/// ||X - L_hat||_F.
double reconstruction_error(const DenseMatrix& X, const DenseMatrix& L_hat);

/// Lloyd's algorithm from ++-style seeding, best of `restarts` by
/// within-cluster sum of squares. Deterministic for a fixed seed.
std::vector<std::size_t> kmeans(const DenseMatrix& points, std::size_t num_clusters,
                                std::uint64_t seed, std::size_t restarts = 5);

/// Mean silhouette over points with Euclidean distances; degenerate cases
/// (single cluster, identical points, singleton clusters) count as 0.
double silhouette(const DenseMatrix& points, std::span<const std::size_t> labels);

/// AIC = n*p*ln(RSS/(n*p)) + 2*df with df = k(n+p) + (n+1)*nnz(b).
double aic_score(const DenseMatrix& X, const HslModel& model);

struct SpectrumProfile {
  std::vector<double> values;  // non-increasing

  /// sigma_{k+1} / sigma_1.
  double head_ratio(std::size_t k) const;
  /// sigma_{ceil(r/2)} / sigma_1 over the r available values.
  double tail_half_ratio() const;
};
SpectrumProfile spectrum_profile(const DenseMatrix& X);

}  // namespace hsl
