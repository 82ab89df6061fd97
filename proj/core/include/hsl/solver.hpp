#pragma once

#include <span>
#include <vector>

#include "hsl/matrix.hpp"
#include "hsl/model.hpp"
#include "hsl/random.hpp"

namespace hsl {

/// Smooth loss ||X - Z A - W diag(b)||_F^2.
double loss(const DenseMatrix& X, const DenseMatrix& Z, const DenseMatrix& A,
            const DenseMatrix& W, std::span<const double> b);

/// Mutual-exclusivity penalty psi(A, b) = sum_j |b(j)| ||A(:,j)||_2.
double overlap_penalty(const DenseMatrix& A, std::span<const double> b);

/// loss + gamma * psi(A, b) + lambda * ||b||_1.
double objective(const DenseMatrix& X, const DenseMatrix& Z, const DenseMatrix& A,
                 const DenseMatrix& W, std::span<const double> b, double lambda,
                 double gamma);
double objective(const DenseMatrix& X, const HslModel& model, double lambda, double gamma);

/// R = X - Z A - W diag(b).
DenseMatrix residual(const DenseMatrix& X, const DenseMatrix& Z, const DenseMatrix& A,
                     const DenseMatrix& W, std::span<const double> b);

// Gradients of the smooth loss, written in terms of the residual R.
DenseMatrix grad_w(const DenseMatrix& R, std::span<const double> b);  // -2 R diag(b)
DenseMatrix grad_a(const DenseMatrix& Z, const DenseMatrix& R);       // -2 Z^T R
DenseMatrix grad_z(const DenseMatrix& R, const DenseMatrix& A);       // -2 R A^T
std::vector<double> grad_b(const DenseMatrix& W, const DenseMatrix& R);  // -2 W(:,j)^T R(:,j)

struct InnerWaResult {
  DenseMatrix W;
  DenseMatrix A;
  double objective = 0.0;  // full objective at the returned iterate
  std::size_t iterations = 0;
};

struct InnerZbResult {
  DenseMatrix Z;
  std::vector<double> b;
  double objective = 0.0;
  std::size_t iterations = 0;
};

/// Convex sub-problem in {W, A} with Z and b fixed: accelerated proximal
/// gradient with backtracking line search; W steps are lF-projected, A steps
/// pass through the column-wise l2 prox with thresholds alpha*gamma*|b(j)|.
InnerWaResult fit_inner_wa(const DenseMatrix& X, const DenseMatrix& Z,
                           std::span<const double> b, const DenseMatrix& W0,
                           const DenseMatrix& A0, const HslConfig& config);

/// Convex sub-problem in {Z, b} with W and A fixed: Z steps lF-projected,
/// b steps soft-thresholded at alpha*(gamma*||A(:,j)||_2 + lambda).
InnerZbResult fit_inner_zb(const DenseMatrix& X, const DenseMatrix& W,
                           const DenseMatrix& A, const DenseMatrix& Z0,
                           std::span<const double> b0, const HslConfig& config);

/// Fresh start: Z is an lF-projected unit-scale Gaussian draw, A ~ N(0, 1/k),
/// W is the data scaled into the unit ball, b = 1 so the data decides the
/// gates.
HslModel random_init(const DenseMatrix& X, const HslConfig& config);

/// Alternating minimization over the two convex blocks until the relative
/// change of the full objective drops below outer_tol. Never throws on slow
/// progress; `converged` is reported on the model instead.
HslModel fit(const DenseMatrix& X, const HslConfig& config, HslModel init);
HslModel fit(const DenseMatrix& X, const HslConfig& config);

/// Scale probe: 2 * max_j ||X(:,j)||_2^2, an upper bound on useful gamma.
double gamma_probe(const DenseMatrix& X);
/// Default continuation increment, 1 / (2 sqrt(n p)); the tipping gamma of a
/// contested feature is nearly scale-free, so the increment is too.
double default_eta(const DenseMatrix& X);

struct PathEntry {
  double gamma = 0.0;
  HslModel model;
  double overlap = 0.0;  // psi(A, b) at this gamma
};

struct WarmStartPath {
  std::vector<PathEntry> entries;
  bool reached_zero_overlap = false;
  double gamma_max = 0.0;  // gamma of the last entry when terminated cleanly

  const HslModel& final_model() const { return entries.back().model; }
};

/// Continuation driver: gamma = 0 with a random start, then repeated fits at
/// gamma + eta warm-started from the previous estimate, until the overlap
/// penalty hits overlap_eps (that gamma is gamma_max) or the step cap trips.
WarmStartPath fit_warm_start_path(const DenseMatrix& X, double lambda, double eta,
                                  const HslConfig& config);

}  // namespace hsl
