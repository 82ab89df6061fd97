#include "hsl/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hsl/prox.hpp"
#include "hsl/svd.hpp"

namespace hsl {

namespace {

constexpr double kMuRho = 1.5;
constexpr double kRankTol = 1e-7;  // relative cutoff for numerical rank

std::size_t numerical_rank(std::span<const double> sv) {
  if (sv.empty() || sv[0] <= 0.0) return 0;
  std::size_t r = 0;
  for (double s : sv) r += s > kRankTol * sv[0] ? 1 : 0;
  return r;
}

// Singular-value thresholding: U soft(s, tau) Vt. Also reports the post-
// threshold rank and the thresholded values through out parameters.
DenseMatrix sv_threshold(const DenseMatrix& m, double tau, std::size_t& rank_out) {
  SvdResult s = svd(m);
  rank_out = 0;
  for (double& v : s.singular_values) {
    v = std::max(0.0, v - tau);
    rank_out += v > 0.0 ? 1 : 0;
  }
  return s.truncated(rank_out);
}

DenseMatrix soft_threshold_matrix(const DenseMatrix& m, double tau) {
  DenseMatrix out = m;
  for (double& x : out.data()) {
    if (x > tau)
      x -= tau;
    else if (x < -tau)
      x += tau;
    else
      x = 0.0;
  }
  return out;
}

struct AlmState {
  DenseMatrix L;
  DenseMatrix S;
  DenseMatrix Y;
  double mu = 0.0;
  double mu_bar = 0.0;
};

// Shared inexact-ALM loop; the S update is the only piece that differs
// between the elementwise (RPCA) and column-block (OP) models.
template <typename ProxS>
LowRankSparseDecomposition alm_decompose(const DenseMatrix& X, double lambda,
                                         double dual_scale, double tol,
                                         std::size_t max_iters, ProxS&& prox_s) {
  LowRankSparseDecomposition out;
  out.lambda_used = lambda;
  const double x_norm = frobenius_norm(X);
  if (x_norm == 0.0) {
    out.L = DenseMatrix(X.rows(), X.cols());
    out.S = DenseMatrix(X.rows(), X.cols());
    out.converged = true;
    return out;
  }

  const double sigma1 = singular_values(X)[0];
  AlmState st;
  st.mu = 1.25 / sigma1;
  st.mu_bar = st.mu * 1e7;
  st.Y = scale(X, 1.0 / std::max(sigma1, dual_scale));
  st.S = DenseMatrix(X.rows(), X.cols());

  std::size_t rank = 0;
  for (std::size_t it = 1; it <= max_iters; ++it) {
    // L step: SVT of X - S + Y/mu at 1/mu.
    DenseMatrix GL = sub(X, st.S);
    {
      auto gd = GL.data();
      auto yd = st.Y.data();
      for (std::size_t i = 0; i < gd.size(); ++i) gd[i] += yd[i] / st.mu;
    }
    st.L = sv_threshold(GL, 1.0 / st.mu, rank);

    // S step.
    DenseMatrix GS = sub(X, st.L);
    {
      auto gd = GS.data();
      auto yd = st.Y.data();
      for (std::size_t i = 0; i < gd.size(); ++i) gd[i] += yd[i] / st.mu;
    }
    st.S = prox_s(GS, lambda / st.mu);

    // Multiplier and penalty updates.
    DenseMatrix gap = sub(sub(X, st.L), st.S);
    {
      auto yd = st.Y.data();
      auto gd = gap.data();
      for (std::size_t i = 0; i < yd.size(); ++i) yd[i] += st.mu * gd[i];
    }
    st.mu = std::min(st.mu * kMuRho, st.mu_bar);

    out.iterations = it;
    if (frobenius_norm(gap) / x_norm < tol) {
      out.converged = true;
      out.L = std::move(st.L);
      out.S = std::move(st.S);
      out.rank_of_L = rank;
      return out;
    }
  }
  out.converged = false;
  out.L = std::move(st.L);
  out.S = std::move(st.S);
  out.rank_of_L = rank;
  return out;
}

}  // namespace

LowRankSparseDecomposition pca(const DenseMatrix& X, std::size_t k) {
  if (X.empty()) throw std::invalid_argument("pca: empty matrix");
  if (k < 1 || k > std::min(X.rows(), X.cols()))
    throw std::invalid_argument("pca: k out of range");
  SvdResult s = svd(X);
  LowRankSparseDecomposition out;
  out.L = s.truncated(k);
  out.S = DenseMatrix(X.rows(), X.cols());
  out.rank_of_L = numerical_rank({s.singular_values.data(), std::min(k, s.singular_values.size())});
  out.iterations = 1;
  out.converged = true;
  return out;
}

LowRankSparseDecomposition rpca(const DenseMatrix& X, double lambda,
                                const RpcaOptions& options) {
  if (X.empty()) throw std::invalid_argument("rpca: empty matrix");
  if (lambda <= 0.0) lambda = 1.0 / std::sqrt(static_cast<double>(X.rows()));
  // Dual-norm scale for Y0: max(sigma1, ||X||_inf / lambda).
  const double dual = max_abs(X) / lambda;
  return alm_decompose(X, lambda, dual, options.tol, options.max_iters,
                       [](const DenseMatrix& g, double tau) {
                         return soft_threshold_matrix(g, tau);
                       });
}

LowRankSparseDecomposition outlier_pursuit(const DenseMatrix& X, double lambda,
                                           const OutlierPursuitOptions& options) {
  if (X.empty()) throw std::invalid_argument("outlier_pursuit: empty matrix");
  if (!(lambda > 0.0)) throw std::invalid_argument("outlier_pursuit: lambda must be > 0");
  double max_col = 0.0;
  for (double nrm : column_l2_norms(X)) max_col = std::max(max_col, nrm);
  const double dual = max_col / lambda;
  return alm_decompose(X, lambda, dual, options.tol, options.max_iters,
                       [](const DenseMatrix& g, double tau) {
                         const std::vector<double> thr(g.cols(), tau);
                         return columnwise_l2_prox(g, thr);
                       });
}

LowRankSparseDecomposition outlier_pursuit_with_rank(const DenseMatrix& X,
                                                     std::size_t target_rank,
                                                     const OutlierPursuitOptions& options) {
  if (target_rank < 1 || target_rank > std::min(X.rows(), X.cols()))
    throw std::invalid_argument("outlier_pursuit_with_rank: target_rank out of range");

  // rank(L) grows with lambda (more mass in L). Coarse solves steer the
  // bisection; the chosen lambda gets a final full-tolerance solve.
  OutlierPursuitOptions coarse = options;
  coarse.tol = std::max(options.tol, 1e-5);
  coarse.max_iters = std::min<std::size_t>(options.max_iters, 300);

  const auto rank_at = [&](double lam) {
    return outlier_pursuit(X, lam, coarse);
  };

  double lo = 1.0 / std::sqrt(static_cast<double>(X.rows()));
  double hi = lo;
  LowRankSparseDecomposition probe = rank_at(lo);
  LowRankSparseDecomposition best = probe;
  auto better = [&](const LowRankSparseDecomposition& a, const LowRankSparseDecomposition& b) {
    const auto da = a.rank_of_L > target_rank ? a.rank_of_L - target_rank : target_rank - a.rank_of_L;
    const auto db = b.rank_of_L > target_rank ? b.rank_of_L - target_rank : target_rank - b.rank_of_L;
    return da < db;
  };

  // Grow or shrink to bracket the target rank.
  if (probe.rank_of_L < target_rank) {
    for (int i = 0; i < 30 && probe.rank_of_L < target_rank; ++i) {
      lo = hi;
      hi *= 2.0;
      probe = rank_at(hi);
      if (better(probe, best)) best = probe;
    }
  } else if (probe.rank_of_L > target_rank) {
    for (int i = 0; i < 30 && probe.rank_of_L > target_rank; ++i) {
      hi = lo;
      lo *= 0.5;
      probe = rank_at(lo);
      if (better(probe, best)) best = probe;
    }
  }

  double chosen = probe.rank_of_L == target_rank ? probe.lambda_used : -1.0;
  if (chosen < 0.0) {
    for (int i = 0; i < 40 && (hi - lo) / hi > 1e-3; ++i) {
      const double mid = 0.5 * (lo + hi);
      probe = rank_at(mid);
      if (better(probe, best)) best = probe;
      if (probe.rank_of_L == target_rank) {
        chosen = mid;
        break;
      }
      if (probe.rank_of_L < target_rank)
        lo = mid;
      else
        hi = mid;
    }
  }
  if (chosen < 0.0) chosen = best.lambda_used;  // nearest achieved rank

  LowRankSparseDecomposition out = outlier_pursuit(X, chosen, options);
  if (out.rank_of_L != target_rank && better(best, out)) {
    out = outlier_pursuit(X, best.lambda_used, options);
  }
  return out;
}

}  // namespace hsl
