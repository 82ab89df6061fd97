#include "hsl/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hsl/random.hpp"
#include "hsl/solver.hpp"
#include "hsl/svd.hpp"

namespace hsl {

DenseMatrix top_right_singular_basis(const DenseMatrix& m, std::size_t k) {
  if (k == 0 || k > std::min(m.rows(), m.cols()))
    throw std::invalid_argument("top_right_singular_basis: k out of range");
  const SvdResult s = svd(m);
  DenseMatrix v(m.cols(), k);
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t j = 0; j < m.cols(); ++j) v(j, c) = s.Vt(c, j);
  return v;
}

double subspace_error(const DenseMatrix& L_hat, const DenseMatrix& V_true, std::size_t k) {
  if (V_true.cols() != k)
    throw std::invalid_argument("subspace_error: V_true must have k columns");
  if (V_true.rows() != L_hat.cols())
    throw std::invalid_argument("subspace_error: V_true rows != feature count of L_hat");
  if (k > std::min(L_hat.rows(), L_hat.cols()))
    throw std::invalid_argument("subspace_error: k exceeds rank information in L_hat");

  const DenseMatrix gram = matmul_ta(V_true, V_true);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (std::abs(gram(i, j) - (i == j ? 1.0 : 0.0)) > 1e-8)
        throw std::invalid_argument("subspace_error: V_true columns not orthonormal");

  const DenseMatrix V_hat = top_right_singular_basis(L_hat, k);
  // ||P - Phat||_F^2 = 2k - 2 ||V^T Vhat||_F^2 for orthonormal bases.
  const DenseMatrix cross = matmul_ta(V_true, V_hat);
  const double sq = 2.0 * static_cast<double>(k) - 2.0 * frobenius_norm_sq(cross);
  return std::sqrt(std::max(0.0, sq)) / std::sqrt(2.0 * static_cast<double>(k));
}

SRecoveryError s_recovery_error(const DenseMatrix& S_hat, const DenseMatrix& S_true) {
  const double raw = frobenius_norm(sub(S_hat, S_true));
  const double denom = frobenius_norm(S_true);
  return {raw, denom > 0.0 ? raw / denom : raw};
}

SupportScore support_f1(std::span<const double> b_hat,
                        std::span<const std::size_t> support_true, double zero_tol) {
  if (!(zero_tol >= 0.0)) throw std::invalid_argument("support_f1: negative zero_tol");
  std::vector<bool> truth(b_hat.size(), false);
  for (std::size_t j : support_true) {
    if (j >= b_hat.size()) throw std::invalid_argument("support_f1: index out of range");
    truth[j] = true;
  }
  std::size_t tp = 0, predicted = 0;
  for (std::size_t j = 0; j < b_hat.size(); ++j) {
    if (std::abs(b_hat[j]) > zero_tol) {
      ++predicted;
      if (truth[j]) ++tp;
    }
  }
  const std::size_t actual = support_true.size();
  SupportScore s;
  s.precision = predicted == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(predicted);
  s.recall = actual == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(actual);
  s.f1 = (s.precision + s.recall) > 0.0
             ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
             : 0.0;
  return s;
}

double reconstruction_error(const DenseMatrix& X, const DenseMatrix& L_hat) {
  return frobenius_norm(sub(X, L_hat));
}

namespace {

double sq_point_dist(const DenseMatrix& pts, std::size_t i, std::span<const double> center) {
  double s = 0.0;
  const double* row = pts.row(i);
  for (std::size_t d = 0; d < pts.cols(); ++d) {
    const double diff = row[d] - center[d];
    s += diff * diff;
  }
  return s;
}

struct KmeansRun {
  std::vector<std::size_t> labels;
  double wcss = std::numeric_limits<double>::infinity();
};

KmeansRun kmeans_once(const DenseMatrix& pts, std::size_t k, RngStream& rng) {
  const std::size_t n = pts.rows(), d = pts.cols();
  std::vector<std::vector<double>> centers(k, std::vector<double>(d, 0.0));

  // ++-style seeding: D^2-weighted draws after a uniform first pick.
  std::vector<double> min_sq(n, std::numeric_limits<double>::infinity());
  const std::size_t first = static_cast<std::size_t>(rng.uniform01() * static_cast<double>(n));
  const double* fr = pts.row(std::min(first, n - 1));
  centers[0].assign(fr, fr + d);
  for (std::size_t c = 1; c < k; ++c) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      min_sq[i] = std::min(min_sq[i], sq_point_dist(pts, i, centers[c - 1]));
      total += min_sq[i];
    }
    std::size_t pick = 0;
    if (total > 0.0) {
      double target = rng.uniform01() * total;
      for (std::size_t i = 0; i < n; ++i) {
        target -= min_sq[i];
        if (target <= 0.0) {
          pick = i;
          break;
        }
        pick = i;
      }
    } else {
      pick = static_cast<std::size_t>(rng.uniform01() * static_cast<double>(n));
      pick = std::min(pick, n - 1);
    }
    const double* pr = pts.row(pick);
    centers[c].assign(pr, pr + d);
  }

  std::vector<std::size_t> labels(n, 0);
  std::vector<std::size_t> counts(k, 0);
  for (std::size_t iter = 0; iter < 100; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        const double dist = sq_point_dist(pts, i, centers[c]);
        if (dist < best_d) {
          best_d = dist;
          best = c;
        }
      }
      if (labels[i] != best) {
        labels[i] = best;
        changed = true;
      }
    }
    for (auto& c : centers) std::fill(c.begin(), c.end(), 0.0);
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      ++counts[labels[i]];
      const double* row = pts.row(i);
      for (std::size_t dd = 0; dd < d; ++dd) centers[labels[i]][dd] += row[dd];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        for (double& x : centers[c]) x /= static_cast<double>(counts[c]);
      } else {
        // Empty cluster: reseed at the point farthest from its own centroid.
        std::size_t far = 0;
        double far_d = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double dist = sq_point_dist(pts, i, centers[labels[i]]);
          if (dist > far_d) {
            far_d = dist;
            far = i;
          }
        }
        const double* row = pts.row(far);
        centers[c].assign(row, row + d);
        changed = true;
      }
    }
    if (!changed && iter > 0) break;
  }

  KmeansRun run;
  run.labels = std::move(labels);
  run.wcss = 0.0;
  for (std::size_t i = 0; i < n; ++i) run.wcss += sq_point_dist(pts, i, centers[run.labels[i]]);
  return run;
}

}  // namespace

std::vector<std::size_t> kmeans(const DenseMatrix& points, std::size_t num_clusters,
                                std::uint64_t seed, std::size_t restarts) {
  if (num_clusters == 0) throw std::invalid_argument("kmeans: num_clusters must be >= 1");
  if (num_clusters > points.rows())
    throw std::invalid_argument("kmeans: more clusters than points");
  if (restarts == 0) restarts = 1;

  KmeansRun best;
  for (std::size_t r = 0; r < restarts; ++r) {
    RngStream rng(seed, 0x6b6dULL + r);
    KmeansRun run = kmeans_once(points, num_clusters, rng);
    if (run.wcss < best.wcss) best = std::move(run);
  }
  return best.labels;
}

double silhouette(const DenseMatrix& points, std::span<const std::size_t> labels) {
  const std::size_t n = points.rows();
  if (labels.size() != n) throw std::invalid_argument("silhouette: label count != points");
  if (n == 0) return 0.0;
  std::size_t num_clusters = 0;
  for (std::size_t l : labels) num_clusters = std::max(num_clusters, l + 1);
  std::vector<std::size_t> counts(num_clusters, 0);
  for (std::size_t l : labels) ++counts[l];
  std::size_t nonempty = 0;
  for (std::size_t c : counts) nonempty += c > 0 ? 1 : 0;
  if (nonempty < 2) return 0.0;

  double total = 0.0;
  std::vector<double> sums(num_clusters);
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(sums.begin(), sums.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      double sq = 0.0;
      const double* ri = points.row(i);
      const double* rj = points.row(j);
      for (std::size_t d = 0; d < points.cols(); ++d) {
        const double diff = ri[d] - rj[d];
        sq += diff * diff;
      }
      sums[labels[j]] += std::sqrt(sq);
    }
    const std::size_t own = labels[i];
    if (counts[own] <= 1) continue;  // singleton scores 0
    const double a = sums[own] / static_cast<double>(counts[own] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < num_clusters; ++c) {
      if (c == own || counts[c] == 0) continue;
      b = std::min(b, sums[c] / static_cast<double>(counts[c]));
    }
    const double denom = std::max(a, b);
    total += denom > 0.0 ? (b - a) / denom : 0.0;
  }
  return total / static_cast<double>(n);
}

double aic_score(const DenseMatrix& X, const HslModel& model) {
  const double n = static_cast<double>(X.rows());
  const double p = static_cast<double>(X.cols());
  const double k = static_cast<double>(model.Z.cols());
  const double rss = loss(X, model.Z, model.A, model.W, model.b);
  std::size_t active = 0;
  for (double bj : model.b) active += bj != 0.0 ? 1 : 0;
  const double df = k * (n + p) + (n + 1.0) * static_cast<double>(active);
  const double mean_sq = std::max(rss, std::numeric_limits<double>::min()) / (n * p);
  return n * p * std::log(mean_sq) + 2.0 * df;
}

double SpectrumProfile::head_ratio(std::size_t k) const {
  if (values.empty() || k >= values.size())
    throw std::invalid_argument("head_ratio: k out of range");
  return values[0] > 0.0 ? values[k] / values[0] : 0.0;
}

double SpectrumProfile::tail_half_ratio() const {
  if (values.empty()) throw std::invalid_argument("tail_half_ratio: empty spectrum");
  const std::size_t idx = (values.size() + 1) / 2 - 1;  // 1-based ceil(r/2)
  return values[0] > 0.0 ? values[idx] / values[0] : 0.0;
}

SpectrumProfile spectrum_profile(const DenseMatrix& X) {
  return {singular_values(X)};
}

}  // namespace hsl
