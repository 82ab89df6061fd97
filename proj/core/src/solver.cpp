#include "hsl/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "hsl/log.hpp"
#include "hsl/prox.hpp"

namespace hsl {

namespace {

constexpr double kStepGrow = 1.25;
constexpr double kStepShrink = 0.5;  // halving line search
constexpr double kAlphaMax = 1e12;
constexpr double kAlphaMin = 1e-18;
constexpr std::size_t kMaxPathSteps = 500;
constexpr std::uint64_t kInitStream = 0x696e6974;

double l1_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

void check_shapes(const DenseMatrix& X, const DenseMatrix& Z, const DenseMatrix& A,
                  const DenseMatrix& W, std::span<const double> b) {
  const std::size_t n = X.rows(), p = X.cols();
  if (Z.rows() != n || A.cols() != p || Z.cols() != A.rows() || W.rows() != n ||
      W.cols() != p || b.size() != p)
    throw std::invalid_argument("hsl: factor shapes do not conform with X");
}

double inner_product(const DenseMatrix& a, const DenseMatrix& b) {
  double s = 0.0;
  auto ad = a.data();
  auto bd = b.data();
  for (std::size_t i = 0; i < ad.size(); ++i) s += ad[i] * bd[i];
  return s;
}

double sq_dist(const DenseMatrix& a, const DenseMatrix& b) {
  double s = 0.0;
  auto ad = a.data();
  auto bd = b.data();
  for (std::size_t i = 0; i < ad.size(); ++i) {
    const double d = ad[i] - bd[i];
    s += d * d;
  }
  return s;
}

DenseMatrix gradient_step(const DenseMatrix& y, const DenseMatrix& g, double alpha) {
  DenseMatrix out = y;
  auto od = out.data();
  auto gd = g.data();
  for (std::size_t i = 0; i < od.size(); ++i) od[i] -= alpha * gd[i];
  return out;
}

DenseMatrix extrapolate(const DenseMatrix& cur, const DenseMatrix& prev, double beta) {
  if (beta == 0.0) return cur;
  DenseMatrix out = cur;
  auto od = out.data();
  auto pd = prev.data();
  for (std::size_t i = 0; i < od.size(); ++i) od[i] += beta * (od[i] - pd[i]);
  return out;
}

}  // namespace

void HslConfig::validate() const {
  if (k < 1) throw std::invalid_argument("HslConfig: k must be >= 1");
  if (!(lambda >= 0.0)) throw std::invalid_argument("HslConfig: lambda must be >= 0");
  if (!(gamma >= 0.0)) throw std::invalid_argument("HslConfig: gamma must be >= 0");
  if (!(eta >= 0.0)) throw std::invalid_argument("HslConfig: eta must be >= 0");
  if (!(alpha0 > 0.0)) throw std::invalid_argument("HslConfig: alpha0 must be > 0");
  if (!(inner_tol > 0.0) || !(outer_tol > 0.0) || !(overlap_eps > 0.0))
    throw std::invalid_argument("HslConfig: tolerances must be > 0");
  if (max_inner_iters < 1 || max_outer_iters < 1)
    throw std::invalid_argument("HslConfig: iteration caps must be >= 1");
}

double loss(const DenseMatrix& X, const DenseMatrix& Z, const DenseMatrix& A,
            const DenseMatrix& W, std::span<const double> b) {
  check_shapes(X, Z, A, W, b);
  const std::size_t n = X.rows(), p = X.cols(), k = Z.cols();
  std::vector<double> row(p);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* xi = X.row(i);
    std::copy(xi, xi + p, row.begin());
    const double* zi = Z.row(i);
    for (std::size_t a = 0; a < k; ++a) {
      const double v = zi[a];
      if (v == 0.0) continue;
      const double* ar = A.row(a);
      for (std::size_t j = 0; j < p; ++j) row[j] -= v * ar[j];
    }
    const double* wi = W.row(i);
    for (std::size_t j = 0; j < p; ++j) row[j] -= wi[j] * b[j];
    for (std::size_t j = 0; j < p; ++j) s += row[j] * row[j];
  }
  return s;
}

double overlap_penalty(const DenseMatrix& A, std::span<const double> b) {
  if (b.size() != A.cols())
    throw std::invalid_argument("overlap_penalty: |b| != columns of A");
  std::vector<double> norms = column_l2_norms(A);
  double s = 0.0;
  for (std::size_t j = 0; j < b.size(); ++j) s += std::abs(b[j]) * norms[j];
  return s;
}

double objective(const DenseMatrix& X, const DenseMatrix& Z, const DenseMatrix& A,
                 const DenseMatrix& W, std::span<const double> b, double lambda,
                 double gamma) {
  return loss(X, Z, A, W, b) + gamma * overlap_penalty(A, b) + lambda * l1_norm(b);
}

double objective(const DenseMatrix& X, const HslModel& model, double lambda, double gamma) {
  return objective(X, model.Z, model.A, model.W, model.b, lambda, gamma);
}

DenseMatrix residual(const DenseMatrix& X, const DenseMatrix& Z, const DenseMatrix& A,
                     const DenseMatrix& W, std::span<const double> b) {
  check_shapes(X, Z, A, W, b);
  const std::size_t n = X.rows(), p = X.cols(), k = Z.cols();
  DenseMatrix R = X;
  for (std::size_t i = 0; i < n; ++i) {
    double* ri = R.row(i);
    const double* zi = Z.row(i);
    for (std::size_t a = 0; a < k; ++a) {
      const double v = zi[a];
      if (v == 0.0) continue;
      const double* ar = A.row(a);
      for (std::size_t j = 0; j < p; ++j) ri[j] -= v * ar[j];
    }
    const double* wi = W.row(i);
    for (std::size_t j = 0; j < p; ++j) ri[j] -= wi[j] * b[j];
  }
  return R;
}

DenseMatrix grad_w(const DenseMatrix& R, std::span<const double> b) {
  if (b.size() != R.cols()) throw std::invalid_argument("grad_w: |b| != columns of R");
  DenseMatrix g(R.rows(), R.cols());
  for (std::size_t i = 0; i < R.rows(); ++i) {
    const double* ri = R.row(i);
    double* gi = g.row(i);
    for (std::size_t j = 0; j < R.cols(); ++j) gi[j] = -2.0 * ri[j] * b[j];
  }
  return g;
}

DenseMatrix grad_a(const DenseMatrix& Z, const DenseMatrix& R) {
  DenseMatrix g = matmul_ta(Z, R);
  for (double& x : g.data()) x *= -2.0;
  return g;
}

DenseMatrix grad_z(const DenseMatrix& R, const DenseMatrix& A) {
  DenseMatrix g = matmul_tb(R, A);
  for (double& x : g.data()) x *= -2.0;
  return g;
}

std::vector<double> grad_b(const DenseMatrix& W, const DenseMatrix& R) {
  if (W.rows() != R.rows() || W.cols() != R.cols())
    throw std::invalid_argument("grad_b: W and R shapes differ");
  std::vector<double> g(R.cols(), 0.0);
  for (std::size_t i = 0; i < R.rows(); ++i) {
    const double* wi = W.row(i);
    const double* ri = R.row(i);
    for (std::size_t j = 0; j < R.cols(); ++j) g[j] += wi[j] * ri[j];
  }
  for (double& x : g) x *= -2.0;
  return g;
}

namespace {

// The two halves of each block live on very different curvature scales (the
// gate b against the scores Z, the gated W against the loadings A), so each
// variable keeps its own persistent line-searched step size and the pair is
// updated Gauss-Seidel style. Line searches run on cheap partial residuals;
// accepted iterates are re-scored through objective() so the values chained
// into the outer trace are bit-identical to fresh evaluations.

double sumsq(const DenseMatrix& m) { return frobenius_norm_sq(m); }

// C - W diag(b)
DenseMatrix residual_wb(const DenseMatrix& C, const DenseMatrix& W,
                        std::span<const double> b) {
  DenseMatrix r = C;
  for (std::size_t i = 0; i < r.rows(); ++i) {
    double* ri = r.row(i);
    const double* wi = W.row(i);
    for (std::size_t j = 0; j < r.cols(); ++j) ri[j] -= wi[j] * b[j];
  }
  return r;
}

// C - Z A
DenseMatrix residual_za(const DenseMatrix& C, const DenseMatrix& Z,
                        const DenseMatrix& A) {
  DenseMatrix r = C;
  for (std::size_t i = 0; i < r.rows(); ++i) {
    double* ri = r.row(i);
    const double* zi = Z.row(i);
    for (std::size_t a = 0; a < Z.cols(); ++a) {
      const double v = zi[a];
      if (v == 0.0) continue;
      const double* ar = A.row(a);
      for (std::size_t j = 0; j < r.cols(); ++j) ri[j] -= v * ar[j];
    }
  }
  return r;
}

struct LineSearchResult {
  DenseMatrix value;
  double smooth = 0.0;
};

// One backtracking prox-gradient step: cand = prox(y - alpha * grad) with the
// sufficient-decrease test on the smooth part. `alpha` persists in the
// caller; `smooth_of` must evaluate the partial loss of a candidate.
template <typename Prox, typename SmoothOf>
LineSearchResult prox_step(const DenseMatrix& y, const DenseMatrix& grad, double f_y,
                           double& alpha, Prox&& prox, SmoothOf&& smooth_of) {
  const double slack = 1e-10 * std::max(1.0, std::abs(f_y));
  double a_try = std::min(alpha * kStepGrow, kAlphaMax);
  while (true) {
    DenseMatrix cand = prox(gradient_step(y, grad, a_try), a_try);
    const double f_c = smooth_of(cand);
    const double lin = inner_product(grad, cand) - inner_product(grad, y);
    const double quad = sq_dist(cand, y) / (2.0 * a_try);
    if (f_c <= f_y + lin + quad + slack || a_try * kStepShrink < kAlphaMin) {
      alpha = a_try;
      return {std::move(cand), f_c};
    }
    a_try *= kStepShrink;
  }
}

}  // namespace

InnerWaResult fit_inner_wa(const DenseMatrix& X, const DenseMatrix& Z,
                           std::span<const double> b, const DenseMatrix& W0,
                           const DenseMatrix& A0, const HslConfig& config) {
  config.validate();
  check_shapes(X, Z, A0, W0, b);
  const std::size_t p = X.cols();
  const double lambda = config.lambda;
  const double gamma = config.gamma;

  std::vector<double> col_thresh(p);  // gamma * |b(j)|, scaled by alpha per step
  for (std::size_t j = 0; j < p; ++j) col_thresh[j] = gamma * std::abs(b[j]);

  DenseMatrix Wc = lf_project(W0);
  DenseMatrix Ac = A0;
  DenseMatrix Wp = Wc;
  DenseMatrix Ap = Ac;

  double F_cur = objective(X, Z, Ac, Wc, b, lambda, gamma);
  if (!std::isfinite(F_cur))
    throw std::runtime_error("fit_inner_wa: non-finite objective at start");

  double alpha_w = config.alpha0;
  double alpha_a = config.alpha0;
  double t_cur = 1.0;
  std::size_t iters = 0;
  std::vector<double> thr(p);

  struct Pair {
    DenseMatrix W;
    DenseMatrix A;
  };

  auto attempt = [&](double beta) -> Pair {
    // W step at the extrapolated point, A held fixed.
    const DenseMatrix c_a = residual_za(X, Z, Ac);  // X - Z A
    const DenseMatrix y_w = extrapolate(Wc, Wp, beta);
    const DenseMatrix r_w = residual_wb(c_a, y_w, b);
    DenseMatrix g_w = grad_w(r_w, b);
    LineSearchResult w_step = prox_step(
        y_w, g_w, sumsq(r_w), alpha_w,
        [](DenseMatrix m, double) { return lf_project(std::move(m)); },
        [&](const DenseMatrix& cand) { return sumsq(residual_wb(c_a, cand, b)); });

    // A step at the extrapolated point, W at its fresh value.
    const DenseMatrix c_w = residual_wb(X, w_step.value, b);  // X - W diag(b)
    const DenseMatrix y_a = extrapolate(Ac, Ap, beta);
    const DenseMatrix r_a = residual_za(c_w, Z, y_a);
    DenseMatrix g_a = grad_a(Z, r_a);
    LineSearchResult a_step = prox_step(
        y_a, g_a, sumsq(r_a), alpha_a,
        [&](DenseMatrix m, double alpha) {
          for (std::size_t j = 0; j < p; ++j) thr[j] = alpha * col_thresh[j];
          return columnwise_l2_prox(m, thr);
        },
        [&](const DenseMatrix& cand) { return sumsq(residual_za(c_w, Z, cand)); });

    return {std::move(w_step.value), std::move(a_step.value)};
  };

  for (std::size_t m = 1; m <= config.max_inner_iters; ++m) {
    iters = m;
    double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_cur * t_cur));
    const double beta = (t_cur - 1.0) / t_next;

    Pair cand = attempt(beta);
    double F_cand = objective(X, Z, cand.A, cand.W, b, lambda, gamma);
    if (!std::isfinite(F_cand))
      throw std::runtime_error("fit_inner_wa: objective diverged");

    if (F_cand > F_cur) {
      // Momentum overshot; restart from the current iterate.
      t_next = 1.0;
      cand = attempt(0.0);
      F_cand = objective(X, Z, cand.A, cand.W, b, lambda, gamma);
      if (!std::isfinite(F_cand))
        throw std::runtime_error("fit_inner_wa: objective diverged");
      if (F_cand > F_cur) break;  // no descent left at this precision
    }

    Wp = std::move(Wc);
    Ap = std::move(Ac);
    Wc = std::move(cand.W);
    Ac = std::move(cand.A);
    const double rel = std::abs(F_cur - F_cand) / std::max(1.0, std::abs(F_cur));
    F_cur = F_cand;
    t_cur = t_next;
    if (rel < config.inner_tol) break;
  }
  return {std::move(Wc), std::move(Ac), F_cur, iters};
}

InnerZbResult fit_inner_zb(const DenseMatrix& X, const DenseMatrix& W,
                           const DenseMatrix& A, const DenseMatrix& Z0,
                           std::span<const double> b0, const HslConfig& config) {
  config.validate();
  check_shapes(X, Z0, A, W, b0);
  const std::size_t p = X.cols();
  const double lambda = config.lambda;
  const double gamma = config.gamma;

  const std::vector<double> a_norms = column_l2_norms(A);
  std::vector<double> gate_thresh(p);  // gamma * ||A(:,j)|| + lambda, scaled by alpha
  for (std::size_t j = 0; j < p; ++j) gate_thresh[j] = gamma * a_norms[j] + lambda;

  DenseMatrix Zc = lf_project(Z0);
  std::vector<double> bc(b0.begin(), b0.end());
  DenseMatrix Zp = Zc;
  std::vector<double> bp = bc;

  double F_cur = objective(X, Zc, A, W, bc, lambda, gamma);
  if (!std::isfinite(F_cur))
    throw std::runtime_error("fit_inner_zb: non-finite objective at start");

  double alpha_z = config.alpha0;
  double alpha_b = config.alpha0;
  double t_cur = 1.0;
  std::size_t iters = 0;

  struct Pair {
    DenseMatrix Z;
    std::vector<double> b;
  };

  auto attempt = [&](double beta) -> Pair {
    // Z step, b held fixed.
    const DenseMatrix c_b = residual_wb(X, W, bc);  // X - W diag(b)
    const DenseMatrix y_z = extrapolate(Zc, Zp, beta);
    const DenseMatrix r_z = residual_za(c_b, y_z, A);
    DenseMatrix g_z = grad_z(r_z, A);
    LineSearchResult z_step = prox_step(
        y_z, g_z, sumsq(r_z), alpha_z,
        [](DenseMatrix m, double) { return lf_project(std::move(m)); },
        [&](const DenseMatrix& cand) { return sumsq(residual_za(c_b, cand, A)); });

    // b step, Z at its fresh value.
    const DenseMatrix c_z = residual_za(X, z_step.value, A);  // X - Z A
    std::vector<double> y_b = bc;
    if (beta != 0.0)
      for (std::size_t j = 0; j < p; ++j) y_b[j] += beta * (y_b[j] - bp[j]);

    DenseMatrix r_b = residual_wb(c_z, W, y_b);
    const double f_y = sumsq(r_b);
    const std::vector<double> g_b = grad_b(W, r_b);
    const double slack = 1e-10 * std::max(1.0, std::abs(f_y));

    std::vector<double> cand_b(p);
    double a_try = std::min(alpha_b * kStepGrow, kAlphaMax);
    while (true) {
      for (std::size_t j = 0; j < p; ++j)
        cand_b[j] = l1_prox(y_b[j] - a_try * g_b[j], a_try * gate_thresh[j]);
      const double f_c = sumsq(residual_wb(c_z, W, cand_b));
      double lin = 0.0, quad = 0.0;
      for (std::size_t j = 0; j < p; ++j) {
        const double d = cand_b[j] - y_b[j];
        lin += g_b[j] * d;
        quad += d * d;
      }
      if (f_c <= f_y + lin + quad / (2.0 * a_try) + slack ||
          a_try * kStepShrink < kAlphaMin) {
        alpha_b = a_try;
        break;
      }
      a_try *= kStepShrink;
    }
    return {std::move(z_step.value), std::move(cand_b)};
  };

  for (std::size_t m = 1; m <= config.max_inner_iters; ++m) {
    iters = m;
    double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_cur * t_cur));
    const double beta = (t_cur - 1.0) / t_next;

    Pair cand = attempt(beta);
    double F_cand = objective(X, cand.Z, A, W, cand.b, lambda, gamma);
    if (!std::isfinite(F_cand))
      throw std::runtime_error("fit_inner_zb: objective diverged");

    if (F_cand > F_cur) {
      t_next = 1.0;
      cand = attempt(0.0);
      F_cand = objective(X, cand.Z, A, W, cand.b, lambda, gamma);
      if (!std::isfinite(F_cand))
        throw std::runtime_error("fit_inner_zb: objective diverged");
      if (F_cand > F_cur) break;
    }

    Zp = std::move(Zc);
    bp = std::move(bc);
    Zc = std::move(cand.Z);
    bc = std::move(cand.b);
    const double rel = std::abs(F_cur - F_cand) / std::max(1.0, std::abs(F_cur));
    F_cur = F_cand;
    t_cur = t_next;
    if (rel < config.inner_tol) break;
  }
  return {std::move(Zc), std::move(bc), F_cur, iters};
}

HslModel random_init(const DenseMatrix& X, const HslConfig& config) {
  config.validate();
  if (X.empty()) throw std::invalid_argument("random_init: empty data matrix");
  const std::size_t n = X.rows();
  const std::size_t p = X.cols();
  const std::size_t k = config.k;
  RngStream rng(config.seed, kInitStream);
  HslModel m;
  m.Z = lf_project(sample_gaussian(rng, n, k, 0.0, 1.0 / static_cast<double>(n * k)));
  // W starts as a damped copy of the data so every feature's gate sees a
  // non-vanishing pull on the first updates; a Gaussian W start lets the
  // lambda prox kill weak columns' gates before their W shares can form,
  // and the (w_j, b_j) = (0, 0) corner never recovers.
  const double x_norm = frobenius_norm(X);
  m.W = x_norm > 0.0 ? scale(X, 1.0 / x_norm) : DenseMatrix(n, p);
  m.A = sample_gaussian(rng, k, p, 0.0, 1.0 / static_cast<double>(k));
  m.b.assign(p, 1.0);
  return m;
}

HslModel fit(const DenseMatrix& X, const HslConfig& config, HslModel init) {
  config.validate();
  if (X.empty()) throw std::invalid_argument("fit: empty data matrix");
  check_shapes(X, init.Z, init.A, init.W, init.b);
  if (init.Z.cols() != config.k)
    throw std::invalid_argument("fit: init latent dimension != config.k");

  HslModel model = std::move(init);
  model.gamma_at_fit = config.gamma;
  model.converged = false;
  model.objective_trace.clear();
  model.Z = lf_project(model.Z);
  model.W = lf_project(model.W);

  double obj = objective(X, model.Z, model.A, model.W, model.b, config.lambda, config.gamma);
  model.objective_trace.push_back(obj);

  for (std::size_t outer = 1; outer <= config.max_outer_iters; ++outer) {
    InnerWaResult wa = fit_inner_wa(X, model.Z, model.b, model.W, model.A, config);
    model.W = std::move(wa.W);
    model.A = std::move(wa.A);

    InnerZbResult zb = fit_inner_zb(X, model.W, model.A, model.Z, model.b, config);
    model.Z = std::move(zb.Z);
    model.b = std::move(zb.b);

    const double new_obj = zb.objective;
    model.objective_trace.push_back(new_obj);
    model.outer_iterations = outer;
    const double rel = std::abs(obj - new_obj) / std::max(1.0, std::abs(obj));
    obj = new_obj;
    if (rel < config.outer_tol) {
      model.converged = true;
      break;
    }
  }
  return model;
}

HslModel fit(const DenseMatrix& X, const HslConfig& config) {
  return fit(X, config, random_init(X, config));
}

double gamma_probe(const DenseMatrix& X) {
  double best = 0.0;
  for (double nrm : column_l2_norms(X)) best = std::max(best, nrm * nrm);
  return 2.0 * best;
}

double default_eta(const DenseMatrix& X) {
  // The gamma at which a contested feature tips into one component is close
  // to scale-free in the data magnitude (b and A carry the scale under the
  // unit-ball constraints), and sits near 1/sqrt(n p) empirically; a step of
  // half that walks the continuation through the contested band in a handful
  // of increments.
  return 0.5 / std::sqrt(static_cast<double>(X.rows()) * static_cast<double>(X.cols()));
}

WarmStartPath fit_warm_start_path(const DenseMatrix& X, double lambda, double eta,
                                  const HslConfig& config) {
  if (!(eta > 0.0)) throw std::invalid_argument("fit_warm_start_path: eta must be > 0");
  HslConfig cfg = config;
  cfg.lambda = lambda;
  cfg.eta = eta;
  cfg.validate();

  WarmStartPath path;
  double gamma = 0.0;
  HslModel init = random_init(X, cfg);

  for (std::size_t step = 0; step < kMaxPathSteps; ++step) {
    cfg.gamma = gamma;
    HslModel model = fit(X, cfg, std::move(init));
    const double ov = overlap_penalty(model.A, model.b);
    log_debug("path step " + std::to_string(step) + ": gamma=" + std::to_string(gamma) +
              " overlap=" + std::to_string(ov) +
              " outer=" + std::to_string(model.outer_iterations));
    init = model;  // warm start for the next gamma
    path.entries.push_back({gamma, std::move(model), ov});
    if (ov <= cfg.overlap_eps) {
      path.reached_zero_overlap = true;
      path.gamma_max = gamma;
      return path;
    }
    gamma += eta;
  }
  // Path exhausted the safety cap without reaching zero overlap; callers see
  // reached_zero_overlap = false plus the full diagnostics in `entries`.
  log_info("warm-start path hit the step cap with overlap " +
           std::to_string(path.entries.empty() ? 0.0 : path.entries.back().overlap));
  path.reached_zero_overlap = false;
  path.gamma_max = path.entries.empty() ? 0.0 : path.entries.back().gamma;
  return path;
}

}  // namespace hsl
