#include "hsl/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "hsl/baselines.hpp"
#include "hsl/io.hpp"
#include "hsl/log.hpp"
#include "hsl/random.hpp"
#include "hsl/solver.hpp"
#include "hsl/svd.hpp"

namespace hsl {

namespace {

constexpr double kSupportTol = 1e-6;

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::vector<double> column_norm_gate(const DenseMatrix& S) {
  return column_l2_norms(S);
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double stderr_of_mean(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  const double var = ss / static_cast<double>(v.size() - 1);
  return std::sqrt(var / static_cast<double>(v.size()));
}

}  // namespace

std::string method_name(Method m) {
  switch (m) {
    case Method::Hsl: return "hsl";
    case Method::Pca: return "pca";
    case Method::Rpca: return "rpca";
    case Method::Op: return "op";
  }
  return "unknown";
}

std::optional<Method> parse_method(const std::string& name) {
  if (name == "hsl") return Method::Hsl;
  if (name == "pca") return Method::Pca;
  if (name == "rpca") return Method::Rpca;
  if (name == "op") return Method::Op;
  return std::nullopt;
}

std::string kind_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::Fit: return "fit";
    case ExperimentKind::SweepNoise: return "sweep-noise";
    case ExperimentKind::SweepK: return "sweep-k";
    case ExperimentKind::SweepTheta: return "sweep-theta";
    case ExperimentKind::PhaseTransition: return "phase-transition";
    case ExperimentKind::WarmstartCompare: return "warmstart-compare";
    case ExperimentKind::Spectrum: return "spectrum";
  }
  return "unknown";
}

std::optional<ExperimentKind> parse_kind(const std::string& name) {
  for (ExperimentKind k : {ExperimentKind::Fit, ExperimentKind::SweepNoise,
                           ExperimentKind::SweepK, ExperimentKind::SweepTheta,
                           ExperimentKind::PhaseTransition, ExperimentKind::WarmstartCompare,
                           ExperimentKind::Spectrum})
    if (kind_name(k) == name) return k;
  return std::nullopt;
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw std::invalid_argument("ExperimentConfig: trials must be >= 1");
  if (jobs < 1) throw std::invalid_argument("ExperimentConfig: jobs must be >= 1");
  if (methods.empty()) throw std::invalid_argument("ExperimentConfig: no methods selected");
  synth.validate();
  hsl.validate();
}

std::uint64_t fan_out(std::uint64_t master, std::uint64_t cell, std::uint64_t trial,
                      std::uint64_t tag) {
  std::uint64_t h = mix64(master + 0x9e3779b97f4a7c15ULL);
  h = mix64(h ^ (cell + 0xbf58476d1ce4e5b9ULL));
  h = mix64(h ^ (trial + 0x94d049bb133111ebULL));
  h = mix64(h ^ tag);
  return h;
}

Dataset make_dataset(const SynthSpec& spec, std::optional<std::size_t> fixed_s) {
  SynthInstance inst =
      fixed_s ? generate_hybrid_fixed_count(spec, *fixed_s) : generate_hybrid(spec);
  Dataset d;
  d.X = inst.X;
  d.truth = std::move(inst);
  return d;
}

Dataset load_dataset(const std::filesystem::path& csv_path, bool header) {
  Dataset d;
  d.X = read_csv_matrix(csv_path, header);
  d.truth = try_read_truth_sidecar(csv_path);
  if (d.truth) {
    if (d.truth->spec.n != d.X.rows() || d.truth->spec.p != d.X.cols())
      throw DataError(csv_path.string() + ": truth sidecar shape does not match data");
    d.truth->X = d.X;  // sidecars carry the factors; the data itself is the csv
  }
  return d;
}

namespace {

struct MethodOutput {
  DenseMatrix L;
  DenseMatrix S;
  std::vector<double> gate;  // support scores: |b| for HSL, column norms of S otherwise
  std::size_t iterations = 0;
  bool converged = true;
  std::optional<double> aic;
  std::optional<DenseMatrix> scores;  // n x k embedding for clustering
  std::optional<HslModel> model;
};

MethodOutput run_hsl(const DenseMatrix& X, HslConfig cfg, std::optional<double> fixed_gamma,
                     std::uint64_t seed) {
  cfg.seed = seed;
  MethodOutput out;
  HslModel model;
  if (fixed_gamma) {
    cfg.gamma = *fixed_gamma;
    model = fit(X, cfg);
    out.iterations = model.outer_iterations;
    out.converged = model.converged;
  } else {
    const double eta = cfg.eta > 0.0 ? cfg.eta : default_eta(X);
    WarmStartPath path = fit_warm_start_path(X, cfg.lambda, eta, cfg);
    model = path.final_model();
    out.converged = path.reached_zero_overlap;
    for (const PathEntry& e : path.entries) out.iterations += e.model.outer_iterations;
  }
  out.L = model.low_rank();
  out.S = model.high_dim();
  out.gate.resize(model.b.size());
  for (std::size_t j = 0; j < model.b.size(); ++j) out.gate[j] = std::abs(model.b[j]);
  out.aic = aic_score(X, model);
  out.scores = model.Z;
  out.model = std::move(model);
  return out;
}

DenseMatrix svd_scores(const DenseMatrix& L, std::size_t k) {
  const SvdResult s = svd(L);
  const std::size_t r = std::min(k, s.singular_values.size());
  DenseMatrix scores(L.rows(), r);
  for (std::size_t i = 0; i < L.rows(); ++i)
    for (std::size_t c = 0; c < r; ++c) scores(i, c) = s.U(i, c) * s.singular_values[c];
  return scores;
}

}  // namespace

FitReport run_method(const Dataset& data, Method method, const HslConfig& hsl_config,
                     std::optional<double> fixed_gamma, std::uint64_t method_seed,
                     std::size_t clusters, MethodArtifacts* artifacts) {
  const auto start = std::chrono::steady_clock::now();
  const DenseMatrix& X = data.X;
  const std::size_t k = hsl_config.k;

  MethodOutput out;
  switch (method) {
    case Method::Hsl:
      out = run_hsl(X, hsl_config, fixed_gamma, method_seed);
      break;
    case Method::Pca: {
      LowRankSparseDecomposition d = pca(X, k);
      out.L = std::move(d.L);
      out.S = std::move(d.S);
      out.gate.assign(X.cols(), 0.0);
      out.iterations = d.iterations;
      out.converged = d.converged;
      break;
    }
    case Method::Rpca: {
      LowRankSparseDecomposition d = rpca(X);  // lambda = 1/sqrt(n)
      out.gate = column_norm_gate(d.S);
      out.L = std::move(d.L);
      out.S = std::move(d.S);
      out.iterations = d.iterations;
      out.converged = d.converged;
      break;
    }
    case Method::Op: {
      LowRankSparseDecomposition d = outlier_pursuit_with_rank(X, k);
      out.gate = column_norm_gate(d.S);
      out.L = std::move(d.L);
      out.S = std::move(d.S);
      out.iterations = d.iterations;
      out.converged = d.converged;
      break;
    }
  }

  FitReport report;
  report.method_name = method_name(method);
  report.iterations = out.iterations;
  report.converged = out.converged;
  report.seed = method_seed;
  report.aic = out.aic;
  report.reconstruction_error = reconstruction_error(X, out.L);

  if (data.truth) {
    const SynthInstance& truth = *data.truth;
    const DenseMatrix L_true = truth.true_low_rank();
    if (k <= std::min(L_true.rows(), L_true.cols())) {
      const DenseMatrix V_true = top_right_singular_basis(L_true, k);
      report.subspace_error = subspace_error(out.L, V_true, k);
    }
    const SRecoveryError serr = s_recovery_error(out.S, truth.true_high_dim());
    report.s_error = serr.raw;
    report.s_error_normalized = serr.normalized;
    const SupportScore score = support_f1(out.gate, truth.support_highd, kSupportTol);
    report.precision = score.precision;
    report.recall = score.recall;
    report.f1 = score.f1;
  }

  if (clusters > 0) {
    const DenseMatrix pts = out.scores ? *out.scores : svd_scores(out.L, k);
    const std::vector<std::size_t> labels = kmeans(pts, clusters, method_seed, 10);
    report.silhouette = silhouette(pts, labels);
  }

  if (artifacts) {
    artifacts->L = std::move(out.L);
    artifacts->S = std::move(out.S);
    artifacts->hsl_model = std::move(out.model);
  }

  report.wall_time_seconds = elapsed_seconds(start);
  return report;
}

void parallel_for(std::size_t jobs, std::size_t count,
                  const std::function<void(std::size_t)>& fn) {
  if (count == 0) return;
  if (jobs <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::scoped_lock lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const std::size_t workers = std::min(jobs, count);
  pool.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::string format_metric(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

void write_sweep_csv(const std::filesystem::path& path, const SweepTable& table) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open for writing: " + path.string());
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (c) out << ',';
    out << table.header[c];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      out << row[c];
    }
    out << '\n';
  }
  if (!out) throw DataError("write failed: " + path.string());
}

namespace {

struct GridCell {
  std::string axis_label;
  double axis_value = 0.0;
  SynthSpec spec;
  HslConfig hsl;
  std::optional<std::size_t> fixed_s;
};

SweepTable aggregate_cells(const ExperimentConfig& cfg, const std::vector<GridCell>& cells,
                           const std::string& axis_column, bool phase_mode) {
  const std::size_t trials = cfg.trials;
  const std::size_t n_methods = cfg.methods.size();
  std::vector<FitReport> results(cells.size() * trials * n_methods);

  parallel_for(cfg.jobs, cells.size() * trials, [&](std::size_t task) {
    const std::size_t cell_idx = task / trials;
    const std::size_t trial = task % trials;
    const GridCell& cell = cells[cell_idx];

    SynthSpec spec = cell.spec;
    spec.seed = fan_out(cfg.synth.seed, cell_idx, trial, 0);
    const Dataset data = make_dataset(spec, cell.fixed_s);

    for (std::size_t m = 0; m < n_methods; ++m) {
      const std::uint64_t seed = fan_out(cfg.synth.seed, cell_idx, trial, 1 + m);
      results[(cell_idx * trials + trial) * n_methods + m] =
          run_method(data, cfg.methods[m], cell.hsl, cfg.fixed_gamma, seed, cfg.clusters);
    }
    log_info("cell " + cell.axis_label + " trial " + std::to_string(trial) + " done");
  });

  SweepTable table;
  if (phase_mode) {
    table.header = {"k",
                    "s",
                    "method",
                    "trials",
                    "successes",
                    "subspace_error_mean",
                    "subspace_error_stderr",
                    "selection_error_mean",
                    "selection_error_stderr",
                    "wall_time_mean_seconds"};
  } else {
    table.header = {axis_column,
                    "method",
                    "trials",
                    "subspace_error_mean",
                    "subspace_error_stderr",
                    "s_error_mean",
                    "s_error_stderr",
                    "f1_mean",
                    "f1_stderr",
                    "wall_time_mean_seconds"};
  }

  for (std::size_t c = 0; c < cells.size(); ++c) {
    for (std::size_t m = 0; m < n_methods; ++m) {
      std::vector<double> sub, serr, f1, sel, wall;
      std::size_t successes = 0;
      for (std::size_t t = 0; t < trials; ++t) {
        const FitReport& r = results[(c * trials + t) * n_methods + m];
        sub.push_back(r.subspace_error);
        serr.push_back(r.s_error);
        f1.push_back(r.f1);
        sel.push_back(1.0 - r.f1);
        wall.push_back(r.wall_time_seconds);
        if (r.subspace_error <= 0.001 && r.f1 == 1.0) ++successes;
      }
      std::vector<std::string> row;
      if (phase_mode) {
        row = {std::to_string(cells[c].spec.k),
               std::to_string(cells[c].fixed_s.value_or(0)),
               method_name(cfg.methods[m]),
               std::to_string(trials),
               std::to_string(successes),
               format_metric(mean(sub)),
               format_metric(stderr_of_mean(sub)),
               format_metric(mean(sel)),
               format_metric(stderr_of_mean(sel)),
               format_metric(mean(wall))};
      } else {
        row = {cells[c].axis_label,
               method_name(cfg.methods[m]),
               std::to_string(trials),
               format_metric(mean(sub)),
               format_metric(stderr_of_mean(sub)),
               format_metric(mean(serr)),
               format_metric(stderr_of_mean(serr)),
               format_metric(mean(f1)),
               format_metric(stderr_of_mean(f1)),
               format_metric(mean(wall))};
      }
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

SweepTable run_axis_sweep(const ExperimentConfig& cfg) {
  std::vector<double> values = cfg.axis_values;
  std::string axis;
  if (cfg.kind == ExperimentKind::SweepNoise) {
    axis = "sigma2";
    if (values.empty()) values = {0.0, 0.25, 0.5, 1.0, 2.0, 4.0};
  } else if (cfg.kind == ExperimentKind::SweepK) {
    axis = "k";
    if (values.empty()) values = {5, 10, 20, 40};
  } else {
    axis = "theta2";
    if (values.empty()) values = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
  }

  std::vector<GridCell> cells;
  for (double v : values) {
    GridCell cell;
    cell.axis_value = v;
    cell.axis_label = format_metric(v);
    cell.spec = cfg.synth;
    cell.hsl = cfg.hsl;
    cell.fixed_s = cfg.fixed_s;
    if (cfg.kind == ExperimentKind::SweepNoise) {
      if (!(v >= 0.0)) throw std::invalid_argument("sweep-noise: sigma2 must be >= 0");
      cell.spec.sigma2 = v;
    } else if (cfg.kind == ExperimentKind::SweepK) {
      const auto k = static_cast<std::size_t>(v);
      if (k < 1 || static_cast<double>(k) != v)
        throw std::invalid_argument("sweep-k: k values must be positive integers");
      cell.spec.k = k;
      cell.hsl.k = k;
    } else {
      if (!(v >= 0.0 && v <= 1.0))
        throw std::invalid_argument("sweep-theta: theta2 must lie in [0, 1]");
      cell.spec.theta = {1.0 - v, v, 0.0};
    }
    cells.push_back(std::move(cell));
  }
  return aggregate_cells(cfg, cells, axis, /*phase_mode=*/false);
}

SweepTable run_phase_sweep(const ExperimentConfig& cfg) {
  std::vector<GridCell> cells;
  for (std::size_t k : cfg.phase_ks) {
    for (std::size_t s : cfg.phase_ss) {
      GridCell cell;
      cell.spec = cfg.synth;
      cell.spec.k = k;
      cell.spec.sigma2 = 0.0;
      cell.hsl = cfg.hsl;
      cell.hsl.k = k;
      cell.fixed_s = s;
      cells.push_back(std::move(cell));
    }
  }
  return aggregate_cells(cfg, cells, "", /*phase_mode=*/true);
}

SweepTable run_warmstart_sweep(const ExperimentConfig& cfg) {
  SweepTable table;
  table.header = {"seed_index", "gamma_index", "gamma",   "start",
                  "objective",  "f1",          "overlap", "wall_time_seconds"};

  struct SeedRows {
    std::vector<std::vector<std::string>> rows;
  };
  std::vector<SeedRows> per_seed(cfg.trials);

  parallel_for(cfg.jobs, cfg.trials, [&](std::size_t t) {
    SynthSpec spec = cfg.synth;
    spec.seed = fan_out(cfg.synth.seed, 0, t, 0);
    const Dataset data = make_dataset(spec, cfg.fixed_s);
    const SynthInstance& truth = *data.truth;

    HslConfig warm_cfg = cfg.hsl;
    warm_cfg.seed = fan_out(cfg.synth.seed, 0, t, 1);
    const double eta = warm_cfg.eta > 0.0 ? warm_cfg.eta : default_eta(data.X);

    auto t0 = std::chrono::steady_clock::now();
    const WarmStartPath path = fit_warm_start_path(data.X, warm_cfg.lambda, eta, warm_cfg);
    const double warm_seconds = elapsed_seconds(t0);

    SeedRows& rows = per_seed[t];
    for (std::size_t i = 0; i < path.entries.size(); ++i) {
      const PathEntry& e = path.entries[i];
      const SupportScore score =
          support_f1(e.model.b, truth.support_highd, kSupportTol);
      rows.rows.push_back({std::to_string(t), std::to_string(i), format_metric(e.gamma),
                           "warm", format_metric(e.model.objective_trace.back()),
                           format_metric(score.f1), format_metric(e.overlap),
                           format_metric(warm_seconds / static_cast<double>(path.entries.size()))});
    }

    // Cold restarts at the requested fractions of this seed's gamma_max.
    const double gamma_max = path.gamma_max;
    for (std::size_t fi = 0; fi < cfg.gamma_fractions.size(); ++fi) {
      const double target = cfg.gamma_fractions[fi] * gamma_max;
      // snap to the warm grid so the comparison is at an identical gamma
      std::size_t best_idx = 0;
      for (std::size_t i = 0; i < path.entries.size(); ++i)
        if (std::abs(path.entries[i].gamma - target) <
            std::abs(path.entries[best_idx].gamma - target))
          best_idx = i;
      const double gamma = path.entries[best_idx].gamma;

      HslConfig cold_cfg = warm_cfg;
      cold_cfg.gamma = gamma;
      cold_cfg.seed = fan_out(cfg.synth.seed, 0, t, 100 + fi);
      auto t1 = std::chrono::steady_clock::now();
      const HslModel cold = fit(data.X, cold_cfg);
      const double cold_seconds = elapsed_seconds(t1);
      const SupportScore score = support_f1(cold.b, truth.support_highd, kSupportTol);
      rows.rows.push_back({std::to_string(t), std::to_string(best_idx),
                           format_metric(gamma), "cold",
                           format_metric(cold.objective_trace.back()),
                           format_metric(score.f1),
                           format_metric(overlap_penalty(cold.A, cold.b)),
                           format_metric(cold_seconds)});
    }
  });

  for (auto& seed_rows : per_seed)
    for (auto& row : seed_rows.rows) table.rows.push_back(std::move(row));
  return table;
}

}  // namespace

SweepTable run_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  switch (cfg.kind) {
    case ExperimentKind::SweepNoise:
    case ExperimentKind::SweepK:
    case ExperimentKind::SweepTheta:
      return run_axis_sweep(cfg);
    case ExperimentKind::PhaseTransition:
      return run_phase_sweep(cfg);
    case ExperimentKind::WarmstartCompare:
      return run_warmstart_sweep(cfg);
    default:
      throw std::invalid_argument("run_sweep: kind '" + kind_name(cfg.kind) +
                                  "' is not a sweep");
  }
}

}  // namespace hsl
