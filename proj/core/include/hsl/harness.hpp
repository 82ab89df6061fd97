#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hsl/matrix.hpp"
#include "hsl/metrics.hpp"
#include "hsl/model.hpp"
#include "hsl/synth.hpp"

namespace hsl {

enum class Method { Hsl, Pca, Rpca, Op };

std::string method_name(Method m);
std::optional<Method> parse_method(const std::string& name);

enum class ExperimentKind {
  Fit,
  SweepNoise,
  SweepK,
  SweepTheta,
  PhaseTransition,
  WarmstartCompare,
  Spectrum,
};

std::string kind_name(ExperimentKind k);
std::optional<ExperimentKind> parse_kind(const std::string& name);

/// Resolved experiment description; CLI flags override config-file values
/// override these defaults.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Fit;
  SynthSpec synth;                       // synth.seed doubles as the master seed
  std::optional<std::string> input_path; // fit/spectrum on an existing CSV
  HslConfig hsl;
  std::vector<Method> methods = {Method::Hsl, Method::Pca, Method::Rpca, Method::Op};
  std::size_t trials = 10;
  std::string out_dir = ".";
  std::size_t jobs = 1;
  bool strict = false;
  std::size_t clusters = 0;              // 0 disables silhouette
  std::optional<double> fixed_gamma;     // single fixed-gamma HSL fit instead of the path
  std::optional<std::size_t> fixed_s;    // fixed-count high-d features for the generator
  std::vector<double> axis_values;       // grid for noise/k/theta sweeps
  std::vector<std::size_t> phase_ks = {2, 5, 10, 20, 30};
  std::vector<std::size_t> phase_ss = {0, 10, 20, 40, 80};
  std::vector<double> gamma_fractions = {0.25, 0.5, 0.75, 1.0};

  void validate() const;
};

/// Deterministic stream fan-out. Tag 0 draws the per-trial dataset, so every
/// method sees the same data within a trial (paired comparisons); method
/// randomness uses tag = 1 + method index.
std::uint64_t fan_out(std::uint64_t master, std::uint64_t cell, std::uint64_t trial,
                      std::uint64_t tag);

struct Dataset {
  DenseMatrix X;
  std::optional<SynthInstance> truth;
};

Dataset make_dataset(const SynthSpec& spec, std::optional<std::size_t> fixed_s);
/// CSV plus optional <stem>.truth.json sidecar.
Dataset load_dataset(const std::filesystem::path& csv_path, bool header = false);

/// Factor estimates captured from a run_method call when the caller needs
/// more than the metrics (the CLI exports these as model files).
struct MethodArtifacts {
  DenseMatrix L;
  DenseMatrix S;
  std::optional<HslModel> hsl_model;
};

/// Fits one method and scores it against the dataset truth when present.
/// For HSL this runs the warm-start continuation path (or a single fit when
/// fixed_gamma is set); baselines use their protocol defaults (RPCA at
/// lambda = 1/sqrt(n), OP tuned to rank k).
FitReport run_method(const Dataset& data, Method method, const HslConfig& hsl_config,
                     std::optional<double> fixed_gamma, std::uint64_t method_seed,
                     std::size_t clusters = 0, MethodArtifacts* artifacts = nullptr);

struct SweepTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

void write_sweep_csv(const std::filesystem::path& path, const SweepTable& table);

/// Runs the sweep described by cfg.kind (one of the four sweep kinds) and
/// returns the aggregated table; rows are ordered by grid key so the output
/// is identical at any parallelism degree.
SweepTable run_sweep(const ExperimentConfig& cfg);

/// Index-parallel task runner; with jobs = 1 everything stays on the calling
/// thread. Exceptions from tasks are rethrown after all workers join.
void parallel_for(std::size_t jobs, std::size_t count,
                  const std::function<void(std::size_t)>& fn);

std::string format_metric(double v);

}  // namespace hsl
