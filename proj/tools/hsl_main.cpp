#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hsl/harness.hpp"
#include "hsl/io.hpp"
#include "hsl/log.hpp"
#include "hsl/metrics.hpp"
#include "hsl/solver.hpp"
#include "hsl/svd.hpp"
#include "hsl/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNotConverged = 3;

struct CliError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raw option values as parsed; only options the user actually set (or that
// appear in the config file) override the ExperimentConfig defaults.
struct RawOptions {
  std::size_t n = 100, p = 200, k = 20;
  double sigma2 = 1.0;
  std::string theta = "0.9,0.1,0";
  std::uint64_t seed = 0;
  double lambda = 0.0, gamma = 0.0, eta = 0.0, alpha0 = 1.0;
  double inner_tol = 1e-7, outer_tol = 1e-6, overlap_eps = 1e-8;
  std::size_t max_inner = 500, max_outer = 100;
  std::string method = "hsl";
  std::string methods = "hsl,pca,rpca,op";
  std::size_t trials = 10;
  std::string out = ".";
  std::size_t jobs = 1;
  bool strict = false;
  std::size_t clusters = 0;
  long long fixed_s = -1;
  std::string axis_values;   // comma list for sweep grids
  std::string phase_ks, phase_ss, gamma_fractions;
  std::string kind = "fit";
  bool header = false;
  std::string config_file;
};

std::vector<double> parse_double_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size() && !text.empty()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    try {
      out.push_back(std::stod(text.substr(pos, comma - pos)));
    } catch (const std::exception&) {
      throw CliError(std::string(what) + ": cannot parse '" + text + "'");
    }
    pos = comma + 1;
    if (comma == text.size()) break;
  }
  return out;
}

std::vector<std::size_t> parse_size_list(const std::string& text, const char* what) {
  std::vector<std::size_t> out;
  for (double v : parse_double_list(text, what)) {
    if (v < 0 || static_cast<double>(static_cast<std::size_t>(v)) != v)
      throw CliError(std::string(what) + ": values must be non-negative integers");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

std::array<double, 3> parse_theta(const std::string& text) {
  const std::vector<double> v = parse_double_list(text, "--theta");
  if (v.size() != 3) throw CliError("--theta: expected three comma-separated values");
  return {v[0], v[1], v[2]};
}

std::vector<hsl::Method> parse_methods(const std::string& text) {
  std::vector<hsl::Method> out;
  std::size_t pos = 0;
  while (pos <= text.size() && !text.empty()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string name = text.substr(pos, comma - pos);
    const auto m = hsl::parse_method(name);
    if (!m) throw CliError("unknown method '" + name + "' (expected hsl|pca|rpca|op)");
    out.push_back(*m);
    pos = comma + 1;
    if (comma == text.size()) break;
  }
  if (out.empty()) throw CliError("--methods: empty list");
  return out;
}

// Option registration shared by the subcommands; returns the RawOptions the
// bound pointers write into.
void add_synth_options(CLI::App* cmd, RawOptions& raw) {
  cmd->add_option("--n", raw.n, "Sample count");
  cmd->add_option("--p", raw.p, "Feature count");
  cmd->add_option("--k", raw.k, "Latent dimension");
  cmd->add_option("--sigma2", raw.sigma2, "Noise variance");
  cmd->add_option("--theta", raw.theta, "Membership probabilities t1,t2,t3");
  cmd->add_option("--seed", raw.seed, "Master seed");
  cmd->add_option("--s", raw.fixed_s, "Exact high-dimensional feature count");
}

void add_hsl_options(CLI::App* cmd, RawOptions& raw) {
  cmd->add_option("--lambda", raw.lambda, "l1 weight on the feature gate");
  cmd->add_option("--gamma", raw.gamma, "Exclusivity weight (fixes a single-gamma fit)");
  cmd->add_option("--eta", raw.eta, "Continuation increment (0 = auto)");
  cmd->add_option("--alpha0", raw.alpha0, "Initial step size");
  cmd->add_option("--inner-tol", raw.inner_tol, "Inner loop tolerance");
  cmd->add_option("--outer-tol", raw.outer_tol, "Outer loop tolerance");
  cmd->add_option("--overlap-eps", raw.overlap_eps, "Zero threshold for the overlap penalty");
  cmd->add_option("--max-inner", raw.max_inner, "Inner iteration cap");
  cmd->add_option("--max-outer", raw.max_outer, "Outer iteration cap");
}

void add_common_options(CLI::App* cmd, RawOptions& raw) {
  cmd->add_option("--out", raw.out, "Output directory or file");
  cmd->add_option("--jobs", raw.jobs, "Parallel workers");
  cmd->add_option("--trials", raw.trials, "Trials per grid cell");
  cmd->add_option("--clusters", raw.clusters, "k-means clusters for silhouette (0 = skip)");
  cmd->add_flag("--strict", raw.strict, "Exit 3 on non-convergence");
  cmd->add_flag("--header", raw.header, "Skip one CSV header line on input");
  cmd->add_option("--config", raw.config_file, "JSON config file (flags override it)");
}

// config file < CLI flags; both override built-in defaults.
void apply_config_file(const RawOptions& raw, const CLI::App* cmd, hsl::ExperimentConfig& cfg,
                       std::string& method, bool& header) {
  if (raw.config_file.empty()) return;
  std::ifstream in(raw.config_file);
  if (!in) throw hsl::DataError("cannot open config: " + raw.config_file);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw hsl::DataError(raw.config_file + ": " + e.what());
  }
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "n") cfg.synth.n = value.get<std::size_t>();
      else if (key == "p") cfg.synth.p = value.get<std::size_t>();
      else if (key == "k") { cfg.synth.k = value.get<std::size_t>(); cfg.hsl.k = cfg.synth.k; }
      else if (key == "sigma2") cfg.synth.sigma2 = value.get<double>();
      else if (key == "theta") cfg.synth.theta = value.get<std::array<double, 3>>();
      else if (key == "seed") cfg.synth.seed = value.get<std::uint64_t>();
      else if (key == "lambda") cfg.hsl.lambda = value.get<double>();
      else if (key == "gamma") cfg.fixed_gamma = value.get<double>();
      else if (key == "eta") cfg.hsl.eta = value.get<double>();
      else if (key == "alpha0") cfg.hsl.alpha0 = value.get<double>();
      else if (key == "inner_tol") cfg.hsl.inner_tol = value.get<double>();
      else if (key == "outer_tol") cfg.hsl.outer_tol = value.get<double>();
      else if (key == "overlap_eps") cfg.hsl.overlap_eps = value.get<double>();
      else if (key == "max_inner") cfg.hsl.max_inner_iters = value.get<std::size_t>();
      else if (key == "max_outer") cfg.hsl.max_outer_iters = value.get<std::size_t>();
      else if (key == "method") method = value.get<std::string>();
      else if (key == "methods") {
        cfg.methods.clear();
        for (const auto& name : value) {
          const auto m = hsl::parse_method(name.get<std::string>());
          if (!m) throw CliError("config: unknown method '" + name.get<std::string>() + "'");
          cfg.methods.push_back(*m);
        }
      }
      else if (key == "trials") cfg.trials = value.get<std::size_t>();
      else if (key == "out") cfg.out_dir = value.get<std::string>();
      else if (key == "jobs") cfg.jobs = value.get<std::size_t>();
      else if (key == "strict") cfg.strict = value.get<bool>();
      else if (key == "clusters") cfg.clusters = value.get<std::size_t>();
      else if (key == "s") cfg.fixed_s = value.get<std::size_t>();
      else if (key == "kind") {
        const auto k = hsl::parse_kind(value.get<std::string>());
        if (!k) throw CliError("config: unknown kind '" + value.get<std::string>() + "'");
        cfg.kind = *k;
      }
      else if (key == "values") cfg.axis_values = value.get<std::vector<double>>();
      else if (key == "phase_ks") cfg.phase_ks = value.get<std::vector<std::size_t>>();
      else if (key == "phase_ss") cfg.phase_ss = value.get<std::vector<std::size_t>>();
      else if (key == "gamma_fractions") cfg.gamma_fractions = value.get<std::vector<double>>();
      else if (key == "header") header = value.get<bool>();
      else if (key == "input") cfg.input_path = value.get<std::string>();
      else throw CliError("config: unknown key '" + key + "'");
    } catch (const json::exception& e) {
      throw CliError("config key '" + key + "': " + e.what());
    }
  }
  (void)cmd;
}

void apply_cli_overrides(const CLI::App* cmd, const RawOptions& raw,
                         hsl::ExperimentConfig& cfg, std::string& method, bool& header) {
  const auto set = [&](const std::string& flag) {
    const CLI::Option* opt = cmd->get_option_no_throw(flag);
    return opt != nullptr && opt->count() > 0;
  };
  if (set("--n")) cfg.synth.n = raw.n;
  if (set("--p")) cfg.synth.p = raw.p;
  if (set("--k")) { cfg.synth.k = raw.k; cfg.hsl.k = raw.k; }
  if (set("--sigma2")) cfg.synth.sigma2 = raw.sigma2;
  if (set("--theta")) cfg.synth.theta = parse_theta(raw.theta);
  if (set("--seed")) cfg.synth.seed = raw.seed;
  if (set("--lambda")) cfg.hsl.lambda = raw.lambda;
  if (set("--gamma")) cfg.fixed_gamma = raw.gamma;
  if (set("--eta")) cfg.hsl.eta = raw.eta;
  if (set("--alpha0")) cfg.hsl.alpha0 = raw.alpha0;
  if (set("--inner-tol")) cfg.hsl.inner_tol = raw.inner_tol;
  if (set("--outer-tol")) cfg.hsl.outer_tol = raw.outer_tol;
  if (set("--overlap-eps")) cfg.hsl.overlap_eps = raw.overlap_eps;
  if (set("--max-inner")) cfg.hsl.max_inner_iters = raw.max_inner;
  if (set("--max-outer")) cfg.hsl.max_outer_iters = raw.max_outer;
  if (set("--method")) method = raw.method;
  if (set("--methods")) cfg.methods = parse_methods(raw.methods);
  if (set("--trials")) cfg.trials = raw.trials;
  if (set("--out")) cfg.out_dir = raw.out;
  if (set("--jobs")) cfg.jobs = raw.jobs;
  if (set("--strict")) cfg.strict = raw.strict;
  if (set("--clusters")) cfg.clusters = raw.clusters;
  if (set("--s")) {
    if (raw.fixed_s < 0) throw CliError("--s: must be >= 0");
    cfg.fixed_s = static_cast<std::size_t>(raw.fixed_s);
  }
  if (set("--values")) cfg.axis_values = parse_double_list(raw.axis_values, "--values");
  if (set("--phase-ks")) cfg.phase_ks = parse_size_list(raw.phase_ks, "--phase-ks");
  if (set("--phase-ss")) cfg.phase_ss = parse_size_list(raw.phase_ss, "--phase-ss");
  if (set("--gamma-fractions"))
    cfg.gamma_fractions = parse_double_list(raw.gamma_fractions, "--gamma-fractions");
  if (set("--header")) header = raw.header;
  if (set("--kind")) {
    const auto k = hsl::parse_kind(raw.kind == "noise" || raw.kind == "k" || raw.kind == "theta"
                                       ? "sweep-" + raw.kind
                                       : raw.kind == "phase" ? "phase-transition"
                                       : raw.kind == "warmstart" ? "warmstart-compare"
                                                                 : raw.kind);
    if (!k) throw CliError("unknown sweep kind '" + raw.kind + "'");
    cfg.kind = *k;
  }
}

json config_to_json(const hsl::ExperimentConfig& cfg, const std::string& method) {
  json j;
  j["kind"] = hsl::kind_name(cfg.kind);
  j["n"] = cfg.synth.n;
  j["p"] = cfg.synth.p;
  j["k"] = cfg.synth.k;
  j["sigma2"] = cfg.synth.sigma2;
  j["theta"] = cfg.synth.theta;
  j["seed"] = cfg.synth.seed;
  j["lambda"] = cfg.hsl.lambda;
  j["eta"] = cfg.hsl.eta;
  j["alpha0"] = cfg.hsl.alpha0;
  j["inner_tol"] = cfg.hsl.inner_tol;
  j["outer_tol"] = cfg.hsl.outer_tol;
  j["overlap_eps"] = cfg.hsl.overlap_eps;
  j["max_inner"] = cfg.hsl.max_inner_iters;
  j["max_outer"] = cfg.hsl.max_outer_iters;
  if (cfg.fixed_gamma) j["gamma"] = *cfg.fixed_gamma;
  if (cfg.fixed_s) j["s"] = *cfg.fixed_s;
  if (cfg.input_path) j["input"] = *cfg.input_path;
  if (!method.empty()) j["method"] = method;
  json methods = json::array();
  for (hsl::Method m : cfg.methods) methods.push_back(hsl::method_name(m));
  j["methods"] = std::move(methods);
  j["trials"] = cfg.trials;
  j["jobs"] = cfg.jobs;
  j["out"] = cfg.out_dir;
  j["strict"] = cfg.strict;
  j["clusters"] = cfg.clusters;
  return j;
}

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec && !fs::is_directory(dir))
    throw hsl::DataError("cannot create output directory: " + dir);
}

void write_vector_csv(const fs::path& path, std::span<const double> v) {
  hsl::DenseMatrix row(1, v.size(), std::vector<double>(v.begin(), v.end()));
  hsl::write_csv_matrix(path, row);
}

int cmd_generate(const hsl::ExperimentConfig& cfg, const std::string& out_arg) {
  fs::path csv = out_arg;
  if (csv.extension() != ".csv") csv += ".csv";
  if (csv.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(csv.parent_path(), ec);
  }
  const hsl::SynthInstance inst = cfg.fixed_s
                                      ? hsl::generate_hybrid_fixed_count(cfg.synth, *cfg.fixed_s)
                                      : hsl::generate_hybrid(cfg.synth);
  hsl::write_csv_matrix(csv, inst.X);
  hsl::write_truth_sidecar(hsl::truth_sidecar_path(csv), inst);
  std::cout << csv.string() << "\n" << hsl::truth_sidecar_path(csv).string() << "\n";
  return kExitOk;
}

hsl::Dataset resolve_dataset(const hsl::ExperimentConfig& cfg, bool header) {
  if (cfg.input_path) return hsl::load_dataset(*cfg.input_path, header);
  return hsl::make_dataset(cfg.synth, cfg.fixed_s);
}

int cmd_fit(hsl::ExperimentConfig cfg, const std::string& method_text, bool header) {
  const auto method = hsl::parse_method(method_text);
  if (!method) throw CliError("unknown method '" + method_text + "'");
  ensure_out_dir(cfg.out_dir);
  const hsl::Dataset data = resolve_dataset(cfg, header);
  cfg.hsl.k = std::min(cfg.hsl.k, std::min(data.X.rows(), data.X.cols()));

  const std::uint64_t seed = hsl::fan_out(cfg.synth.seed, 0, 0, 1);
  hsl::MethodArtifacts artifacts;
  hsl::FitReport report = hsl::run_method(data, *method, cfg.hsl, cfg.fixed_gamma, seed,
                                          cfg.clusters, &artifacts);

  const fs::path dir = cfg.out_dir;
  hsl::write_report(dir / ("report_" + method_text + ".json"), report,
                    config_to_json(cfg, method_text).dump());
  hsl::write_csv_matrix(dir / ("L_" + method_text + ".csv"), artifacts.L);
  hsl::write_csv_matrix(dir / ("S_" + method_text + ".csv"), artifacts.S);
  if (artifacts.hsl_model) {
    hsl::write_csv_matrix(dir / "Z_hsl.csv", artifacts.hsl_model->Z);
    hsl::write_csv_matrix(dir / "A_hsl.csv", artifacts.hsl_model->A);
    hsl::write_csv_matrix(dir / "W_hsl.csv", artifacts.hsl_model->W);
    write_vector_csv(dir / "b_hsl.csv", artifacts.hsl_model->b);
  }

  std::cout << "method=" << method_text << " reconstruction_error="
            << hsl::format_metric(report.reconstruction_error);
  if (data.truth)
    std::cout << " subspace_error=" << hsl::format_metric(report.subspace_error)
              << " f1=" << hsl::format_metric(report.f1);
  std::cout << " converged=" << (report.converged ? "yes" : "no") << "\n";

  if (cfg.strict && !report.converged) return kExitNotConverged;
  return kExitOk;
}

int cmd_compare(hsl::ExperimentConfig cfg, bool header) {
  ensure_out_dir(cfg.out_dir);
  const hsl::Dataset data = resolve_dataset(cfg, header);
  cfg.hsl.k = std::min(cfg.hsl.k, std::min(data.X.rows(), data.X.cols()));
  const fs::path dir = cfg.out_dir;

  hsl::SweepTable table;
  table.header = {"method", "subspace_error", "s_error", "f1", "reconstruction_error",
                  "iterations", "converged", "wall_time_seconds"};
  bool all_converged = true;
  for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
    const std::uint64_t seed = hsl::fan_out(cfg.synth.seed, 0, 0, 1 + m);
    const hsl::FitReport r = hsl::run_method(data, cfg.methods[m], cfg.hsl,
                                             cfg.fixed_gamma, seed, cfg.clusters);
    all_converged = all_converged && r.converged;
    hsl::write_report(dir / ("report_" + r.method_name + ".json"), r,
                      config_to_json(cfg, r.method_name).dump());
    table.rows.push_back({r.method_name, hsl::format_metric(r.subspace_error),
                          hsl::format_metric(r.s_error), hsl::format_metric(r.f1),
                          hsl::format_metric(r.reconstruction_error),
                          std::to_string(r.iterations), r.converged ? "yes" : "no",
                          hsl::format_metric(r.wall_time_seconds)});
    std::cout << r.method_name
              << ": reconstruction_error=" << hsl::format_metric(r.reconstruction_error)
              << (data.truth
                      ? " subspace_error=" + hsl::format_metric(r.subspace_error) +
                            " f1=" + hsl::format_metric(r.f1)
                      : std::string())
              << "\n";
  }
  hsl::write_sweep_csv(dir / "compare.csv", table);
  if (cfg.strict && !all_converged) return kExitNotConverged;
  return kExitOk;
}

int cmd_sweep(hsl::ExperimentConfig cfg) {
  if (cfg.kind == hsl::ExperimentKind::Fit || cfg.kind == hsl::ExperimentKind::Spectrum)
    throw CliError("sweep: --kind must be one of noise|k|theta|phase|warmstart");
  ensure_out_dir(cfg.out_dir);
  const hsl::SweepTable table = hsl::run_sweep(cfg);
  const fs::path dir = cfg.out_dir;
  const fs::path csv = dir / ("sweep_" + hsl::kind_name(cfg.kind) + ".csv");
  hsl::write_sweep_csv(csv, table);
  std::ofstream cfg_out(dir / ("sweep_" + hsl::kind_name(cfg.kind) + ".config.json"));
  cfg_out << config_to_json(cfg, "").dump(1, '\t') << "\n";
  std::cout << csv.string() << "\n";
  return kExitOk;
}

int cmd_spectrum(hsl::ExperimentConfig cfg, bool header) {
  ensure_out_dir(cfg.out_dir);
  hsl::Dataset data;
  if (cfg.input_path) {
    data.X = hsl::read_csv_matrix(*cfg.input_path, header);
  } else {
    // Spectrum studies use the categorical generator.
    data.truth = hsl::generate_categorical(cfg.synth);
    data.X = data.truth->X;
  }
  const hsl::SpectrumProfile profile = hsl::spectrum_profile(data.X);

  const fs::path dir = cfg.out_dir;
  hsl::SweepTable table;
  table.header = {"index", "singular_value"};
  for (std::size_t i = 0; i < profile.values.size(); ++i)
    table.rows.push_back({std::to_string(i + 1), hsl::format_metric(profile.values[i])});
  hsl::write_sweep_csv(dir / "spectrum.csv", table);

  json summary;
  summary["count"] = profile.values.size();
  summary["sigma1"] = profile.values.empty() ? 0.0 : profile.values[0];
  summary["tail_half_ratio"] = profile.tail_half_ratio();
  if (cfg.synth.k < profile.values.size())
    summary["head_ratio_k"] = profile.head_ratio(cfg.synth.k);
  std::ofstream out(dir / "spectrum_summary.json");
  out << summary.dump(1, '\t') << "\n";
  std::cout << (dir / "spectrum.csv").string() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid subspace learning toolkit"};
  app.require_subcommand(1);

  RawOptions raw;
  std::string input_path;

  CLI::App* generate = app.add_subcommand("generate", "Write a synthetic dataset + truth sidecar");
  add_synth_options(generate, raw);
  add_common_options(generate, raw);

  CLI::App* fit_cmd = app.add_subcommand("fit", "Fit one method to a dataset");
  fit_cmd->add_option("data", input_path, "Input CSV (omit to fit a synthetic draw)");
  fit_cmd->add_option("--method", raw.method, "hsl|pca|rpca|op");
  add_synth_options(fit_cmd, raw);
  add_hsl_options(fit_cmd, raw);
  add_common_options(fit_cmd, raw);

  CLI::App* compare = app.add_subcommand("compare", "Fit several methods to one dataset");
  compare->add_option("data", input_path, "Input CSV (omit to fit a synthetic draw)");
  compare->add_option("--methods", raw.methods, "Comma list of methods");
  add_synth_options(compare, raw);
  add_hsl_options(compare, raw);
  add_common_options(compare, raw);

  CLI::App* sweep = app.add_subcommand("sweep", "Run an experiment grid");
  sweep->add_option("--kind", raw.kind, "noise|k|theta|phase|warmstart");
  sweep->add_option("--values", raw.axis_values, "Comma list of grid values");
  sweep->add_option("--phase-ks", raw.phase_ks, "Comma list of k values (phase)");
  sweep->add_option("--phase-ss", raw.phase_ss, "Comma list of s values (phase)");
  sweep->add_option("--gamma-fractions", raw.gamma_fractions,
                    "Fractions of gamma_max for cold restarts (warmstart)");
  sweep->add_option("--methods", raw.methods, "Comma list of methods");
  add_synth_options(sweep, raw);
  add_hsl_options(sweep, raw);
  add_common_options(sweep, raw);

  CLI::App* spectrum = app.add_subcommand("spectrum", "Singular value spectrum of a dataset");
  spectrum->add_option("data", input_path, "Input CSV (omit for a categorical draw)");
  add_synth_options(spectrum, raw);
  add_common_options(spectrum, raw);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    CLI::App* active = app.get_subcommands().front();
    hsl::ExperimentConfig cfg;
    std::string method = "hsl";
    bool header = false;
    apply_config_file(raw, active, cfg, method, header);
    apply_cli_overrides(active, raw, cfg, method, header);
    if (!input_path.empty()) cfg.input_path = input_path;

    if (active == generate) return cmd_generate(cfg, cfg.out_dir == "." ? "data" : cfg.out_dir);
    if (active == fit_cmd) return cmd_fit(cfg, method, header);
    if (active == compare) return cmd_compare(cfg, header);
    if (active == sweep) return cmd_sweep(cfg);
    if (active == spectrum) return cmd_spectrum(cfg, header);
    return kExitUsage;
  } catch (const hsl::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
}
