#include "hsl/io.hpp"

#include <charconv>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace hsl {

namespace {

using nlohmann::json;

json matrix_to_json(const DenseMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

DenseMatrix matrix_from_json(const json& j) {
  const std::size_t rows = j.size();
  const std::size_t cols = rows == 0 ? 0 : j.at(0).size();
  std::vector<double> data;
  data.reserve(rows * cols);
  for (const auto& row : j) {
    if (row.size() != cols) throw DataError("truth sidecar: ragged matrix");
    for (const auto& cell : row) data.push_back(cell.get<double>());
  }
  return DenseMatrix(rows, cols, std::move(data));
}

}  // namespace

void write_csv_matrix(const std::filesystem::path& path, const DenseMatrix& m) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open for writing: " + path.string());
  char buf[64];
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
      if (j) out << ',';
      out << buf;
    }
    out << '\n';
  }
  if (!out) throw DataError("write failed: " + path.string());
}

DenseMatrix read_csv_matrix(const std::filesystem::path& path, bool header) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open: " + path.string());

  std::vector<double> data;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::string line;
  std::size_t line_no = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (header && line_no == 1) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;  // tolerate blank lines

    std::size_t col = 0;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      std::size_t comma = line.find(',', pos);
      if (comma == std::string::npos) comma = line.size();
      const std::string_view cell(line.data() + pos, comma - pos);
      ++col;

      double value = 0.0;
      const char* first = cell.data();
      const char* last = cell.data() + cell.size();
      while (first < last && (*first == ' ' || *first == '\t')) ++first;
      while (last > first && (last[-1] == ' ' || last[-1] == '\t')) --last;
      const auto [ptr, ec] = std::from_chars(first, last, value);
      if (ec != std::errc() || ptr != last || first == last || !std::isfinite(value)) {
        std::ostringstream msg;
        msg << path.string() << ":" << line_no << ": column " << col << ": '"
            << std::string(first, last) << "' is not a finite number";
        throw DataError(msg.str());
      }
      data.push_back(value);
      pos = comma + 1;
      if (comma == line.size()) break;
    }

    if (cols == 0) {
      cols = col;
    } else if (col != cols) {
      std::ostringstream msg;
      msg << path.string() << ":" << line_no << ": expected " << cols
          << " columns, got " << col;
      throw DataError(msg.str());
    }
    ++rows;
  }
  if (rows == 0) throw DataError(path.string() + ": no data rows");
  return DenseMatrix(rows, cols, std::move(data));
}

std::filesystem::path truth_sidecar_path(const std::filesystem::path& data_path) {
  std::filesystem::path p = data_path;
  p.replace_extension();
  p += ".truth.json";
  return p;
}

void write_truth_sidecar(const std::filesystem::path& path, const SynthInstance& inst) {
  json j;
  j["spec"] = {{"n", inst.spec.n},         {"p", inst.spec.p},
               {"k", inst.spec.k},         {"sigma2", inst.spec.sigma2},
               {"theta", inst.spec.theta}, {"seed", inst.spec.seed}};
  j["Z"] = matrix_to_json(inst.true_Z);
  j["A"] = matrix_to_json(inst.true_A);
  j["W"] = matrix_to_json(inst.true_W);
  j["b"] = inst.true_b;
  j["support_lowr"] = inst.support_lowr;
  j["support_highd"] = inst.support_highd;

  std::ofstream out(path);
  if (!out) throw DataError("cannot open for writing: " + path.string());
  out << j.dump(1, '\t') << '\n';
  if (!out) throw DataError("write failed: " + path.string());
}

SynthInstance read_truth_sidecar(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  try {
    SynthInstance inst;
    inst.spec.n = j.at("spec").at("n").get<std::size_t>();
    inst.spec.p = j.at("spec").at("p").get<std::size_t>();
    inst.spec.k = j.at("spec").at("k").get<std::size_t>();
    inst.spec.sigma2 = j.at("spec").at("sigma2").get<double>();
    inst.spec.theta = j.at("spec").at("theta").get<std::array<double, 3>>();
    inst.spec.seed = j.at("spec").at("seed").get<std::uint64_t>();
    inst.true_Z = matrix_from_json(j.at("Z"));
    inst.true_A = matrix_from_json(j.at("A"));
    inst.true_W = matrix_from_json(j.at("W"));
    inst.true_b = j.at("b").get<std::vector<double>>();
    inst.support_lowr = j.at("support_lowr").get<std::vector<std::size_t>>();
    inst.support_highd = j.at("support_highd").get<std::vector<std::size_t>>();
    return inst;
  } catch (const json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::optional<SynthInstance> try_read_truth_sidecar(const std::filesystem::path& data_path) {
  const std::filesystem::path sidecar = truth_sidecar_path(data_path);
  if (!std::filesystem::exists(sidecar)) return std::nullopt;
  return read_truth_sidecar(sidecar);
}

void write_report(const std::filesystem::path& path, const FitReport& r,
                  const std::string& resolved_config_json) {
  json j;
  j["schema_version"] = 1;
  j["method"] = r.method_name;
  json m;
  m["subspace_error"] = r.subspace_error;
  m["s_error"] = r.s_error;
  m["s_error_normalized"] = r.s_error_normalized;
  m["f1"] = r.f1;
  m["precision"] = r.precision;
  m["recall"] = r.recall;
  m["reconstruction_error"] = r.reconstruction_error;
  m["silhouette"] = r.silhouette ? json(*r.silhouette) : json(nullptr);
  m["aic"] = r.aic ? json(*r.aic) : json(nullptr);
  j["metrics"] = std::move(m);
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["wall_time_seconds"] = r.wall_time_seconds;
  j["seed"] = r.seed;
  j["config"] = resolved_config_json.empty() ? json::object()
                                             : json::parse(resolved_config_json);

  std::ofstream out(path);
  if (!out) throw DataError("cannot open for writing: " + path.string());
  out << j.dump(1, '\t') << '\n';
  if (!out) throw DataError("write failed: " + path.string());
}

FitReport read_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  FitReport r;
  try {
    r.method_name = j.at("method").get<std::string>();
    const auto& m = j.at("metrics");
    r.subspace_error = m.at("subspace_error").get<double>();
    r.s_error = m.at("s_error").get<double>();
    r.s_error_normalized = m.at("s_error_normalized").get<double>();
    r.f1 = m.at("f1").get<double>();
    r.precision = m.at("precision").get<double>();
    r.recall = m.at("recall").get<double>();
    r.reconstruction_error = m.at("reconstruction_error").get<double>();
    if (!m.at("silhouette").is_null()) r.silhouette = m.at("silhouette").get<double>();
    if (!m.at("aic").is_null()) r.aic = m.at("aic").get<double>();
    r.iterations = j.at("iterations").get<std::size_t>();
    r.converged = j.at("converged").get<bool>();
    r.wall_time_seconds = j.at("wall_time_seconds").get<double>();
    r.seed = j.at("seed").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  return r;
}

}  // namespace hsl
