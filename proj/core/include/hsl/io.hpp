#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "hsl/matrix.hpp"
#include "hsl/metrics.hpp"
#include "hsl/synth.hpp"

namespace hsl {

/// Malformed input data (bad CSV cell, ragged row, unreadable file). The
/// message carries the file position; the CLI maps this to exit code 2.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One sample per row, comma separated, full round-trip precision.
void write_csv_matrix(const std::filesystem::path& path, const DenseMatrix& m);

/// `header` skips one leading line. Cells must parse as finite numbers and
/// rows must all have the same width; violations raise DataError with the
/// offending row/column.
DenseMatrix read_csv_matrix(const std::filesystem::path& path, bool header = false);

/// Sidecar path for a dataset: <stem>.truth.json next to the data file.
std::filesystem::path truth_sidecar_path(const std::filesystem::path& data_path);

void write_truth_sidecar(const std::filesystem::path& path, const SynthInstance& instance);
SynthInstance read_truth_sidecar(const std::filesystem::path& path);
std::optional<SynthInstance> try_read_truth_sidecar(const std::filesystem::path& data_path);

/// Report JSON (schema_version 1). `resolved_config` is echoed verbatim under
/// the "config" key and must be a serialized JSON object.
void write_report(const std::filesystem::path& path, const FitReport& report,
                  const std::string& resolved_config_json);
FitReport read_report(const std::filesystem::path& path);

}  // namespace hsl
