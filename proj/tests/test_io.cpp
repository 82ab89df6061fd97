#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "hsl/io.hpp"
#include "hsl/matrix.hpp"
#include "hsl/random.hpp"
#include "hsl/synth.hpp"

namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "hsl_io_tests";
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

}  // namespace

TEST_SUITE_BEGIN("io");

TEST_CASE("csv round trip is bit-identical") {
  hsl::RngStream rng(101);
  const hsl::DenseMatrix m = hsl::sample_gaussian(rng, 13, 7, 0.0, 3.0);
  const fs::path path = temp_dir() / "roundtrip.csv";
  hsl::write_csv_matrix(path, m);
  const hsl::DenseMatrix back = hsl::read_csv_matrix(path);
  CHECK(back == m);
}

TEST_CASE("csv header flag skips one line") {
  const fs::path path = temp_dir() / "header.csv";
  write_text(path, "col_a,col_b\n1.5,2\n3,4\n");
  const hsl::DenseMatrix m = hsl::read_csv_matrix(path, /*header=*/true);
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 2);
  CHECK(m(0, 0) == 1.5);
  CHECK_THROWS_AS(hsl::read_csv_matrix(path, false), hsl::DataError);
}

TEST_CASE("csv errors carry the offending position") {
  const fs::path bad_cell = temp_dir() / "bad_cell.csv";
  write_text(bad_cell, "1,2,3\n4,abc,6\n");
  try {
    hsl::read_csv_matrix(bad_cell);
    FAIL("expected DataError");
  } catch (const hsl::DataError& e) {
    const std::string msg = e.what();
    CHECK(msg.find(":2") != std::string::npos);       // line
    CHECK(msg.find("column 2") != std::string::npos);  // column
    CHECK(msg.find("abc") != std::string::npos);
  }

  const fs::path ragged = temp_dir() / "ragged.csv";
  write_text(ragged, "1,2,3\n4,5\n");
  try {
    hsl::read_csv_matrix(ragged);
    FAIL("expected DataError");
  } catch (const hsl::DataError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("expected 3 columns, got 2") != std::string::npos);
  }

  const fs::path empty = temp_dir() / "empty.csv";
  write_text(empty, "");
  CHECK_THROWS_AS(hsl::read_csv_matrix(empty), hsl::DataError);
  CHECK_THROWS_AS(hsl::read_csv_matrix(temp_dir() / "missing.csv"), hsl::DataError);

  const fs::path inf_cell = temp_dir() / "inf.csv";
  write_text(inf_cell, "1,inf\n");
  CHECK_THROWS_AS(hsl::read_csv_matrix(inf_cell), hsl::DataError);
}

TEST_CASE("truth sidecar round trip preserves the instance") {
  hsl::SynthSpec spec;
  spec.n = 12;
  spec.p = 17;
  spec.k = 3;
  spec.sigma2 = 0.5;
  spec.seed = 99;
  const hsl::SynthInstance inst = hsl::generate_hybrid(spec);

  const fs::path data = temp_dir() / "inst.csv";
  const fs::path sidecar = hsl::truth_sidecar_path(data);
  CHECK(sidecar.filename() == "inst.truth.json");

  hsl::write_csv_matrix(data, inst.X);
  hsl::write_truth_sidecar(sidecar, inst);

  const hsl::SynthInstance back = hsl::read_truth_sidecar(sidecar);
  CHECK(back.spec.n == spec.n);
  CHECK(back.spec.theta == spec.theta);
  CHECK(back.spec.seed == spec.seed);
  CHECK(back.true_Z == inst.true_Z);
  CHECK(back.true_A == inst.true_A);
  CHECK(back.true_W == inst.true_W);
  CHECK(back.true_b == inst.true_b);
  CHECK(back.support_highd == inst.support_highd);

  const auto loaded = hsl::try_read_truth_sidecar(data);
  REQUIRE(loaded.has_value());
  CHECK(loaded->true_b == inst.true_b);
  CHECK(!hsl::try_read_truth_sidecar(temp_dir() / "nothing.csv").has_value());
}

TEST_CASE("report json round trip with optional fields") {
  hsl::FitReport r;
  r.method_name = "hsl";
  r.subspace_error = 0.125;
  r.s_error = 4.5;
  r.s_error_normalized = 0.3;
  r.f1 = 0.9;
  r.precision = 1.0;
  r.recall = 0.8181;
  r.reconstruction_error = 12.25;
  r.aic = -1234.5;
  r.iterations = 42;
  r.converged = true;
  r.wall_time_seconds = 0.75;
  r.seed = 1234567890123ULL;

  const fs::path path = temp_dir() / "report.json";
  hsl::write_report(path, r, R"({"lambda":0.5,"k":7})");
  const hsl::FitReport back = hsl::read_report(path);
  CHECK(back.method_name == "hsl");
  CHECK(back.subspace_error == r.subspace_error);
  CHECK(back.f1 == r.f1);
  CHECK(back.aic.has_value());
  CHECK(*back.aic == *r.aic);
  CHECK(!back.silhouette.has_value());
  CHECK(back.seed == r.seed);

  // schema_version and the echoed config are present in the document
  std::ifstream in(path);
  const std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  CHECK(text.find("\"schema_version\"") != std::string::npos);
  CHECK(text.find("\"lambda\"") != std::string::npos);
}

TEST_SUITE_END();
