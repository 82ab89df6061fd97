#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <limits>

#include "hsl/matrix.hpp"
#include "hsl/random.hpp"
#include "oracles.hpp"

using hsl::DenseMatrix;

TEST_SUITE_BEGIN("matrix");

TEST_CASE("matmul identity, hand-computed, and annihilator cases") {
  const DenseMatrix m{{1.0, 2.0}, {3.0, 4.0}};
  CHECK(hsl::matmul(DenseMatrix::identity(2), m) == m);

  const DenseMatrix v{{0.0}, {1.0}};
  const DenseMatrix prod = hsl::matmul(m, v);
  CHECK(prod(0, 0) == doctest::Approx(2.0));
  CHECK(prod(1, 0) == doctest::Approx(4.0));

  const DenseMatrix zero(2, 3);
  CHECK(hsl::frobenius_norm(hsl::matmul(m, zero)) == 0.0);
}

TEST_CASE("matmul matches the naive oracle on random shapes") {
  hsl::RngStream rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const auto r = static_cast<std::size_t>(1 + rng.uniform01() * 8);
    const auto mid = static_cast<std::size_t>(1 + rng.uniform01() * 8);
    const auto c = static_cast<std::size_t>(1 + rng.uniform01() * 8);
    const DenseMatrix a = hsl::sample_gaussian(rng, r, mid, 0.0, 1.0);
    const DenseMatrix b = hsl::sample_gaussian(rng, mid, c, 0.0, 1.0);
    const DenseMatrix fast = hsl::matmul(a, b);
    const DenseMatrix slow = oracle::matmul(a, b);
    CHECK(hsl::frobenius_norm(hsl::sub(fast, slow)) < 1e-12);
  }
}

TEST_CASE("matmul_ta and matmul_tb agree with explicit transposes") {
  hsl::RngStream rng(12);
  const DenseMatrix a = hsl::sample_gaussian(rng, 7, 4, 0.0, 1.0);
  const DenseMatrix b = hsl::sample_gaussian(rng, 7, 5, 0.0, 1.0);
  const DenseMatrix c = hsl::sample_gaussian(rng, 6, 4, 0.0, 1.0);
  CHECK(hsl::frobenius_norm(
            hsl::sub(hsl::matmul_ta(a, b), hsl::matmul(hsl::transpose(a), b))) < 1e-12);
  CHECK(hsl::frobenius_norm(
            hsl::sub(hsl::matmul_tb(a, c), hsl::matmul(a, hsl::transpose(c)))) < 1e-12);
}

TEST_CASE("associativity property (AB)C = A(BC)") {
  hsl::RngStream rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const auto d1 = static_cast<std::size_t>(1 + rng.uniform01() * 6);
    const auto d2 = static_cast<std::size_t>(1 + rng.uniform01() * 6);
    const auto d3 = static_cast<std::size_t>(1 + rng.uniform01() * 6);
    const auto d4 = static_cast<std::size_t>(1 + rng.uniform01() * 6);
    const DenseMatrix a = hsl::sample_gaussian(rng, d1, d2, 0.0, 1.0);
    const DenseMatrix b = hsl::sample_gaussian(rng, d2, d3, 0.0, 1.0);
    const DenseMatrix c = hsl::sample_gaussian(rng, d3, d4, 0.0, 1.0);
    const DenseMatrix left = hsl::matmul(hsl::matmul(a, b), c);
    const DenseMatrix right = hsl::matmul(a, hsl::matmul(b, c));
    const double denom = std::max(1.0, hsl::frobenius_norm(left));
    CHECK(hsl::frobenius_norm(hsl::sub(left, right)) / denom < 1e-10);
  }
}

TEST_CASE("frobenius norm cases") {
  CHECK(hsl::frobenius_norm(DenseMatrix(3, 4)) == 0.0);
  CHECK(hsl::frobenius_norm(DenseMatrix{{3.0}, {4.0}}) == doctest::Approx(5.0));
}

TEST_CASE("column_scale acts as M diag(v)") {
  const std::vector<double> v = {2.0, 0.0, 1.0};
  const DenseMatrix scaled = hsl::column_scale(DenseMatrix::identity(3), v);
  CHECK(scaled(0, 0) == 2.0);
  CHECK(scaled(1, 1) == 0.0);
  CHECK(scaled(2, 2) == 1.0);
  CHECK(scaled(0, 1) == 0.0);
}

TEST_CASE("elementwise ops and column norms match direct summation") {
  hsl::RngStream rng(14);
  const DenseMatrix a = hsl::sample_gaussian(rng, 5, 6, 0.0, 1.0);
  const DenseMatrix b = hsl::sample_gaussian(rng, 5, 6, 0.0, 1.0);

  const DenseMatrix sum = hsl::add(a, b);
  const DenseMatrix diff = hsl::sub(a, b);
  const DenseMatrix had = hsl::hadamard(a, b);
  const DenseMatrix scl = hsl::scale(a, -1.5);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      CHECK(sum(i, j) == a(i, j) + b(i, j));
      CHECK(diff(i, j) == a(i, j) - b(i, j));
      CHECK(had(i, j) == a(i, j) * b(i, j));
      CHECK(scl(i, j) == -1.5 * a(i, j));
    }

  const std::vector<double> norms = hsl::column_l2_norms(a);
  for (std::size_t j = 0; j < a.cols(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) s += a(i, j) * a(i, j);
    CHECK(norms[j] == doctest::Approx(std::sqrt(s)));
  }
}

TEST_CASE("transpose round trip") {
  hsl::RngStream rng(15);
  const DenseMatrix a = hsl::sample_gaussian(rng, 4, 9, 0.0, 1.0);
  CHECK(hsl::transpose(hsl::transpose(a)) == a);
}

TEST_CASE("dimension mismatches throw") {
  const DenseMatrix a(2, 3);
  const DenseMatrix b(2, 3);
  CHECK_THROWS_AS(hsl::matmul(a, b), std::invalid_argument);
  CHECK_THROWS_AS(hsl::add(a, DenseMatrix(3, 2)), std::invalid_argument);
  CHECK_THROWS_AS(hsl::column_scale(a, std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("constructors reject non-finite entries") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(DenseMatrix(1, 1, nan), std::invalid_argument);
  CHECK_THROWS_AS(DenseMatrix({{1.0, inf}}), std::invalid_argument);
  CHECK_THROWS_AS(DenseMatrix(1, 2, std::vector<double>{0.0, nan}), std::invalid_argument);
  CHECK_THROWS_AS(DenseMatrix(2, 2, std::vector<double>{1.0}), std::invalid_argument);
}

TEST_SUITE_END();
