#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <vector>

#include "hsl/matrix.hpp"
#include "hsl/prox.hpp"
#include "hsl/random.hpp"
#include "oracles.hpp"

using hsl::DenseMatrix;

TEST_SUITE_BEGIN("prox");

TEST_CASE("lf_project passes inside-ball inputs through bit-exact") {
  DenseMatrix m(2, 2);
  m(0, 0) = 0.3;
  m(1, 1) = -0.4;  // norm 0.5
  CHECK(hsl::lf_project(m) == m);
  CHECK(hsl::lf_project(DenseMatrix(3, 3)) == DenseMatrix(3, 3));
}

TEST_CASE("lf_project scales [[3],[4]] onto the unit sphere") {
  const DenseMatrix m{{3.0}, {4.0}};
  const DenseMatrix p = hsl::lf_project(m);
  CHECK(p(0, 0) == doctest::Approx(0.6));
  CHECK(p(1, 0) == doctest::Approx(0.8));
}

TEST_CASE("lf_project output norm identity min(1, ||m||)") {
  hsl::RngStream rng(31);
  for (int t = 0; t < 50; ++t) {
    const double target = rng.uniform01() * 3.0;
    DenseMatrix m = hsl::sample_gaussian(rng, 4, 5, 0.0, 1.0);
    const double nrm = hsl::frobenius_norm(m);
    if (nrm > 0) m = hsl::scale(m, target / nrm);
    const double out = hsl::frobenius_norm(hsl::lf_project(m));
    CHECK(out == doctest::Approx(std::min(1.0, target)).epsilon(1e-12));
  }
}

TEST_CASE("l2_prox direct evaluations") {
  const std::vector<double> a = {3.0, 4.0};
  const std::vector<double> shrunk = hsl::l2_prox(a, 2.0);
  CHECK(shrunk[0] == doctest::Approx(1.8));
  CHECK(shrunk[1] == doctest::Approx(2.4));

  const std::vector<double> killed = hsl::l2_prox(std::vector<double>{1.0, 0.0}, 5.0);
  CHECK(killed[0] == 0.0);
  CHECK(killed[1] == 0.0);

  const std::vector<double> same = hsl::l2_prox(a, 0.0);
  CHECK(same[0] == 3.0);
  CHECK(same[1] == 4.0);

  const std::vector<double> zero = hsl::l2_prox(std::vector<double>{0.0, 0.0}, 0.0);
  CHECK(zero[0] == 0.0);  // the 0/0 -> 0 convention
}

TEST_CASE("l1_prox direct evaluations") {
  CHECK(hsl::l1_prox(-3.0, 1.0) == doctest::Approx(-2.0));
  CHECK(hsl::l1_prox(0.5, 1.0) == 0.0);
  CHECK(hsl::l1_prox(2.5, 0.0) == 2.5);
  CHECK_THROWS_AS(hsl::l1_prox(1.0, -0.5), std::invalid_argument);
}

TEST_CASE("prox outputs minimize their objectives (grid-search oracle)") {
  hsl::RngStream rng(32);
  for (int t = 0; t < 100; ++t) {
    const double x = rng.gaussian() * 3.0;
    const double u = rng.uniform01() * 2.0;
    CHECK(hsl::l1_prox(x, u) == doctest::Approx(oracle::l1_prox(x, u)).epsilon(1e-6));
  }
  for (int t = 0; t < 100; ++t) {
    std::vector<double> a(3);
    for (auto& v : a) v = rng.gaussian() * 2.0;
    const double u = rng.uniform01() * 2.0;
    const std::vector<double> got = hsl::l2_prox(a, u);
    const std::vector<double> want = oracle::l2_prox(a, u);
    for (std::size_t i = 0; i < a.size(); ++i)
      CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-6));
  }
  for (int t = 0; t < 20; ++t) {
    const DenseMatrix m = hsl::sample_gaussian(rng, 3, 3, 0.0, 2.0);
    const DenseMatrix got = hsl::lf_project(m);
    const DenseMatrix want = oracle::lf_project(m);
    CHECK(hsl::frobenius_norm(hsl::sub(got, want)) < 1e-6);
  }
}

TEST_CASE("non-expansiveness on random pairs") {
  hsl::RngStream rng(33);
  for (int t = 0; t < 100; ++t) {
    const double u = rng.uniform01() * 2.0;
    const double x1 = rng.gaussian() * 3.0;
    const double x2 = rng.gaussian() * 3.0;
    CHECK(std::abs(hsl::l1_prox(x1, u) - hsl::l1_prox(x2, u)) <= std::abs(x1 - x2) + 1e-12);

    std::vector<double> a1(4), a2(4);
    for (auto& v : a1) v = rng.gaussian();
    for (auto& v : a2) v = rng.gaussian();
    const std::vector<double> p1 = hsl::l2_prox(a1, u);
    const std::vector<double> p2 = hsl::l2_prox(a2, u);
    double moved = 0.0, base = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
      moved += (p1[i] - p2[i]) * (p1[i] - p2[i]);
      base += (a1[i] - a2[i]) * (a1[i] - a2[i]);
    }
    CHECK(std::sqrt(moved) <= std::sqrt(base) + 1e-12);

    const DenseMatrix m1 = hsl::sample_gaussian(rng, 3, 2, 0.0, 1.5);
    const DenseMatrix m2 = hsl::sample_gaussian(rng, 3, 2, 0.0, 1.5);
    CHECK(hsl::frobenius_norm(hsl::sub(hsl::lf_project(m1), hsl::lf_project(m2))) <=
          hsl::frobenius_norm(hsl::sub(m1, m2)) + 1e-12);
  }
}

TEST_CASE("shrinkage keeps signs and never grows magnitudes") {
  hsl::RngStream rng(34);
  for (int t = 0; t < 200; ++t) {
    const double b = rng.gaussian() * 2.0;
    const double u = rng.uniform01();
    const double out = hsl::l1_prox(b, u);
    CHECK(std::abs(out) <= std::abs(b) + 1e-15);
    CHECK((out == 0.0 || (out > 0) == (b > 0)));

    std::vector<double> a(3);
    for (auto& v : a) v = rng.gaussian();
    const std::vector<double> shrunk = hsl::l2_prox(a, u);
    CHECK(hsl::vector_l2_norm(shrunk) <= hsl::vector_l2_norm(a) + 1e-15);
    // direction preserved or zeroed
    double cross = 0.0, self = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      cross += shrunk[i] * a[i];
      self += shrunk[i] * shrunk[i];
    }
    if (self > 0) CHECK(cross > 0);
  }
}

TEST_CASE("columnwise and elementwise wrappers match independent scalar calls") {
  hsl::RngStream rng(35);
  const DenseMatrix m = hsl::sample_gaussian(rng, 3, 4, 0.0, 1.0);
  std::vector<double> thr(4);
  for (auto& u : thr) u = rng.uniform01();

  const DenseMatrix got = hsl::columnwise_l2_prox(m, thr);
  for (std::size_t j = 0; j < 4; ++j) {
    std::vector<double> col(3);
    for (std::size_t i = 0; i < 3; ++i) col[i] = m(i, j);
    const std::vector<double> want = hsl::l2_prox(col, thr[j]);
    for (std::size_t i = 0; i < 3; ++i) CHECK(got(i, j) == doctest::Approx(want[i]));
  }

  std::vector<double> v(6), vthr(6);
  for (auto& x : v) x = rng.gaussian();
  for (auto& u : vthr) u = rng.uniform01();
  const std::vector<double> ev = hsl::elementwise_l1_prox(v, vthr);
  for (std::size_t i = 0; i < 6; ++i) CHECK(ev[i] == hsl::l1_prox(v[i], vthr[i]));
}

TEST_CASE("columnwise edge cases: zero thresholds and selective kill") {
  hsl::RngStream rng(36);
  const DenseMatrix m = hsl::sample_gaussian(rng, 3, 2, 0.0, 1.0);
  const std::vector<double> zeros(2, 0.0);
  CHECK(hsl::columnwise_l2_prox(m, zeros) == m);

  const std::vector<double> kill_first = {1e12, 0.0};
  const DenseMatrix out = hsl::columnwise_l2_prox(m, kill_first);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(out(i, 0) == 0.0);
    CHECK(out(i, 1) == m(i, 1));
  }
}

TEST_CASE("wrapper validation errors") {
  const DenseMatrix m(2, 3);
  CHECK_THROWS_AS(hsl::columnwise_l2_prox(m, std::vector<double>{1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(hsl::columnwise_l2_prox(m, std::vector<double>{1.0, -1.0, 0.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(hsl::elementwise_l1_prox(std::vector<double>{1.0},
                                           std::vector<double>{1.0, 2.0}),
                  std::invalid_argument);
}

TEST_SUITE_END();
