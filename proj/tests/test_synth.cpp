#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hsl/matrix.hpp"
#include "hsl/svd.hpp"
#include "hsl/synth.hpp"

using hsl::SynthInstance;
using hsl::SynthSpec;

TEST_SUITE_BEGIN("synth");

TEST_CASE("theta = (1,0,0) gives a pure low-rank instance") {
  SynthSpec spec;
  spec.n = 40;
  spec.p = 60;
  spec.k = 5;
  spec.sigma2 = 0.25;
  spec.theta = {1.0, 0.0, 0.0};
  spec.seed = 3;
  const SynthInstance inst = hsl::generate_hybrid(spec);

  for (double bj : inst.true_b) CHECK(bj == 0.0);
  CHECK(inst.support_highd.empty());
  CHECK(inst.support_lowr.size() == 60);

  // X - Z A is pure noise with per-entry variance sigma2
  const hsl::DenseMatrix noise = hsl::sub(inst.X, inst.true_low_rank());
  const double var = hsl::frobenius_norm_sq(noise) / (40.0 * 60.0);
  CHECK(var == doctest::Approx(0.25).epsilon(0.10));
}

TEST_CASE("theta = (0,1,0) gives a pure high-dimensional instance") {
  SynthSpec spec;
  spec.n = 30;
  spec.p = 50;
  spec.k = 4;
  spec.sigma2 = 0.0;
  spec.theta = {0.0, 1.0, 0.0};
  spec.seed = 4;
  const SynthInstance inst = hsl::generate_hybrid(spec);

  CHECK(inst.support_lowr.empty());
  CHECK(inst.support_highd.size() == 50);
  for (std::size_t a = 0; a < spec.k; ++a)
    for (std::size_t j = 0; j < spec.p; ++j) CHECK(inst.true_A(a, j) == 0.0);
  CHECK(hsl::frobenius_norm(hsl::sub(inst.X, inst.true_high_dim())) < 1e-12);
}

TEST_CASE("generative identity and factor distributions") {
  SynthSpec spec;
  spec.n = 50;
  spec.p = 80;
  spec.k = 6;
  spec.sigma2 = 0.0;
  spec.seed = 5;
  const SynthInstance inst = hsl::generate_hybrid(spec);

  // sigma2 = 0: X = Z A + W diag(b) exactly
  const hsl::DenseMatrix recon = hsl::add(inst.true_low_rank(), inst.true_high_dim());
  CHECK(hsl::frobenius_norm(hsl::sub(inst.X, recon)) < 1e-12);

  // A entries live on the magnitude shell [0.5, 1.5]; b on sqrt(k) times it
  const double root_k = std::sqrt(6.0);
  for (std::size_t j = 0; j < spec.p; ++j) {
    for (std::size_t a = 0; a < spec.k; ++a) {
      const double v = std::abs(inst.true_A(a, j));
      if (v != 0.0) {
        CHECK(v >= 0.5);
        CHECK(v <= 1.5);
      }
    }
    const double bv = std::abs(inst.true_b[j]);
    if (bv != 0.0) {
      CHECK(bv >= 0.5 * root_k);
      CHECK(bv <= 1.5 * root_k);
    }
  }
}

TEST_CASE("support size follows the binomial oracle over 50 seeds") {
  // |support_highd| ~ Binomial(200, 0.1): mean 20, sd sqrt(18); the mean of
  // 50 draws stays within 3 sd / sqrt(50) of 20.
  double total = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    SynthSpec spec;
    spec.seed = seed;
    total += static_cast<double>(hsl::generate_hybrid(spec).support_highd.size());
  }
  const double mean = total / 50.0;
  const double bound = 3.0 * std::sqrt(200 * 0.1 * 0.9) / std::sqrt(50.0);
  CHECK(std::abs(mean - 20.0) <= bound);
}

TEST_CASE("supports are disjoint under theta3 = 0 and overlap when theta3 > 0") {
  SynthSpec spec;
  spec.seed = 6;
  const SynthInstance inst = hsl::generate_hybrid(spec);
  for (std::size_t j : inst.support_highd)
    CHECK(!std::binary_search(inst.support_lowr.begin(), inst.support_lowr.end(), j));

  SynthSpec both = spec;
  both.theta = {0.2, 0.2, 0.6};
  const SynthInstance overlap = hsl::generate_hybrid(both);
  std::size_t shared = 0;
  for (std::size_t j : overlap.support_highd)
    shared += std::binary_search(overlap.support_lowr.begin(),
                                 overlap.support_lowr.end(), j)
                  ? 1
                  : 0;
  CHECK(shared > 0);
}

TEST_CASE("fixed seed reproduces identical instances") {
  SynthSpec spec;
  spec.seed = 7;
  const SynthInstance a = hsl::generate_hybrid(spec);
  const SynthInstance b = hsl::generate_hybrid(spec);
  CHECK(a.X == b.X);
  CHECK(a.true_b == b.true_b);
  CHECK(a.support_highd == b.support_highd);
}

TEST_CASE("fixed-count variant pins the high-d feature count exactly") {
  SynthSpec spec;
  spec.seed = 8;
  for (std::size_t s : {std::size_t{0}, std::size_t{1}, std::size_t{20}, std::size_t{200}}) {
    const SynthInstance inst = hsl::generate_hybrid_fixed_count(spec, s);
    CHECK(inst.support_highd.size() == s);
    CHECK(inst.support_lowr.size() == 200 - s);
  }
  CHECK_THROWS_AS(hsl::generate_hybrid_fixed_count(spec, 201), std::invalid_argument);
}

TEST_CASE("spec validation") {
  SynthSpec bad;
  bad.theta = {0.5, 0.2, 0.0};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = SynthSpec{};
  bad.k = 150;  // > min(n, p)
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = SynthSpec{};
  bad.sigma2 = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("categorical generator requires theta3 = 0") {
  SynthSpec spec;
  spec.theta = {0.4, 0.4, 0.2};
  CHECK_THROWS_AS(hsl::generate_categorical(spec), std::invalid_argument);
}

TEST_CASE("categorical generator rank structure at near-zero noise") {
  SynthSpec spec;
  spec.n = 60;
  spec.p = 300;
  spec.k = 8;
  spec.sigma2 = 1e-6;
  spec.seed = 9;

  spec.theta = {1.0, 0.0, 0.0};
  const SynthInstance low = hsl::generate_categorical(spec);
  const std::vector<double> sv = hsl::singular_values(low.X);
  CHECK(sv[8] / sv[0] < 1e-3);  // numerical rank k

  spec.theta = {0.0, 1.0, 0.0};
  const SynthInstance high = hsl::generate_categorical(spec);
  const std::vector<double> sv2 = hsl::singular_values(high.X);
  CHECK(sv2[59] / sv2[0] > 0.05);  // full rank n
}

TEST_CASE("categorical generator keeps the generative identity") {
  SynthSpec spec;
  spec.n = 25;
  spec.p = 40;
  spec.k = 3;
  spec.sigma2 = 0.5;
  spec.theta = {0.6, 0.4, 0.0};
  spec.seed = 10;
  const SynthInstance inst = hsl::generate_categorical(spec);

  // residual against the stored truth is the noise draw
  const hsl::DenseMatrix noise =
      hsl::sub(inst.X, hsl::add(inst.true_low_rank(), inst.true_high_dim()));
  const double var = hsl::frobenius_norm_sq(noise) / (25.0 * 40.0);
  CHECK(var == doctest::Approx(0.5).epsilon(0.15));

  // b is an indicator over the high-d support
  for (std::size_t j = 0; j < spec.p; ++j) {
    const bool in_support = std::binary_search(inst.support_highd.begin(),
                                               inst.support_highd.end(), j);
    CHECK(inst.true_b[j] == (in_support ? 1.0 : 0.0));
  }
}

TEST_SUITE_END();
