#include "hsl/synth.hpp"

#include <cmath>
#include <stdexcept>

#include "hsl/random.hpp"
#include "hsl/svd.hpp"

namespace hsl {

namespace {

constexpr std::uint64_t kHybridStream = 0x687962;  // draws for generate_hybrid
constexpr std::uint64_t kCategoricalStream = 0x636174;

enum class Membership { LowRank, HighDim, Both };

void apply_membership(SynthInstance& inst, std::size_t j, Membership m) {
  switch (m) {
    case Membership::LowRank:
      inst.true_b[j] = 0.0;
      break;
    case Membership::HighDim:
      for (std::size_t a = 0; a < inst.true_A.rows(); ++a) inst.true_A(a, j) = 0.0;
      break;
    case Membership::Both:
      break;
  }
}

void collect_supports(SynthInstance& inst) {
  const std::size_t p = inst.X.cols();
  for (std::size_t j = 0; j < p; ++j) {
    bool a_nonzero = false;
    for (std::size_t a = 0; a < inst.true_A.rows(); ++a)
      if (inst.true_A(a, j) != 0.0) {
        a_nonzero = true;
        break;
      }
    if (a_nonzero) inst.support_lowr.push_back(j);
    if (inst.true_b[j] != 0.0) inst.support_highd.push_back(j);
  }
}

SynthInstance hybrid_core(const SynthSpec& spec, const std::vector<Membership>& members) {
  RngStream rng(spec.seed, kHybridStream);
  const std::size_t n = spec.n, p = spec.p, k = spec.k;
  const double root_k = std::sqrt(static_cast<double>(k));

  SynthInstance inst;
  inst.spec = spec;
  inst.true_Z = sample_gaussian(rng, n, k, 0.0, 1.0);
  inst.true_W = sample_gaussian(rng, n, p, 0.0, 1.0);

  inst.true_A = DenseMatrix(k, p);
  for (double& x : inst.true_A.data()) x = rng.uniform_shell(0.5, 1.5);
  inst.true_b.resize(p);
  for (double& x : inst.true_b) x = rng.uniform_shell(0.5 * root_k, 1.5 * root_k);

  for (std::size_t j = 0; j < p; ++j) apply_membership(inst, j, members[j]);

  inst.X = add(inst.true_low_rank(), inst.true_high_dim());
  if (spec.sigma2 > 0.0) {
    const double sd = std::sqrt(spec.sigma2);
    for (double& x : inst.X.data()) x += sd * rng.gaussian();
  }
  collect_supports(inst);
  return inst;
}

}  // namespace

void SynthSpec::validate() const {
  if (n < 1 || p < 1 || k < 1) throw std::invalid_argument("SynthSpec: n, p, k must be >= 1");
  if (k > std::min(n, p)) throw std::invalid_argument("SynthSpec: k must be <= min(n, p)");
  if (!(sigma2 >= 0.0)) throw std::invalid_argument("SynthSpec: sigma2 must be >= 0");
  double sum = 0.0;
  for (double t : theta) {
    if (!(t >= 0.0)) throw std::invalid_argument("SynthSpec: theta components must be >= 0");
    sum += t;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("SynthSpec: theta must sum to 1");
}

SynthInstance generate_hybrid(const SynthSpec& spec) {
  spec.validate();
  // Membership draws must not perturb the factor draws, so use a side stream.
  RngStream member_rng(spec.seed, kHybridStream + 1);
  std::vector<Membership> members(spec.p);
  for (auto& m : members) {
    switch (member_rng.categorical(spec.theta)) {
      case 0: m = Membership::LowRank; break;
      case 1: m = Membership::HighDim; break;
      default: m = Membership::Both; break;
    }
  }
  return hybrid_core(spec, members);
}

SynthInstance generate_hybrid_fixed_count(const SynthSpec& spec, std::size_t s) {
  spec.validate();
  if (s > spec.p)
    throw std::invalid_argument("generate_hybrid_fixed_count: s exceeds feature count");
  RngStream member_rng(spec.seed, kHybridStream + 2);
  // Partial Fisher-Yates: first s slots of a feature permutation go high-d.
  std::vector<std::size_t> idx(spec.p);
  for (std::size_t j = 0; j < spec.p; ++j) idx[j] = j;
  for (std::size_t t = 0; t < s; ++t) {
    const std::size_t swap =
        t + static_cast<std::size_t>(member_rng.uniform01() * static_cast<double>(spec.p - t));
    std::swap(idx[t], idx[std::min(swap, spec.p - 1)]);
  }
  std::vector<Membership> members(spec.p, Membership::LowRank);
  for (std::size_t t = 0; t < s; ++t) members[idx[t]] = Membership::HighDim;
  return hybrid_core(spec, members);
}

SynthInstance generate_categorical(const SynthSpec& spec) {
  spec.validate();
  if (spec.theta[2] != 0.0)
    throw std::invalid_argument("generate_categorical: requires theta3 = 0");

  RngStream rng(spec.seed, kCategoricalStream);
  const std::size_t n = spec.n, p = spec.p, k = spec.k;

  SynthInstance inst;
  inst.spec = spec;

  // Full column/row rank holds almost surely for Gaussian draws; regenerate
  // on the measure-zero failure rather than constructing special bases.
  const auto full_rank = [](const DenseMatrix& m, std::size_t r) {
    const std::vector<double> sv = singular_values(m);
    return sv.size() >= r && sv[r - 1] > 1e-10 * sv[0];
  };
  for (int attempt = 0; attempt < 8; ++attempt) {
    inst.true_Z = sample_gaussian(rng, n, k, 0.0, 1.0);
    if (full_rank(inst.true_Z, k)) break;
  }
  // A ~ N(0, 1/k) puts low-rank and high-d columns on a comparable scale
  // (both have expected squared norm n), matching the hybrid spectra shape.
  for (int attempt = 0; attempt < 8; ++attempt) {
    inst.true_A = sample_gaussian(rng, k, p, 0.0, 1.0 / static_cast<double>(k));
    if (full_rank(inst.true_A, k)) break;
  }
  inst.true_W = sample_gaussian(rng, n, p, 0.0, 1.0);
  inst.true_b.assign(p, 0.0);

  std::vector<std::size_t> draws(p);
  for (std::size_t j = 0; j < p; ++j) draws[j] = rng.categorical(spec.theta);

  const DenseMatrix low = matmul(inst.true_Z, inst.true_A);
  inst.X = DenseMatrix(n, p);
  const double sd = std::sqrt(spec.sigma2);
  for (std::size_t j = 0; j < p; ++j) {
    const bool high = draws[j] == 1;
    if (high) inst.true_b[j] = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double mean = high ? inst.true_W(i, j) : low(i, j);
      inst.X(i, j) = mean + sd * rng.gaussian();
    }
  }
  // Zero the unused side of each feature so the stored truth satisfies
  // X = Z A + W diag(b) + E exactly.
  for (std::size_t j = 0; j < p; ++j)
    apply_membership(inst, j, draws[j] == 1 ? Membership::HighDim : Membership::LowRank);
  collect_supports(inst);
  return inst;
}

}  // namespace hsl
