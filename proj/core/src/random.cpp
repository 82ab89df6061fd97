#include "hsl/random.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hsl {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33;
  x *= 0xc4ceb9fe1a85ec53ULL;
  x ^= x >> 33;
  return x;
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
  std::uint64_t sm = seed ^ mix64(stream_id + 0x9e3779b97f4a7c15ULL);
  for (auto& w : s_) w = splitmix64(sm);
  if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;  // xoshiro must not be all-zero
}

std::uint64_t RngStream::next_u64() {
  // xoshiro256++
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double RngStream::uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double RngStream::uniform(double lo, double hi) {
  if (!(lo <= hi)) throw std::invalid_argument("uniform: lo > hi");
  return lo + (hi - lo) * uniform01();
}

double RngStream::gaussian() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_gauss_;
  }
  const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_gauss_ = r * std::sin(angle);
  has_cached_ = true;
  return r * std::cos(angle);
}

double RngStream::uniform_shell(double lo_mag, double hi_mag) {
  if (!(lo_mag >= 0.0) || !(lo_mag < hi_mag))
    throw std::invalid_argument("uniform_shell: need 0 <= lo_mag < hi_mag");
  const double mag = lo_mag + (hi_mag - lo_mag) * uniform01();
  return (next_u64() & 1u) ? mag : -mag;
}

std::size_t RngStream::categorical(std::span<const double> probs) {
  if (probs.empty()) throw std::invalid_argument("categorical: empty weights");
  const double u = uniform01();
  double cum = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] < 0.0) throw std::invalid_argument("categorical: negative weight");
    cum += probs[i];
    if (u < cum) return i;
  }
  return probs.size() - 1;  // rounding slack lands in the last bucket
}

DenseMatrix sample_gaussian(RngStream& rng, std::size_t rows, std::size_t cols,
                            double mean, double variance) {
  if (!(variance >= 0.0)) throw std::invalid_argument("sample_gaussian: variance < 0");
  const double sd = std::sqrt(variance);
  DenseMatrix m(rows, cols);
  for (double& x : m.data()) x = mean + sd * rng.gaussian();
  return m;
}

double sample_uniform_shell(RngStream& rng, double lo_mag, double hi_mag) {
  return rng.uniform_shell(lo_mag, hi_mag);
}

}  // namespace hsl
