#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "hsl/matrix.hpp"

namespace hsl {

/// Counter-seeded stream: identical (seed, stream_id) reproduces the exact
/// same sample sequence on every run regardless of thread schedule. Streams
/// are single-owner; parallel work takes distinct stream_ids.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t next_u64();
  /// Uniform on [0, 1).
  double uniform01();
  double uniform(double lo, double hi);
  /// Standard normal via Box-Muller (second value cached).
  double gaussian();
  /// Uniform magnitude on [lo_mag, hi_mag], sign-symmetric:
  /// the sample lies in [-hi_mag, -lo_mag] U [lo_mag, hi_mag].
  double uniform_shell(double lo_mag, double hi_mag);
  /// Index drawn from the given probability weights (must sum to ~1).
  std::size_t categorical(std::span<const double> probs);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  std::array<std::uint64_t, 4> s_{};
  std::uint64_t seed_ = 0;
  std::uint64_t stream_id_ = 0;
  double cached_gauss_ = 0.0;
  bool has_cached_ = false;
};

/// splitmix64 finalizer; used for deterministic seed fan-out.
std::uint64_t mix64(std::uint64_t x);

DenseMatrix sample_gaussian(RngStream& rng, std::size_t rows, std::size_t cols,
                            double mean, double variance);
double sample_uniform_shell(RngStream& rng, double lo_mag, double hi_mag);

}  // namespace hsl
