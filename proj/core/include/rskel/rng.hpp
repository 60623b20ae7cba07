#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "rskel/errors.hpp"

namespace rskel {

/// Reproducible random stream identified by (seed, stream id).
///
/// The engine is std::mt19937_64 initialised through std::seed_seq from the
/// four 32-bit halves of seed and stream id; both are fully specified by the
/// C++ standard, so sequences do not depend on the standard library vendor.
/// Distributions are implemented here for the same reason (the standard
/// distributions are implementation-defined).
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

  /// Independent sub-stream, derived by hashing (stream, key).
  RngStream child(std::uint64_t key) const;

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform integer in [0, n).
  Index uniform_index(Index n);
  /// Standard normal (Box-Muller).
  double normal();
  /// +1 or -1 with equal probability.
  double rademacher() { return (engine_() >> 63) ? 1.0 : -1.0; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Uniformly random permutation of {0, ..., n-1} (Fisher-Yates).
std::vector<Index> random_permutation(Index n, RngStream& rng);

/// splitmix64 finaliser, used to derive stream ids.
std::uint64_t mix64(std::uint64_t x) noexcept;

}  // namespace rskel
