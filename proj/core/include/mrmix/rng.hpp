#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace mrmix {

/// splitmix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// FNV-1a over the bytes of `text`.
std::uint64_t hash_name(std::string_view text);

/// Seeded generator with platform-stable draws.
///
/// The raw std::mt19937_64 sequence is fixed by the standard but the
/// std::*_distribution adaptors are not, so every draw goes through the
/// helpers below instead.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). `n` must be positive.
  std::uint64_t below(std::uint64_t n);

  /// Child generator for a named sub-stream; does not advance this one.
  Rng fork(std::string_view stream) const;

 private:
  explicit Rng(std::mt19937_64 engine) : engine_(engine) {}
  std::mt19937_64 engine_;
};

}  // namespace mrmix
