#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace cepbo {

using Seed = std::uint64_t;

/// Purposes for which independent random streams are derived from one seed.
/// Values are part of the stream-derivation layout; do not renumber.
enum class Stream : std::uint64_t {
  Matrix = 1,
  Design = 2,
  Candidates = 3,
  Hyperfit = 4,
  Fallback = 5,
  Perturbation = 6,
  Permutation = 7,
  MonteCarlo = 8,
  TheoryVectors = 9,
};

/// SplitMix64 finalizer; a bijection on 64-bit words.
std::uint64_t mix64(std::uint64_t z) noexcept;

/// Child seed for (purpose, index) under `parent`:
///   mix64(mix64(parent ^ mix64(purpose)) + mix64(index + 0x9E3779B97F4A7C15)).
/// Streams for different purposes never share draws, so adding candidates
/// does not perturb matrix sampling.
Seed derive_seed(Seed parent, Stream purpose, std::uint64_t index = 0) noexcept;

/// Pseudo-random source with platform-stable output.
///
/// The engine is std::mt19937_64, whose sequence is fixed by the standard.
/// The transforms below are implemented here rather than with
/// <random> distributions, which differ between standard libraries.
class Rng {
 public:
  explicit Rng(Seed seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  /// Standard normal (Marsaglia polar method, second variate cached).
  double normal() noexcept;
  /// Uniform integer in [0, n), unbiased by rejection. n must be positive.
  std::size_t index(std::size_t n) noexcept;
  bool coin() noexcept { return (engine_() >> 63) != 0; }
  std::uint64_t bits() noexcept { return engine_(); }

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace cepbo
