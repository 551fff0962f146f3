#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace auvplan {

/// SplitMix64 finalizer. Used for seed derivation; the constants are pinned so
/// that derived seeds (and therefore fixtures) never change between builds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Child seed for stream `index` of a batch:
///   child = splitmix64(master + (index + 1) * 0x9E3779B97F4A7C15)
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept;

/// Seeded random stream.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The distributions are implemented here instead of using the
/// <random> distribution classes, whose algorithms are implementation-defined,
/// so that a seed produces the same draws with any standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer on [0, n). Requires n > 0.
  std::size_t index(std::size_t n);

  /// Standard normal (Box-Muller, one variate per call).
  double normal();

  double normal(double mean, double sigma) { return mean + sigma * normal(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace auvplan
