#pragma once

// Reproducible pseudo-random streams.
//
// Engine: std::mt19937_64, whose output sequence is fixed by the C++
// standard. Distributions are implemented here rather than taken from
// <random> because the standard distributions are implementation-defined.
//
// Seed layout: every stream is seeded with
//   splitmix64(base_seed ^ splitmix64(stream_id * 2^32 + index))
// so per-trial or per-capture streams can be derived independently from
// (base seed, stream, index) and run in any order.

#include <cstdint>
#include <random>

namespace apir {

enum class SeedStream : std::uint64_t {
  system = 1,  // random_fir_system taps
  noise = 2,   // add_noise, index = capture number
  trial = 3,   // Monte-Carlo trial seeds
};

/// One SplitMix64 output step.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

std::uint64_t derive_seed(std::uint64_t base, SeedStream stream, std::uint64_t index = 0) noexcept;

class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;

  /// Standard normal via Box-Muller; values are produced in pairs.
  double gaussian() noexcept;

private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace apir
