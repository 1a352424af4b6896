#pragma once

#include "apir/signal.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace apir {

/// FIR system stored as N zero-padded taps. At least one tap is nonzero.
struct SystemModel {
  SystemModel(RealSignal taps, std::string descriptor);

  RealSignal taps;
  std::string descriptor;
};

/// Repeated captures of the same excitation. Nonempty, all the same length
/// and rate.
struct CaptureSet {
  CaptureSet(std::vector<RealSignal> captures, std::optional<double> snr_db);

  std::vector<RealSignal> captures;
  std::optional<double> snr_db;
};

/// First `active_taps` coefficients are standard-normal draws, the rest are
/// zero; the result is scaled to unit energy. Deterministic in `seed`.
SystemModel random_fir_system(std::size_t n, double fs, std::size_t active_taps,
                              std::uint64_t seed);

/// Circular convolution of the taps with `r`, computed as idft(H R).
RealSignal force_system(const SystemModel& h, const RealSignal& r);

/// y + w with white gaussian w scaled so that energy(y) / energy(w) is
/// exactly 10^{snr_db / 10}. An infinite snr_db returns y unchanged.
RealSignal add_noise(const RealSignal& y, double snr_db, std::uint64_t seed);

/// `count` noisy copies of y; capture m draws its noise from
/// derive_seed(seed, SeedStream::noise, m).
CaptureSet make_captures(const RealSignal& y, double snr_db, std::size_t count,
                         std::uint64_t seed);

/// Sample-wise mean of the captures.
RealSignal stack_captures(const CaptureSet& set);

}  // namespace apir
