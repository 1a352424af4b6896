#pragma once

#include "apir/signal.hpp"

#include <cstddef>

namespace apir {

/// Passband edges in Hz.
struct BandLimits {
  double f_min_hz = 0.0;
  double f_max_hz = 0.0;

  /// Throws InvalidBand unless 0 <= f_min < f_max <= fs/2.
  void validate(double fs) const;

  /// First and last bin index (0..N/2) whose frequency lies inside the band.
  /// Edges are inclusive and snap to the bin grid without tapering. The
  /// range is empty (first > last) when no bin falls in the band.
  std::size_t first_bin(std::size_t n, double fs) const noexcept;
  std::size_t last_bin(std::size_t n, double fs) const noexcept;

  bool contains_bin(std::size_t k, std::size_t n, double fs) const noexcept;
};

/// Zero-phase band-limited impulse spectrum: 2/N on every bin with
/// f_min <= k fs / N <= f_max, zero elsewhere, mirrored onto the negative
/// frequencies. Every bin is real by construction.
Spectrum band_limited_impulse(std::size_t n, double fs, const BandLimits& band);

/// Inverse transform of band_limited_impulse. Circularly centred on n = 0,
/// so the left lobe wraps to the end of the buffer.
RealSignal time_domain_impulse(std::size_t n, double fs, const BandLimits& band);

}  // namespace apir
