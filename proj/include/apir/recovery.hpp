#pragma once

#include "apir/chirp.hpp"
#include "apir/impulse.hpp"
#include "apir/signal.hpp"

#include <cstddef>
#include <optional>
#include <span>

namespace apir {

inline constexpr std::size_t kDefaultGuardBins = 2;

/// Band-limited impulse model recovered from a capture.
struct RecoveryResult {
  RealSignal model;         // idft(model_spectrum)
  Spectrum model_spectrum;  // Y e^{-j phase} / reference scale
  BandLimits band;
  /// Set only when the true system was supplied.
  std::optional<double> in_band_error;
};

struct RecoveryOptions {
  /// Gain that was applied to the excitation before playback; divided out.
  double reference_scale = 1.0;
  /// True system spectrum H, when known, to fill RecoveryResult::in_band_error.
  std::optional<Spectrum> truth;
  std::size_t guard_bins = kDefaultGuardBins;
};

/// Removes the excitation's allpass phase from the capture spectrum.
///
/// With y = h (*) r and R = Delta e^{j phase}, the result is H Delta: the
/// system seen through the band-limited impulse. No bin is ever divided, so
/// bins where the excitation has no power simply come out as zero (or as
/// whatever noise the capture holds there).
RecoveryResult recover_impulse_model(const RealSignal& y, const PhaseCurve& phase,
                                     const BandLimits& band, const RecoveryOptions& options = {});

/// Bin-wise Y / R.
///
/// With no floor, any zero-magnitude R bin raises DivisionBlowup listing
/// every such bin. With a floor, denominators below it are raised to
/// magnitude `floor` keeping their phase (a zero bin becomes `floor`).
Spectrum naive_deconvolve(const Spectrum& y, const Spectrum& r, std::optional<double> floor);

/// Max relative in-band error of `h_hat` against the band-limited truth
/// h_ref * Delta:
///
///   max_k |h_hat[k] - h_ref[k] 2/N| / max_k |h_ref[k] 2/N|
///
/// over positive-frequency bins inside the band, shrunk by `guard_bins` at
/// each edge. Out-of-band bins are ignored. Throws EmptyBand if the guard
/// consumes the band.
double in_band_error(const Spectrum& h_ref, const Spectrum& h_hat, const BandLimits& band,
                     std::size_t guard_bins = kDefaultGuardBins);

/// Same metric over raw bins that may hold non-finite values outside the band.
double in_band_error(std::span<const Complex> h_ref, std::span<const Complex> h_hat, double fs,
                     const BandLimits& band, std::size_t guard_bins = kDefaultGuardBins);

}  // namespace apir
