#include "apir/recovery.hpp"

#include "apir/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace apir {

RecoveryResult recover_impulse_model(const RealSignal& y, const PhaseCurve& phase,
                                     const BandLimits& band, const RecoveryOptions& options) {
  if (y.size() != phase.size() || y.sample_rate() != phase.sample_rate()) {
    throw ShapeMismatch("capture (" + std::to_string(y.size()) + " samples) and phase curve (" +
                        std::to_string(phase.size()) + " bins) do not match");
  }
  if (!(options.reference_scale > 0.0) || !std::isfinite(options.reference_scale)) {
    throw InvalidArgument("reference scale must be positive and finite");
  }
  band.validate(y.sample_rate());

  Spectrum model_spectrum = apply_allpass(dft(y), invert_phase(phase));
  if (options.reference_scale != 1.0) {
    std::vector<Complex> bins(model_spectrum.bins().begin(), model_spectrum.bins().end());
    for (auto& b : bins) b /= options.reference_scale;
    model_spectrum = Spectrum(std::move(bins), y.sample_rate());
  }
  RealSignal model = idft(model_spectrum);

  std::optional<double> error;
  if (options.truth) {
    error = in_band_error(*options.truth, model_spectrum, band, options.guard_bins);
  }
  return RecoveryResult{std::move(model), std::move(model_spectrum), band, error};
}

Spectrum naive_deconvolve(const Spectrum& y, const Spectrum& r, std::optional<double> floor) {
  if (y.size() != r.size() || y.sample_rate() != r.sample_rate()) {
    throw ShapeMismatch("capture and reference spectra do not match");
  }
  if (floor && !(*floor > 0.0 && std::isfinite(*floor))) {
    throw InvalidArgument("division floor must be positive and finite");
  }
  const std::size_t n = y.size();
  std::vector<Complex> out(n);
  std::vector<std::size_t> zero_bins;
  for (std::size_t k = 0; k < n; ++k) {
    Complex den = r[k];
    const double mag = std::abs(den);
    if (floor) {
      if (mag == 0.0) {
        den = *floor;
      } else if (mag < *floor) {
        den *= *floor / mag;
      }
    } else if (mag == 0.0) {
      zero_bins.push_back(k);
    }
    // Plain complex division so an unfloored zero bin yields IEEE inf/nan.
    const double d2 = std::norm(den);
    out[k] = Complex((y[k].real() * den.real() + y[k].imag() * den.imag()) / d2,
                     (y[k].imag() * den.real() - y[k].real() * den.imag()) / d2);
  }
  if (!zero_bins.empty()) throw DivisionBlowup(std::move(zero_bins), std::move(out));
  return Spectrum(std::move(out), y.sample_rate());
}

double in_band_error(std::span<const Complex> h_ref, std::span<const Complex> h_hat, double fs,
                     const BandLimits& band, std::size_t guard_bins) {
  if (h_ref.size() != h_hat.size()) {
    throw ShapeMismatch("reference and estimate differ in length");
  }
  const std::size_t n = h_ref.size();
  band.validate(fs);
  const std::size_t first = band.first_bin(n, fs) + guard_bins;
  const std::size_t last_raw = band.last_bin(n, fs);
  if (last_raw < guard_bins || first > last_raw - guard_bins) {
    throw EmptyBand("guard of " + std::to_string(guard_bins) +
                    " bins leaves no in-band bins to compare");
  }
  const std::size_t last = last_raw - guard_bins;

  const double delta = 2.0 / static_cast<double>(n);
  double worst = 0.0;
  double scale = 0.0;
  for (std::size_t k = first; k <= last; ++k) {
    const Complex ref = h_ref[k] * delta;
    worst = std::max(worst, std::abs(h_hat[k] - ref));
    scale = std::max(scale, std::abs(ref));
  }
  if (scale == 0.0) throw ZeroSignal("reference system has no in-band power");
  return worst / scale;
}

double in_band_error(const Spectrum& h_ref, const Spectrum& h_hat, const BandLimits& band,
                     std::size_t guard_bins) {
  if (h_ref.size() != h_hat.size() || h_ref.sample_rate() != h_hat.sample_rate()) {
    throw ShapeMismatch("reference and estimate spectra do not match");
  }
  return in_band_error(h_ref.bins(), h_hat.bins(), h_ref.sample_rate(), band, guard_bins);
}

}  // namespace apir
