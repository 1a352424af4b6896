#include "apir/impulse.hpp"

#include "apir/errors.hpp"

#include <cmath>
#include <sstream>
#include <string>

namespace apir {

void BandLimits::validate(double fs) const {
  std::ostringstream msg;
  if (!std::isfinite(f_min_hz) || !std::isfinite(f_max_hz)) {
    msg << "band edges must be finite";
  } else if (f_min_hz < 0.0) {
    msg << "f_i = " << f_min_hz << " Hz is negative";
  } else if (f_max_hz <= f_min_hz) {
    msg << "f_a = " << f_max_hz << " Hz must exceed f_i = " << f_min_hz << " Hz";
  } else if (f_max_hz > fs / 2.0) {
    msg << "f_a = " << f_max_hz << " Hz exceeds fs/2 = " << fs / 2.0 << " Hz";
  } else {
    return;
  }
  throw InvalidBand(msg.str());
}

bool BandLimits::contains_bin(std::size_t k, std::size_t n, double fs) const noexcept {
  const double f = bin_hz(k, n, fs);
  return f_min_hz <= f && f <= f_max_hz;
}

std::size_t BandLimits::first_bin(std::size_t n, double fs) const noexcept {
  // Scan rather than ceil() so the edge test is the exact comparison used
  // by contains_bin.
  std::size_t k = 0;
  while (k <= n / 2 && bin_hz(k, n, fs) < f_min_hz) ++k;
  return k;
}

std::size_t BandLimits::last_bin(std::size_t n, double fs) const noexcept {
  std::size_t k = n / 2;
  while (k > 0 && bin_hz(k, n, fs) > f_max_hz) --k;
  if (bin_hz(k, n, fs) > f_max_hz) return 0;
  return k;
}

Spectrum band_limited_impulse(std::size_t n, double fs, const BandLimits& band) {
  if (n < 2 || n % 2 != 0) {
    throw InvalidArgument("impulse length must be even and >= 2");
  }
  band.validate(fs);
  const double amplitude = 2.0 / static_cast<double>(n);
  std::vector<Complex> bins(n, Complex(0.0, 0.0));
  for (std::size_t k = 0; k <= n / 2; ++k) {
    if (band.contains_bin(k, n, fs)) {
      bins[k] = amplitude;
      if (k != 0 && k != n / 2) bins[n - k] = amplitude;
    }
  }
  return Spectrum(std::move(bins), fs);
}

RealSignal time_domain_impulse(std::size_t n, double fs, const BandLimits& band) {
  return idft(band_limited_impulse(n, fs, band));
}

}  // namespace apir
