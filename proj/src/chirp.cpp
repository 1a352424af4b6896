#include "apir/chirp.hpp"

#include "apir/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>

namespace apir {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool near_multiple_of_two_pi(double x, double offset) {
  const double r = std::remainder(x - offset, kTwoPi);
  return std::abs(r) <= 1e-12 * std::max(1.0, std::abs(x));
}

double snap_nyquist(double phase) {
  return std::abs(std::remainder(phase, kTwoPi)) < kPi / 2.0 ? 0.0 : kPi;
}

void check_duration(double duration_s, std::size_t n, double fs) {
  const double span = static_cast<double>(n) / fs;
  if (!(duration_s > 0.0) || !std::isfinite(duration_s)) {
    throw InvalidDuration("sweep duration must be positive, got " + std::to_string(duration_s));
  }
  if (duration_s > span) {
    std::ostringstream msg;
    msg << "sweep duration " << duration_s << " s exceeds the signal span N/fs = " << span
        << " s";
    throw InvalidDuration(msg.str());
  }
}

// Stationary-phase spectral phase of a(t) sin(phase(t)): the bin at angular
// frequency w is dominated by the instant t* where the sweep passes w, giving
// phase(t*) - w t* - pi/4. Clamping t* to [0, T] continues the curve with
// group delay 0 below the sweep and T above it.
template <typename Law>
PhaseCurve stationary_phase_curve(const Law& law, std::size_t n, double fs) {
  std::vector<double> half(n / 2 + 1, 0.0);
  for (std::size_t k = 1; k < n / 2; ++k) {
    const double w = kTwoPi * bin_hz(k, n, fs);
    const double t = std::clamp(law.time_at(w), 0.0, law.duration_s);
    half[k] = law.phase(t) - w * t - kPi / 4.0;
  }
  return PhaseCurve::from_positive_bins(half, fs);
}

template <typename Law>
RealSignal synthesize(const Law& law, std::size_t n, double fs, bool compensate) {
  std::vector<double> x(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / fs;
    if (t >= law.duration_s) break;
    const double a = compensate ? law.amplitude(t) : 1.0;
    x[i] = a * std::sin(law.phase(t));
  }
  return RealSignal(std::move(x), fs);
}

}  // namespace

PhaseCurve::PhaseCurve(std::vector<double> phase, double sample_rate_hz)
    : phase_(std::move(phase)), rate_(sample_rate_hz) {
  const std::size_t n = phase_.size();
  if (n < 2 || n % 2 != 0) {
    throw InvalidArgument("phase curve length must be even and >= 2");
  }
  if (!(rate_ > 0.0) || !std::isfinite(rate_)) {
    throw InvalidArgument("phase curve sample rate must be positive and finite");
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (!std::isfinite(phase_[k])) {
      throw InvalidArgument("phase value at bin " + std::to_string(k) + " is not finite");
    }
  }
  if (!near_multiple_of_two_pi(phase_[0], 0.0)) {
    throw InvalidArgument("phase at DC must be 0 (mod 2 pi)");
  }
  const double nyq = phase_[n / 2];
  if (!near_multiple_of_two_pi(nyq, 0.0) && !near_multiple_of_two_pi(nyq, kPi)) {
    throw InvalidArgument("phase at Nyquist must be 0 or pi (mod 2 pi)");
  }
  for (std::size_t k = 1; k < n / 2; ++k) {
    const double a = phase_[k];
    const double b = phase_[n - k];
    if (std::abs(a + b) > 1e-12 * std::max(1.0, std::abs(a))) {
      throw InvalidArgument("phase curve is not odd-symmetric at bin " + std::to_string(k));
    }
  }
}

PhaseCurve PhaseCurve::from_positive_bins(std::span<const double> half, double sample_rate_hz) {
  if (half.size() < 2) {
    throw InvalidArgument("phase curve needs at least the DC and Nyquist bins");
  }
  const std::size_t n = 2 * (half.size() - 1);
  std::vector<double> full(n);
  for (std::size_t k = 0; k <= n / 2; ++k) full[k] = half[k];
  for (std::size_t k = 1; k < n / 2; ++k) full[n - k] = -half[k];
  return PhaseCurve(std::move(full), sample_rate_hz);
}

PhaseCurve PhaseCurve::zero(std::size_t n, double sample_rate_hz) {
  return PhaseCurve(std::vector<double>(n, 0.0), sample_rate_hz);
}

std::string_view to_string(SweepFamily family) noexcept {
  switch (family) {
    case SweepFamily::none:
      return "none";
    case SweepFamily::linear:
      return "linear";
    case SweepFamily::exp_take1:
      return "exp1";
    case SweepFamily::exp_take2:
      return "exp2";
  }
  return "unknown";
}

std::optional<SweepFamily> parse_sweep_family(std::string_view name) noexcept {
  if (name == "none") return SweepFamily::none;
  if (name == "linear") return SweepFamily::linear;
  if (name == "exp1") return SweepFamily::exp_take1;
  if (name == "exp2") return SweepFamily::exp_take2;
  return std::nullopt;
}

PhaseCurve linear_chirp_phase(std::size_t n, double fs, const BandLimits& band,
                              double duration_s) {
  if (n < 2 || n % 2 != 0) throw InvalidArgument("phase curve length must be even and >= 2");
  band.validate(fs);
  check_duration(duration_s, n, fs);

  const double f_lo = band.f_min_hz;
  const double f_hi = band.f_max_hz;
  const double width = f_hi - f_lo;
  std::vector<double> half(n / 2 + 1, 0.0);
  for (std::size_t k = 1; k <= n / 2; ++k) {
    const double f = bin_hz(k, n, fs);
    if (f <= f_lo) {
      half[k] = 0.0;
    } else if (f <= f_hi) {
      const double d = f - f_lo;
      half[k] = -kPi * duration_s * d * d / width;
    } else {
      half[k] = -kPi * duration_s * width - kTwoPi * duration_s * (f - f_hi);
    }
  }
  half[n / 2] = snap_nyquist(half[n / 2]);
  return PhaseCurve::from_positive_bins(half, fs);
}

double ExpSweepTake1::frequency(double t) const noexcept {
  return omega_start * std::pow(omega_end / omega_start, t / duration_s);
}

double ExpSweepTake1::phase(double t) const noexcept {
  const double log_ratio = std::log(omega_end / omega_start);
  // omega_i T / L * ((w_a/w_i)^{t/T} - 1); expm1 keeps phase(0) exactly 0.
  return omega_start * duration_s / log_ratio * std::expm1(log_ratio * t / duration_s);
}

double ExpSweepTake1::amplitude(double t) const noexcept {
  return std::pow(omega_end / omega_start, -t / duration_s);
}

double ExpSweepTake1::time_at(double omega) const noexcept {
  if (omega <= 0.0) return 0.0;
  return duration_s * std::log(omega / omega_start) / std::log(omega_end / omega_start);
}

double ExpSweepTake2::frequency(double t) const noexcept {
  return std::expm1(std::log1p(omega_end) * t / duration_s);
}

double ExpSweepTake2::phase(double t) const noexcept {
  const double log_end = std::log1p(omega_end);
  return duration_s / log_end * std::expm1(log_end * t / duration_s) - t;
}

double ExpSweepTake2::amplitude(double t) const noexcept {
  return std::exp(-std::log1p(omega_end) * t / duration_s);
}

double ExpSweepTake2::time_at(double omega) const noexcept {
  if (omega <= 0.0) return 0.0;
  return duration_s * std::log1p(omega) / std::log1p(omega_end);
}

SweepSignal exp_sweep_take1(std::size_t n, double fs, double omega_start, double omega_end,
                            double duration_s, bool amplitude_compensation) {
  if (n < 2 || n % 2 != 0) throw InvalidArgument("sweep length must be even and >= 2");
  if (!(omega_start > 0.0 && omega_start < omega_end && omega_end <= kPi * fs)) {
    std::ostringstream msg;
    msg << "take-1 sweep needs 0 < w_i < w_a <= pi fs, got w_i = " << omega_start
        << ", w_a = " << omega_end << " rad/s";
    throw InvalidRange(msg.str());
  }
  check_duration(duration_s, n, fs);
  const ExpSweepTake1 law{omega_start, omega_end, duration_s};
  return {synthesize(law, n, fs, amplitude_compensation), stationary_phase_curve(law, n, fs)};
}

SweepSignal exp_sweep_take2(std::size_t n, double fs, double omega_end, double duration_s,
                            bool amplitude_compensation) {
  if (n < 2 || n % 2 != 0) throw InvalidArgument("sweep length must be even and >= 2");
  if (!(omega_end > 0.0 && omega_end <= kPi * fs)) {
    std::ostringstream msg;
    msg << "take-2 sweep needs 0 < w_a <= pi fs, got w_a = " << omega_end << " rad/s";
    throw InvalidRange(msg.str());
  }
  check_duration(duration_s, n, fs);
  const ExpSweepTake2 law{omega_end, duration_s};
  return {synthesize(law, n, fs, amplitude_compensation), stationary_phase_curve(law, n, fs)};
}

Spectrum apply_allpass(const Spectrum& x, const PhaseCurve& phase) {
  if (x.size() != phase.size() || x.sample_rate() != phase.sample_rate()) {
    throw ShapeMismatch("spectrum (" + std::to_string(x.size()) + " bins) and phase curve (" +
                        std::to_string(phase.size()) + " bins) do not match");
  }
  const std::size_t n = x.size();
  std::vector<Complex> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    // DC and Nyquist rotate by exactly +-1 so real bins stay real.
    const Complex rot = (k == 0 || k == n / 2) ? Complex(std::cos(phase[k]), 0.0)
                                               : std::polar(1.0, phase[k]);
    out[k] = x[k] * rot;
  }
  return Spectrum(std::move(out), x.sample_rate());
}

PhaseCurve invert_phase(const PhaseCurve& phase) {
  std::vector<double> neg(phase.values().begin(), phase.values().end());
  for (double& v : neg) v = -v;
  return PhaseCurve(std::move(neg), phase.sample_rate());
}

Reference make_reference(std::size_t n, double fs, const SweepSpec& sweep) {
  const auto finish = [](RealSignal signal, PhaseCurve phase) {
    const double peak = signal.peak();
    const double scale = peak > 1.0 ? 1.0 / peak : 1.0;
    if (scale != 1.0) signal = signal.scaled(scale);
    return Reference{std::move(signal), std::move(phase), scale};
  };

  switch (sweep.family) {
    case SweepFamily::none: {
      const Spectrum delta = band_limited_impulse(n, fs, sweep.band);
      return finish(idft(delta), PhaseCurve::zero(n, fs));
    }
    case SweepFamily::linear: {
      const Spectrum delta = band_limited_impulse(n, fs, sweep.band);
      PhaseCurve phase = linear_chirp_phase(n, fs, sweep.band, sweep.duration_s);
      RealSignal signal = idft(apply_allpass(delta, phase));
      return finish(std::move(signal), std::move(phase));
    }
    case SweepFamily::exp_take1: {
      sweep.band.validate(fs);
      auto s = exp_sweep_take1(n, fs, kTwoPi * sweep.band.f_min_hz, kTwoPi * sweep.band.f_max_hz,
                               sweep.duration_s, sweep.amplitude_compensation);
      return finish(std::move(s.signal), std::move(s.phase));
    }
    case SweepFamily::exp_take2: {
      sweep.band.validate(fs);
      auto s = exp_sweep_take2(n, fs, kTwoPi * sweep.band.f_max_hz, sweep.duration_s,
                               sweep.amplitude_compensation);
      return finish(std::move(s.signal), std::move(s.phase));
    }
  }
  throw InvalidArgument("unknown sweep family");
}

}  // namespace apir
