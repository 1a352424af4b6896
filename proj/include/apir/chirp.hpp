#pragma once

// Allpass phase design. A PhaseCurve holds one phase value per DFT bin;
// multiplying a spectrum by e^{j phase} changes timing but never magnitude,
// and multiplying by e^{-j phase} undoes it exactly.

#include "apir/impulse.hpp"
#include "apir/signal.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace apir {

/// Per-bin allpass phase in radians.
///
/// Invariants: phase[0] = 0, phase[N/2] is 0 or pi (mod 2 pi), and
/// phase[N-k] = -phase[k]. Together these keep e^{j phase} hermitian, so an
/// allpass applied to a real signal's spectrum yields a real signal.
class PhaseCurve {
public:
  PhaseCurve(std::vector<double> phase, double sample_rate_hz);

  /// Builds a curve from bins 0..N/2 by odd extension.
  static PhaseCurve from_positive_bins(std::span<const double> half, double sample_rate_hz);

  /// All-zero curve (identity allpass).
  static PhaseCurve zero(std::size_t n, double sample_rate_hz);

  std::size_t size() const noexcept { return phase_.size(); }
  double sample_rate() const noexcept { return rate_; }
  std::span<const double> values() const noexcept { return phase_; }
  double operator[](std::size_t k) const { return phase_[k]; }

  bool operator==(const PhaseCurve&) const = default;

private:
  std::vector<double> phase_;
  double rate_;
};

enum class SweepFamily { none, linear, exp_take1, exp_take2 };

std::string_view to_string(SweepFamily family) noexcept;
/// Accepts "none", "linear", "exp1", "exp2". Returns nullopt otherwise.
std::optional<SweepFamily> parse_sweep_family(std::string_view name) noexcept;

/// Excitation description. For the exponential families the band edges are
/// converted to angular frequency (omega = 2 pi f); take 2 ignores f_min
/// because its sweep always starts at DC.
struct SweepSpec {
  SweepFamily family = SweepFamily::linear;
  double duration_s = 0.0;
  BandLimits band;
  bool amplitude_compensation = true;
};

/// Quadratic-in-frequency phase whose group delay rises linearly from 0 at
/// f_min to T at f_max:
///
///   phase(f) = -2 pi T (f - f_min)^2 / (2 (f_max - f_min))   inside the band
///
/// held at zero group delay below f_min and at group delay T above f_max.
/// The Nyquist bin snaps to the nearer of 0 and pi.
PhaseCurve linear_chirp_phase(std::size_t n, double fs, const BandLimits& band, double duration_s);

/// Exponential sweep omega(t) = w_i (w_a / w_i)^{t/T}, phase zero at t = 0.
struct ExpSweepTake1 {
  double omega_start;  // rad/s
  double omega_end;    // rad/s
  double duration_s;

  double frequency(double t) const noexcept;
  double phase(double t) const noexcept;
  /// (d omega / dt)^{-1}, scaled to a peak of 1 over [0, T].
  double amplitude(double t) const noexcept;
  /// Inverse of frequency(), unclamped.
  double time_at(double omega) const noexcept;
};

/// Exponential sweep from DC: omega(t) = (w_a + 1)^{t/T} - 1, phase zero at t = 0.
struct ExpSweepTake2 {
  double omega_end;  // rad/s
  double duration_s;

  double frequency(double t) const noexcept;
  double phase(double t) const noexcept;
  /// (d omega / dt)^{-1}, scaled to a peak of 1 over [0, T].
  double amplitude(double t) const noexcept;
  double time_at(double omega) const noexcept;
};

struct SweepSignal {
  RealSignal signal;
  /// Stationary-phase estimate of the sweep's spectral phase on the bin
  /// grid; removing it compresses the sweep towards n = 0.
  PhaseCurve phase;
};

/// x[n] = a(t) sin(phase(t)) for t = n / fs < T, zero afterwards. With
/// compensation off a(t) = 1.
SweepSignal exp_sweep_take1(std::size_t n, double fs, double omega_start, double omega_end,
                            double duration_s, bool amplitude_compensation = true);
SweepSignal exp_sweep_take2(std::size_t n, double fs, double omega_end, double duration_s,
                            bool amplitude_compensation = true);

/// X[k] e^{j phase[k]}. Throws ShapeMismatch on length or rate mismatch.
Spectrum apply_allpass(const Spectrum& x, const PhaseCurve& phase);

/// Bin-wise negation, the inverse allpass.
PhaseCurve invert_phase(const PhaseCurve& phase);

struct Reference {
  RealSignal signal;
  PhaseCurve phase;
  /// Gain already applied to `signal` to keep its peak within [-1, 1].
  double scale = 1.0;
};

/// Builds the excitation. For `none` and `linear` the signal is
/// idft(band_limited_impulse * e^{j phase}); the exponential families are
/// synthesised in the time domain.
Reference make_reference(std::size_t n, double fs, const SweepSpec& sweep);

}  // namespace apir
