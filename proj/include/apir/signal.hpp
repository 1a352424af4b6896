#pragma once

// Time and frequency signal containers plus the transform contract the rest
// of the library is built on.
//
// Conventions:
//   forward  X[k] = sum_n x[n] e^{-j 2 pi k n / N}     (unnormalized)
//   inverse  x[n] = (1/N) sum_k X[k] e^{+j 2 pi k n / N}
// Bin k maps to frequency k * fs / N for k <= N/2; bins above N/2 hold the
// negative frequencies.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace apir {

using Complex = std::complex<double>;

/// Real time-domain samples with a sample rate. N is even and >= 2, all
/// samples finite.
class RealSignal {
public:
  RealSignal(std::vector<double> samples, double sample_rate_hz);

  std::size_t size() const noexcept { return samples_.size(); }
  double sample_rate() const noexcept { return rate_; }
  std::span<const double> samples() const noexcept { return samples_; }
  double operator[](std::size_t n) const { return samples_[n]; }

  /// Peak absolute sample value.
  double peak() const noexcept;

  /// Same rate, samples multiplied by `gain`.
  RealSignal scaled(double gain) const;

private:
  std::vector<double> samples_;
  double rate_;
};

/// Full-length complex DFT bins with a sample rate.
///
/// The hermitian flag is decided once at construction: bins[N-k] must equal
/// conj(bins[k]) and the DC and Nyquist bins must be real, all within 1e-12
/// relative to the largest bin magnitude.
class Spectrum {
public:
  Spectrum(std::vector<Complex> bins, double sample_rate_hz);

  std::size_t size() const noexcept { return bins_.size(); }
  double sample_rate() const noexcept { return rate_; }
  std::span<const Complex> bins() const noexcept { return bins_; }
  const Complex& operator[](std::size_t k) const { return bins_[k]; }
  bool hermitian() const noexcept { return hermitian_; }

  /// Frequency in Hz of bin k, folded so bins above N/2 report their
  /// positive mirror frequency.
  double bin_frequency(std::size_t k) const noexcept;

  /// Largest bin magnitude.
  double max_magnitude() const noexcept;

private:
  std::vector<Complex> bins_;
  double rate_;
  bool hermitian_;
};

/// Relative hermitian-symmetry check used both for the construction flag
/// (tol = 1e-12) and the idft precondition (tol = 1e-9).
bool is_hermitian(std::span<const Complex> bins, double relative_tol);

/// Frequency in Hz of bin k in an N-point transform at rate fs, k <= N/2.
/// The Nyquist bin reports exactly fs/2.
inline double bin_hz(std::size_t k, std::size_t n, double fs) noexcept {
  if (2 * k == n) return fs / 2.0;
  return static_cast<double>(k) * fs / static_cast<double>(n);
}

Spectrum dft(const RealSignal& x);

/// Throws NonHermitian if `x` is not hermitian within 1e-9 relative.
RealSignal idft(const Spectrum& x);

/// Bin-wise product. Throws ShapeMismatch on length or rate mismatch.
Spectrum multiply(const Spectrum& a, const Spectrum& b);

/// Sum of squares.
double energy(const RealSignal& x) noexcept;

/// (1/N) sum |X[k]|^2; equals energy(x) for X = dft(x).
double energy(const Spectrum& x) noexcept;

}  // namespace apir
