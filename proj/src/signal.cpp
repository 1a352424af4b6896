#include "apir/signal.hpp"

#include "apir/errors.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <utility>

namespace apir {

DivisionBlowup::DivisionBlowup(std::vector<std::size_t> bins,
                               std::vector<std::complex<double>> raw_quotient)
    : Error("naive division blew up at " + std::to_string(bins.size()) +
            " zero-power reference bin(s)"),
      bins_(std::move(bins)),
      raw_(std::move(raw_quotient)) {}

namespace {

void check_length(std::size_t n, const char* what) {
  if (n < 2 || n % 2 != 0) {
    throw InvalidArgument(std::string(what) + " length must be even and >= 2, got " +
                          std::to_string(n));
  }
}

void check_rate(double fs, const char* what) {
  if (!(std::isfinite(fs) && fs > 0.0)) {
    throw InvalidArgument(std::string(what) + " sample rate must be positive and finite");
  }
}

// FFTW planning is not thread-safe; execution with the new-array interface
// is. Plans are created once per length under a lock and never destroyed.
class PlanCache {
public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan forward(int n) { return get(n, true); }
  fftw_plan inverse(int n) { return get(n, false); }

private:
  fftw_plan get(int n, bool forward) {
    std::lock_guard lock(mutex_);
    auto& slot = forward ? forward_[n] : inverse_[n];
    if (slot == nullptr) {
      // FFTW_ESTIMATE never touches the arrays and picks plans without
      // timing, so the transform is reproducible run to run.
      double* real = fftw_alloc_real(static_cast<std::size_t>(n));
      fftw_complex* cplx = fftw_alloc_complex(static_cast<std::size_t>(n / 2 + 1));
      const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
      slot = forward ? fftw_plan_dft_r2c_1d(n, real, cplx, flags)
                     : fftw_plan_dft_c2r_1d(n, cplx, real, flags | FFTW_DESTROY_INPUT);
      fftw_free(real);
      fftw_free(cplx);
    }
    return slot;
  }

  std::mutex mutex_;
  std::map<int, fftw_plan> forward_;
  std::map<int, fftw_plan> inverse_;
};

}  // namespace

RealSignal::RealSignal(std::vector<double> samples, double sample_rate_hz)
    : samples_(std::move(samples)), rate_(sample_rate_hz) {
  check_length(samples_.size(), "signal");
  check_rate(rate_, "signal");
  for (std::size_t n = 0; n < samples_.size(); ++n) {
    if (!std::isfinite(samples_[n])) {
      throw InvalidArgument("signal sample " + std::to_string(n) + " is not finite");
    }
  }
}

double RealSignal::peak() const noexcept {
  double p = 0.0;
  for (double v : samples_) p = std::max(p, std::abs(v));
  return p;
}

RealSignal RealSignal::scaled(double gain) const {
  std::vector<double> out(samples_);
  for (double& v : out) v *= gain;
  return RealSignal(std::move(out), rate_);
}

bool is_hermitian(std::span<const Complex> bins, double relative_tol) {
  const std::size_t n = bins.size();
  if (n < 2 || n % 2 != 0) return false;
  double scale = 0.0;
  for (const auto& b : bins) scale = std::max(scale, std::abs(b));
  if (scale == 0.0) return true;
  const double tol = relative_tol * scale;
  if (std::abs(bins[0].imag()) > tol || std::abs(bins[n / 2].imag()) > tol) return false;
  for (std::size_t k = 1; k < n / 2; ++k) {
    if (std::abs(bins[n - k] - std::conj(bins[k])) > tol) return false;
  }
  return true;
}

Spectrum::Spectrum(std::vector<Complex> bins, double sample_rate_hz)
    : bins_(std::move(bins)), rate_(sample_rate_hz), hermitian_(false) {
  check_length(bins_.size(), "spectrum");
  check_rate(rate_, "spectrum");
  for (std::size_t k = 0; k < bins_.size(); ++k) {
    if (!std::isfinite(bins_[k].real()) || !std::isfinite(bins_[k].imag())) {
      throw InvalidArgument("spectrum bin " + std::to_string(k) + " is not finite");
    }
  }
  hermitian_ = is_hermitian(bins_, 1e-12);
}

double Spectrum::bin_frequency(std::size_t k) const noexcept {
  const std::size_t n = bins_.size();
  const std::size_t folded = k <= n / 2 ? k : n - k;
  return bin_hz(folded, n, rate_);
}

double Spectrum::max_magnitude() const noexcept {
  double m = 0.0;
  for (const auto& b : bins_) m = std::max(m, std::abs(b));
  return m;
}

Spectrum dft(const RealSignal& x) {
  const std::size_t n = x.size();
  std::vector<Complex> bins(n);
  // r2c writes bins 0..N/2; std::complex<double> is layout-compatible with
  // fftw_complex.
  std::vector<double> in(x.samples().begin(), x.samples().end());
  fftw_execute_dft_r2c(PlanCache::instance().forward(static_cast<int>(n)), in.data(),
                       reinterpret_cast<fftw_complex*>(bins.data()));
  // Mirror the negative frequencies so the result is exactly hermitian.
  bins[0].imag(0.0);
  bins[n / 2].imag(0.0);
  for (std::size_t k = 1; k < n / 2; ++k) bins[n - k] = std::conj(bins[k]);
  return Spectrum(std::move(bins), x.sample_rate());
}

RealSignal idft(const Spectrum& x) {
  if (!is_hermitian(x.bins(), 1e-9)) {
    throw NonHermitian("spectrum does not describe a real signal (hermitian symmetry broken)");
  }
  const std::size_t n = x.size();
  std::vector<Complex> half(x.bins().begin(), x.bins().begin() + static_cast<std::ptrdiff_t>(n / 2 + 1));
  std::vector<double> out(n);
  fftw_execute_dft_c2r(PlanCache::instance().inverse(static_cast<int>(n)),
                       reinterpret_cast<fftw_complex*>(half.data()), out.data());
  const double inv_n = 1.0 / static_cast<double>(n);
  for (double& v : out) v *= inv_n;
  return RealSignal(std::move(out), x.sample_rate());
}

Spectrum multiply(const Spectrum& a, const Spectrum& b) {
  if (a.size() != b.size() || a.sample_rate() != b.sample_rate()) {
    throw ShapeMismatch("spectra differ in length or sample rate (" + std::to_string(a.size()) +
                        " vs " + std::to_string(b.size()) + " bins)");
  }
  std::vector<Complex> out(a.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = a[k] * b[k];
  return Spectrum(std::move(out), a.sample_rate());
}

double energy(const RealSignal& x) noexcept {
  double e = 0.0;
  for (double v : x.samples()) e += v * v;
  return e;
}

double energy(const Spectrum& x) noexcept {
  double e = 0.0;
  for (const auto& b : x.bins()) e += std::norm(b);
  return e / static_cast<double>(x.size());
}

}  // namespace apir
