#include <doctest.h>

#include "apir/chirp.hpp"
#include "apir/errors.hpp"
#include "apir/impulse.hpp"
#include "apir/random.hpp"
#include "apir/recovery.hpp"
#include "apir/system_sim.hpp"

#include "support/oracles.hpp"

#include <cmath>

using namespace apir;

namespace {

struct Setup {
  std::size_t n = 4096;
  double fs = 48000.0;
  BandLimits band{100.0, 20000.0};
  double t = 0.06;
};

Spectrum scaled_truth(const SystemModel& h) {
  return dft(h.taps);
}

}  // namespace

TEST_CASE("zero phase recovery returns the capture spectrum") {
  const Setup s;
  const RealSignal y(apir::test::random_samples(s.n, 4), s.fs);
  const RecoveryResult rec = recover_impulse_model(y, PhaseCurve::zero(s.n, s.fs), s.band);
  const Spectrum y_spec = dft(y);
  for (std::size_t k = 0; k < s.n; ++k) CHECK(rec.model_spectrum[k] == y_spec[k]);
  CHECK_FALSE(rec.in_band_error.has_value());
}

TEST_CASE("noiseless pipeline recovers H Delta") {
  const Setup s;
  const Reference ref = make_reference(s.n, s.fs, {SweepFamily::linear, s.t, s.band, true});
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const SystemModel h = random_fir_system(s.n, s.fs, 1024, seed);
    const RealSignal y = force_system(h, ref.signal);
    const RecoveryResult rec =
        recover_impulse_model(y, ref.phase, s.band, {ref.scale, scaled_truth(h), kDefaultGuardBins});
    REQUIRE(rec.in_band_error.has_value());
    CHECK(*rec.in_band_error < 1e-9);
    // Magnitude is untouched by phase removal.
    const Spectrum y_spec = dft(y);
    for (std::size_t k = 0; k < s.n; ++k) {
      CHECK(std::abs(std::abs(rec.model_spectrum[k]) - std::abs(y_spec[k])) <= 1e-12 * std::abs(y_spec[k]) + 1e-18);
    }
  }
}

TEST_CASE("stacking shrinks the recovery error") {
  const Setup s;
  const Reference ref = make_reference(s.n, s.fs, {SweepFamily::linear, s.t, s.band, true});
  const SystemModel h = random_fir_system(s.n, s.fs, 1024, 8);
  const RealSignal y = force_system(h, ref.signal);
  const Spectrum truth = scaled_truth(h);

  // Mean squared in-band error, averaged over realisations.
  const auto mse = [&](const RealSignal& capture) {
    const RecoveryResult rec = recover_impulse_model(capture, ref.phase, s.band);
    const double amp = 2.0 / static_cast<double>(s.n);
    double acc = 0.0;
    for (std::size_t k = s.band.first_bin(s.n, s.fs); k <= s.band.last_bin(s.n, s.fs); ++k) {
      acc += std::norm(rec.model_spectrum[k] - truth[k] * amp);
    }
    return acc;
  };
  double single = 0.0;
  double stacked = 0.0;
  const int trials = 20;
  for (int t = 0; t < trials; ++t) {
    const auto seed = derive_seed(17, SeedStream::trial, t);
    single += mse(stack_captures(make_captures(y, 20.0, 1, seed)));
    stacked += mse(stack_captures(make_captures(y, 20.0, 16, seed)));
  }
  // Error energy falls by M = 16, i.e. error magnitude by about 4.
  const double factor = std::sqrt(single / stacked);
  CHECK(factor > 4.0 * 0.7);
  CHECK(factor < 4.0 * 1.3);
}

TEST_CASE("naive deconvolution") {
  const std::size_t n = 256;
  const double fs = 1000.0;
  const BandLimits band{50.0, 300.0};
  const PhaseCurve phi = linear_chirp_phase(n, fs, band, 0.1);
  const Spectrum r = apply_allpass(band_limited_impulse(n, fs, band), phi);
  const SystemModel h = random_fir_system(n, fs, 32, 2);
  const RealSignal y = force_system(h, idft(r));
  const Spectrum y_spec = dft(y);

  SUBCASE("division blows up on every zero bin") {
    std::vector<std::size_t> expected;
    for (std::size_t k = 0; k < n; ++k) {
      if (r[k] == Complex(0.0, 0.0)) expected.push_back(k);
    }
    REQUIRE_FALSE(expected.empty());
    try {
      naive_deconvolve(y_spec, r, std::nullopt);
      FAIL("expected DivisionBlowup");
    } catch (const DivisionBlowup& e) {
      CHECK(e.bins() == expected);
      REQUIRE(e.raw_quotient().size() == n);
      for (std::size_t k : expected) {
        const Complex q = e.raw_quotient()[k];
        CHECK_FALSE((std::isfinite(q.real()) && std::isfinite(q.imag())));
      }
    }
  }
  SUBCASE("a floor keeps everything finite") {
    const Spectrum q = naive_deconvolve(y_spec, r, 1e-9);
    for (const auto& b : q.bins()) CHECK((std::isfinite(b.real()) && std::isfinite(b.imag())));
  }
  SUBCASE("all-ones reference returns Y") {
    const Spectrum ones(std::vector<Complex>(n, 1.0), fs);
    const Spectrum q = naive_deconvolve(y_spec, ones, std::nullopt);
    for (std::size_t k = 0; k < n; ++k) CHECK(q[k] == y_spec[k]);
  }
  SUBCASE("naive and allpass agree in band") {
    const Spectrum q = naive_deconvolve(y_spec, r, 1e-9);
    const RecoveryResult rec = recover_impulse_model(y, phi, band);
    const double amp = 2.0 / static_cast<double>(n);
    for (std::size_t k = band.first_bin(n, fs); k <= band.last_bin(n, fs); ++k) {
      CHECK(std::abs(q[k] * amp - rec.model_spectrum[k]) < 1e-10 * std::abs(rec.model_spectrum[k]) + 1e-15);
    }
  }
  SUBCASE("shape mismatch") {
    const Spectrum other(std::vector<Complex>(n / 2, 1.0), fs);
    CHECK_THROWS_AS(naive_deconvolve(y_spec, other, std::nullopt), ShapeMismatch);
  }
}

TEST_CASE("in_band_error") {
  const std::size_t n = 64;
  const double fs = 64.0;
  const BandLimits band{8.0, 24.0};
  std::vector<Complex> ones(n, 1.0);
  const Spectrum h(ones, fs);
  const double amp = 2.0 / static_cast<double>(n);
  std::vector<Complex> exact(n, amp);

  SUBCASE("exact match") {
    CHECK(in_band_error(h, Spectrum(exact, fs), band) == 0.0);
  }
  SUBCASE("one perturbed in-band bin") {
    auto bumped = exact;
    bumped[16] *= 1.01;
    bumped[n - 16] *= 1.01;
    CHECK(in_band_error(h, Spectrum(bumped, fs), band) == doctest::Approx(0.01));
  }
  SUBCASE("out-of-band and guard bins are ignored") {
    auto wild = exact;
    wild[2] = 1e6;
    wild[n - 2] = 1e6;
    wild[8] = 5.0;  // band edge, inside the default guard
    wild[n - 8] = 5.0;
    CHECK(in_band_error(h, Spectrum(wild, fs), band) == 0.0);
    CHECK(in_band_error(h, Spectrum(wild, fs), band, 0) > 1.0);
  }
  SUBCASE("guard consuming the band") {
    CHECK_THROWS_AS(in_band_error(h, Spectrum(exact, fs), band, 9), EmptyBand);
  }
  SUBCASE("non-finite values outside the band") {
    auto raw = exact;
    raw[1] = Complex(INFINITY, 0.0);
    CHECK(in_band_error(ones, raw, fs, band) == 0.0);
  }
}
