#include <doctest.h>

#include "apir/errors.hpp"
#include "apir/signal.hpp"

#include "support/oracles.hpp"

#include <cmath>

using namespace apir;
using apir::test::direct_circular_convolution;
using apir::test::direct_dft;
using apir::test::random_samples;

TEST_CASE("dft of a unit impulse is flat") {
  const Spectrum x = dft(RealSignal({1, 0, 0, 0}, 4));
  REQUIRE(x.size() == 4);
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(x[k].real() == doctest::Approx(1.0));
    CHECK(x[k].imag() == doctest::Approx(0.0));
  }
  CHECK(x.hermitian());
}

TEST_CASE("dft of zeros is zero") {
  const Spectrum x = dft(RealSignal({0, 0, 0, 0}, 4));
  for (const auto& b : x.bins()) CHECK(std::abs(b) == 0.0);
}

TEST_CASE("dft matches direct summation for every even N up to 256") {
  for (std::size_t n = 2; n <= 256; n += 2) {
    const auto samples = random_samples(n, 1000 + n);
    const auto oracle = direct_dft(samples);
    const Spectrum x = dft(RealSignal(samples, 1.0));
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k) worst = std::max(worst, std::abs(x[k] - oracle[k]));
    CHECK_MESSAGE(worst < 1e-10, "N = " << n << " worst = " << worst);
    CHECK(x.hermitian());
  }
}

TEST_CASE("idft examples") {
  SUBCASE("flat spectrum gives an impulse") {
    const RealSignal x = idft(Spectrum({1, 1, 1, 1}, 4));
    CHECK(x[0] == doctest::Approx(1.0));
    CHECK(std::abs(x[1]) < 1e-15);
    CHECK(std::abs(x[2]) < 1e-15);
    CHECK(std::abs(x[3]) < 1e-15);
  }
  SUBCASE("round trip N = 128") {
    const auto samples = random_samples(128, 7);
    const RealSignal back = idft(dft(RealSignal(samples, 8000.0)));
    CHECK(back.sample_rate() == 8000.0);
    for (std::size_t i = 0; i < samples.size(); ++i) CHECK(std::abs(back[i] - samples[i]) < 1e-12);
  }
  SUBCASE("broken symmetry is rejected") {
    const Spectrum bad({0.0, Complex(0, 1), 0.0, Complex(0, 1)}, 4);
    CHECK_FALSE(bad.hermitian());
    CHECK_THROWS_AS(idft(bad), NonHermitian);
  }
}

TEST_CASE("multiply") {
  const auto a = dft(RealSignal(random_samples(64, 1), 1.0));
  SUBCASE("all-ones is the identity") {
    const Spectrum ones(std::vector<Complex>(64, 1.0), 1.0);
    const Spectrum p = multiply(a, ones);
    for (std::size_t k = 0; k < 64; ++k) CHECK(p[k] == a[k]);
  }
  SUBCASE("all-zeros annihilates") {
    const Spectrum zeros(std::vector<Complex>(64, 0.0), 1.0);
    const Spectrum p = multiply(a, zeros);
    for (const auto& b : p.bins()) CHECK(std::abs(b) == 0.0);
  }
  SUBCASE("product realises circular convolution") {
    const auto xa = random_samples(64, 11);
    const auto xb = random_samples(64, 12);
    const RealSignal y = idft(multiply(dft(RealSignal(xa, 1.0)), dft(RealSignal(xb, 1.0))));
    const auto oracle = direct_circular_convolution(xa, xb);
    for (std::size_t i = 0; i < 64; ++i) CHECK(std::abs(y[i] - oracle[i]) < 1e-10);
  }
  SUBCASE("shape mismatch") {
    const Spectrum other(std::vector<Complex>(32, 1.0), 1.0);
    CHECK_THROWS_AS(multiply(a, other), ShapeMismatch);
    const Spectrum other_rate(std::vector<Complex>(64, 1.0), 2.0);
    CHECK_THROWS_AS(multiply(a, other_rate), ShapeMismatch);
  }
}

TEST_CASE("energy") {
  const RealSignal d({1, 0, 0, 0}, 4);
  CHECK(energy(d) == 1.0);
  CHECK(energy(dft(d)) == doctest::Approx(1.0));
  CHECK(energy(RealSignal({0, 0, 0, 0}, 4)) == 0.0);

  const RealSignal x(random_samples(512, 3), 1.0);
  CHECK(std::abs(energy(x) - energy(dft(x))) < 1e-9 * energy(x));
}

TEST_CASE("signal invariants are enforced") {
  CHECK_THROWS_AS(RealSignal({1, 2, 3}, 1.0), InvalidArgument);
  CHECK_THROWS_AS(RealSignal({1}, 1.0), InvalidArgument);
  CHECK_THROWS_AS(RealSignal({1, 2}, 0.0), InvalidArgument);
  CHECK_THROWS_AS(RealSignal({1, NAN}, 1.0), InvalidArgument);
  CHECK_THROWS_AS(Spectrum({Complex(1, 0), Complex(INFINITY, 0)}, 1.0), InvalidArgument);
}

TEST_CASE("transform properties over random inputs") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const std::size_t n = 2 * (1 + seed * 37 % 300);
    const auto xs = random_samples(n, seed, 3.0);
    const auto ys = random_samples(n, seed + 999, 0.5);
    const RealSignal x(xs, 1.0);
    const RealSignal y(ys, 1.0);

    // Round trip.
    const RealSignal back = idft(dft(x));
    for (std::size_t i = 0; i < n; ++i) REQUIRE(std::abs(back[i] - xs[i]) < 1e-12);

    // Linearity.
    const double a = 1.7;
    const double b = -0.3;
    std::vector<double> mix(n);
    for (std::size_t i = 0; i < n; ++i) mix[i] = a * xs[i] + b * ys[i];
    const Spectrum lhs = dft(RealSignal(mix, 1.0));
    const Spectrum fx = dft(x);
    const Spectrum fy = dft(y);
    for (std::size_t k = 0; k < n; ++k) REQUIRE(std::abs(lhs[k] - (a * fx[k] + b * fy[k])) < 1e-10);

    // Parseval.
    REQUIRE(std::abs(energy(x) - energy(fx)) <= 1e-9 * energy(x));
  }
}
