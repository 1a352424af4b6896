#include "apir/system_sim.hpp"

#include "apir/errors.hpp"
#include "apir/random.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace apir {

SystemModel::SystemModel(RealSignal taps_in, std::string descriptor_in)
    : taps(std::move(taps_in)), descriptor(std::move(descriptor_in)) {
  bool any = false;
  for (double v : taps.samples()) any = any || v != 0.0;
  if (!any) throw ZeroSignal("system model has no nonzero tap");
}

CaptureSet::CaptureSet(std::vector<RealSignal> captures_in, std::optional<double> snr)
    : captures(std::move(captures_in)), snr_db(snr) {
  if (captures.empty()) throw EmptySet("capture set is empty");
  for (const auto& c : captures) {
    if (c.size() != captures.front().size() ||
        c.sample_rate() != captures.front().sample_rate()) {
      throw ShapeMismatch("captures differ in length or sample rate");
    }
  }
}

SystemModel random_fir_system(std::size_t n, double fs, std::size_t active_taps,
                              std::uint64_t seed) {
  if (active_taps < 1 || active_taps > n) {
    throw InvalidCount("active taps must lie in [1, " + std::to_string(n) + "], got " +
                       std::to_string(active_taps));
  }
  Rng rng(derive_seed(seed, SeedStream::system));
  std::vector<double> taps(n, 0.0);
  double e = 0.0;
  for (std::size_t i = 0; i < active_taps; ++i) {
    taps[i] = rng.gaussian();
    e += taps[i] * taps[i];
  }
  if (e == 0.0) {
    taps[0] = 1.0;
    e = 1.0;
  }
  const double gain = 1.0 / std::sqrt(e);
  for (double& v : taps) v *= gain;
  return SystemModel(RealSignal(std::move(taps), fs),
                     "random_fir_system seed=" + std::to_string(seed) +
                         " taps=" + std::to_string(active_taps) + " rng=mt19937_64/box-muller");
}

RealSignal force_system(const SystemModel& h, const RealSignal& r) {
  if (h.taps.size() != r.size() || h.taps.sample_rate() != r.sample_rate()) {
    throw ShapeMismatch("system (" + std::to_string(h.taps.size()) + " taps) and reference (" +
                        std::to_string(r.size()) + " samples) do not match");
  }
  return idft(multiply(dft(h.taps), dft(r)));
}

RealSignal add_noise(const RealSignal& y, double snr_db, std::uint64_t seed) {
  const double ey = energy(y);
  if (!(ey > 0.0)) throw ZeroSignal("cannot set an SNR against a zero-energy signal");
  if (std::isinf(snr_db) && snr_db > 0.0) return y;
  if (std::isnan(snr_db)) throw InvalidArgument("SNR is NaN");

  Rng rng(seed);
  std::vector<double> w(y.size());
  double ew = 0.0;
  for (double& v : w) {
    v = rng.gaussian();
    ew += v * v;
  }
  const double target = ey / std::pow(10.0, snr_db / 10.0);
  const double gain = std::sqrt(target / ew);
  std::vector<double> out(y.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = y[i] + gain * w[i];
  return RealSignal(std::move(out), y.sample_rate());
}

CaptureSet make_captures(const RealSignal& y, double snr_db, std::size_t count,
                         std::uint64_t seed) {
  if (count == 0) throw EmptySet("at least one capture is required");
  std::vector<RealSignal> caps;
  caps.reserve(count);
  for (std::size_t m = 0; m < count; ++m) {
    caps.push_back(add_noise(y, snr_db, derive_seed(seed, SeedStream::noise, m)));
  }
  std::optional<double> snr;
  if (!std::isinf(snr_db)) snr = snr_db;
  return CaptureSet(std::move(caps), snr);
}

RealSignal stack_captures(const CaptureSet& set) {
  const auto& first = set.captures.front();
  // Running mean: identical captures reproduce themselves bit for bit.
  std::vector<double> mean(first.samples().begin(), first.samples().end());
  for (std::size_t m = 1; m < set.captures.size(); ++m) {
    const auto& c = set.captures[m];
    const double weight = 1.0 / static_cast<double>(m + 1);
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += (c[i] - mean[i]) * weight;
  }
  return RealSignal(std::move(mean), first.sample_rate());
}

}  // namespace apir
