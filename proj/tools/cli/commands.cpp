#include "commands.hpp"

#include "staging.hpp"

#include "apir/chirp.hpp"
#include "apir/errors.hpp"
#include "apir/impulse.hpp"
#include "apir/io.hpp"
#include "apir/recovery.hpp"
#include "apir/system_sim.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

namespace apir::cli {

namespace {

// Shortest text that round-trips, for the human-edited config file.
std::string shortest(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string sci(double v) {
  std::ostringstream s;
  s.precision(6);
  s << std::scientific << v;
  return s.str();
}

SweepSpec sweep_of(const RunConfig& cfg) {
  return SweepSpec{cfg.sweep, cfg.duration_s, cfg.band, cfg.compensation};
}

void write_signal_files(StagedOutputs& stage, const std::string& stem, const RealSignal& x,
                        const RunConfig& cfg) {
  if (cfg.output != OutputKind::wav) {
    write_signal(x, SignalFile::from_path(stage.add(stem + ".csv")));
  }
  if (cfg.output != OutputKind::csv) {
    write_signal(x, SignalFile::from_path(stage.add(stem + ".wav"), cfg.wav_format));
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("write to " + path.string() + " failed");
}

// Exact excitation spectrum. Impulse-based references are rebuilt from the
// constructed Delta so that out-of-band bins are exactly zero rather than
// transform round-off.
Spectrum reference_spectrum(const Reference& ref, SweepFamily family, const BandLimits& band) {
  const std::size_t n = ref.signal.size();
  const double fs = ref.signal.sample_rate();
  if (family == SweepFamily::none || family == SweepFamily::linear) {
    const Spectrum shaped = apply_allpass(band_limited_impulse(n, fs, band), ref.phase);
    if (ref.scale == 1.0) return shaped;
    std::vector<Complex> bins(shaped.bins().begin(), shaped.bins().end());
    for (auto& b : bins) b *= ref.scale;
    return Spectrum(std::move(bins), fs);
  }
  return dft(ref.signal);
}

void write_reference_files(StagedOutputs& stage, const Reference& ref, const RunConfig& cfg) {
  write_signal_files(stage, "reference", ref.signal, cfg);
  write_spectrum_csv(reference_spectrum(ref, cfg.sweep, cfg.band), stage.add("reference_spectrum.csv"));
  write_phase_csv(ref.phase, stage.add("phase.csv"));

  std::string text = "# regeneration parameters; pass to recover/compare with --config\n";
  text += "n = " + std::to_string(ref.signal.size()) + '\n';
  text += "rate = " + shortest(ref.signal.sample_rate()) + '\n';
  text += "band = " + shortest(cfg.band.f_min_hz) + ':' + shortest(cfg.band.f_max_hz) + '\n';
  text += "sweep = " + std::string(to_string(cfg.sweep)) + '\n';
  text += "t = " + shortest(cfg.duration_s) + '\n';
  text += "compensation = " + std::string(cfg.compensation ? "on" : "off") + '\n';
  write_text(stage.add("reference.cfg"), text);
}

struct Inputs {
  RealSignal capture;
  PhaseCurve phase;
  double scale = 1.0;
  SweepFamily family = SweepFamily::linear;
  std::optional<Reference> regenerated;
  std::optional<Spectrum> truth;
};

bool exponential(const Inputs& in) {
  return in.regenerated &&
         (in.family == SweepFamily::exp_take1 || in.family == SweepFamily::exp_take2);
}

Inputs load_inputs(const RunConfig& cfg) {
  RealSignal capture =
      read_signal(SignalFile::from_path(*cfg.capture), ReadOptions{cfg.rate, 0});
  if (cfg.n_given && cfg.n != capture.size()) {
    throw ShapeMismatch("capture has " + std::to_string(capture.size()) + " samples but --n is " +
                        std::to_string(cfg.n));
  }
  const std::size_t n = capture.size();
  const double fs = capture.sample_rate();
  cfg.band.validate(fs);

  std::optional<Reference> regenerated;
  std::optional<PhaseCurve> phase;
  double scale = 1.0;
  if (cfg.phase) {
    phase = read_phase_csv(*cfg.phase);
  } else {
    regenerated = make_reference(n, fs, sweep_of(cfg));
    phase = regenerated->phase;
    scale = regenerated->scale;
  }
  if (phase->size() != n || phase->sample_rate() != fs) {
    throw ShapeMismatch("phase curve (" + std::to_string(phase->size()) + " bins at " +
                        shortest(phase->sample_rate()) + " Hz) does not match the capture (" +
                        std::to_string(n) + " samples at " + shortest(fs) + " Hz)");
  }

  std::optional<Spectrum> truth;
  if (cfg.truth) {
    const RealSignal h = read_signal(SignalFile::from_path(*cfg.truth), ReadOptions{fs, 0});
    if (h.size() != n) {
      throw ShapeMismatch("truth file has " + std::to_string(h.size()) +
                          " taps but the capture has " + std::to_string(n) + " samples");
    }
    truth = dft(RealSignal(std::vector<double>(h.samples().begin(), h.samples().end()), fs));
  }
  // A phase file does not say which family made it; it is treated as an
  // allpass on the band-limited impulse.
  const SweepFamily family = cfg.phase ? SweepFamily::linear : cfg.sweep;
  return Inputs{std::move(capture), std::move(*phase), scale, family, std::move(regenerated),
                std::move(truth)};
}

std::string error_trace(const Spectrum& truth, const Spectrum& model, const BandLimits& band) {
  const std::size_t n = model.size();
  const double fs = model.sample_rate();
  const double delta = 2.0 / static_cast<double>(n);
  std::string text = "bin,freq_hz,in_band,system,model,error\n";
  for (std::size_t k = 0; k <= n / 2; ++k) {
    const bool in = band.contains_bin(k, n, fs);
    const Complex expected = in ? truth[k] * delta : Complex(0.0, 0.0);
    text += std::to_string(k) + ',' + format_real(bin_hz(k, n, fs)) + ',' + (in ? "1" : "0") +
            ',' + format_real(std::abs(truth[k]) * delta) + ',' + format_real(std::abs(model[k])) +
            ',' + format_real(std::abs(model[k] - expected)) + '\n';
  }
  return text;
}

}  // namespace

void cmd_gen(const RunConfig& cfg, std::ostream& out) {
  const Reference ref = make_reference(cfg.n, cfg.rate, sweep_of(cfg));
  StagedOutputs stage(cfg.out_dir);
  write_reference_files(stage, ref, cfg);
  stage.commit();
  out << "gen: N=" << cfg.n << " fs=" << shortest(cfg.rate) << " band=" << shortest(cfg.band.f_min_hz)
      << ':' << shortest(cfg.band.f_max_hz) << " Hz sweep=" << to_string(cfg.sweep)
      << " T=" << shortest(cfg.duration_s) << " s peak=" << sci(ref.signal.peak())
      << " scale=" << shortest(ref.scale) << '\n';
}

void cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  const Reference ref = make_reference(cfg.n, cfg.rate, sweep_of(cfg));
  const std::size_t taps = cfg.taps == 0 ? std::max<std::size_t>(1, cfg.n / 4) : cfg.taps;
  const SystemModel system = random_fir_system(cfg.n, cfg.rate, taps, cfg.seed);
  const RealSignal y = force_system(system, ref.signal);
  const CaptureSet captures = make_captures(y, cfg.snr_db, cfg.stacks, cfg.seed);
  const RealSignal stacked = stack_captures(captures);

  const auto residual = [&y](const RealSignal& c) {
    double e = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) e += (c[i] - y[i]) * (c[i] - y[i]);
    return e;
  };

  StagedOutputs stage(cfg.out_dir);
  write_reference_files(stage, ref, cfg);
  write_signal_files(stage, "system", system.taps, cfg);
  write_signal_files(stage, "y", y, cfg);
  if (captures.captures.size() > 1) {
    for (std::size_t m = 0; m < captures.captures.size(); ++m) {
      char stem[32];
      std::snprintf(stem, sizeof(stem), "capture_%03zu", m);
      write_signal_files(stage, stem, captures.captures[m], cfg);
    }
  }
  write_signal_files(stage, "capture", stacked, cfg);
  stage.commit();

  out << "simulate: N=" << cfg.n << " taps=" << taps << " seed=" << cfg.seed
      << " snr=" << (std::isinf(cfg.snr_db) ? std::string("inf") : shortest(cfg.snr_db))
      << " stacks=" << cfg.stacks << " single_residual=" << sci(residual(captures.captures.front()))
      << " stacked_residual=" << sci(residual(stacked)) << '\n';
}

void cmd_recover(const RunConfig& cfg, std::ostream& out) {
  const Inputs in = load_inputs(cfg);
  const RecoveryResult result = recover_impulse_model(
      in.capture, in.phase, cfg.band, RecoveryOptions{in.scale, in.truth, cfg.guard_bins});

  StagedOutputs stage(cfg.out_dir);
  write_signal_files(stage, "model", result.model, cfg);
  write_spectrum_csv(result.model_spectrum, stage.add("model_spectrum.csv"));
  if (in.truth) {
    write_text(stage.add("error_trace.csv"), error_trace(*in.truth, result.model_spectrum, cfg.band));
  }
  stage.commit();

  out << "recover: N=" << in.capture.size() << " band=" << shortest(cfg.band.f_min_hz) << ':'
      << shortest(cfg.band.f_max_hz) << " Hz";
  if (result.in_band_error) {
    out << " in_band_error=" << sci(*result.in_band_error);
    if (exponential(in)) out << " (scored against H 2/N; exponential sweeps are not flat in magnitude)";
  }
  out << '\n';
}

void cmd_compare(const RunConfig& cfg, std::ostream& out) {
  const Inputs in = load_inputs(cfg);
  const std::size_t n = in.capture.size();
  const double fs = in.capture.sample_rate();
  const double delta = 2.0 / static_cast<double>(n);

  Spectrum r = [&] {
    if (cfg.reference) {
      const RealSignal ref = read_signal(SignalFile::from_path(*cfg.reference), ReadOptions{fs, 0});
      if (ref.size() != n) {
        throw ShapeMismatch("reference has " + std::to_string(ref.size()) +
                            " samples but the capture has " + std::to_string(n));
      }
      return dft(ref);
    }
    if (in.regenerated) return reference_spectrum(*in.regenerated, in.family, cfg.band);
    return reference_spectrum(Reference{in.capture, in.phase, in.scale}, SweepFamily::linear,
                              cfg.band);
  }();
  const Spectrum y = dft(in.capture);

  struct Row {
    std::string method;
    std::vector<Complex> model;  // expressed on the H * Delta scale
  };
  std::vector<Row> rows;

  const RecoveryResult allpass = recover_impulse_model(
      in.capture, in.phase, cfg.band, RecoveryOptions{in.scale, std::nullopt, cfg.guard_bins});
  rows.push_back({"allpass", {allpass.model_spectrum.bins().begin(), allpass.model_spectrum.bins().end()}});

  const auto naive_row = [&](const std::string& name, std::optional<double> floor) {
    std::vector<Complex> raw;
    try {
      const Spectrum s = naive_deconvolve(y, r, floor);
      raw.assign(s.bins().begin(), s.bins().end());
    } catch (const DivisionBlowup& e) {
      raw = e.raw_quotient();
    }
    for (auto& b : raw) b *= delta;
    rows.push_back({name, std::move(raw)});
  };
  naive_row("naive_floor_none", std::nullopt);
  if (cfg.floor) naive_row("naive_floor_" + shortest(*cfg.floor), cfg.floor);

  std::string table = "method,in_band_error,max_out_of_band_magnitude,finite\n";
  for (const auto& row : rows) {
    bool finite = true;
    double out_of_band = 0.0;
    for (std::size_t k = 0; k <= n / 2; ++k) {
      const Complex b = row.model[k];
      const bool ok = std::isfinite(b.real()) && std::isfinite(b.imag());
      finite = finite && ok;
      if (!cfg.band.contains_bin(k, n, fs)) {
        out_of_band = ok ? std::max(out_of_band, std::abs(b)) : std::numeric_limits<double>::infinity();
      }
    }
    for (std::size_t k = n / 2 + 1; k < n; ++k) {
      finite = finite && std::isfinite(row.model[k].real()) && std::isfinite(row.model[k].imag());
    }
    std::string err = "nan";
    if (in.truth) err = format_real(in_band_error(in.truth->bins(), row.model, fs, cfg.band, cfg.guard_bins));
    table += row.method + ',' + err + ',' +
             (std::isinf(out_of_band) ? std::string("inf") : format_real(out_of_band)) + ',' +
             (finite ? "1" : "0") + '\n';
  }

  StagedOutputs stage(cfg.out_dir);
  write_text(stage.add("compare.csv"), table);
  stage.commit();
  out << table;
  if (exponential(in) && in.truth) {
    out << "note: errors are scored against H 2/N; exponential sweeps are not flat in magnitude\n";
  }
}

}  // namespace apir::cli
