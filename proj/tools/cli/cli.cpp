#include "cli.hpp"

#include "commands.hpp"

#include "apir/errors.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <string_view>

namespace apir::cli {

namespace {

// Every flag is captured as text first so that validation can report all
// bad fields in one pass instead of stopping at the first.
struct RawOptions {
  std::string n = "4096";
  std::string rate = "48000";
  std::string band = "100:20000";
  std::string sweep = "linear";
  std::string t = "0.06";
  std::string compensation = "on";
  std::string seed = "1";
  std::string snr = "inf";
  std::string stacks = "1";
  std::string taps = "0";
  std::string guard_bins = "2";
  std::string floor = "1e-9";
  std::string out = ".";
  std::string format = "both";
  std::string wav_format = "float32";
  std::string config;
  std::string capture;
  std::string phase;
  std::string truth;
  std::string reference;
};

struct Seen {
  CLI::Option* n = nullptr;
  CLI::Option* sweep = nullptr;
  CLI::Option* t = nullptr;
};

std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const ShapeMismatch*>(&e)) return "ShapeMismatch: ";
  if (dynamic_cast<const InvalidBand*>(&e)) return "InvalidBand: ";
  if (dynamic_cast<const InvalidDuration*>(&e)) return "InvalidDuration: ";
  if (dynamic_cast<const InvalidRange*>(&e)) return "InvalidRange: ";
  if (dynamic_cast<const EmptyBand*>(&e)) return "EmptyBand: ";
  if (dynamic_cast<const ClippingError*>(&e)) return "ClippingError: ";
  if (dynamic_cast<const ParseError*>(&e)) return "ParseError: ";
  if (dynamic_cast<const UnsupportedFormat*>(&e)) return "UnsupportedFormat: ";
  return "";
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::optional<double> to_double(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::optional<std::uint64_t> to_uint(std::string_view s) {
  s = trim(s);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

void add_shared_options(CLI::App& sub, RawOptions& raw, Seen& seen) {
  const auto policy = CLI::MultiOptionPolicy::TakeLast;
  sub.add_option("--config", raw.config, "key = value file; command-line flags override it")
      ->multi_option_policy(policy);
  seen.n = sub.add_option("--n", raw.n, "signal length in samples (even)")
               ->default_val(raw.n)
               ->multi_option_policy(policy);
  sub.add_option("--rate", raw.rate, "sample rate in Hz")->default_val(raw.rate)->multi_option_policy(policy);
  sub.add_option("--band", raw.band, "passband f_i:f_a in Hz")->default_val(raw.band)->multi_option_policy(policy);
  seen.sweep = sub.add_option("--sweep", raw.sweep, "excitation: linear|exp1|exp2|none")
                   ->default_val(raw.sweep)
                   ->multi_option_policy(policy);
  seen.t = sub.add_option("--t", raw.t, "sweep duration in seconds")
               ->default_val(raw.t)
               ->multi_option_policy(policy);
  sub.add_option("--compensation", raw.compensation, "exponential sweep amplitude compensation: on|off")
      ->default_val(raw.compensation)
      ->multi_option_policy(policy);
  sub.add_option("--seed", raw.seed, "base random seed")->default_val(raw.seed)->multi_option_policy(policy);
  sub.add_option("--snr", raw.snr, "capture SNR in dB, or inf for no noise")
      ->default_val(raw.snr)
      ->multi_option_policy(policy);
  sub.add_option("--stacks", raw.stacks, "captures averaged together")
      ->default_val(raw.stacks)
      ->multi_option_policy(policy);
  sub.add_option("--taps", raw.taps, "active taps of the simulated system (0 = N/4)")
      ->default_val(raw.taps)
      ->multi_option_policy(policy);
  sub.add_option("--guard-bins", raw.guard_bins, "bins dropped at each band edge by the error metric")
      ->default_val(raw.guard_bins)
      ->multi_option_policy(policy);
  sub.add_option("--floor", raw.floor, "naive division floor, or none")
      ->default_val(raw.floor)
      ->multi_option_policy(policy);
  sub.add_option("--out", raw.out, "output directory")->default_val(raw.out)->multi_option_policy(policy);
  sub.add_option("--format", raw.format, "signal files to write: csv|wav|both")
      ->default_val(raw.format)
      ->multi_option_policy(policy);
  sub.add_option("--wav-format", raw.wav_format, "WAV encoding: float32|pcm16|pcm24")
      ->default_val(raw.wav_format)
      ->multi_option_policy(policy);
}

void add_input_options(CLI::App& sub, RawOptions& raw, bool with_reference) {
  const auto policy = CLI::MultiOptionPolicy::TakeLast;
  sub.add_option("--capture", raw.capture, "captured response (.wav or .csv)")->multi_option_policy(policy);
  sub.add_option("--phase", raw.phase, "phase curve CSV written by gen/simulate")->multi_option_policy(policy);
  sub.add_option("--truth", raw.truth, "true system taps (.wav or .csv), enables error output")
      ->multi_option_policy(policy);
  if (with_reference) {
    sub.add_option("--reference", raw.reference, "reference signal used for naive division")
        ->multi_option_policy(policy);
  }
}

RunConfig validate(const std::string& subcommand, const RawOptions& raw, const Seen& seen,
                   std::vector<std::string>& errors) {
  RunConfig cfg;
  cfg.subcommand = subcommand;
  cfg.n_given = seen.n->count() > 0;
  cfg.sweep_given = seen.sweep->count() > 0;
  cfg.duration_given = seen.t->count() > 0;

  const auto n = to_uint(raw.n);
  if (!n || *n < 2 || *n % 2 != 0) {
    errors.push_back("--n: '" + raw.n + "' must be an even integer >= 2");
  } else {
    cfg.n = static_cast<std::size_t>(*n);
  }

  const auto rate = to_double(raw.rate);
  bool rate_ok = rate && *rate > 0.0 && std::isfinite(*rate);
  if (!rate_ok) {
    errors.push_back("--rate: '" + raw.rate + "' must be a positive number");
  } else {
    cfg.rate = *rate;
  }

  const auto colon = raw.band.find(':');
  std::optional<double> f_lo;
  std::optional<double> f_hi;
  if (colon != std::string::npos) {
    f_lo = to_double(std::string_view(raw.band).substr(0, colon));
    f_hi = to_double(std::string_view(raw.band).substr(colon + 1));
  }
  if (!f_lo || !f_hi) {
    errors.push_back("--band: '" + raw.band + "' must look like f_i:f_a");
  } else {
    cfg.band = BandLimits{*f_lo, *f_hi};
    if (rate_ok) {
      try {
        cfg.band.validate(cfg.rate);
      } catch (const InvalidBand& e) {
        errors.push_back(std::string("--band: InvalidBand: ") + e.what());
      }
    }
  }

  if (const auto family = parse_sweep_family(raw.sweep)) {
    cfg.sweep = *family;
  } else {
    errors.push_back("--sweep: '" + raw.sweep + "' must be linear, exp1, exp2 or none");
  }

  const auto t = to_double(raw.t);
  if (!t || !(*t > 0.0) || !std::isfinite(*t)) {
    errors.push_back("--t: '" + raw.t + "' must be a positive duration in seconds");
  } else {
    cfg.duration_s = *t;
    // recover/compare take N from the capture, so the span check waits.
    const bool uses_sweep = cfg.sweep != SweepFamily::none;
    const bool generates = subcommand == "gen" || subcommand == "simulate";
    if (uses_sweep && generates && n && rate_ok &&
        *t > static_cast<double>(cfg.n) / cfg.rate) {
      errors.push_back("--t: InvalidDuration: " + raw.t + " s exceeds N/fs = " +
                       std::to_string(static_cast<double>(cfg.n) / cfg.rate) + " s");
    }
  }
  if (cfg.sweep == SweepFamily::exp_take1 && f_lo && *f_lo <= 0.0) {
    errors.push_back("--band: exp1 sweeps need f_i > 0");
  }

  if (raw.compensation == "on" || raw.compensation == "true") {
    cfg.compensation = true;
  } else if (raw.compensation == "off" || raw.compensation == "false") {
    cfg.compensation = false;
  } else {
    errors.push_back("--compensation: '" + raw.compensation + "' must be on or off");
  }

  if (const auto seed = to_uint(raw.seed)) {
    cfg.seed = *seed;
  } else {
    errors.push_back("--seed: '" + raw.seed + "' must be a non-negative integer");
  }

  if (trim(raw.snr) == "inf") {
    cfg.snr_db = std::numeric_limits<double>::infinity();
  } else if (const auto snr = to_double(raw.snr); snr && std::isfinite(*snr)) {
    cfg.snr_db = *snr;
  } else {
    errors.push_back("--snr: '" + raw.snr + "' must be a number of dB or inf");
  }

  if (const auto stacks = to_uint(raw.stacks); stacks && *stacks >= 1) {
    cfg.stacks = static_cast<std::size_t>(*stacks);
  } else {
    errors.push_back("--stacks: '" + raw.stacks + "' must be an integer >= 1");
  }

  if (const auto taps = to_uint(raw.taps); taps && (!n || *taps <= *n)) {
    cfg.taps = static_cast<std::size_t>(*taps);
  } else {
    errors.push_back("--taps: '" + raw.taps + "' must be an integer in [0, N]");
  }

  if (const auto guard = to_uint(raw.guard_bins)) {
    cfg.guard_bins = static_cast<std::size_t>(*guard);
  } else {
    errors.push_back("--guard-bins: '" + raw.guard_bins + "' must be a non-negative integer");
  }

  if (trim(raw.floor) == "none") {
    cfg.floor.reset();
  } else if (const auto fl = to_double(raw.floor); fl && *fl > 0.0 && std::isfinite(*fl)) {
    cfg.floor = *fl;
  } else {
    errors.push_back("--floor: '" + raw.floor + "' must be a positive number or none");
  }

  cfg.out_dir = raw.out;
  if (raw.format == "csv") {
    cfg.output = OutputKind::csv;
  } else if (raw.format == "wav") {
    cfg.output = OutputKind::wav;
  } else if (raw.format == "both") {
    cfg.output = OutputKind::both;
  } else {
    errors.push_back("--format: '" + raw.format + "' must be csv, wav or both");
  }

  if (raw.wav_format == "float32") {
    cfg.wav_format = SignalFormat::wav_float32;
  } else if (raw.wav_format == "pcm16") {
    cfg.wav_format = SignalFormat::wav_pcm16;
  } else if (raw.wav_format == "pcm24") {
    cfg.wav_format = SignalFormat::wav_pcm24;
  } else {
    errors.push_back("--wav-format: '" + raw.wav_format + "' must be float32, pcm16 or pcm24");
  }

  const auto as_path = [](const std::string& s) -> std::optional<std::filesystem::path> {
    if (s.empty()) return std::nullopt;
    return std::filesystem::path(s);
  };
  cfg.capture = as_path(raw.capture);
  cfg.phase = as_path(raw.phase);
  cfg.truth = as_path(raw.truth);
  cfg.reference = as_path(raw.reference);

  if (subcommand == "recover" || subcommand == "compare") {
    if (!cfg.capture) {
      errors.push_back("--capture: a captured response file is required");
    } else if (!std::filesystem::exists(*cfg.capture)) {
      errors.push_back("--capture: " + cfg.capture->string() + " does not exist");
    }
    if (cfg.phase && (cfg.sweep_given || cfg.duration_given)) {
      errors.push_back("--phase: ambiguous, give either a phase file or --sweep/--t regeneration "
                       "parameters, not both");
    }
    for (const auto* p : {&cfg.phase, &cfg.truth, &cfg.reference}) {
      if (*p && !std::filesystem::exists(**p)) {
        errors.push_back((*p)->string() + " does not exist");
      }
    }
  }
  return cfg;
}

}  // namespace

std::vector<std::string> config_file_args(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::vector<std::string> args;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    const std::string_view s = trim(line);
    if (s.empty() || s.front() == '#') continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(path.string() + ": line " + std::to_string(row) + ": expected key = value");
    }
    const std::string_view key = trim(s.substr(0, eq));
    const std::string_view value = trim(s.substr(eq + 1));
    if (key.empty()) {
      throw ParseError(path.string() + ": line " + std::to_string(row) + ": empty key");
    }
    args.push_back("--" + std::string(key));
    args.emplace_back(value);
  }
  return args;
}

int run(const std::vector<std::string>& args_in, std::ostream& out, std::ostream& err) {
  // Splice config-file entries in right after the subcommand so that any
  // explicit flag, coming later, wins under the take-last policy.
  std::vector<std::string> args = args_in;
  try {
    for (std::size_t i = 1; i < args_in.size(); ++i) {
      std::string file;
      if (args_in[i] == "--config" && i + 1 < args_in.size()) {
        file = args_in[i + 1];
      } else if (args_in[i].rfind("--config=", 0) == 0) {
        file = args_in[i].substr(9);
      } else {
        continue;
      }
      if (args.size() >= 2 && !args[1].empty() && args[1][0] != '-') {
        const auto extra = config_file_args(file);
        args.insert(args.begin() + 2, extra.begin(), extra.end());
      }
      break;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  CLI::App app{"Allpass-chirp impulse response measurement toolkit"};
  app.require_subcommand(1);
  RawOptions raw;
  Seen seen_gen, seen_sim, seen_rec, seen_cmp;
  auto* gen = app.add_subcommand("gen", "write the excitation, its spectrum and its phase curve");
  add_shared_options(*gen, raw, seen_gen);
  auto* sim = app.add_subcommand("simulate", "force a seeded random FIR system and write captures");
  add_shared_options(*sim, raw, seen_sim);
  auto* rec = app.add_subcommand("recover", "recover the band-limited impulse model from a capture");
  add_shared_options(*rec, raw, seen_rec);
  add_input_options(*rec, raw, false);
  auto* cmp = app.add_subcommand("compare", "compare allpass recovery with naive spectral division");
  add_shared_options(*cmp, raw, seen_cmp);
  add_input_options(*cmp, raw, true);

  std::vector<char*> argv;
  argv.reserve(args.size());
  for (auto& a : args) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  std::string name;
  const Seen* seen = nullptr;
  if (gen->parsed()) {
    name = "gen";
    seen = &seen_gen;
  } else if (sim->parsed()) {
    name = "simulate";
    seen = &seen_sim;
  } else if (rec->parsed()) {
    name = "recover";
    seen = &seen_rec;
  } else {
    name = "compare";
    seen = &seen_cmp;
  }

  std::vector<std::string> errors;
  const RunConfig cfg = validate(name, raw, *seen, errors);
  if (!errors.empty()) {
    for (const auto& e : errors) err << "error: " << e << '\n';
    return kExitUsage;
  }

  try {
    if (name == "gen") {
      cmd_gen(cfg, out);
    } else if (name == "simulate") {
      cmd_simulate(cfg, out);
    } else if (name == "recover") {
      cmd_recover(cfg, out);
    } else {
      cmd_compare(cfg, out);
    }
  } catch (const InvalidArgument& e) {
    err << "error: " << error_kind(e) << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << error_kind(e) << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace apir::cli
