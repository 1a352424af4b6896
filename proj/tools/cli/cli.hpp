#pragma once

// Command-line front end: gen | simulate | recover | compare.
//
// Exit codes: 0 success, 2 usage or validation error, 1 runtime error.

#include "apir/chirp.hpp"
#include "apir/impulse.hpp"
#include "apir/io.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace apir::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

enum class OutputKind { csv, wav, both };

/// Fully validated run configuration.
struct RunConfig {
  std::string subcommand;
  std::size_t n = 4096;
  bool n_given = false;
  double rate = 48000.0;
  BandLimits band{100.0, 20000.0};
  SweepFamily sweep = SweepFamily::linear;
  bool sweep_given = false;
  double duration_s = 0.06;
  bool duration_given = false;
  bool compensation = true;
  std::uint64_t seed = 1;
  double snr_db = 0.0;  // +inf when noise is off
  std::size_t stacks = 1;
  std::size_t taps = 0;  // 0 means N/4
  std::size_t guard_bins = 2;
  std::optional<double> floor;
  std::filesystem::path out_dir = ".";
  OutputKind output = OutputKind::both;
  SignalFormat wav_format = SignalFormat::wav_float32;
  std::optional<std::filesystem::path> capture;
  std::optional<std::filesystem::path> phase;
  std::optional<std::filesystem::path> truth;
  std::optional<std::filesystem::path> reference;
};

/// Parses and validates `args` (program name first) and runs the chosen
/// subcommand. Diagnostics go to `err`, summaries to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Reads a `key = value` config file into `--key value` argument pairs.
/// Blank lines and lines starting with '#' are skipped.
std::vector<std::string> config_file_args(const std::filesystem::path& path);

}  // namespace apir::cli
