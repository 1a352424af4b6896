#pragma once

// WAV and CSV persistence for signals, spectra and phase curves.
//
// WAV: canonical RIFF/WAVE, a 16-byte fmt chunk (PCM tag 1 or IEEE float
// tag 3) followed by the data chunk, little-endian, no other chunks. PCM
// samples map [-1, 1] onto [-(2^(b-1) - 1), 2^(b-1) - 1] with rounding and
// no dither. Reading also accepts WAVE_FORMAT_EXTENSIBLE, 32-bit PCM, 64-bit
// float, and skips unknown chunks.
//
// CSV: UTF-8, comma-separated, mandatory header row. Reals are written in
// scientific notation with 17 significant digits, so a CSV round trip is
// exact.

#include "apir/chirp.hpp"
#include "apir/signal.hpp"

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>

namespace apir {

enum class SignalFormat { wav_pcm16, wav_pcm24, wav_float32, csv };

std::string_view to_string(SignalFormat format) noexcept;

struct SignalFile {
  std::filesystem::path path;
  SignalFormat format = SignalFormat::wav_float32;
  std::size_t channels = 1;

  /// Format from the extension: ".csv" -> csv, ".wav" -> float32 WAV unless
  /// `wav_format` says otherwise. Throws UnsupportedFormat for anything else.
  static SignalFile from_path(const std::filesystem::path& path,
                              std::optional<SignalFormat> wav_format = std::nullopt);
};

/// Writes `x` to every channel of `file` (CSV files are mono only).
/// PCM formats throw ClippingError for samples outside [-1, 1].
void write_signal(const RealSignal& x, const SignalFile& file);

/// Multichannel WAV write; all channels must share length and rate.
void write_signals(std::span<const RealSignal> channels, const SignalFile& file);

struct ReadOptions {
  /// Required for CSV input; ignored for WAV, whose header carries the rate.
  std::optional<double> sample_rate_hz;
  /// WAV channel to extract.
  std::size_t channel = 0;
};

RealSignal read_signal(const SignalFile& file, const ReadOptions& options = {});

/// Header `bin,freq_hz,real,imag,magnitude,phase_rad`, rows for bins 0..N/2.
void write_spectrum_csv(const Spectrum& x, const std::filesystem::path& path);

/// Header `bin,freq_hz,phase_rad`, rows for bins 0..N/2.
void write_phase_csv(const PhaseCurve& phase, const std::filesystem::path& path);

/// Reads a phase CSV written by write_phase_csv. The sample rate is twice the
/// Nyquist row's frequency; the negative-frequency bins are rebuilt by odd
/// symmetry.
PhaseCurve read_phase_csv(const std::filesystem::path& path);

/// 17-significant-digit scientific rendering used by every CSV writer.
std::string format_real(double value);

}  // namespace apir
