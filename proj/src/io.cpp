#include "apir/io.hpp"

#include "apir/errors.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string_view>
#include <vector>

namespace apir {

namespace {

constexpr std::uint16_t kTagPcm = 1;
constexpr std::uint16_t kTagFloat = 3;
constexpr std::uint16_t kTagExtensible = 0xFFFE;

void put_u16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xFF));
  out.push_back(static_cast<unsigned char>(v >> 8));
}

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xFF));
}

void put_tag(std::vector<unsigned char>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

std::uint32_t get_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

std::uint16_t get_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | p[1] << 8);
}

std::vector<unsigned char> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return std::vector<unsigned char>(std::istreambuf_iterator<char>(in),
                                    std::istreambuf_iterator<char>());
}

void write_bytes(const std::filesystem::path& path, const std::vector<unsigned char>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write to " + path.string() + " failed");
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("write to " + path.string() + " failed");
}

std::int32_t quantize(double v, double full_scale, std::size_t index) {
  if (!(v >= -1.0 && v <= 1.0)) {
    std::ostringstream msg;
    msg << "sample " << index << " = " << v << " is outside [-1, 1] for PCM output";
    throw ClippingError(msg.str());
  }
  return static_cast<std::int32_t>(std::lround(v * full_scale));
}

struct WavFormat {
  std::uint16_t tag = 0;
  std::uint16_t channels = 0;
  std::uint32_t rate = 0;
  std::uint16_t bits = 0;
};

double decode_sample(const unsigned char* p, const WavFormat& fmt) {
  if (fmt.tag == kTagFloat) {
    if (fmt.bits == 32) return static_cast<double>(std::bit_cast<float>(get_u32(p)));
    const std::uint64_t lo = get_u32(p);
    const std::uint64_t hi = get_u32(p + 4);
    return std::bit_cast<double>(lo | hi << 32);
  }
  switch (fmt.bits) {
    case 16:
      return static_cast<std::int16_t>(get_u16(p)) / 32767.0;
    case 24: {
      std::int32_t v = p[0] | p[1] << 8 | p[2] << 16;
      if (v & 0x800000) v -= 0x1000000;
      return v / 8388607.0;
    }
    default:
      return static_cast<std::int32_t>(get_u32(p)) / 2147483647.0;
  }
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

double parse_cell(std::string_view cell, std::size_t row, const std::filesystem::path& path) {
  cell = trim(cell);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
    throw ParseError(path.string() + ": row " + std::to_string(row) + ": '" + std::string(cell) +
                     "' is not a finite number");
  }
  return v;
}

// Rows of a CSV file with the given header; row numbers count from 1 at the
// header line.
std::vector<std::vector<double>> read_table(const std::filesystem::path& path,
                                            std::string_view header, std::size_t min_columns) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || trim(line) != header) {
    throw ParseError(path.string() + ": row 1: expected header '" + std::string(header) + "'");
  }
  std::vector<std::vector<double>> rows;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() < min_columns) {
      throw ParseError(path.string() + ": row " + std::to_string(row) + ": expected " +
                       std::to_string(min_columns) + " columns, found " +
                       std::to_string(cells.size()));
    }
    std::vector<double> values;
    values.reserve(cells.size());
    for (const auto cell : cells) values.push_back(parse_cell(cell, row, path));
    rows.push_back(std::move(values));
  }
  return rows;
}

RealSignal read_wav(const SignalFile& file, const ReadOptions& options) {
  const auto bytes = slurp(file.path);
  const std::string name = file.path.string();
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw ParseError(name + ": missing RIFF/WAVE header");
  }

  std::optional<WavFormat> fmt;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::string id(reinterpret_cast<const char*>(chunk), 4);
    const std::size_t size = get_u32(chunk + 4);
    const std::size_t body = pos + 8;
    const std::size_t available = bytes.size() - body;

    if (id == "fmt ") {
      if (size < 16 || available < 16) throw ParseError(name + ": fmt chunk truncated");
      const unsigned char* p = bytes.data() + body;
      WavFormat f{get_u16(p), get_u16(p + 2), get_u32(p + 4), get_u16(p + 14)};
      if (f.tag == kTagExtensible) {
        if (size < 26 || available < 26) throw ParseError(name + ": fmt chunk truncated");
        f.tag = get_u16(p + 24);
      }
      const bool pcm_ok = f.tag == kTagPcm && (f.bits == 16 || f.bits == 24 || f.bits == 32);
      const bool float_ok = f.tag == kTagFloat && (f.bits == 32 || f.bits == 64);
      if (!pcm_ok && !float_ok) {
        throw UnsupportedFormat(name + ": WAV format tag " + std::to_string(f.tag) + " with " +
                                std::to_string(f.bits) + " bits is not supported");
      }
      if (f.channels == 0 || f.rate == 0) throw ParseError(name + ": fmt chunk has zero channels or rate");
      fmt = f;
    } else if (id == "data") {
      if (!fmt) throw ParseError(name + ": data chunk precedes fmt chunk");
      if (size > available) {
        throw ParseError(name + ": data chunk truncated: header declares " + std::to_string(size) +
                         " bytes, file holds " + std::to_string(available));
      }
      const std::size_t width = fmt->bits / 8u;
      const std::size_t frame = width * fmt->channels;
      if (size % frame != 0) {
        throw ParseError(name + ": data chunk size is not a whole number of frames");
      }
      if (options.channel >= fmt->channels) {
        throw InvalidArgument(name + ": channel " + std::to_string(options.channel) +
                              " requested but file has " + std::to_string(fmt->channels));
      }
      const std::size_t frames = size / frame;
      std::vector<double> samples(frames);
      for (std::size_t i = 0; i < frames; ++i) {
        samples[i] = decode_sample(bytes.data() + body + i * frame + options.channel * width, *fmt);
      }
      return RealSignal(std::move(samples), static_cast<double>(fmt->rate));
    }
    pos = body + size + (size & 1u);
  }
  throw ParseError(name + (fmt ? ": no data chunk" : ": no fmt chunk"));
}

RealSignal read_csv_signal(const SignalFile& file, const ReadOptions& options) {
  if (!options.sample_rate_hz) {
    throw InvalidArgument(file.path.string() + ": CSV input needs an explicit sample rate");
  }
  const auto rows = read_table(file.path, "index,time_s,value", 3);
  std::vector<double> samples;
  samples.reserve(rows.size());
  for (const auto& r : rows) samples.push_back(r[2]);
  return RealSignal(std::move(samples), *options.sample_rate_hz);
}

}  // namespace

std::string_view to_string(SignalFormat format) noexcept {
  switch (format) {
    case SignalFormat::wav_pcm16:
      return "pcm16";
    case SignalFormat::wav_pcm24:
      return "pcm24";
    case SignalFormat::wav_float32:
      return "float32";
    case SignalFormat::csv:
      return "csv";
  }
  return "unknown";
}

std::string format_real(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::scientific, 16);
  if (ec != std::errc()) throw IoError("number formatting failed");
  return std::string(buf, ptr);
}

SignalFile SignalFile::from_path(const std::filesystem::path& path,
                                 std::optional<SignalFormat> wav_format) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext == ".csv") return SignalFile{path, SignalFormat::csv, 1};
  if (ext == ".wav") {
    SignalFormat f = wav_format.value_or(SignalFormat::wav_float32);
    if (f == SignalFormat::csv) f = SignalFormat::wav_float32;
    return SignalFile{path, f, 1};
  }
  throw UnsupportedFormat(path.string() + ": unknown extension '" + ext + "' (want .wav or .csv)");
}

void write_signals(std::span<const RealSignal> channels, const SignalFile& file) {
  if (channels.empty()) throw EmptySet("no channels to write");
  const RealSignal& first = channels.front();
  for (const auto& c : channels) {
    if (c.size() != first.size() || c.sample_rate() != first.sample_rate()) {
      throw ShapeMismatch("channels differ in length or sample rate");
    }
  }

  if (file.format == SignalFormat::csv) {
    if (channels.size() != 1) throw UnsupportedFormat("CSV signal files are mono");
    std::string text = "index,time_s,value\n";
    for (std::size_t i = 0; i < first.size(); ++i) {
      text += std::to_string(i);
      text += ',';
      text += format_real(static_cast<double>(i) / first.sample_rate());
      text += ',';
      text += format_real(first[i]);
      text += '\n';
    }
    write_text(file.path, text);
    return;
  }

  const double fs = first.sample_rate();
  if (fs != std::round(fs) || fs > 4294967295.0) {
    throw UnsupportedFormat("WAV needs an integral sample rate, got " + std::to_string(fs));
  }
  std::uint16_t bits = 32;
  std::uint16_t tag = kTagFloat;
  if (file.format == SignalFormat::wav_pcm16) {
    bits = 16;
    tag = kTagPcm;
  } else if (file.format == SignalFormat::wav_pcm24) {
    bits = 24;
    tag = kTagPcm;
  }
  const auto nch = static_cast<std::uint16_t>(channels.size());
  const std::uint32_t block = nch * (bits / 8u);
  const std::uint64_t data_size = static_cast<std::uint64_t>(block) * first.size();
  if (data_size + 36 > 0xFFFFFFFFULL) throw UnsupportedFormat("signal too long for a WAV file");

  std::vector<unsigned char> out;
  out.reserve(44 + data_size);
  put_tag(out, "RIFF");
  put_u32(out, static_cast<std::uint32_t>(36 + data_size));
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, tag);
  put_u16(out, nch);
  put_u32(out, static_cast<std::uint32_t>(fs));
  put_u32(out, static_cast<std::uint32_t>(fs) * block);
  put_u16(out, static_cast<std::uint16_t>(block));
  put_u16(out, bits);
  put_tag(out, "data");
  put_u32(out, static_cast<std::uint32_t>(data_size));

  for (std::size_t i = 0; i < first.size(); ++i) {
    for (const auto& c : channels) {
      const double v = c[i];
      switch (file.format) {
        case SignalFormat::wav_pcm16:
          put_u16(out, static_cast<std::uint16_t>(quantize(v, 32767.0, i)));
          break;
        case SignalFormat::wav_pcm24: {
          const auto q = static_cast<std::uint32_t>(quantize(v, 8388607.0, i));
          out.push_back(static_cast<unsigned char>(q & 0xFF));
          out.push_back(static_cast<unsigned char>((q >> 8) & 0xFF));
          out.push_back(static_cast<unsigned char>((q >> 16) & 0xFF));
          break;
        }
        default:
          put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
          break;
      }
    }
  }
  write_bytes(file.path, out);
}

void write_signal(const RealSignal& x, const SignalFile& file) {
  const std::size_t count = std::max<std::size_t>(file.channels, 1);
  std::vector<RealSignal> copies(count, x);
  write_signals(copies, file);
}

RealSignal read_signal(const SignalFile& file, const ReadOptions& options) {
  if (file.format == SignalFormat::csv) return read_csv_signal(file, options);
  return read_wav(file, options);
}

void write_spectrum_csv(const Spectrum& x, const std::filesystem::path& path) {
  std::string text = "bin,freq_hz,real,imag,magnitude,phase_rad\n";
  const std::size_t n = x.size();
  for (std::size_t k = 0; k <= n / 2; ++k) {
    const Complex b = x[k];
    text += std::to_string(k) + ',' + format_real(bin_hz(k, n, x.sample_rate())) + ',' +
            format_real(b.real()) + ',' + format_real(b.imag()) + ',' +
            format_real(std::abs(b)) + ',' + format_real(std::arg(b)) + '\n';
  }
  write_text(path, text);
}

void write_phase_csv(const PhaseCurve& phase, const std::filesystem::path& path) {
  std::string text = "bin,freq_hz,phase_rad\n";
  const std::size_t n = phase.size();
  for (std::size_t k = 0; k <= n / 2; ++k) {
    text += std::to_string(k) + ',' + format_real(bin_hz(k, n, phase.sample_rate())) + ',' +
            format_real(phase[k]) + '\n';
  }
  write_text(path, text);
}

PhaseCurve read_phase_csv(const std::filesystem::path& path) {
  const auto rows = read_table(path, "bin,freq_hz,phase_rad", 3);
  if (rows.size() < 2) throw ParseError(path.string() + ": phase curve needs at least two rows");
  std::vector<double> half;
  half.reserve(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k][0] != static_cast<double>(k)) {
      throw ParseError(path.string() + ": row " + std::to_string(k + 2) + ": expected bin " +
                       std::to_string(k));
    }
    half.push_back(rows[k][2]);
  }
  const double fs = 2.0 * rows.back()[1];
  if (!(fs > 0.0)) throw ParseError(path.string() + ": Nyquist row has no positive frequency");
  return PhaseCurve::from_positive_bins(half, fs);
}

}  // namespace apir
