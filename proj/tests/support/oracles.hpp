#pragma once

// Independent reference computations for the tests. Nothing here calls into
// the library's transform path.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace apir::test {

using cd = std::complex<double>;

/// O(N^2) DFT by direct summation, forward sign convention. The twiddle
/// index is reduced mod N so every angle is computed from an exact integer.
inline std::vector<cd> direct_dft(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<cd> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    cd acc(0.0, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t idx = (k * i) % n;
      const double angle = -2.0 * std::numbers::pi * static_cast<double>(idx) / static_cast<double>(n);
      acc += x[i] * cd(std::cos(angle), std::sin(angle));
    }
    out[k] = acc;
  }
  return out;
}

/// O(N^2) circular convolution.
inline std::vector<double> direct_circular_convolution(const std::vector<double>& a,
                                                       const std::vector<double>& b) {
  const std::size_t n = a.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out[(i + j) % n] += a[i] * b[j];
  }
  return out;
}

/// Band-limited impulse as an explicit cosine sum, for bins k_lo..k_hi
/// (excluding DC and Nyquist, which are handled by the flags):
/// (1/N) * (2/N) * (dc + 2 sum cos(2 pi k n / N) + nyq * (-1)^n).
inline std::vector<double> cosine_sum_impulse(std::size_t n, std::size_t k_lo, std::size_t k_hi,
                                              bool dc, bool nyquist) {
  std::vector<double> out(n, 0.0);
  const double amp = 2.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = dc ? 1.0 : 0.0;
    for (std::size_t k = std::max<std::size_t>(k_lo, 1); k <= k_hi && k < n / 2; ++k) {
      const std::size_t idx = (k * i) % n;
      acc += 2.0 * std::cos(2.0 * std::numbers::pi * static_cast<double>(idx) / static_cast<double>(n));
    }
    if (nyquist) acc += (i % 2 == 0) ? 1.0 : -1.0;
    out[i] = amp * acc / static_cast<double>(n);
  }
  return out;
}

/// Estimates angular frequency near time `t` from the two zero crossings
/// bracketing it (linear interpolation between samples). Returns the
/// estimate together with the midpoint time it refers to.
struct ZeroCrossingEstimate {
  double omega = 0.0;
  double t_mid = 0.0;
  double interval = 0.0;
};

inline std::vector<double> zero_crossings(const std::vector<double>& x, double fs) {
  std::vector<double> times;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double a = x[i];
    const double b = x[i + 1];
    if (a == 0.0) {
      times.push_back(static_cast<double>(i) / fs);
    } else if ((a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0)) {
      const double frac = a / (a - b);
      times.push_back((static_cast<double>(i) + frac) / fs);
    }
  }
  return times;
}

inline ZeroCrossingEstimate zero_crossing_frequency(const std::vector<double>& crossings, double t) {
  for (std::size_t i = 0; i + 1 < crossings.size(); ++i) {
    if (crossings[i] <= t && t < crossings[i + 1]) {
      const double dt = crossings[i + 1] - crossings[i];
      return {std::numbers::pi / dt, 0.5 * (crossings[i] + crossings[i + 1]), dt};
    }
  }
  return {};
}

/// Magnitude of a Hann-windowed DFT of x[start, start + len) at angular
/// frequency omega (rad/s), normalised by the window sum so a unit sinusoid
/// reads 0.5.
inline double windowed_tone_magnitude(const std::vector<double>& x, double fs, std::size_t start,
                                      std::size_t len, double omega) {
  cd acc(0.0, 0.0);
  double wsum = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    const double w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                          static_cast<double>(len - 1));
    const double t = static_cast<double>(start + i) / fs;
    acc += w * x[start + i] * std::polar(1.0, -omega * t);
    wsum += w;
  }
  return std::abs(acc) / wsum;
}

/// Minimal CSV reader for round-trip checks: header row, then numeric cells
/// parsed with strtod.
inline std::vector<std::vector<double>> reparse_csv(const std::filesystem::path& path,
                                                    std::string* header = nullptr) {
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  if (header) *header = line;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::vector<double> random_samples(std::size_t n, std::uint64_t seed, double scale = 1.0) {
  std::mt19937_64 gen(seed);
  std::vector<double> x(n);
  for (auto& v : x) {
    v = scale * (static_cast<double>(gen() >> 11) * 0x1.0p-53 * 2.0 - 1.0);
  }
  return x;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("apir-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace apir::test
