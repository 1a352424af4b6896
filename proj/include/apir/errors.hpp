#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>
#include <complex>

namespace apir {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A value handed to a constructor or operation broke its documented invariant.
class InvalidArgument : public Error {
public:
  using Error::Error;
};

class InvalidBand : public InvalidArgument {
public:
  using InvalidArgument::InvalidArgument;
};

class InvalidDuration : public InvalidArgument {
public:
  using InvalidArgument::InvalidArgument;
};

class InvalidRange : public InvalidArgument {
public:
  using InvalidArgument::InvalidArgument;
};

class InvalidCount : public InvalidArgument {
public:
  using InvalidArgument::InvalidArgument;
};

class ShapeMismatch : public InvalidArgument {
public:
  using InvalidArgument::InvalidArgument;
};

class NonHermitian : public InvalidArgument {
public:
  using InvalidArgument::InvalidArgument;
};

class ZeroSignal : public InvalidArgument {
public:
  using InvalidArgument::InvalidArgument;
};

class EmptySet : public InvalidArgument {
public:
  using InvalidArgument::InvalidArgument;
};

class EmptyBand : public InvalidArgument {
public:
  using InvalidArgument::InvalidArgument;
};

/// Naive spectral division hit zero-magnitude reference bins.
///
/// Carries the offending bin indices and the raw IEEE quotient (which holds
/// inf/nan at those bins) so callers can report the blowup instead of dying.
class DivisionBlowup : public Error {
public:
  DivisionBlowup(std::vector<std::size_t> bins,
                 std::vector<std::complex<double>> raw_quotient);

  const std::vector<std::size_t>& bins() const noexcept { return bins_; }
  const std::vector<std::complex<double>>& raw_quotient() const noexcept {
    return raw_;
  }

private:
  std::vector<std::size_t> bins_;
  std::vector<std::complex<double>> raw_;
};

class IoError : public Error {
public:
  using Error::Error;
};

class ParseError : public IoError {
public:
  using IoError::IoError;
};

class UnsupportedFormat : public IoError {
public:
  using IoError::IoError;
};

class ClippingError : public IoError {
public:
  using IoError::IoError;
};

}  // namespace apir
