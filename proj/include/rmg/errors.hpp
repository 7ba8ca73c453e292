#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rmg {

/// Base class of every error thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// An argument or domain object violates a documented invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// External data (a file, a stream) is malformed or inconsistent.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Beat frequency at or beyond the fast-time Nyquist limit; the target is
/// outside the unambiguous range.
class AliasError : public Error {
 public:
  using Error::Error;
};

/// Reference trace does not span the radar capture in time.
class CoverageError : public DataError {
 public:
  using DataError::DataError;
};

/// Raw capture file does not match the expected binary layout.
class CaptureFormatError : public DataError {
 public:
  CaptureFormatError(const std::string& what, std::uint64_t expected_bytes,
                     std::uint64_t actual_bytes)
      : DataError(what),
        expected_bytes(expected_bytes),
        actual_bytes(actual_bytes) {}

  std::uint64_t expected_bytes = 0;
  std::uint64_t actual_bytes = 0;
};

}  // namespace rmg
