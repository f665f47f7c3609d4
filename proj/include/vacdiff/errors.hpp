#pragma once

#include <stdexcept>
#include <string>

namespace vacdiff {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Plasma electron density above the critical density for the laser.
class OverdenseError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Sampling too coarse for the requested computation.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// Quadrature or other iterative numeric procedure failed.
class NumericError : public Error {
 public:
  using Error::Error;
};

class NormalizationError : public Error {
 public:
  using Error::Error;
};

class GridMismatchError : public Error {
 public:
  using Error::Error;
};

class InsufficientSignalError : public Error {
 public:
  using Error::Error;
};

class ExtentError : public Error {
 public:
  using Error::Error;
};

class OptimizationError : public Error {
 public:
  using Error::Error;
};

/// Configuration document problem; carries the offending key and line.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, int line, const std::string& what)
      : Error(format(key, line, what)), key_(std::move(key)), line_(line), detail_(what) {}

  const std::string& key() const noexcept { return key_; }
  int line() const noexcept { return line_; }
  /// The message without the key and line prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  static std::string format(const std::string& key, int line,
                            const std::string& what) {
    std::string msg = "config";
    if (line > 0) msg += " line " + std::to_string(line);
    if (!key.empty()) msg += " key '" + key + "'";
    return msg + ": " + what;
  }

  std::string key_;
  int line_ = 0;
  std::string detail_;
};

}  // namespace vacdiff
