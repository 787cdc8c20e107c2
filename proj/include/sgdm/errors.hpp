#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace sgdm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Explicit step-size list queried past its end.
class ScheduleExhausted : public Error {
 public:
  using Error::Error;
};

class InvalidRange : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A trajectory lacks the data a diagnostic needs (noise log, window stats).
class InsufficientRecording : public Error {
 public:
  using Error::Error;
};

/// Window length exceeds the cap under which an inequality is claimed.
class InapplicableWindow : public Error {
 public:
  using Error::Error;
};

class RegimeViolation : public Error {
 public:
  using Error::Error;
};

class Divergence : public Error {
 public:
  using Error::Error;
};

/// Config rejection carrying one message per offending field.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> issues)
      : Error(join(issues)), issues_(std::move(issues)) {}

  const std::vector<std::string>& issues() const noexcept { return issues_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (const auto& s : v) {
      if (!out.empty()) out += "; ";
      out += s;
    }
    return out;
  }
  std::vector<std::string> issues_;
};

}  // namespace sgdm
