#pragma once

#include <stdexcept>
#include <string>

namespace esync {

/// Precondition violation on caller-supplied data (wrong shape, not in the algebra, ...).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A state left its group beyond what reprojection can repair.
class IntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent experiment configuration. `line()` is 0 when the
/// problem is not tied to a specific line of the config text.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Dither multipliers that break the frequency separation rules.
class FrequencyError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

}  // namespace esync
