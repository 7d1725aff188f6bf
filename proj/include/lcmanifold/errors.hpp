#pragma once

#include <stdexcept>
#include <string>

namespace lcm {

/// Process exit codes shared by the CLI and the verification driver.
enum ExitCode : int {
  exit_ok = 0,
  exit_verification_failed = 1,
  exit_config_invalid = 2,
  exit_singular_system = 3,
  exit_integration_failed = 4,
  exit_insufficient_data = 5,
};

/// Invalid or inconsistent configuration (bad keys, values out of range).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Arguments outside an operation's mathematical domain (non-finite state,
/// negative radius, nonpositive eigenvalue magnitude, ...).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The coefficient system of a manifold solve is (numerically) singular.
class SingularSystemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A time series is too short for the requested statistic.
class InsufficientDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Integration aborted; carries the last time where the state was valid.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double last_good_time)
      : std::runtime_error(what), last_good_time_(last_good_time) {}

  double last_good_time() const { return last_good_time_; }

 private:
  double last_good_time_;
};

}  // namespace lcm
