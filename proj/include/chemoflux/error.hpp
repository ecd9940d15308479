#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace chemoflux {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Operation is not defined for the current boundary mode.
class UnsupportedMode : public Error {
 public:
  using Error::Error;
};

/// The state handed to the time stepper is not usable (non-finite extrema).
class DegenerateState : public Error {
 public:
  using Error::Error;
};

/// A time step produced non-finite or negative density.
class InstabilityError : public Error {
 public:
  InstabilityError(const std::string& what, double time)
      : Error(what + " (t = " + std::to_string(time) + ")"), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

/// An iterative linear solve failed to reach its tolerance.
class SolverDivergence : public Error {
 public:
  using Error::Error;
};

/// Configuration validation failure; carries every problem found.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> problems)
      : Error(join(problems)), problems_(std::move(problems)) {}
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  static std::string join(const std::vector<std::string>& items) {
    std::string out = "invalid configuration:";
    for (const auto& s : items) out += "\n  - " + s;
    return out;
  }
  std::vector<std::string> problems_;
};

}  // namespace chemoflux
