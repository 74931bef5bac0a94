#pragma once

#include <stdexcept>
#include <string>

namespace syncq {

/// Raised when caller-supplied arguments violate an operation's precondition.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a requested computation exceeds a configured work guard.
/// Carries the estimated amount of work so callers can report it.
class WorkLimitExceeded : public std::runtime_error {
 public:
  WorkLimitExceeded(const std::string& what, double estimated, double limit)
      : std::runtime_error(what), estimated_(estimated), limit_(limit) {}

  double estimated() const { return estimated_; }
  double limit() const { return limit_; }

 private:
  double estimated_;
  double limit_;
};

}  // namespace syncq
