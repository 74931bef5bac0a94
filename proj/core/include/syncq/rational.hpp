#pragma once

#include <gmpxx.h>

#include <cmath>
#include <limits>
#include <string>
#include <string_view>

namespace syncq {

using Integer = mpz_class;
using Rational = mpq_class;

/// Parses "a/b", "a", or a plain decimal literal such as "0.125" into an
/// exact rational. Decimal input is converted digit by digit, so "0.1" is
/// exactly 1/10. Throws UsageError on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

/// "a/b" in lowest terms, or "a" when the denominator is one.
std::string to_string(const Rational& value);

double to_double(const Rational& value);

/// Natural logarithm of a positive integer or rational. Works for values far
/// outside the double range (numerators with thousands of digits).
double log_of(const Integer& value);
double log_of(const Rational& value);

/// Exact probability: a rational in [0, 1], always canonical.
class ExactProb {
 public:
  ExactProb() = default;
  explicit ExactProb(Rational value);

  const Rational& value() const { return value_; }
  double to_double() const { return syncq::to_double(value_); }
  double log() const { return log_of(value_); }

  friend bool operator==(const ExactProb& a, const ExactProb& b) { return a.value_ == b.value_; }

 private:
  Rational value_{0};
};

/// Probability stored as its natural log. -inf encodes zero.
class LogProb {
 public:
  static constexpr double kNegInf = -std::numeric_limits<double>::infinity();

  LogProb() = default;
  static LogProb from_log(double log_value);
  static LogProb zero() { return LogProb{}; }
  static LogProb one() { return from_log(0.0); }

  double log() const { return log_; }
  double value() const { return std::exp(log_); }
  bool is_zero() const { return log_ == kNegInf; }

 private:
  double log_ = kNegInf;
};

/// log(exp(a) + exp(b)) without overflow or underflow.
double log_add(double a, double b);

}  // namespace syncq
