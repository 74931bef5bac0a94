#include "syncq/rational.hpp"

#include <cctype>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>

#include "syncq/error.hpp"

namespace syncq {
namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

Integer parse_integer(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) {
    throw UsageError("malformed rational '" + std::string(whole) + "'");
  }
  Integer value(std::string(s), 10);
  return negative ? Integer(-value) : value;
}

Rational parse_decimal(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  const auto dot = s.find('.');
  std::string_view int_part = s.substr(0, dot);
  std::string_view frac_part = s.substr(dot + 1);
  if (int_part.empty() && frac_part.empty()) {
    throw UsageError("malformed decimal '" + std::string(whole) + "'");
  }
  if ((!int_part.empty() && !all_digits(int_part)) ||
      (!frac_part.empty() && !all_digits(frac_part))) {
    throw UsageError("malformed decimal '" + std::string(whole) + "'");
  }
  std::string digits = std::string(int_part) + std::string(frac_part);
  Integer numerator(digits.empty() ? std::string("0") : digits, 10);
  Integer denominator;
  mpz_ui_pow_ui(denominator.get_mpz_t(), 10, frac_part.size());
  Rational value(numerator, denominator);
  value.canonicalize();
  return negative ? Rational(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view s = trim(text);
  if (s.empty()) throw UsageError("empty rational");
  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    Integer num = parse_integer(trim(s.substr(0, slash)), s);
    Integer den = parse_integer(trim(s.substr(slash + 1)), s);
    if (den == 0) throw UsageError("zero denominator in '" + std::string(s) + "'");
    Rational value(num, den);
    value.canonicalize();
    return value;
  }
  if (s.find('.') != std::string_view::npos) return parse_decimal(s, s);
  return Rational(parse_integer(s, s));
}

std::string to_string(const Rational& value) { return value.get_str(10); }

double to_double(const Rational& value) {
  if (value == 0) return 0.0;
  // Correctly rounded: form a 55+ bit integer quotient, then round half to
  // even using the dropped bits and the division remainder.
  Integer num = abs(value.get_num());
  Integer den = value.get_den();
  const auto num_bits = static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 2));
  const auto den_bits = static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2));
  const long shift = 55 - (num_bits - den_bits);
  if (shift > 0) {
    num <<= static_cast<mp_bitcnt_t>(shift);
  } else {
    den <<= static_cast<mp_bitcnt_t>(-shift);
  }
  Integer q, r;
  mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  const bool sticky = r != 0;
  const auto q_bits = static_cast<long>(mpz_sizeinbase(q.get_mpz_t(), 2));
  const long extra = q_bits - 53;
  std::uint64_t mantissa = mpz_get_ui(Integer(q >> static_cast<mp_bitcnt_t>(extra)).get_mpz_t());
  const std::uint64_t dropped = mpz_get_ui(Integer(q & ((Integer(1) << extra) - 1)).get_mpz_t());
  const std::uint64_t half = std::uint64_t{1} << (extra - 1);
  if (dropped > half || (dropped == half && (sticky || (mantissa & 1)))) ++mantissa;
  const double magnitude = std::ldexp(static_cast<double>(mantissa), static_cast<int>(extra - shift));
  return sgn(value) < 0 ? -magnitude : magnitude;
}

double log_of(const Integer& value) {
  if (value <= 0) throw UsageError("log_of requires a positive value");
  long exponent = 0;
  const double mantissa = mpz_get_d_2exp(&exponent, value.get_mpz_t());
  return std::log(mantissa) + static_cast<double>(exponent) * std::numbers::ln2;
}

double log_of(const Rational& value) {
  if (value <= 0) throw UsageError("log_of requires a positive value");
  return log_of(Integer(value.get_num())) - log_of(Integer(value.get_den()));
}

ExactProb::ExactProb(Rational value) : value_(std::move(value)) {
  value_.canonicalize();
  if (value_ < 0 || value_ > 1) {
    throw UsageError("probability " + to_string(value_) + " outside [0,1]");
  }
}

LogProb LogProb::from_log(double log_value) {
  if (std::isnan(log_value)) throw UsageError("log-probability is NaN");
  // Rounding in a max-shifted sum can leave a sum of one a few ulps above 0.
  if (log_value > 0.0) {
    if (log_value > 1e-9) throw UsageError("log-probability above zero");
    log_value = 0.0;
  }
  LogProb p;
  p.log_ = log_value;
  return p;
}

double log_add(double a, double b) {
  if (a == LogProb::kNegInf) return b;
  if (b == LogProb::kNegInf) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

}  // namespace syncq
