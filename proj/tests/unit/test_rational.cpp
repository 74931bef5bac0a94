#include <cmath>

#include "doctest.h"
#include "syncq/error.hpp"
#include "syncq/random.hpp"
#include "syncq/rational.hpp"

using namespace syncq;

TEST_CASE("parse_rational accepts fractions, integers and exact decimals") {
  CHECK(parse_rational("1/2") == Rational(1, 2));
  CHECK(parse_rational(" 2/4 ") == Rational(1, 2));
  CHECK(parse_rational("0.5") == Rational(1, 2));
  CHECK(parse_rational("0.1") == Rational(1, 10));
  CHECK(parse_rational(".25") == Rational(1, 4));
  CHECK(parse_rational("3") == Rational(3));
  CHECK(parse_rational("-3/6") == Rational(-1, 2));
  CHECK(parse_rational("1.") == Rational(1));
}

TEST_CASE("parse_rational rejects malformed input") {
  CHECK_THROWS_AS(parse_rational(""), UsageError);
  CHECK_THROWS_AS(parse_rational("1/0"), UsageError);
  CHECK_THROWS_AS(parse_rational("a/b"), UsageError);
  CHECK_THROWS_AS(parse_rational("0.5.1"), UsageError);
  CHECK_THROWS_AS(parse_rational("."), UsageError);
  CHECK_THROWS_AS(parse_rational("1e-3"), UsageError);
}

TEST_CASE("to_string round-trips through parse_rational") {
  for (const char* text : {"1/3", "7/2", "0", "-5/9", "123456789012345678901234567890/7"}) {
    CHECK(parse_rational(to_string(parse_rational(text))) == parse_rational(text));
  }
}

TEST_CASE("log_of handles values outside the double range") {
  Integer big;
  mpz_ui_pow_ui(big.get_mpz_t(), 2, 5000);
  CHECK(log_of(big) == doctest::Approx(5000 * std::log(2.0)).epsilon(1e-14));
  const Rational tiny(Integer(3), big);
  CHECK(log_of(tiny) == doctest::Approx(std::log(3.0) - 5000 * std::log(2.0)).epsilon(1e-14));
  CHECK(to_double(tiny) == 0.0);
  CHECK(to_double(Rational(1, 3)) == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(log_of(Rational(0)), UsageError);
}

TEST_CASE("ExactProb enforces [0,1]") {
  CHECK(ExactProb(Rational(2, 4)).value() == Rational(1, 2));
  CHECK_NOTHROW(ExactProb(Rational(0)));
  CHECK_NOTHROW(ExactProb(Rational(1)));
  CHECK_THROWS_AS(ExactProb(Rational(3, 2)), UsageError);
  CHECK_THROWS_AS(ExactProb(Rational(-1, 2)), UsageError);
}

TEST_CASE("LogProb encodes zero as -inf and clamps rounding above zero") {
  CHECK(LogProb::zero().is_zero());
  CHECK(LogProb::zero().value() == 0.0);
  CHECK(LogProb::one().value() == 1.0);
  CHECK(LogProb::from_log(1e-14).log() == 0.0);
  CHECK_THROWS_AS(LogProb::from_log(0.5), UsageError);
  CHECK_THROWS_AS(LogProb::from_log(std::nan("")), UsageError);
  CHECK(log_add(std::log(0.25), std::log(0.5)) == doctest::Approx(std::log(0.75)));
  CHECK(log_add(LogProb::kNegInf, -2.0) == -2.0);
}

TEST_CASE("to_double rounds correctly") {
  RandomStream s(77, 0);
  for (int trial = 0; trial < 20000; ++trial) {
    const auto num = static_cast<std::int64_t>(s.next_u64() >> (11 + s.uniform_below(40)));
    const auto den = static_cast<std::int64_t>((s.next_u64() >> (11 + s.uniform_below(40))) | 1);
    Rational q(Integer(static_cast<long>(num)), Integer(static_cast<long>(den)));
    q.canonicalize();
    REQUIRE(to_double(q) == static_cast<double>(num) / static_cast<double>(den));
  }
  CHECK(to_double(Rational(-1, 3)) == -1.0 / 3.0);
  // Operands far beyond double range still convert.
  Integer big = 1;
  big <<= 5000;
  Rational huge(big + 1, big * 3);
  CHECK(to_double(huge) == 1.0 / 3.0);
}
