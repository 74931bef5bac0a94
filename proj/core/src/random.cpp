#include "syncq/random.hpp"

#include <bit>

#include "syncq/error.hpp"

namespace syncq {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}

inline Philox4x32::Counter round(const Philox4x32::Counter& c, const Philox4x32::Key& k) {
  std::uint32_t hi0, lo0, hi1, lo1;
  mulhilo(kMul0, c[0], hi0, lo0);
  mulhilo(kMul1, c[2], hi1, lo1);
  return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace

Philox4x32::Counter Philox4x32::generate(Counter counter, Key key) {
  counter = round(counter, key);
  for (int r = 1; r < 10; ++r) {
    key[0] += kWeyl0;
    key[1] += kWeyl1;
    counter = round(counter, key);
  }
  return counter;
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t index, std::uint32_t lane)
    : seed_(seed), index_(index), lane_(lane) {}

void RandomStream::refill() {
  const Philox4x32::Counter counter{block_, lane_, static_cast<std::uint32_t>(index_),
                                    static_cast<std::uint32_t>(index_ >> 32)};
  const Philox4x32::Key key{static_cast<std::uint32_t>(seed_),
                            static_cast<std::uint32_t>(seed_ >> 32)};
  buffer_ = Philox4x32::generate(counter, key);
  ++block_;
  position_ = 0;
}

std::uint32_t RandomStream::next_u32() {
  if (position_ == 4) refill();
  return buffer_[position_++];
}

std::uint64_t RandomStream::next_u64() {
  const std::uint64_t lo = next_u32();
  const std::uint64_t hi = next_u32();
  return (hi << 32) | lo;
}

std::uint32_t RandomStream::bits(unsigned count) {
  if (reservoir_bits_ < count) {
    reservoir_ |= static_cast<std::uint64_t>(next_u32()) << reservoir_bits_;
    reservoir_bits_ += 32;
  }
  const std::uint64_t mask = (count == 32) ? 0xFFFFFFFFull : ((1ull << count) - 1);
  const auto out = static_cast<std::uint32_t>(reservoir_ & mask);
  reservoir_ >>= count;
  reservoir_bits_ -= count;
  return out;
}

std::uint64_t RandomStream::uniform_below(std::uint64_t bound) {
  if (bound == 0 || bound > (1ull << 32)) throw UsageError("uniform_below bound outside [1, 2^32]");
  if (bound == (1ull << 32)) return next_u32();
  std::uint64_t product = static_cast<std::uint64_t>(next_u32()) * bound;
  auto low = static_cast<std::uint32_t>(product);
  if (low < bound) {
    const auto threshold = static_cast<std::uint32_t>((0x100000000ull - bound) % bound);
    while (low < threshold) {
      product = static_cast<std::uint64_t>(next_u32()) * bound;
      low = static_cast<std::uint32_t>(product);
    }
  }
  return product >> 32;
}

double RandomStream::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

BernoulliSampler::BernoulliSampler(const Rational& p) {
  if (p < 0 || p > 1) throw UsageError("Bernoulli parameter outside [0,1]");
  if (p == 0) {
    kind_ = Kind::kNever;
    return;
  }
  if (p == 1) {
    kind_ = Kind::kAlways;
    return;
  }
  const Integer& num = p.get_num();
  const Integer& den = p.get_den();
  if (mpz_sizeinbase(den.get_mpz_t(), 2) > 33 || den > Integer("4294967296")) {
    throw UsageError("Bernoulli parameter " + to_string(p) + " has a denominator above 2^32");
  }
  numerator_ = num.get_ui();
  denominator_ = den.get_ui();
  if ((denominator_ & (denominator_ - 1)) == 0) {
    kind_ = Kind::kDyadic;
    shift_ = static_cast<unsigned>(std::countr_zero(denominator_));
  } else {
    kind_ = Kind::kGeneral;
  }
}

}  // namespace syncq
