#pragma once

#include <array>
#include <cstdint>

#include "syncq/rational.hpp"

namespace syncq {

/// Philox4x32-10 counter-based block function (Salmon et al., SC'11).
/// Stateless: the same (counter, key) always yields the same four words.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter generate(Counter counter, Key key);
};

/// Reproducible random stream identified by (seed, index, lane).
///
/// Block j of the stream is Philox4x32-10 applied to the counter
/// {j, lane, index_lo, index_hi} under the key {seed_lo, seed_hi}. Words are
/// consumed in order ctr[0..3]. `index` names a trial or worker and `lane`
/// separates independent uses within one trial (arrivals, disturbances, ...),
/// so distinct (index, lane) pairs never share a counter.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t index, std::uint32_t lane = 0);

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  /// The next `count` bits (1..32) drawn from a bit reservoir.
  std::uint32_t bits(unsigned count);

  /// Uniform integer in [0, bound), bound in [1, 2^32]; unbiased (Lemire).
  std::uint64_t uniform_below(std::uint64_t bound);

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t index() const { return index_; }
  std::uint32_t lane() const { return lane_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t index_;
  std::uint32_t lane_;
  std::uint32_t block_ = 0;
  Philox4x32::Counter buffer_{};
  unsigned position_ = 4;
  std::uint64_t reservoir_ = 0;
  unsigned reservoir_bits_ = 0;
};

/// Exact Bernoulli(p) sampler for rational p with denominator at most 2^32.
/// Dyadic p = a/2^j consumes j bits per sample; other p use one bounded
/// integer draw compared against the numerator.
class BernoulliSampler {
 public:
  explicit BernoulliSampler(const Rational& p);

  bool operator()(RandomStream& stream) const {
    switch (kind_) {
      case Kind::kNever:
        return false;
      case Kind::kAlways:
        return true;
      case Kind::kDyadic:
        return stream.bits(shift_) < numerator_;
      case Kind::kGeneral:
        break;
    }
    return stream.uniform_below(denominator_) < numerator_;
  }

 private:
  enum class Kind { kNever, kAlways, kDyadic, kGeneral };

  Kind kind_ = Kind::kNever;
  std::uint64_t numerator_ = 0;
  std::uint64_t denominator_ = 1;
  unsigned shift_ = 0;
};

}  // namespace syncq
