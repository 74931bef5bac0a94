#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

#include "syncq/lattice.hpp"

namespace syncq {

/// Canonical representative of a class of Z^d / <1>: the vector with its
/// minimum component shifted to zero. The all-zero vector is the origin class.
class ExcessState {
 public:
  ExcessState() = default;

  /// Adopts an already canonical vector; throws UsageError otherwise.
  static ExcessState from_canonical(IntVector components);
  /// The origin class in dimension d.
  static ExcessState origin(std::size_t d);

  const IntVector& components() const { return x_; }
  std::size_t dim() const { return x_.size(); }
  std::int64_t operator[](std::size_t i) const { return x_[i]; }
  bool is_origin() const;

  friend bool operator==(const ExcessState&, const ExcessState&) = default;
  friend auto operator<=>(const ExcessState&, const ExcessState&) = default;

 private:
  explicit ExcessState(IntVector x) : x_(std::move(x)) {}
  friend ExcessState canonicalize(std::span<const std::int64_t> v);

  IntVector x_;
};

/// v - 1 * min(v). Idempotent; the result is equivalent to v modulo <1>.
ExcessState canonicalize(std::span<const std::int64_t> v);

/// True iff u - v is an integer multiple of the all-ones vector.
/// Throws UsageError on a length mismatch.
bool equivalent(std::span<const std::int64_t> u, std::span<const std::int64_t> v);

/// One step of the excess process: canonicalize(x + a).
ExcessState excess_step(const ExcessState& x, const ArrivalVector& a);

/// In-place variant used on hot simulation paths.
void excess_step_inplace(IntVector& x, std::span<const std::uint8_t> a);

/// Queue-difference view of a class for d = 2 (one value) and d = 3 (two values):
/// (x1 - x2) and (x1 - x2, x1 - x3) respectively.
struct DifferenceCoords {
  std::vector<std::int64_t> values;

  friend bool operator==(const DifferenceCoords&, const DifferenceCoords&) = default;
};

/// Throws UsageError for d outside {2, 3}.
DifferenceCoords to_difference_coords(const ExcessState& x);
ExcessState from_difference_coords(const DifferenceCoords& c);

}  // namespace syncq
