#include "syncq/quotient_walk.hpp"

#include <algorithm>
#include <string>

#include "syncq/error.hpp"

namespace syncq {

ExcessState ExcessState::from_canonical(IntVector components) {
  if (components.empty()) throw UsageError("excess state needs at least one component");
  if (*std::min_element(components.begin(), components.end()) != 0) {
    throw UsageError("excess state is not canonical (minimum component must be 0)");
  }
  return ExcessState(std::move(components));
}

ExcessState ExcessState::origin(std::size_t d) { return ExcessState(IntVector(d, 0)); }

bool ExcessState::is_origin() const {
  return std::all_of(x_.begin(), x_.end(), [](std::int64_t c) { return c == 0; });
}

ExcessState canonicalize(std::span<const std::int64_t> v) {
  if (v.empty()) throw UsageError("cannot canonicalize an empty vector");
  const std::int64_t low = *std::min_element(v.begin(), v.end());
  IntVector x(v.begin(), v.end());
  for (auto& c : x) c -= low;
  return ExcessState(std::move(x));
}

bool equivalent(std::span<const std::int64_t> u, std::span<const std::int64_t> v) {
  if (u.size() != v.size()) {
    throw UsageError("equivalent: length mismatch (" + std::to_string(u.size()) + " vs " +
                     std::to_string(v.size()) + ")");
  }
  if (u.empty()) return true;
  const std::int64_t shift = u[0] - v[0];
  for (std::size_t i = 1; i < u.size(); ++i) {
    if (u[i] - v[i] != shift) return false;
  }
  return true;
}

void excess_step_inplace(IntVector& x, std::span<const std::uint8_t> a) {
  std::int64_t low = x[0] + a[0];
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] += a[i];
    low = std::min(low, x[i]);
  }
  if (low != 0) {
    for (auto& c : x) c -= low;
  }
}

ExcessState excess_step(const ExcessState& x, const ArrivalVector& a) {
  if (a.size() != x.dim()) throw UsageError("excess_step: arrival vector has the wrong length");
  IntVector next = x.components();
  excess_step_inplace(next, a.a);
  return ExcessState::from_canonical(std::move(next));
}

DifferenceCoords to_difference_coords(const ExcessState& x) {
  switch (x.dim()) {
    case 2:
      return {{x[0] - x[1]}};
    case 3:
      return {{x[0] - x[1], x[0] - x[2]}};
    default:
      throw UsageError("difference coordinates are defined only for d in {2,3}, got d=" +
                       std::to_string(x.dim()));
  }
}

ExcessState from_difference_coords(const DifferenceCoords& c) {
  switch (c.values.size()) {
    case 1: {
      const IntVector v{c.values[0], 0};
      return canonicalize(v);
    }
    case 2: {
      const IntVector v{0, -c.values[0], -c.values[1]};
      return canonicalize(v);
    }
    default:
      throw UsageError("difference coordinates must have one (d=2) or two (d=3) entries");
  }
}

}  // namespace syncq
