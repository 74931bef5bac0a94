#pragma once

#include <cstdint>
#include <vector>

namespace syncq {

/// Integer point of Z^d.
using IntVector = std::vector<std::int64_t>;

/// One slot of arrivals: component i is 1 when a customer joined queue i.
struct ArrivalVector {
  std::vector<std::uint8_t> a;

  std::size_t size() const { return a.size(); }
  friend bool operator==(const ArrivalVector&, const ArrivalVector&) = default;
};

}  // namespace syncq
