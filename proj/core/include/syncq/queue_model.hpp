#pragma once

#include <cstdint>
#include <vector>

#include "syncq/lattice.hpp"
#include "syncq/quotient_walk.hpp"
#include "syncq/random.hpp"
#include "syncq/rational.hpp"

namespace syncq {

/// Parameters of one batch of d synchronized queues: per-queue Bernoulli(p)
/// arrivals and a service attempt that succeeds with probability m_bar.
struct SystemParams {
  int d = 2;
  Rational p{1, 2};
  Rational m_bar{1};

  /// Validated constructor: d >= 2, 0 < p < 1, 0 < m_bar <= 1, p < m_bar.
  static SystemParams make(int d, Rational p, Rational m_bar);

  /// Test fixtures only: additionally admits p in {0, 1} and drops p < m_bar.
  static SystemParams test_fixture(int d, Rational p, Rational m_bar);

  Rational p_tilde() const { return Rational(1) - p; }
};

struct QueueState {
  IntVector q;
  std::int64_t t = 0;  // bookkeeping only

  std::size_t dim() const { return q.size(); }
  friend bool operator==(const QueueState&, const QueueState&) = default;
};

struct ControlDecision {
  std::uint8_t v = 0;  // service activated
  std::uint8_t m = 1;  // disturbance sample; service only takes effect when m = 1
};

/// 1 iff every queue holds at least one customer.
std::uint8_t greedy_policy(const QueueState& state);

/// q - 1*m*v + a. Throws UsageError when v = 1 while some queue is empty,
/// or when the arrival vector length differs from d.
QueueState step(const QueueState& state, ControlDecision control, const ArrivalVector& arrivals);

ArrivalVector sample_arrivals(const SystemParams& params, RandomStream& stream);

/// Samples into an existing buffer using a prepared sampler.
void sample_arrivals(const BernoulliSampler& sampler, RandomStream& stream,
                     std::vector<std::uint8_t>& out);

struct Decomposition {
  std::int64_t q_par = 0;  // common level: min_i q_i
  ExcessState q_perp;      // q - 1*q_par

  friend bool operator==(const Decomposition&, const Decomposition&) = default;
};

Decomposition decompose(const QueueState& state);

/// 1*q_par + q_perp. Throws UsageError for q_par < 0.
QueueState recompose(std::int64_t q_par, const ExcessState& q_perp);

}  // namespace syncq
