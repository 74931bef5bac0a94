#include "syncq/queue_model.hpp"

#include <algorithm>
#include <string>

#include "syncq/error.hpp"

namespace syncq {
namespace {

void check_common(int d, const Rational& p, const Rational& m_bar) {
  if (d < 2) throw UsageError("dimension d must be at least 2, got " + std::to_string(d));
  if (m_bar <= 0 || m_bar > 1) {
    throw UsageError("service probability m_bar must lie in (0,1], got " + to_string(m_bar));
  }
  if (p < 0 || p > 1) throw UsageError("arrival probability p must lie in [0,1], got " + to_string(p));
}

}  // namespace

SystemParams SystemParams::make(int d, Rational p, Rational m_bar) {
  p.canonicalize();
  m_bar.canonicalize();
  check_common(d, p, m_bar);
  if (p == 0 || p == 1) {
    throw UsageError("arrival probability p must lie strictly inside (0,1), got " + to_string(p));
  }
  if (p >= m_bar) {
    throw UsageError("arrival rate p=" + to_string(p) + " must be below the service rate m_bar=" +
                     to_string(m_bar));
  }
  return SystemParams{d, std::move(p), std::move(m_bar)};
}

SystemParams SystemParams::test_fixture(int d, Rational p, Rational m_bar) {
  p.canonicalize();
  m_bar.canonicalize();
  check_common(d, p, m_bar);
  return SystemParams{d, std::move(p), std::move(m_bar)};
}

std::uint8_t greedy_policy(const QueueState& state) {
  if (state.q.empty()) return 0;
  return *std::min_element(state.q.begin(), state.q.end()) >= 1 ? 1 : 0;
}

QueueState step(const QueueState& state, ControlDecision control, const ArrivalVector& arrivals) {
  if (arrivals.size() != state.dim()) throw UsageError("step: arrival vector has the wrong length");
  if (control.v > 1 || control.m > 1) throw UsageError("step: v and m must be bits");
  if (control.v == 1 && greedy_policy(state) == 0) {
    throw UsageError("step: service activated while a queue is empty (1*v <= q violated)");
  }
  QueueState next{state.q, state.t + 1};
  const std::int64_t served = control.v * control.m;
  for (std::size_t i = 0; i < next.q.size(); ++i) {
    next.q[i] += arrivals.a[i] - served;
  }
  return next;
}

void sample_arrivals(const BernoulliSampler& sampler, RandomStream& stream,
                     std::vector<std::uint8_t>& out) {
  for (auto& bit : out) bit = sampler(stream) ? 1 : 0;
}

ArrivalVector sample_arrivals(const SystemParams& params, RandomStream& stream) {
  const BernoulliSampler sampler(params.p);
  ArrivalVector arrivals{std::vector<std::uint8_t>(static_cast<std::size_t>(params.d))};
  sample_arrivals(sampler, stream, arrivals.a);
  return arrivals;
}

Decomposition decompose(const QueueState& state) {
  if (state.q.empty()) throw UsageError("decompose: empty state");
  const std::int64_t level = *std::min_element(state.q.begin(), state.q.end());
  return Decomposition{level, canonicalize(state.q)};
}

QueueState recompose(std::int64_t q_par, const ExcessState& q_perp) {
  if (q_par < 0) throw UsageError("recompose: q_par must be nonnegative");
  QueueState state{q_perp.components(), 0};
  for (auto& c : state.q) c += q_par;
  return state;
}

}  // namespace syncq
