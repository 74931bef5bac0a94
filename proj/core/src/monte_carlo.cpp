#include "syncq/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "syncq/error.hpp"
#include "syncq/parallel.hpp"

namespace syncq {
namespace {

constexpr std::size_t kChunks = 64;
constexpr std::uint32_t kArrivalLane = 0;
constexpr std::uint32_t kDisturbanceLane = 1;
constexpr std::uint32_t kPolicyLane = 2;

void check_walk_params(int d, const Rational& p) {
  if (d < 2) throw UsageError("d must be at least 2, got " + std::to_string(d));
  if (p <= 0 || p >= 1) throw UsageError("p must lie strictly inside (0,1), got " + to_string(p));
}

bool at_origin(const IntVector& x) {
  return std::all_of(x.begin(), x.end(), [](std::int64_t c) { return c == 0; });
}

void fnv_mix(std::uint64_t& h, std::int64_t value) {
  auto v = static_cast<std::uint64_t>(value);
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xFF;
    h *= 0x100000001B3ull;
  }
}

}  // namespace

std::string to_string(ReturnMode mode) {
  return mode == ReturnMode::kIndependent ? "independent" : "single-path";
}

ReturnMode parse_return_mode(std::string_view text) {
  if (text == "independent") return ReturnMode::kIndependent;
  if (text == "single-path") return ReturnMode::kSinglePath;
  throw UsageError("unknown return mode '" + std::string(text) + "'");
}

void ReturnCounts::merge(const ReturnCounts& other) {
  if (hits.empty()) hits.assign(other.hits.size(), 0);
  if (hits.size() != other.hits.size()) throw UsageError("ReturnCounts::merge: n_max mismatch");
  for (std::size_t i = 0; i < hits.size(); ++i) hits[i] += other.hits[i];
  trials += other.trials;
}

ReturnCounts count_returns(std::int64_t n_max, int d, const Rational& p, std::uint64_t seed,
                           std::uint64_t trial_begin, std::uint64_t trial_end, ReturnMode mode) {
  check_walk_params(d, p);
  if (n_max < 0) throw UsageError("n_max must be nonnegative");
  const BernoulliSampler sampler(p);
  const auto dim = static_cast<std::size_t>(d);
  ReturnCounts counts;
  counts.hits.assign(static_cast<std::size_t>(n_max) + 1, 0);
  IntVector x(dim);
  std::vector<std::uint8_t> a(dim);
  for (std::uint64_t trial = trial_begin; trial < trial_end; ++trial) {
    ++counts.trials;
    ++counts.hits[0];
    if (mode == ReturnMode::kIndependent) {
      for (std::int64_t n = 1; n <= n_max; ++n) {
        RandomStream stream(seed, trial, static_cast<std::uint32_t>(n));
        std::fill(x.begin(), x.end(), 0);
        for (std::int64_t s = 0; s < n; ++s) {
          sample_arrivals(sampler, stream, a);
          excess_step_inplace(x, a);
        }
        if (at_origin(x)) ++counts.hits[static_cast<std::size_t>(n)];
      }
    } else {
      RandomStream stream(seed, trial, 0);
      std::fill(x.begin(), x.end(), 0);
      for (std::int64_t n = 1; n <= n_max; ++n) {
        sample_arrivals(sampler, stream, a);
        excess_step_inplace(x, a);
        if (at_origin(x)) ++counts.hits[static_cast<std::size_t>(n)];
      }
    }
  }
  return counts;
}

RdEstimateReport finalize_estimates(int d, const Rational& p, std::uint64_t seed, ReturnMode mode,
                                    const ReturnCounts& counts) {
  RdEstimateReport report;
  report.d = d;
  report.p = p;
  report.n_max = static_cast<std::int64_t>(counts.hits.size()) - 1;
  report.trials = counts.trials;
  report.seed = seed;
  report.mode = mode;
  const double trials = static_cast<double>(counts.trials);
  for (std::size_t n = 0; n < counts.hits.size(); ++n) {
    RdEstimate row;
    row.n = static_cast<std::int64_t>(n);
    row.hits = counts.hits[n];
    row.trials = counts.trials;
    row.estimate = static_cast<double>(row.hits) / trials;
    row.std_error = std::sqrt(row.estimate * (1.0 - row.estimate) / trials);
    row.ci_lo = std::max(0.0, row.estimate - 4.0 * row.std_error);
    row.ci_hi = std::min(1.0, row.estimate + 4.0 * row.std_error);
    report.rows.push_back(row);
  }
  return report;
}

RdEstimateReport estimate_rd(std::int64_t n_max, int d, const Rational& p, std::uint64_t trials,
                             std::uint64_t seed, const EstimateOptions& options) {
  check_walk_params(d, p);
  if (n_max < 0) throw UsageError("n_max must be nonnegative");
  if (trials < 1) throw UsageError("trials must be at least 1");
  std::vector<ReturnCounts> parts(kChunks);
  for_each_chunk(trials, kChunks, options.workers,
                 [&](std::size_t chunk, std::size_t lo, std::size_t hi) {
                   parts[chunk] = count_returns(n_max, d, p, seed, lo, hi, options.mode);
                 });
  ReturnCounts total;
  for (const auto& part : parts) {
    if (!part.hits.empty()) total.merge(part);
  }
  return finalize_estimates(d, p, seed, options.mode, total);
}

std::string to_string(PolicyKind policy) {
  switch (policy) {
    case PolicyKind::kGreedy:
      return "greedy";
    case PolicyKind::kNeverServe:
      return "never-serve";
    case PolicyKind::kRandomAdmissible:
      break;
  }
  return "random-admissible";
}

PolicyKind parse_policy(std::string_view text) {
  if (text == "greedy") return PolicyKind::kGreedy;
  if (text == "never-serve") return PolicyKind::kNeverServe;
  if (text == "random-admissible") return PolicyKind::kRandomAdmissible;
  throw UsageError("unknown policy '" + std::string(text) +
                   "' (expected greedy|never-serve|random-admissible)");
}

TrajectoryStats simulate_queue(const SystemParams& params, PolicyKind policy, std::int64_t horizon,
                               std::uint64_t seed, const SimulateOptions& options) {
  if (horizon < 1) throw UsageError("horizon T must be at least 1");
  const auto dim = static_cast<std::size_t>(params.d);
  QueueState state{options.initial.empty() ? IntVector(dim, 0) : options.initial, 0};
  if (state.q.size() != dim) throw UsageError("initial state has the wrong dimension");
  if (std::any_of(state.q.begin(), state.q.end(), [](std::int64_t c) { return c < 0; })) {
    throw UsageError("initial state must be nonnegative");
  }

  RandomStream arrivals_rng(seed, options.stream_index, kArrivalLane);
  RandomStream disturbance_rng(seed, options.stream_index, kDisturbanceLane);
  RandomStream policy_rng(seed, options.stream_index, kPolicyLane);
  const BernoulliSampler arrival(params.p);
  const BernoulliSampler disturbance(params.m_bar);

  TrajectoryStats stats;
  stats.horizon = horizon;
  stats.policy = policy;
  stats.seed = seed;
  stats.initial = state.q;
  stats.excess_digest = 0xCBF29CE484222325ull;

  const Decomposition start = decompose(state);
  auto record = [&](const Decomposition& parts) {
    for (auto c : parts.q_perp.components()) fnv_mix(stats.excess_digest, c);
    if (options.record_paths) {
      stats.excess_path.push_back(parts.q_perp);
      stats.q_par_path.push_back(parts.q_par);
    }
  };
  record(start);

  ArrivalVector a{std::vector<std::uint8_t>(dim)};
  double sum_min = 0.0, sum_par = 0.0, sum_rho = 0.0;
  for (std::int64_t t = 0; t < horizon; ++t) {
    sample_arrivals(arrival, arrivals_rng, a.a);
    ControlDecision control;
    control.m = disturbance(disturbance_rng) ? 1 : 0;
    const bool coin = policy_rng.bits(1) == 1;
    const std::uint8_t admissible = greedy_policy(state);
    if (!admissible) ++stats.blocked_slots;
    switch (policy) {
      case PolicyKind::kGreedy:
        control.v = admissible;
        break;
      case PolicyKind::kNeverServe:
        control.v = 0;
        break;
      case PolicyKind::kRandomAdmissible:
        control.v = (admissible && coin) ? 1 : 0;
        break;
    }
    if (control.v && control.m) ++stats.services;
    state = step(state, control, a);

    const Decomposition parts = decompose(state);
    record(parts);
    const std::int64_t low = *std::min_element(state.q.begin(), state.q.end());
    const std::int64_t high = *std::max_element(state.q.begin(), state.q.end());
    stats.max_backlog = std::max(stats.max_backlog, high);
    sum_min += static_cast<double>(low);
    sum_par += static_cast<double>(parts.q_par);
    double mean = 0.0;
    for (auto c : parts.q_perp.components()) mean += static_cast<double>(c);
    mean /= static_cast<double>(dim);
    double rho_t = 0.0;
    for (auto c : parts.q_perp.components()) rho_t += (static_cast<double>(c) - mean) * (static_cast<double>(c) - mean);
    sum_rho += rho_t;
    if (parts.q_perp.is_origin()) ++stats.origin_visits;
    if (parts.q_perp == start.q_perp) stats.return_times.push_back(t + 1);
  }
  const double steps = static_cast<double>(horizon);
  stats.mean_min_queue = sum_min / steps;
  stats.mean_q_par = sum_par / steps;
  stats.mean_excess_rho = sum_rho / steps;
  stats.final_state = state;
  return stats;
}

void VisitCounts::merge(const VisitCounts& other) {
  if (checkpoints.empty()) {
    checkpoints = other.checkpoints;
    totals.assign(other.totals.size(), 0);
  }
  if (checkpoints != other.checkpoints) throw UsageError("VisitCounts::merge: checkpoint mismatch");
  for (std::size_t i = 0; i < totals.size(); ++i) totals[i] += other.totals[i];
  per_trial_t.insert(per_trial_t.end(), other.per_trial_t.begin(), other.per_trial_t.end());
  per_trial_2t.insert(per_trial_2t.end(), other.per_trial_2t.begin(), other.per_trial_2t.end());
  trials += other.trials;
}

VisitCounts count_visits(int d, const Rational& p, std::int64_t horizon, std::uint64_t seed,
                         std::uint64_t trial_begin, std::uint64_t trial_end) {
  check_walk_params(d, p);
  if (horizon < 2) throw UsageError("visit_growth: T must be at least 2");
  VisitCounts counts;
  counts.checkpoints = {std::max<std::int64_t>(1, horizon / 8), std::max<std::int64_t>(1, horizon / 4),
                        horizon / 2, horizon, 2 * horizon};
  counts.totals.assign(counts.checkpoints.size(), 0);
  const BernoulliSampler sampler(p);
  const auto dim = static_cast<std::size_t>(d);
  IntVector x(dim);
  std::vector<std::uint8_t> a(dim);
  for (std::uint64_t trial = trial_begin; trial < trial_end; ++trial) {
    RandomStream stream(seed, trial, 0);
    std::fill(x.begin(), x.end(), 0);
    std::uint64_t visits = 0;
    std::size_t next_checkpoint = 0;
    for (std::int64_t t = 1; t <= 2 * horizon; ++t) {
      sample_arrivals(sampler, stream, a);
      excess_step_inplace(x, a);
      if (at_origin(x)) ++visits;
      while (next_checkpoint < counts.checkpoints.size() && counts.checkpoints[next_checkpoint] == t) {
        counts.totals[next_checkpoint] += visits;
        if (t == horizon) counts.per_trial_t.push_back(visits);
        if (t == 2 * horizon) counts.per_trial_2t.push_back(visits);
        ++next_checkpoint;
      }
    }
    ++counts.trials;
  }
  return counts;
}

VisitGrowthReport visit_growth(int d, const Rational& p, std::int64_t horizon, std::uint64_t trials,
                               std::uint64_t seed, unsigned workers) {
  check_walk_params(d, p);
  if (horizon < 2) throw UsageError("visit_growth: T must be at least 2");
  if (trials < 1) throw UsageError("trials must be at least 1");
  std::vector<VisitCounts> parts(kChunks);
  for_each_chunk(trials, kChunks, workers, [&](std::size_t chunk, std::size_t lo, std::size_t hi) {
    parts[chunk] = count_visits(d, p, horizon, seed, lo, hi);
  });
  VisitCounts total;
  for (const auto& part : parts) {
    if (part.trials > 0) total.merge(part);
  }
  VisitGrowthReport report;
  report.d = d;
  report.p = p;
  report.horizon = horizon;
  report.trials = trials;
  report.seed = seed;
  report.checkpoints = total.checkpoints;
  const double n = static_cast<double>(total.trials);
  for (auto v : total.totals) report.mean_visits.push_back(static_cast<double>(v) / n);
  report.visits_t = report.mean_visits[3];
  report.visits_2t = report.mean_visits[4];
  report.ratio = report.visits_t > 0 ? report.visits_2t / report.visits_t : 0.0;
  report.mean_increment = report.visits_2t - report.visits_t;
  report.per_trial_t = std::move(total.per_trial_t);
  report.per_trial_2t = std::move(total.per_trial_2t);
  if (d == 2) report.growth_ok = report.ratio >= 1.3;
  if (d >= 6) report.saturation_ok = report.mean_increment <= 1.0;
  return report;
}

}  // namespace syncq
