#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "syncq/queue_model.hpp"
#include "syncq/quotient_walk.hpp"
#include "syncq/rational.hpp"

namespace syncq {

// Stream layout shared by every simulation in this module (see RandomStream):
//   estimate_rd, independent restarts:  index = trial, lane = n
//   estimate_rd, single path:           index = trial, lane = 0
//   visit_growth:                       index = trial, lane = 0
//   simulate_queue:                     index = options.stream_index,
//                                       lane 0 arrivals, 1 disturbances, 2 policy coin

enum class ReturnMode {
  kIndependent,  // a fresh n-step walk for every n: per-n estimates are independent
  kSinglePath,   // one n_max-step walk per trial: cheaper, estimates correlated across n
};

std::string to_string(ReturnMode mode);
ReturnMode parse_return_mode(std::string_view text);

/// Mergeable per-n return tallies.
struct ReturnCounts {
  std::vector<std::uint64_t> hits;  // index n = 0..n_max
  std::uint64_t trials = 0;

  void merge(const ReturnCounts& other);
  friend bool operator==(const ReturnCounts&, const ReturnCounts&) = default;
};

/// Tallies trials [trial_begin, trial_end).
ReturnCounts count_returns(std::int64_t n_max, int d, const Rational& p, std::uint64_t seed,
                           std::uint64_t trial_begin, std::uint64_t trial_end, ReturnMode mode);

struct RdEstimate {
  std::int64_t n = 0;
  std::uint64_t hits = 0;
  std::uint64_t trials = 0;
  double estimate = 0.0;
  double std_error = 0.0;  // sqrt(estimate (1 - estimate) / trials)
  double ci_lo = 0.0;      // estimate -/+ 4 std_error, clipped to [0, 1]
  double ci_hi = 0.0;
};

struct RdEstimateReport {
  int d = 0;
  Rational p;
  std::int64_t n_max = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  ReturnMode mode = ReturnMode::kIndependent;
  std::vector<RdEstimate> rows;
};

struct EstimateOptions {
  ReturnMode mode = ReturnMode::kIndependent;
  unsigned workers = 1;
};

/// Empirical return probabilities of the excess process started at the origin
/// class. Throws UsageError for trials < 1, n_max < 0, d < 2 or p outside (0,1).
RdEstimateReport estimate_rd(std::int64_t n_max, int d, const Rational& p, std::uint64_t trials,
                             std::uint64_t seed, const EstimateOptions& options = {});

RdEstimateReport finalize_estimates(int d, const Rational& p, std::uint64_t seed, ReturnMode mode,
                                    const ReturnCounts& counts);

enum class PolicyKind {
  kGreedy,            // serve whenever every queue is nonempty
  kNeverServe,
  kRandomAdmissible,  // serve with probability 1/2 when admissible
};

std::string to_string(PolicyKind policy);
PolicyKind parse_policy(std::string_view text);

struct SimulateOptions {
  IntVector initial;  // empty: start from the all-zero state
  bool record_paths = false;
  std::uint64_t stream_index = 0;
};

struct TrajectoryStats {
  std::int64_t horizon = 0;
  PolicyKind policy = PolicyKind::kGreedy;
  std::uint64_t seed = 0;
  IntVector initial;
  std::uint64_t origin_visits = 0;          // t in 1..T with q_perp at the origin class
  std::vector<std::int64_t> return_times;   // t in 1..T with q_perp_t == q_perp_0
  std::int64_t max_backlog = 0;             // max over t, i of q_t(i)
  double mean_min_queue = 0.0;              // time average over t = 1..T
  double mean_q_par = 0.0;                  // same quantity through decompose()
  double mean_excess_rho = 0.0;             // time average of |q_perp|^2 relative to the diagonal
  std::uint64_t services = 0;               // slots with v = m = 1
  std::uint64_t blocked_slots = 0;          // slots with some queue empty
  QueueState final_state;
  std::uint64_t excess_digest = 0;          // FNV-1a over the q_perp path
  std::vector<ExcessState> excess_path;     // t = 0..T, on request
  std::vector<std::int64_t> q_par_path;     // t = 0..T, on request
};

/// Simulates q_{t+1} = q_t - 1 m_t v_t + a_t for T slots. Arrivals and
/// disturbances are drawn every slot regardless of the policy, so two runs
/// with the same seed see identical streams.
TrajectoryStats simulate_queue(const SystemParams& params, PolicyKind policy, std::int64_t horizon,
                               std::uint64_t seed, const SimulateOptions& options = {});

/// Mergeable origin-visit tallies at fixed checkpoints.
struct VisitCounts {
  std::vector<std::int64_t> checkpoints;
  std::vector<std::uint64_t> totals;           // summed over trials, per checkpoint
  std::vector<std::uint64_t> per_trial_t;      // visits up to T, per trial (in trial order)
  std::vector<std::uint64_t> per_trial_2t;     // visits up to 2T
  std::uint64_t trials = 0;

  void merge(const VisitCounts& other);
  friend bool operator==(const VisitCounts&, const VisitCounts&) = default;
};

VisitCounts count_visits(int d, const Rational& p, std::int64_t horizon, std::uint64_t seed,
                         std::uint64_t trial_begin, std::uint64_t trial_end);

struct VisitGrowthReport {
  int d = 0;
  Rational p;
  std::int64_t horizon = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<std::int64_t> checkpoints;  // T/8, T/4, T/2, T, 2T
  std::vector<double> mean_visits;
  double visits_t = 0.0;
  double visits_2t = 0.0;
  double ratio = 0.0;           // visits_2t / visits_t
  double mean_increment = 0.0;  // visits in (T, 2T]
  std::vector<std::uint64_t> per_trial_t;
  std::vector<std::uint64_t> per_trial_2t;
  // Verdicts exist only where the diagnostic is decisive at desk scale.
  std::optional<bool> growth_ok;      // d = 2: ratio >= 1.3
  std::optional<bool> saturation_ok;  // d >= 6: mean_increment <= 1
};

VisitGrowthReport visit_growth(int d, const Rational& p, std::int64_t horizon, std::uint64_t trials,
                               std::uint64_t seed, unsigned workers = 1);

}  // namespace syncq
