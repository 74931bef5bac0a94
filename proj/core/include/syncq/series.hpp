#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "syncq/rational.hpp"

namespace syncq {

// Return-probability series of the excess process:
//   P_{n,k}^d = [C(n,k) p^k (1-p)^(n-k)]^d,   R_d(n) = sum_k P_{n,k}^d.

enum class Backend { kExact, kLog };

std::string to_string(Backend backend);
Backend parse_backend(std::string_view text);

/// Exact P_{n,k}^d. Throws UsageError unless 0 <= k <= n, d >= 1, 0 < p < 1.
ExactProb term(std::int64_t n, std::int64_t k, int d, const Rational& p);

/// Exact R_d(n), accumulated as an integer numerator over the common
/// denominator den(p)^(d n).
ExactProb rd_exact(std::int64_t n, int d, const Rational& p);

/// R_d(n) in the log domain. Binomials come from lgamma; the sum is shifted
/// by the largest term and walks outward from the row mode until terms fall
/// below e^-60 of the peak, which bounds the truncation error by n e^-60.
LogProb rd_log(std::int64_t n, int d, const Rational& p);

/// Least-squares fit of log R against log n.
struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_rms = 0.0;
  std::int64_t n_lo = 0;
  std::int64_t n_hi = 0;
  std::size_t points = 0;
};

enum class SeriesHint { kDivergingLike, kConvergingLike, kInconclusive };

std::string to_string(SeriesHint hint);

/// Slope above -0.95 reads as diverging-like, below -1.05 as converging-like;
/// the band in between is reported as inconclusive.
SeriesHint classify_slope(double slope);

/// Throws UsageError when fewer than two usable points are supplied.
SlopeFit fit_loglog(std::span<const std::int64_t> n, std::span<const double> log_r);

struct SeriesRow {
  std::int64_t n = 0;
  double r = 0.0;
  double log_r = 0.0;
  double inv_r = 0.0;
  double partial_sum = 0.0;
};

struct SeriesReport {
  int d = 0;
  Rational p;
  std::int64_t n_max = 0;
  Backend backend = Backend::kExact;
  std::vector<SeriesRow> rows;
  // Exact back-end only: R_d(n) and running sums as rationals.
  std::vector<Rational> exact_r;
  std::vector<Rational> exact_partial_sum;
  std::optional<SlopeFit> slope;
  SeriesHint hint = SeriesHint::kInconclusive;
};

struct SeriesOptions {
  // Fit window; negative values select [n_max / 2, n_max].
  std::int64_t window_lo = -1;
  std::int64_t window_hi = -1;
  unsigned workers = 1;
  // Guard for the exact back-end, in estimated bit operations.
  double exact_work_limit = 2e10;
};

/// Rough bit-operation count of an exact partial_sum up to n_max.
double exact_work_estimate(std::int64_t n_max, int d, const Rational& p);

/// R_d(n) for n = 0..n_max, running sums, and the tail slope fit.
/// Throws WorkLimitExceeded when the exact back-end would exceed its guard.
SeriesReport partial_sum(std::int64_t n_max, int d, const Rational& p, Backend backend,
                         const SeriesOptions& options = {});

/// sum_k P_{n,k}; exactly one for every n and p.
ExactProb row_normalization(std::int64_t n, const Rational& p);

/// Largest term of row n (d = 1) and the Stirling-type bound on it.
struct PeakInfo {
  std::int64_t n = 0;
  Rational p;
  double eps = 0.0;
  Rational interval_lo;  // n p - (1 - p)
  Rational interval_hi;  // n p + p
  std::int64_t k_hat = 0;  // leftmost argmax, located by scanning the row
  double log_peak = 0.0;
  double peak = 0.0;
  double stirling_bound = 0.0;  // (e^2 + eps) / (2 pi sqrt(n p (1-p)))
  bool in_interval = false;
  bool within_bound = false;
};

PeakInfo peak_info(std::int64_t n, const Rational& p, double eps);

/// Forward scan of the Stirling bound over n = 1..n_max. `n_first` is the
/// smallest n from which the bound holds for every scanned row; `n_recorded`
/// applies the 2x safety margin.
struct StirlingScan {
  Rational p;
  double eps = 0.0;
  std::int64_t n_max = 0;
  std::optional<std::int64_t> n_first;
  std::optional<std::int64_t> n_recorded;
  std::size_t interval_violations = 0;
  std::size_t bound_violations_after_recorded = 0;
  double max_ratio_after_recorded = 0.0;  // max peak / bound for n >= n_recorded
};

StirlingScan stirling_scan(const Rational& p, double eps, std::int64_t n_max);

/// Harmonic lower bound for d = 2: R_2(n) >= 1/(n+1) for every n.
struct LowerBoundReport {
  std::int64_t n_max = 0;
  Rational p;
  Rational harmonic_sum;  // sum_{n<=n_max} 1/(n+1)
  Rational series_sum;    // sum_{n<=n_max} R_2(n)
  std::vector<std::int64_t> violations;
  bool holds() const { return violations.empty() && series_sum >= harmonic_sum; }
};

LowerBoundReport d2_lower_bound(std::int64_t n_max, const Rational& p = Rational(1, 2));

/// d^{-1/2} (2 / (pi n))^{(d-1)/2}: the central-limit estimate of R_d(n) at p = 1/2.
double clt_approx(std::int64_t n, int d);

struct SymmetryReport {
  std::int64_t n = 0;
  int d = 0;
  Rational p;
  Rational h;
  bool symmetric = false;          // R(p) == R(1-p)
  Rational central_difference;     // R(1/2+h) - R(1/2-h)
  Rational second_difference;      // R(1/2+h) - 2 R(1/2) + R(1/2-h)
  bool degenerate = false;         // n == 0: R is identically one
  bool stationary_at_half() const { return central_difference == 0; }
  bool convex_at_half() const { return second_difference > 0; }
};

/// Throws UsageError unless 0 < p-h, p+h < 1 and 0 < 1/2-h.
SymmetryReport symmetry_and_convexity_check(std::int64_t n, int d, const Rational& p,
                                            const Rational& h);

/// Interior local extrema of p -> R_d(n; p) on a uniform grid of (0,1).
std::vector<double> rd_grid_extrema(std::int64_t n, int d, std::size_t grid_points);

struct Lemma1Report {
  std::size_t length = 0;
  int d = 0;
  Rational sum_pow_d;       // sum x_i^d
  Rational max_pow_dm1;     // max_i x_i^(d-1)
  Rational sum_sq;          // sum x_i^2
  Rational length_mean_sq;  // n * mean^2
  std::optional<bool> power_bound_holds;  // evaluated for d >= 4 only
  bool mean_bound_holds = false;
};

/// Throws UsageError when x is empty, has a negative entry, or does not sum
/// to exactly one.
Lemma1Report lemma1_check(std::span<const Rational> x, int d);

struct Lemma1RealReport {
  std::size_t length = 0;
  int d = 0;
  double sum_pow_d = 0.0;
  double max_pow_dm1 = 0.0;
  double sum_sq = 0.0;
  double length_mean_sq = 0.0;
  std::optional<bool> power_bound_holds;
  bool mean_bound_holds = false;
};

/// Floating-point variant: the sum must be one within `tolerance`, and both
/// inequalities are checked with the same relative slack.
Lemma1RealReport lemma1_check(std::span<const double> x, int d, double tolerance = 1e-12);

}  // namespace syncq
