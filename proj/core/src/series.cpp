#include "syncq/series.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "syncq/error.hpp"
#include "syncq/parallel.hpp"

namespace syncq {
namespace {

void check_p_open(const Rational& p) {
  if (p <= 0 || p >= 1) throw UsageError("p must lie strictly inside (0,1), got " + to_string(p));
}

void check_d(int d) {
  if (d < 1) throw UsageError("d must be at least 1, got " + std::to_string(d));
}

void check_n(std::int64_t n) {
  if (n < 0) throw UsageError("n must be nonnegative, got " + std::to_string(n));
}

unsigned long to_ulong(std::int64_t v) { return static_cast<unsigned long>(v); }

// Integer numerator of R_d(n) over den(p)^(d n).
Integer rd_numerator(std::int64_t n, int d, const Integer& a, const Integer& c) {
  std::vector<Integer> c_pow(static_cast<std::size_t>(n) + 1);
  c_pow[0] = 1;
  for (std::int64_t j = 1; j <= n; ++j) c_pow[j] = c_pow[j - 1] * c;

  Integer sum = 0;
  Integer binom = 1;  // C(n, k), advanced by the multiplicative row recurrence
  Integer a_pow = 1;
  Integer weighted, powered;
  for (std::int64_t k = 0; k <= n; ++k) {
    weighted = binom * a_pow * c_pow[n - k];
    mpz_pow_ui(powered.get_mpz_t(), weighted.get_mpz_t(), static_cast<unsigned long>(d));
    sum += powered;
    if (k < n) {
      binom *= to_ulong(n - k);
      mpz_divexact_ui(binom.get_mpz_t(), binom.get_mpz_t(), to_ulong(k + 1));
      a_pow *= a;
    }
  }
  return sum;
}

Integer rd_denominator(std::int64_t n, int d, const Integer& b) {
  Integer den;
  mpz_pow_ui(den.get_mpz_t(), b.get_mpz_t(), to_ulong(n) * static_cast<unsigned long>(d));
  return den;
}

double log_binomial(std::int64_t n, std::int64_t k) {
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

// Leftmost mode of Binomial(n, a/b): floor((n+1) a / b), clamped to n.
std::int64_t binomial_mode(std::int64_t n, const Rational& p) {
  Integer m = (Integer(n + 1) * p.get_num()) / p.get_den();
  return std::min<std::int64_t>(n, m.get_si());
}

}  // namespace

std::string to_string(Backend backend) { return backend == Backend::kExact ? "exact" : "log"; }

Backend parse_backend(std::string_view text) {
  if (text == "exact") return Backend::kExact;
  if (text == "log") return Backend::kLog;
  throw UsageError("unknown backend '" + std::string(text) + "' (expected exact|log)");
}

std::string to_string(SeriesHint hint) {
  switch (hint) {
    case SeriesHint::kDivergingLike:
      return "diverging-like";
    case SeriesHint::kConvergingLike:
      return "converging-like";
    case SeriesHint::kInconclusive:
      break;
  }
  return "inconclusive";
}

ExactProb term(std::int64_t n, std::int64_t k, int d, const Rational& p) {
  check_n(n);
  check_d(d);
  check_p_open(p);
  if (k < 0 || k > n) {
    throw UsageError("term: k=" + std::to_string(k) + " outside [0, n=" + std::to_string(n) + "]");
  }
  Integer binom;
  mpz_bin_uiui(binom.get_mpz_t(), to_ulong(n), to_ulong(k));
  Rational single(binom);
  Rational q = Rational(1) - p;
  Rational p_pow, q_pow;
  mpz_pow_ui(p_pow.get_num_mpz_t(), p.get_num_mpz_t(), to_ulong(k));
  mpz_pow_ui(p_pow.get_den_mpz_t(), p.get_den_mpz_t(), to_ulong(k));
  mpz_pow_ui(q_pow.get_num_mpz_t(), q.get_num_mpz_t(), to_ulong(n - k));
  mpz_pow_ui(q_pow.get_den_mpz_t(), q.get_den_mpz_t(), to_ulong(n - k));
  single *= p_pow * q_pow;
  Rational result;
  mpz_pow_ui(result.get_num_mpz_t(), single.get_num_mpz_t(), static_cast<unsigned long>(d));
  mpz_pow_ui(result.get_den_mpz_t(), single.get_den_mpz_t(), static_cast<unsigned long>(d));
  return ExactProb(result);
}

ExactProb rd_exact(std::int64_t n, int d, const Rational& p) {
  check_n(n);
  check_d(d);
  check_p_open(p);
  const Integer& a = p.get_num();
  const Integer& b = p.get_den();
  const Integer c = b - a;
  Rational value(rd_numerator(n, d, a, c), rd_denominator(n, d, b));
  value.canonicalize();
  return ExactProb(std::move(value));
}

LogProb rd_log(std::int64_t n, int d, const Rational& p) {
  check_n(n);
  check_d(d);
  check_p_open(p);
  if (n == 0) return LogProb::one();
  const double log_p = log_of(p);
  const double log_q = log_of(Rational(Rational(1) - p));
  const double dd = static_cast<double>(d);
  auto log_term = [&](std::int64_t k) {
    return dd * (log_binomial(n, k) + static_cast<double>(k) * log_p +
                 static_cast<double>(n - k) * log_q);
  };
  constexpr double kCutoff = -60.0;
  const std::int64_t mode = binomial_mode(n, p);
  const double peak = log_term(mode);
  double sum = 1.0;
  for (std::int64_t k = mode - 1; k >= 0; --k) {
    const double rel = log_term(k) - peak;
    if (rel < kCutoff) break;
    sum += std::exp(rel);
  }
  for (std::int64_t k = mode + 1; k <= n; ++k) {
    const double rel = log_term(k) - peak;
    if (rel < kCutoff) break;
    sum += std::exp(rel);
  }
  return LogProb::from_log(peak + std::log(sum));
}

SeriesHint classify_slope(double slope) {
  if (slope > -0.95) return SeriesHint::kDivergingLike;
  if (slope < -1.05) return SeriesHint::kConvergingLike;
  return SeriesHint::kInconclusive;
}

SlopeFit fit_loglog(std::span<const std::int64_t> n, std::span<const double> log_r) {
  if (n.size() != log_r.size()) throw UsageError("fit_loglog: size mismatch");
  std::vector<double> xs, ys;
  SlopeFit fit;
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (n[i] < 1 || !std::isfinite(log_r[i])) continue;
    xs.push_back(std::log(static_cast<double>(n[i])));
    ys.push_back(log_r[i]);
    fit.n_lo = xs.size() == 1 ? n[i] : std::min(fit.n_lo, n[i]);
    fit.n_hi = std::max(fit.n_hi, n[i]);
  }
  if (xs.size() < 2) throw UsageError("fit_loglog: need at least two points with n >= 1");
  const double count = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= count;
  my /= count;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0) throw UsageError("fit_loglog: degenerate window");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss += e * e;
  }
  fit.residual_rms = std::sqrt(ss / count);
  fit.points = xs.size();
  return fit;
}

double exact_work_estimate(std::int64_t n_max, int d, const Rational& p) {
  const double bits = std::max<double>(1.0, static_cast<double>(mpz_sizeinbase(p.get_den_mpz_t(), 2)));
  const double n = static_cast<double>(std::max<std::int64_t>(n_max, 0));
  return static_cast<double>(d) * bits * n * n * n / 3.0 + n;
}

SeriesReport partial_sum(std::int64_t n_max, int d, const Rational& p, Backend backend,
                         const SeriesOptions& options) {
  check_n(n_max);
  check_d(d);
  check_p_open(p);
  SeriesReport report;
  report.d = d;
  report.p = p;
  report.n_max = n_max;
  report.backend = backend;
  const auto count = static_cast<std::size_t>(n_max) + 1;
  report.rows.resize(count);

  if (backend == Backend::kExact) {
    const double work = exact_work_estimate(n_max, d, p);
    if (work > options.exact_work_limit) {
      char message[160];
      std::snprintf(message, sizeof message,
                    "exact back-end needs about %.3g bit operations (limit %.3g); "
                    "lower n_max, raise the limit or use the log back-end",
                    work, options.exact_work_limit);
      throw WorkLimitExceeded(message,
                              work, options.exact_work_limit);
    }
    report.exact_r.resize(count);
    for_each_chunk(count, count, options.workers, [&](std::size_t, std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) {
        report.exact_r[i] = rd_exact(static_cast<std::int64_t>(i), d, p).value();
      }
    });
    report.exact_partial_sum.resize(count);
    Rational running = 0;
    for (std::size_t i = 0; i < count; ++i) {
      running += report.exact_r[i];
      report.exact_partial_sum[i] = running;
      auto& row = report.rows[i];
      row.n = static_cast<std::int64_t>(i);
      row.r = to_double(report.exact_r[i]);
      row.log_r = log_of(report.exact_r[i]);
      row.inv_r = to_double(Rational(1 / report.exact_r[i]));
      row.partial_sum = to_double(running);
    }
  } else {
    for_each_chunk(count, std::min<std::size_t>(count, 64), options.workers,
                   [&](std::size_t, std::size_t lo, std::size_t hi) {
                     for (std::size_t i = lo; i < hi; ++i) {
                       const auto n = static_cast<std::int64_t>(i);
                       report.rows[i].n = n;
                       report.rows[i].log_r = rd_log(n, d, p).log();
                     }
                   });
    double running = 0.0;
    for (auto& row : report.rows) {
      row.r = std::exp(row.log_r);
      row.inv_r = std::exp(-row.log_r);
      running += row.r;
      row.partial_sum = running;
    }
  }

  const std::int64_t lo = options.window_lo >= 0 ? options.window_lo : n_max / 2;
  const std::int64_t hi = options.window_hi >= 0 ? std::min(options.window_hi, n_max) : n_max;
  std::vector<std::int64_t> ns;
  std::vector<double> logs;
  for (std::int64_t n = std::max<std::int64_t>(lo, 1); n <= hi; ++n) {
    ns.push_back(n);
    logs.push_back(report.rows[static_cast<std::size_t>(n)].log_r);
  }
  if (ns.size() >= 2) {
    report.slope = fit_loglog(ns, logs);
    report.hint = classify_slope(report.slope->slope);
  }
  return report;
}

ExactProb row_normalization(std::int64_t n, const Rational& p) {
  check_n(n);
  check_p_open(p);
  Rational sum = 0;
  for (std::int64_t k = 0; k <= n; ++k) sum += term(n, k, 1, p).value();
  return ExactProb(sum);
}

PeakInfo peak_info(std::int64_t n, const Rational& p, double eps) {
  if (n < 1) throw UsageError("peak_info: n must be at least 1");
  check_p_open(p);
  if (!(eps > 0)) throw UsageError("peak_info: eps must be positive");
  PeakInfo info;
  info.n = n;
  info.p = p;
  info.eps = eps;
  const Rational q = Rational(1) - p;
  info.interval_lo = Rational(n) * p - q;
  info.interval_hi = Rational(n) * p + p;

  // Walk right while P_{k+1} > P_k, i.e. (n-k) a > (k+1) (b-a).
  const Integer& a = p.get_num();
  const Integer c = p.get_den() - a;
  std::int64_t k = 0;
  Integer lhs, rhs;
  while (k < n) {
    lhs = Integer(n - k) * a;
    rhs = Integer(k + 1) * c;
    if (lhs <= rhs) break;
    ++k;
  }
  info.k_hat = k;
  info.in_interval = info.interval_lo <= k && Rational(k) <= info.interval_hi;
  info.log_peak = log_binomial(n, k) + static_cast<double>(k) * log_of(p) +
                  static_cast<double>(n - k) * log_of(q);
  info.peak = std::exp(info.log_peak);
  const double npq = static_cast<double>(n) * to_double(p) * to_double(q);
  info.stirling_bound =
      (std::exp(2.0) + eps) / (2.0 * std::numbers::pi) / std::sqrt(npq);
  info.within_bound = info.peak <= info.stirling_bound;
  return info;
}

StirlingScan stirling_scan(const Rational& p, double eps, std::int64_t n_max) {
  if (n_max < 1) throw UsageError("stirling_scan: n_max must be at least 1");
  StirlingScan scan;
  scan.p = p;
  scan.eps = eps;
  scan.n_max = n_max;
  std::vector<PeakInfo> infos;
  infos.reserve(static_cast<std::size_t>(n_max));
  for (std::int64_t n = 1; n <= n_max; ++n) {
    infos.push_back(peak_info(n, p, eps));
    if (!infos.back().in_interval) ++scan.interval_violations;
  }
  std::int64_t first = n_max + 1;
  for (std::int64_t n = n_max; n >= 1; --n) {
    if (!infos[static_cast<std::size_t>(n - 1)].within_bound) break;
    first = n;
  }
  if (first <= n_max) {
    scan.n_first = first;
    scan.n_recorded = std::min(n_max, 2 * first);
    for (std::int64_t n = *scan.n_recorded; n <= n_max; ++n) {
      const auto& info = infos[static_cast<std::size_t>(n - 1)];
      if (!info.within_bound) ++scan.bound_violations_after_recorded;
      scan.max_ratio_after_recorded =
          std::max(scan.max_ratio_after_recorded, info.peak / info.stirling_bound);
    }
  }
  return scan;
}

LowerBoundReport d2_lower_bound(std::int64_t n_max, const Rational& p) {
  check_n(n_max);
  check_p_open(p);
  LowerBoundReport report;
  report.n_max = n_max;
  report.p = p;
  report.harmonic_sum = 0;
  report.series_sum = 0;
  for (std::int64_t n = 0; n <= n_max; ++n) {
    const Rational bound(1, static_cast<unsigned long>(n + 1));
    // Each of the n+1 terms contributes (n+1)^-2.
    report.harmonic_sum += bound;
    const Rational r = rd_exact(n, 2, p).value();
    report.series_sum += r;
    if (r < bound) report.violations.push_back(n);
  }
  return report;
}

double clt_approx(std::int64_t n, int d) {
  if (n < 1) throw UsageError("clt_approx: n must be at least 1");
  check_d(d);
  const double dd = static_cast<double>(d);
  return std::pow(2.0 / (std::numbers::pi * static_cast<double>(n)), (dd - 1.0) / 2.0) /
         std::sqrt(dd);
}

SymmetryReport symmetry_and_convexity_check(std::int64_t n, int d, const Rational& p,
                                            const Rational& h) {
  check_n(n);
  check_d(d);
  const Rational half(1, 2);
  if (h <= 0) throw UsageError("symmetry check: h must be positive");
  if (p - h <= 0 || p + h >= 1) throw UsageError("symmetry check: need 0 < p-h and p+h < 1");
  if (half - h <= 0) throw UsageError("symmetry check: need h < 1/2");
  SymmetryReport report;
  report.n = n;
  report.d = d;
  report.p = p;
  report.h = h;
  report.degenerate = n == 0;
  report.symmetric =
      rd_exact(n, d, p).value() == rd_exact(n, d, Rational(Rational(1) - p)).value();
  const Rational up = rd_exact(n, d, Rational(half + h)).value();
  const Rational mid = rd_exact(n, d, half).value();
  const Rational down = rd_exact(n, d, Rational(half - h)).value();
  report.central_difference = up - down;
  report.second_difference = up - 2 * mid + down;
  return report;
}

std::vector<double> rd_grid_extrema(std::int64_t n, int d, std::size_t grid_points) {
  if (grid_points < 3) throw UsageError("rd_grid_extrema: need at least three grid points");
  std::vector<double> ps(grid_points), values(grid_points);
  for (std::size_t i = 0; i < grid_points; ++i) {
    const Rational p(static_cast<long>(i + 1), static_cast<unsigned long>(grid_points + 1));
    ps[i] = to_double(p);
    values[i] = rd_log(n, d, p).log();
  }
  std::vector<double> extrema;
  for (std::size_t i = 1; i + 1 < grid_points; ++i) {
    const bool is_min = values[i] < values[i - 1] && values[i] < values[i + 1];
    const bool is_max = values[i] > values[i - 1] && values[i] > values[i + 1];
    if (is_min || is_max) extrema.push_back(ps[i]);
  }
  return extrema;
}

Lemma1Report lemma1_check(std::span<const Rational> x, int d) {
  if (x.empty()) throw UsageError("lemma1_check: empty input");
  check_d(d);
  Rational total = 0;
  Rational largest = 0;
  for (const auto& v : x) {
    if (v < 0) throw UsageError("lemma1_check: negative entry " + to_string(v));
    total += v;
    if (v > largest) largest = v;
  }
  if (total != 1) throw UsageError("lemma1_check: entries sum to " + to_string(total) + ", not 1");
  Lemma1Report report;
  report.length = x.size();
  report.d = d;
  report.sum_pow_d = 0;
  report.sum_sq = 0;
  Rational powered;
  for (const auto& v : x) {
    mpz_pow_ui(powered.get_num_mpz_t(), v.get_num_mpz_t(), static_cast<unsigned long>(d));
    mpz_pow_ui(powered.get_den_mpz_t(), v.get_den_mpz_t(), static_cast<unsigned long>(d));
    report.sum_pow_d += powered;
    report.sum_sq += v * v;
  }
  mpz_pow_ui(report.max_pow_dm1.get_num_mpz_t(), largest.get_num_mpz_t(),
             static_cast<unsigned long>(d - 1));
  mpz_pow_ui(report.max_pow_dm1.get_den_mpz_t(), largest.get_den_mpz_t(),
             static_cast<unsigned long>(d - 1));
  const Rational mean = total / Rational(static_cast<long>(x.size()));
  report.length_mean_sq = Rational(static_cast<long>(x.size())) * mean * mean;
  if (d >= 4) report.power_bound_holds = report.sum_pow_d <= report.max_pow_dm1;
  report.mean_bound_holds = report.sum_sq >= report.length_mean_sq;
  return report;
}

Lemma1RealReport lemma1_check(std::span<const double> x, int d, double tolerance) {
  if (x.empty()) throw UsageError("lemma1_check: empty input");
  check_d(d);
  double total = 0, largest = 0;
  for (double v : x) {
    if (!(v >= 0)) throw UsageError("lemma1_check: negative or NaN entry");
    total += v;
    largest = std::max(largest, v);
  }
  if (std::abs(total - 1.0) > tolerance) {
    throw UsageError("lemma1_check: entries sum to " + std::to_string(total) + ", not 1");
  }
  Lemma1RealReport report;
  report.length = x.size();
  report.d = d;
  for (double v : x) {
    report.sum_pow_d += std::pow(v, d);
    report.sum_sq += v * v;
  }
  report.max_pow_dm1 = std::pow(largest, d - 1);
  const double mean = total / static_cast<double>(x.size());
  report.length_mean_sq = static_cast<double>(x.size()) * mean * mean;
  const double slack = 1.0 + 8.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(x.size());
  if (d >= 4) report.power_bound_holds = report.sum_pow_d <= report.max_pow_dm1 * slack;
  report.mean_bound_holds = report.sum_sq * slack >= report.length_mean_sq;
  return report;
}

}  // namespace syncq
