// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "commands.hpp"
#include "json.hpp"
#include "oracles.hpp"
#include "syncq/drift.hpp"
#include "syncq/monte_carlo.hpp"
#include "syncq/random.hpp"
#include "syncq/series.hpp"

using namespace syncq;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* pattern, auto... args) {
  char buffer[512];
  std::snprintf(buffer, sizeof buffer, pattern, args...);
  return buffer;
}

Rational ratio(long num, long den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Rational random_probability(RandomStream& s, std::uint32_t max_den) {
  const auto den = 2 + s.uniform_below(max_den - 1);
  return ratio(static_cast<long>(1 + s.uniform_below(den - 1)), static_cast<long>(den));
}

unsigned all_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

Outcome ac1_brute_force() {
  std::size_t cases = 0, mismatches = 0;
  for (int d : {2, 3}) {
    for (int n = 0; n <= 8; ++n) {
      const auto counts = oracle::equal_increment_counts(n, d);
      for (const auto& p : {ratio(1, 2), ratio(1, 3)}) {
        ++cases;
        if (rd_exact(n, d, p).value() != oracle::weight_counts(counts, p)) ++mismatches;
      }
    }
  }
  return {mismatches == 0, fmt("%zu cases, %zu mismatches", cases, mismatches)};
}

Outcome ac2_closed_form() {
  std::size_t mismatches = 0;
  for (unsigned long n = 0; n <= 500; ++n) {
    if (rd_exact(static_cast<std::int64_t>(n), 2, ratio(1, 2)).value() != oracle::central_binomial_ratio(n)) {
      ++mismatches;
    }
  }
  cli::RunConfig config;
  config.command = cli::Command::kSeries;
  config.fig2 = true;
  config.format = "json";
  cli::normalize_and_validate(config);
  std::ostringstream log;
  const auto result = cli::run(config, "-", log);
  const auto doc = nlohmann::json::parse(result.document);
  Rational emitted;
  bool found = false;
  for (const auto& curve : doc["curves"]) {
    if (curve["d"] != 2) continue;
    emitted = parse_rational(curve["rows"][40]["inv_r_exact"].get<std::string>());
    found = curve["rows"][40]["n"] == 40;
  }
  Rational expected = 1 / oracle::central_binomial_ratio(40);
  expected.canonicalize();
  const bool fig2_ok = found && emitted == expected;
  return {mismatches == 0 && fig2_ok,
          fmt("n <= 500: %zu mismatches; fig2 inv_r(40) = %s (%.6f) %s", mismatches,
              to_string(emitted).c_str(), to_double(emitted), fig2_ok ? "exact" : "MISMATCH")};
}

Outcome ac3_normalization_symmetry() {
  RandomStream s(0xac3, 0);
  std::size_t failures = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = static_cast<std::int64_t>(s.uniform_below(101));
    const int d = 1 + static_cast<int>(s.uniform_below(5));
    const Rational p = random_probability(s, 100);
    const Rational q = Rational(1) - p;
    if (row_normalization(n, p).value() != 1) ++failures;
    if (rd_exact(n, d, p).value() != rd_exact(n, d, q).value()) ++failures;
  }
  return {failures == 0, fmt("200 random cases, %zu failures", failures)};
}

Outcome ac4_slopes() {
  SeriesOptions options;
  options.window_lo = 1000;
  options.window_hi = 2000;
  options.workers = all_workers();
  double slope[5] = {};
  SeriesHint hint[5] = {};
  for (int d : {2, 3, 4}) {
    const auto report = partial_sum(2000, d, ratio(1, 2), Backend::kLog, options);
    slope[d] = report.slope->slope;
    hint[d] = report.hint;
  }
  const bool d2 = std::abs(slope[2] + 0.5) <= 0.05 && hint[2] == SeriesHint::kDivergingLike;
  const bool d3_band = std::abs(slope[3] + 1.0) <= 0.05;
  const bool d3_class = hint[3] == SeriesHint::kDivergingLike ||
                        (hint[3] == SeriesHint::kInconclusive && std::abs(slope[3] + 1.0) <= 0.02);
  const bool d4 = std::abs(slope[4] + 1.5) <= 0.1 && hint[4] == SeriesHint::kConvergingLike;
  return {d2 && d3_band && d3_class && d4,
          fmt("slopes d=2 %.5f (%s), d=3 %.5f (%s), d=4 %.5f (%s)", slope[2], to_string(hint[2]).c_str(),
              slope[3], to_string(hint[3]).c_str(), slope[4], to_string(hint[4]).c_str())};
}

Outcome ac5_clt() {
  bool ok = true;
  std::string detail;
  for (int d : {2, 3, 4}) {
    const double exact = rd_exact(2000, d, ratio(1, 2)).to_double();
    const double rel = exact / clt_approx(2000, d) - 1.0;
    ok = ok && std::abs(rel) <= 0.05;
    detail += fmt("%sd=%d rel %.2e", detail.empty() ? "" : ", ", d, rel);
  }
  return {ok, detail};
}

Outcome ac6_stirling() {
  bool ok = true;
  std::string detail;
  for (const auto& p : {ratio(1, 2), ratio(1, 3), ratio(1, 10)}) {
    const auto scan = stirling_scan(p, 0.01, 5000);
    ok = ok && scan.n_recorded && scan.interval_violations == 0 && scan.bound_violations_after_recorded == 0;
    detail += fmt("%sp=%s N=%lld max ratio %.3f", detail.empty() ? "" : ", ", to_string(p).c_str(),
                  static_cast<long long>(scan.n_recorded.value_or(-1)), scan.max_ratio_after_recorded);
  }
  return {ok, detail};
}

Outcome ac7_lemma1() {
  RandomStream s(0xac7, 0);
  std::size_t power_violations = 0, mean_violations = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto len = 1 + s.uniform_below(20);
    std::vector<Integer> weights(len);
    Integer total = 0;
    for (auto& w : weights) {
      // Include zeros so point masses and sparse vectors are exercised.
      w = static_cast<unsigned long>(s.uniform_below(4) == 0 ? 0 : 1 + s.uniform_below(1000));
      total += w;
    }
    if (total == 0) {
      weights[0] = 1;
      total = 1;
    }
    std::vector<Rational> x;
    for (const auto& w : weights) {
      x.emplace_back(w, total);
      x.back().canonicalize();
    }
    const int d = 4 + static_cast<int>(s.uniform_below(5));
    const auto report = lemma1_check(x, d);
    power_violations += !*report.power_bound_holds;
    mean_violations += !report.mean_bound_holds;
  }
  return {power_violations == 0 && mean_violations == 0,
          fmt("1000 vectors: %zu power-bound and %zu mean-bound violations", power_violations, mean_violations)};
}

Outcome ac8_lower_bound() {
  const auto bound = d2_lower_bound(200);
  const auto series = partial_sum(2000, 2, ratio(1, 2), Backend::kExact);
  std::int64_t first_above_4 = -1;
  for (std::size_t n = 0; n < series.exact_partial_sum.size(); ++n) {
    if (series.exact_partial_sum[n] > 4) {
      first_above_4 = static_cast<std::int64_t>(n);
      break;
    }
  }
  return {bound.holds() && first_above_4 >= 0,
          fmt("N=200: sum R_2 = %.6f >= H = %.6f; partial sum exceeds 4 at N = %lld, reaches %.4f at 2000",
              to_double(bound.series_sum), to_double(bound.harmonic_sum), static_cast<long long>(first_above_4),
              to_double(series.exact_partial_sum.back()))};
}

Outcome ac9_drift() {
  DriftScanOptions options;
  options.workers = all_workers();
  const auto check = exceptional_set_stability(200.0, options);
  const auto& base = check.base;
  const double origin = delta_f(ExcessState::origin(3));
  const double origin_expected = 0.75 * std::log(std::log(std::numbers::e + 2.0 / 3.0));
  const bool origin_ok = std::abs(origin - origin_expected) <= 1e-10;
  const bool in_set = !base.exceptional.empty() && base.exceptional.front().is_origin();
  const bool margin_ok = base.max_drift_beyond_rho0 && *base.max_drift_beyond_rho0 < 0 &&
                         check.doubled.max_drift_beyond_rho0 && *check.doubled.max_drift_beyond_rho0 < 0 &&
                         base.checks.negative_outside_exceptional && check.doubled.checks.negative_outside_exceptional;

  RandomStream s(0xac9, 0);
  double worst = 0.0;
  int sampled = 0;
  while (sampled < 1000) {
    const IntVector v{static_cast<std::int64_t>(s.uniform_below(400)),
                      static_cast<std::int64_t>(s.uniform_below(400)), 0};
    const auto x = canonicalize(v);
    if (x.is_origin() || rho(x.components()).to_double() > 200.0 * 200.0) continue;
    const auto pc = polar_coords(x);
    worst = std::max(worst, std::abs(polar_drift(pc.r, pc.phi, kLatticeStep) - delta_f(x)));
    ++sampled;
  }
  const bool polar_ok = worst <= 1e-10;
  return {check.stable && origin_ok && in_set && margin_ok && polar_ok,
          fmt("R=200: %zu states, R=400: %zu states, |F| = %zu, stable %s, rho0 = %s, origin drift %.15f "
              "(err %.1e), margin beyond rho0 %.3e, polar max err %.1e",
              base.states_scanned, check.doubled.states_scanned, base.exceptional.size(),
              check.stable ? "yes" : "no", to_string(base.rho0.value()).c_str(), origin,
              std::abs(origin - origin_expected), base.max_drift_beyond_rho0.value_or(NAN), worst)};
}

Outcome ac10_monte_carlo() {
  constexpr std::uint64_t kSeed = 20240610;
  bool ok = true;
  bool identical = true;
  double worst_z = 0.0;
  for (int d : {2, 3, 4}) {
    EstimateOptions parallel;
    parallel.workers = all_workers();
    const auto run = estimate_rd(10, d, ratio(1, 2), 1'000'000, kSeed, parallel);
    EstimateOptions serial;
    serial.workers = 1;
    const auto rerun = estimate_rd(10, d, ratio(1, 2), 1'000'000, kSeed, serial);
    for (std::size_t i = 0; i < run.rows.size(); ++i) identical = identical && run.rows[i].hits == rerun.rows[i].hits;
    for (std::int64_t n : {1, 5, 10}) {
      const auto& row = run.rows[static_cast<std::size_t>(n)];
      const double exact = rd_exact(n, d, ratio(1, 2)).to_double();
      const double z = std::abs(row.estimate - exact) / row.std_error;
      worst_z = std::max(worst_z, z);
      ok = ok && z <= 4.0;
    }
  }
  return {ok && identical, fmt("9 (n, d) cells, worst |z| = %.2f, reruns bit-identical: %s", worst_z,
                               identical ? "yes" : "no")};
}

Outcome ac11_visit_growth() {
  constexpr std::uint64_t kSeed = 11;
  const auto d2 = visit_growth(2, ratio(1, 2), 100000, 64, kSeed, all_workers());
  const auto d6 = visit_growth(6, ratio(1, 2), 100000, 64, kSeed, all_workers());
  std::string curves;
  for (int d : {3, 4, 5}) {
    const auto r = visit_growth(d, ratio(1, 2), 100000, 64, kSeed, all_workers());
    curves += fmt("; d=%d visits(T) %.2f ratio %.3f", d, r.visits_t, r.ratio);
  }
  return {d2.growth_ok.value_or(false) && d6.saturation_ok.value_or(false),
          fmt("d=2 ratio %.3f (>= 1.3), d=6 increment %.3f (<= 1)", d2.ratio, d6.mean_increment) + curves};
}

Outcome ac12_control_independence() {
  std::size_t mismatches = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const int d = 2 + static_cast<int>(seed % 4);
    const auto params = SystemParams::make(d, ratio(1, 3), ratio(1, 2));
    SimulateOptions options;
    options.record_paths = true;
    const auto greedy = simulate_queue(params, PolicyKind::kGreedy, 10000, seed, options);
    const auto never = simulate_queue(params, PolicyKind::kNeverServe, 10000, seed, options);
    if (greedy.excess_path != never.excess_path) ++mismatches;
  }
  return {mismatches == 0, fmt("50 seeds, T = 10^4, %zu differing excess paths", mismatches)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"AC1 brute-force oracle equivalence", ac1_brute_force},
      {"AC2 closed form d=2 and fig2 inverse values", ac2_closed_form},
      {"AC3 row normalization and p symmetry", ac3_normalization_symmetry},
      {"AC4 log-log slopes over [1000, 2000]", ac4_slopes},
      {"AC5 central-limit approximation at n=2000", ac5_clt},
      {"AC6 Stirling peak bound", ac6_stirling},
      {"AC7 power and mean inequalities", ac7_lemma1},
      {"AC8 d=2 harmonic lower bound", ac8_lower_bound},
      {"AC9 drift certification d=3", ac9_drift},
      {"AC10 Monte Carlo consistency", ac10_monte_carlo},
      {"AC11 visit growth diagnostics", ac11_visit_growth},
      {"AC12 control independence of the excess path", ac12_control_independence},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %s: %s (%.2f s)\n", outcome.pass ? "PASS" : "FAIL", name, outcome.detail.c_str(), seconds);
    std::fflush(stdout);
    failures += !outcome.pass;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
