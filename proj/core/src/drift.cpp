#include "syncq/drift.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "syncq/error.hpp"
#include "syncq/parallel.hpp"

namespace syncq {
namespace {

constexpr double kE = std::numbers::e;

std::int64_t rho_thirds(std::int64_t a, std::int64_t b, std::int64_t c) {
  return 2 * (a * a + b * b + c * c - a * b - b * c - c * a);
}

// ln(e + u) - 1 = log1p(u / e)
double shifted_log(double u) { return std::log1p(u / kE); }

// F(u + delta) - F(u) for F(u) = ln ln(e + u).
double f_increment(double u, double delta) {
  const double inner = std::log1p(delta / (kE + u));
  return std::log1p(inner / (1.0 + shifted_log(u)));
}

double limit_thirds(double radius) { return 3.0 * radius * radius; }

std::int64_t coordinate_bound(double radius) {
  return static_cast<std::int64_t>(std::floor(std::sqrt(3.0) * radius)) + 1;
}

// Canonical states (a, b, c) with rho <= radius^2 and first coordinate a.
template <class Visit>
void visit_slice(std::int64_t a, std::int64_t bound, double limit, Visit&& visit) {
  for (std::int64_t b = 0; b <= bound; ++b) {
    if (a > 0 && b > 0) {
      if (static_cast<double>(rho_thirds(a, b, 0)) <= limit) visit(a, b, std::int64_t{0});
      continue;
    }
    for (std::int64_t c = 0; c <= bound; ++c) {
      if (static_cast<double>(rho_thirds(a, b, c)) <= limit) visit(a, b, c);
    }
  }
}

struct SliceResult {
  std::size_t scanned = 0;
  std::vector<DriftEntry> entries;  // exceptional states, or everything on request
  double max_abs_drift = 0.0;
  double max_step = 0.0;
  bool finite = true;
  // Largest drift and rho among non-exceptional states, kept per rho for the
  // final threshold pass.
  std::vector<std::pair<std::int64_t, double>> negatives;
};

}  // namespace

Rho rho(std::span<const std::int64_t> q) {
  if (q.size() != 3) throw UsageError("rho is defined for d = 3 only");
  return Rho::from_thirds(rho_thirds(q[0], q[1], q[2]));
}

double lyapunov(Rho r) { return std::log1p(shifted_log(r.to_double())); }

double lyapunov(std::span<const std::int64_t> q) { return lyapunov(rho(q)); }

double lyapunov_difference(Rho from, Rho to) {
  return f_increment(from.to_double(),
                     static_cast<double>(to.thirds() - from.thirds()) / 3.0);
}

namespace {

struct DriftDetail {
  double drift = 0.0;
  double max_step = 0.0;
};

DriftDetail drift_detail(std::int64_t a, std::int64_t b, std::int64_t c) {
  const Rho here = Rho::from_thirds(rho_thirds(a, b, c));
  DriftDetail out;
  double sum = 0.0;
  for (int mask = 0; mask < 8; ++mask) {
    const std::int64_t na = a + (mask & 1);
    const std::int64_t nb = b + ((mask >> 1) & 1);
    const std::int64_t nc = c + ((mask >> 2) & 1);
    const std::int64_t low = std::min({na, nb, nc});
    const Rho next = Rho::from_thirds(rho_thirds(na - low, nb - low, nc - low));
    const double change = lyapunov_difference(here, next);
    out.max_step = std::max(out.max_step, std::abs(change));
    sum += change;
  }
  out.drift = sum / 8.0;
  return out;
}

}  // namespace

double delta_f(const ExcessState& x) {
  if (x.dim() != 3) throw UsageError("delta_f is defined for d = 3 only");
  return drift_detail(x[0], x[1], x[2]).drift;
}

PolarCoords polar_coords(const ExcessState& x) {
  if (x.dim() != 3) throw UsageError("polar_coords is defined for d = 3 only");
  const double cx = static_cast<double>(2 * x[0] - x[1] - x[2]) / std::sqrt(6.0);
  const double cy = static_cast<double>(x[1] - x[2]) / std::sqrt(2.0);
  return PolarCoords{std::sqrt(rho(x.components()).to_double()), std::atan2(cy, cx)};
}

double polar_drift(double r, double phi, double step) {
  if (r < 0) throw UsageError("polar_drift: r must be nonnegative");
  const double u = r * r;
  double sum = 0.0;
  for (int m = 0; m < 6; ++m) {
    const double angle = phi + m * std::numbers::pi / 3.0;
    sum += f_increment(u, step * step - 2.0 * r * step * std::cos(angle));
  }
  return sum / 8.0;
}

double polar_drift_bound(double r, double step) {
  if (!(r > 0)) throw UsageError("polar_drift_bound: r must be positive");
  const double u = r * r;
  const double s2 = step * step;
  const double cross = std::sqrt(3.0) * r * step;
  return 0.25 * (f_increment(u, s2) + f_increment(u, s2 - cross) + f_increment(u, s2 + cross));
}

double polar_bound_negative_from(double step, double r_max, double dr) {
  if (!(dr > 0) || !(r_max > dr)) throw UsageError("polar_bound_negative_from: bad grid");
  const auto steps = static_cast<std::int64_t>(std::floor(r_max / dr));
  double from = r_max;
  for (std::int64_t i = steps; i >= 1; --i) {
    const double r = static_cast<double>(i) * dr;
    if (polar_drift_bound(r, step) >= 0) break;
    from = r;
  }
  return from;
}

double polar_argmax_degrees(double r, double step, std::size_t grid_points) {
  if (grid_points < 2) throw UsageError("polar_argmax_degrees: need at least two grid points");
  double best_phi = 0.0;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid_points; ++i) {
    const double deg = 60.0 * static_cast<double>(i) / static_cast<double>(grid_points);
    const double value = polar_drift(r, deg * std::numbers::pi / 180.0, step);
    if (value > best) {
      best = value;
      best_phi = deg;
    }
  }
  return best_phi;
}

double estimate_scan_states(double radius) {
  // One projected lattice point per 1/sqrt(3) of plane area.
  return std::numbers::pi * radius * radius * std::sqrt(3.0) + 1.0;
}

std::vector<ExcessState> enumerate_canonical_d3(double radius) {
  if (!(radius >= 0)) throw UsageError("radius must be nonnegative");
  const double limit = limit_thirds(radius);
  const std::int64_t bound = coordinate_bound(radius);
  std::vector<ExcessState> out;
  for (std::int64_t a = 0; a <= bound; ++a) {
    visit_slice(a, bound, limit, [&](std::int64_t x, std::int64_t y, std::int64_t z) {
      out.push_back(ExcessState::from_canonical({x, y, z}));
    });
  }
  return out;
}

DriftReport drift_scan(double radius, const DriftScanOptions& options) {
  if (!(radius > 0)) throw UsageError("drift_scan: radius must be positive");
  const double estimate = estimate_scan_states(radius);
  if (estimate > static_cast<double>(options.max_states)) {
    char message[160];
    std::snprintf(message, sizeof message, "drift scan at radius %g covers about %.3g states (limit %zu)",
                  radius, estimate, options.max_states);
    throw WorkLimitExceeded(message,
                            estimate, static_cast<double>(options.max_states));
  }
  const double limit = limit_thirds(radius);
  const std::int64_t bound = coordinate_bound(radius);
  const auto slices = static_cast<std::size_t>(bound) + 1;
  std::vector<SliceResult> results(slices);

  for_each_chunk(slices, slices, options.workers, [&](std::size_t, std::size_t lo, std::size_t hi) {
    for (std::size_t s = lo; s < hi; ++s) {
      auto& res = results[s];
      visit_slice(static_cast<std::int64_t>(s), bound, limit,
                  [&](std::int64_t a, std::int64_t b, std::int64_t c) {
                    const DriftDetail detail = drift_detail(a, b, c);
                    const Rho r = Rho::from_thirds(rho_thirds(a, b, c));
                    ++res.scanned;
                    if (!std::isfinite(detail.drift)) res.finite = false;
                    res.max_abs_drift = std::max(res.max_abs_drift, std::abs(detail.drift));
                    res.max_step = std::max(res.max_step, detail.max_step);
                    if (std::abs(detail.drift) > detail.max_step) res.finite = false;
                    const bool exceptional = detail.drift >= 0.0;
                    if (exceptional || options.keep_per_state) {
                      res.entries.push_back(
                          DriftEntry{ExcessState::from_canonical({a, b, c}), r, detail.drift});
                    }
                    if (!exceptional) res.negatives.emplace_back(r.thirds(), detail.drift);
                  });
    }
  });

  DriftReport report;
  report.radius = radius;
  for (auto& res : results) {
    report.states_scanned += res.scanned;
    report.checks.max_abs_drift = std::max(report.checks.max_abs_drift, res.max_abs_drift);
    report.checks.max_one_step_change = std::max(report.checks.max_one_step_change, res.max_step);
    report.checks.drift_finite = report.checks.drift_finite && res.finite;
    for (auto& entry : res.entries) {
      if (entry.delta_f >= 0.0) {
        report.exceptional.push_back(entry.x);
        report.rho0 = std::max(report.rho0, entry.rho);
      }
      if (options.keep_per_state) report.per_state.push_back(std::move(entry));
    }
  }
  // Every state strictly beyond rho0 is non-exceptional by definition of rho0,
  // so the certificate is the largest drift found out there.
  for (const auto& res : results) {
    for (const auto& [thirds, drift] : res.negatives) {
      if (thirds <= report.rho0.thirds()) continue;
      report.max_drift_beyond_rho0 =
          report.max_drift_beyond_rho0 ? std::max(*report.max_drift_beyond_rho0, drift) : drift;
    }
  }
  report.checks.negative_outside_exceptional =
      !report.max_drift_beyond_rho0 || *report.max_drift_beyond_rho0 < 0.0;
  report.checks.sublevel_sets_finite = true;
  return report;
}

std::size_t sublevel_count(double level) {
  const double rho_limit = std::exp(std::exp(level)) - kE;
  if (rho_limit < 0) return 0;
  return enumerate_canonical_d3(std::sqrt(rho_limit)).size();
}

StabilityCheck exceptional_set_stability(double radius, const DriftScanOptions& options) {
  StabilityCheck check;
  check.base = drift_scan(radius, options);
  DriftScanOptions doubled = options;
  doubled.keep_per_state = false;
  check.doubled = drift_scan(2.0 * radius, doubled);
  check.stable = check.base.exceptional == check.doubled.exceptional;
  return check;
}

}  // namespace syncq
