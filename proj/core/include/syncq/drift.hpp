#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "syncq/quotient_walk.hpp"
#include "syncq/rational.hpp"

namespace syncq {

// Kendall non-transience machinery for d = 3 at p = 1/2.
//
// Geometry: classes of Z^3/<1> are identified with their projection onto the
// plane orthogonal to 1. rho is the squared Euclidean distance of that
// projection from the origin, so a single arrival (or a pair, which equals a
// single departure) moves a state by kLatticeStep = sqrt(2/3). Angles are
// measured from the projected (1,0,0) axis; the projected unit vectors sit at
// 0, 120 and 240 degrees.

/// Squared distance to the main diagonal, q'q - (q'1)^2 / 3, held exactly as
/// an integer number of thirds.
class Rho {
 public:
  constexpr Rho() = default;
  static constexpr Rho from_thirds(std::int64_t thirds) { return Rho(thirds); }

  std::int64_t thirds() const { return thirds_; }
  Rational value() const {
    Rational v(thirds_, 3);
    v.canonicalize();
    return v;
  }
  double to_double() const { return static_cast<double>(thirds_) / 3.0; }

  friend constexpr auto operator<=>(const Rho&, const Rho&) = default;

 private:
  constexpr explicit Rho(std::int64_t thirds) : thirds_(thirds) {}
  std::int64_t thirds_ = 0;
};

/// Throws UsageError unless q has three components.
Rho rho(std::span<const std::int64_t> q);

/// f = ln ln(e + rho).
double lyapunov(Rho r);
double lyapunov(std::span<const std::int64_t> q);

/// f(to) - f(from), evaluated through log1p so that small differences at
/// large rho keep full relative precision.
double lyapunov_difference(Rho from, Rho to);

/// Expected one-step change of f along the excess process at p = 1/2:
/// (1/8) sum over a in {0,1}^3 of f(canonicalize(x + a)) - f(x).
double delta_f(const ExcessState& x);

inline constexpr double kLatticeStep = 0.81649658092772603273;  // sqrt(2/3)

struct PolarCoords {
  double r = 0.0;
  double phi = 0.0;  // radians, in (-pi, pi]
};

PolarCoords polar_coords(const ExcessState& x);

/// Six-term polar form of the drift at radius r and angle phi for moves of
/// length `step`: -(3/4) F(r^2) + (1/8) sum_m F(r^2 + s^2 - 2 r s cos(phi + m 60deg)),
/// F(u) = ln ln(e + u). With step = kLatticeStep it reproduces delta_f exactly.
double polar_drift(double r, double phi, double step = 1.0);

/// Upper bound of polar_drift over phi (attained at phi = 30deg + z 60deg):
/// -(3/4) F(r^2) + (1/4) [F(r^2+s^2) + F(r^2+s^2-sqrt3 r s) + F(r^2+s^2+sqrt3 r s)].
/// The default step = 1 is the unit-step normalization. Throws for r <= 0.
double polar_drift_bound(double r, double step = 1.0);

/// Smallest grid radius from which polar_drift_bound stays negative up to r_max.
double polar_bound_negative_from(double step, double r_max, double dr);

/// Angle in degrees within [0, 60) maximizing polar_drift at radius r, found
/// on a uniform grid of `grid_points` angles over one 60 degree period.
double polar_argmax_degrees(double r, double step, std::size_t grid_points);

struct DriftEntry {
  ExcessState x;
  Rho rho;
  double delta_f = 0.0;
};

struct KendallChecks {
  bool sublevel_sets_finite = true;  // f grows without bound in rho
  bool drift_finite = true;          // every |delta_f| is finite and bounded by the largest one-step change
  bool negative_outside_exceptional = true;
  double max_abs_drift = 0.0;
  double max_one_step_change = 0.0;
};

struct DriftReport {
  double radius = 0.0;
  std::size_t states_scanned = 0;
  std::vector<ExcessState> exceptional;  // states with delta_f >= 0, lexicographic order
  Rho rho0;                              // max rho over the exceptional set
  std::optional<double> max_drift_beyond_rho0;
  KendallChecks checks;
  std::vector<DriftEntry> per_state;  // filled on request
};

struct DriftScanOptions {
  bool keep_per_state = false;
  unsigned workers = 1;
  std::size_t max_states = 20'000'000;
};

/// Approximate count of canonical states with rho <= radius^2.
double estimate_scan_states(double radius);

/// Evaluates delta_f on every canonical state with rho <= radius^2, in
/// lexicographic order. Throws WorkLimitExceeded past options.max_states.
DriftReport drift_scan(double radius, const DriftScanOptions& options = {});

/// Canonical states with f <= level, i.e. rho <= e^(e^level) - e.
std::size_t sublevel_count(double level);

struct StabilityCheck {
  DriftReport base;
  DriftReport doubled;
  bool stable = false;
};

/// Runs drift_scan at radius and 2 * radius and compares the exceptional sets.
StabilityCheck exceptional_set_stability(double radius, const DriftScanOptions& options = {});

/// Canonical states with rho <= radius^2 in lexicographic order.
std::vector<ExcessState> enumerate_canonical_d3(double radius);

}  // namespace syncq
