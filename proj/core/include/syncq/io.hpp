#pragma once

#include <ostream>
#include <span>
#include <string>

#include "syncq/drift.hpp"
#include "syncq/monte_carlo.hpp"
#include "syncq/series.hpp"

namespace syncq {

// File formats. Every CSV starts with '#' comment lines:
//   # syncq <kind> v<schema>
//   # version: <tool version>
//   # config: <compact JSON run configuration>
//   # generated_at: <UTC timestamp>
// followed by a header row and data rows. JSON documents carry the same
// information under "schema", "version", "config" and "generated_at"; the
// timestamp is the only field that changes between identical runs and sits
// on its own line in both formats.

inline constexpr int kSchemaVersion = 1;

struct Provenance {
  std::string version;
  std::string config_json = "{}";
  std::string generated_at;
};

/// Current UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_timestamp();

/// %.17g, with "inf"/"nan" spelled out.
std::string format_double(double value);

/// Columns n,r,inv_r,partial_sum.
void write_series_csv(std::ostream& out, const SeriesReport& report, const Provenance& prov);
/// Several curves in one file; columns d,n,r,inv_r,partial_sum.
void write_series_set_csv(std::ostream& out, std::span<const SeriesReport> reports,
                          const Provenance& prov);
std::string series_json(std::span<const SeriesReport> reports, const Provenance& prov);

/// Fields radius, rho0, exceptional_states, max_drift_beyond_rho0, plus the
/// Kendall checks and (when given) the radius-doubling stability verdict.
std::string drift_json(const DriftReport& report, const StabilityCheck* stability,
                       const Provenance& prov);
/// Columns x1,x2,x3,rho,delta_f; requires a report scanned with keep_per_state.
void write_drift_csv(std::ostream& out, const DriftReport& report, const Provenance& prov);

void write_estimate_csv(std::ostream& out, const RdEstimateReport& report, const Provenance& prov);
std::string estimate_json(const RdEstimateReport& report, const Provenance& prov);

void write_trajectory_csv(std::ostream& out, const TrajectoryStats& stats, const Provenance& prov);
std::string trajectory_json(const TrajectoryStats& stats, const Provenance& prov);

void write_visit_growth_csv(std::ostream& out, const VisitGrowthReport& report,
                            const Provenance& prov);
std::string visit_growth_json(const VisitGrowthReport& report, const Provenance& prov);

}  // namespace syncq
