#include "syncq/io.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>

#include "json.hpp"
#include "syncq/error.hpp"

namespace syncq {
namespace {

using Json = nlohmann::ordered_json;

void write_preamble(std::ostream& out, const std::string& kind, const Provenance& prov) {
  out << "# syncq " << kind << " v" << kSchemaVersion << '\n';
  out << "# version: " << prov.version << '\n';
  out << "# config: " << prov.config_json << '\n';
  out << "# generated_at: " << prov.generated_at << '\n';
}

Json preamble_json(const std::string& kind, const Provenance& prov) {
  Json doc;
  doc["schema"] = "syncq." + kind + "/" + std::to_string(kSchemaVersion);
  doc["version"] = prov.version;
  doc["config"] = Json::parse(prov.config_json);
  doc["generated_at"] = prov.generated_at;
  return doc;
}

Json number_or_null(double value) {
  if (std::isfinite(value)) return value;
  return nullptr;
}

Json state_json(const ExcessState& x) { return Json(x.components()); }

Json series_curve_json(const SeriesReport& report) {
  Json curve;
  curve["d"] = report.d;
  curve["p"] = to_string(report.p);
  curve["n_max"] = report.n_max;
  curve["backend"] = to_string(report.backend);
  const bool exact = !report.exact_r.empty();
  Json rows = Json::array();
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto& row = report.rows[i];
    Json r;
    r["n"] = row.n;
    r["r"] = number_or_null(row.r);
    r["inv_r"] = number_or_null(row.inv_r);
    r["partial_sum"] = number_or_null(row.partial_sum);
    if (exact) {
      r["r_exact"] = to_string(report.exact_r[i]);
      r["inv_r_exact"] = to_string(Rational(1 / report.exact_r[i]));
      r["partial_sum_exact"] = to_string(report.exact_partial_sum[i]);
    }
    rows.push_back(std::move(r));
  }
  curve["rows"] = std::move(rows);
  if (report.slope) {
    Json fit;
    fit["slope"] = report.slope->slope;
    fit["intercept"] = report.slope->intercept;
    fit["residual_rms"] = report.slope->residual_rms;
    fit["n_lo"] = report.slope->n_lo;
    fit["n_hi"] = report.slope->n_hi;
    fit["points"] = report.slope->points;
    curve["slope"] = std::move(fit);
  } else {
    curve["slope"] = nullptr;
  }
  curve["classification"] = to_string(report.hint);
  return curve;
}

}  // namespace

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

void write_series_csv(std::ostream& out, const SeriesReport& report, const Provenance& prov) {
  write_preamble(out, "series", prov);
  out << "n,r,inv_r,partial_sum\n";
  for (const auto& row : report.rows) {
    out << row.n << ',' << format_double(row.r) << ',' << format_double(row.inv_r) << ','
        << format_double(row.partial_sum) << '\n';
  }
}

void write_series_set_csv(std::ostream& out, std::span<const SeriesReport> reports,
                          const Provenance& prov) {
  write_preamble(out, "series-set", prov);
  out << "d,n,r,inv_r,partial_sum\n";
  for (const auto& report : reports) {
    for (const auto& row : report.rows) {
      out << report.d << ',' << row.n << ',' << format_double(row.r) << ','
          << format_double(row.inv_r) << ',' << format_double(row.partial_sum) << '\n';
    }
  }
}

std::string series_json(std::span<const SeriesReport> reports, const Provenance& prov) {
  Json doc = preamble_json("series", prov);
  Json curves = Json::array();
  for (const auto& report : reports) curves.push_back(series_curve_json(report));
  doc["curves"] = std::move(curves);
  return doc.dump(2) + "\n";
}

std::string drift_json(const DriftReport& report, const StabilityCheck* stability,
                       const Provenance& prov) {
  Json doc = preamble_json("drift", prov);
  doc["radius"] = report.radius;
  doc["states_scanned"] = report.states_scanned;
  doc["rho0"] = to_string(report.rho0.value());
  doc["rho0_value"] = report.rho0.to_double();
  Json states = Json::array();
  for (const auto& x : report.exceptional) states.push_back(state_json(x));
  doc["exceptional_states"] = std::move(states);
  if (report.max_drift_beyond_rho0) {
    doc["max_drift_beyond_rho0"] = *report.max_drift_beyond_rho0;
    doc["margin"] = -*report.max_drift_beyond_rho0;
  } else {
    doc["max_drift_beyond_rho0"] = nullptr;
    doc["margin"] = nullptr;
  }
  Json checks;
  checks["sublevel_sets_finite"] = report.checks.sublevel_sets_finite;
  checks["drift_finite"] = report.checks.drift_finite;
  checks["negative_outside_exceptional"] = report.checks.negative_outside_exceptional;
  checks["max_abs_drift"] = report.checks.max_abs_drift;
  checks["max_one_step_change"] = report.checks.max_one_step_change;
  doc["kendall_checks"] = std::move(checks);
  if (stability) {
    Json s;
    s["doubled_radius"] = stability->doubled.radius;
    s["doubled_states_scanned"] = stability->doubled.states_scanned;
    s["doubled_exceptional_count"] = stability->doubled.exceptional.size();
    s["stable"] = stability->stable;
    doc["stability"] = std::move(s);
  }
  return doc.dump(2) + "\n";
}

void write_drift_csv(std::ostream& out, const DriftReport& report, const Provenance& prov) {
  if (report.per_state.empty() && report.states_scanned > 0) {
    throw UsageError("per-state drift CSV needs a scan run with per-state output enabled");
  }
  write_preamble(out, "drift-states", prov);
  out << "x1,x2,x3,rho,delta_f\n";
  for (const auto& e : report.per_state) {
    out << e.x[0] << ',' << e.x[1] << ',' << e.x[2] << ',' << to_string(e.rho.value()) << ','
        << format_double(e.delta_f) << '\n';
  }
}

void write_estimate_csv(std::ostream& out, const RdEstimateReport& report, const Provenance& prov) {
  write_preamble(out, "estimate-return", prov);
  out << "n,hits,trials,estimate,std_error,ci_lo,ci_hi\n";
  for (const auto& row : report.rows) {
    out << row.n << ',' << row.hits << ',' << row.trials << ',' << format_double(row.estimate)
        << ',' << format_double(row.std_error) << ',' << format_double(row.ci_lo) << ','
        << format_double(row.ci_hi) << '\n';
  }
}

std::string estimate_json(const RdEstimateReport& report, const Provenance& prov) {
  Json doc = preamble_json("estimate-return", prov);
  doc["d"] = report.d;
  doc["p"] = to_string(report.p);
  doc["n_max"] = report.n_max;
  doc["trials"] = report.trials;
  doc["seed"] = report.seed;
  doc["mode"] = to_string(report.mode);
  Json rows = Json::array();
  for (const auto& row : report.rows) {
    Json r;
    r["n"] = row.n;
    r["hits"] = row.hits;
    r["trials"] = row.trials;
    r["estimate"] = row.estimate;
    r["std_error"] = row.std_error;
    r["ci_lo"] = row.ci_lo;
    r["ci_hi"] = row.ci_hi;
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

namespace {

std::vector<std::pair<std::string, std::string>> trajectory_fields(const TrajectoryStats& s) {
  auto join = [](const IntVector& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + std::to_string(v[i]);
    return out;
  };
  char digest[20];
  std::snprintf(digest, sizeof digest, "%016llx", static_cast<unsigned long long>(s.excess_digest));
  return {
      {"horizon", std::to_string(s.horizon)},
      {"policy", to_string(s.policy)},
      {"seed", std::to_string(s.seed)},
      {"initial", join(s.initial)},
      {"origin_visits", std::to_string(s.origin_visits)},
      {"returns_to_start", std::to_string(s.return_times.size())},
      {"max_backlog", std::to_string(s.max_backlog)},
      {"mean_min_queue", format_double(s.mean_min_queue)},
      {"mean_q_par", format_double(s.mean_q_par)},
      {"mean_excess_rho", format_double(s.mean_excess_rho)},
      {"services", std::to_string(s.services)},
      {"blocked_slots", std::to_string(s.blocked_slots)},
      {"final_state", join(s.final_state.q)},
      {"excess_digest", digest},
  };
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const TrajectoryStats& stats, const Provenance& prov) {
  write_preamble(out, "simulate", prov);
  out << "key,value\n";
  for (const auto& [key, value] : trajectory_fields(stats)) out << key << ',' << value << '\n';
}

std::string trajectory_json(const TrajectoryStats& stats, const Provenance& prov) {
  Json doc = preamble_json("simulate", prov);
  doc["horizon"] = stats.horizon;
  doc["policy"] = to_string(stats.policy);
  doc["seed"] = stats.seed;
  doc["initial"] = stats.initial;
  doc["origin_visits"] = stats.origin_visits;
  doc["return_times"] = stats.return_times;
  doc["max_backlog"] = stats.max_backlog;
  doc["mean_min_queue"] = stats.mean_min_queue;
  doc["mean_q_par"] = stats.mean_q_par;
  doc["mean_excess_rho"] = stats.mean_excess_rho;
  doc["services"] = stats.services;
  doc["blocked_slots"] = stats.blocked_slots;
  doc["final_state"] = stats.final_state.q;
  char digest[20];
  std::snprintf(digest, sizeof digest, "%016llx",
                static_cast<unsigned long long>(stats.excess_digest));
  doc["excess_digest"] = digest;
  return doc.dump(2) + "\n";
}

void write_visit_growth_csv(std::ostream& out, const VisitGrowthReport& report,
                            const Provenance& prov) {
  write_preamble(out, "visit-growth", prov);
  out << "t,mean_visits\n";
  for (std::size_t i = 0; i < report.checkpoints.size(); ++i) {
    out << report.checkpoints[i] << ',' << format_double(report.mean_visits[i]) << '\n';
  }
}

std::string visit_growth_json(const VisitGrowthReport& report, const Provenance& prov) {
  Json doc = preamble_json("visit-growth", prov);
  doc["d"] = report.d;
  doc["p"] = to_string(report.p);
  doc["horizon"] = report.horizon;
  doc["trials"] = report.trials;
  doc["seed"] = report.seed;
  doc["checkpoints"] = report.checkpoints;
  doc["mean_visits"] = report.mean_visits;
  doc["visits_t"] = report.visits_t;
  doc["visits_2t"] = report.visits_2t;
  doc["ratio"] = report.ratio;
  doc["mean_increment"] = report.mean_increment;
  doc["growth_ok"] = report.growth_ok ? Json(*report.growth_ok) : Json(nullptr);
  doc["saturation_ok"] = report.saturation_ok ? Json(*report.saturation_ok) : Json(nullptr);
  doc["per_trial_t"] = report.per_trial_t;
  doc["per_trial_2t"] = report.per_trial_2t;
  return doc.dump(2) + "\n";
}

}  // namespace syncq
