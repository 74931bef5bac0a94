#include "commands.hpp"

#include <sstream>
#include <vector>

#include "json.hpp"
#include "syncq/drift.hpp"
#include "syncq/error.hpp"
#include "syncq/io.hpp"
#include "syncq/monte_carlo.hpp"
#include "syncq/queue_model.hpp"
#include "syncq/series.hpp"
#include "syncq/version.hpp"

namespace syncq::cli {
namespace {

RunResult run_series(const RunConfig& c, const Provenance& prov, std::ostream& log) {
  SeriesOptions options;
  options.workers = c.workers;
  options.exact_work_limit = c.exact_work_limit;
  const Backend backend = parse_backend(c.backend);
  const Rational p = parse_rational(c.p);

  std::vector<SeriesReport> reports;
  if (c.fig2) {
    for (int d : {2, 3, 4, 5}) reports.push_back(partial_sum(c.n_max, d, p, backend, options));
  } else {
    reports.push_back(partial_sum(c.n_max, c.d, p, backend, options));
  }
  for (const auto& r : reports) {
    log << "d=" << r.d << " R(" << r.n_max << ")=" << format_double(r.rows.back().r);
    if (r.slope) log << " slope=" << format_double(r.slope->slope) << " (" << syncq::to_string(r.hint) << ")";
    log << '\n';
  }

  std::ostringstream out;
  if (c.format == "json") {
    out << series_json(reports, prov) << '\n';
  } else if (c.fig2) {
    write_series_set_csv(out, reports, prov);
  } else {
    write_series_csv(out, reports.front(), prov);
  }
  return {out.str(), kExitOk};
}

RunResult run_drift_scan(const RunConfig& c, const Provenance& prov, std::ostream& log) {
  DriftScanOptions options;
  options.keep_per_state = c.emit_per_state;
  options.workers = c.workers;
  options.max_states = c.max_states;
  const StabilityCheck check = exceptional_set_stability(c.radius, options);
  const DriftReport& base = check.base;

  log << "states scanned: " << base.states_scanned << " (radius " << format_double(c.radius) << ")\n"
      << "exceptional states: " << base.exceptional.size() << ", rho0 = " << syncq::to_string(base.rho0.value())
      << '\n'
      << "stable under radius doubling: " << (check.stable ? "yes" : "no") << '\n';

  std::ostringstream out;
  if (c.emit_per_state) {
    write_drift_csv(out, base, prov);
  } else {
    out << drift_json(base, &check, prov) << '\n';
  }
  return {out.str(), check.stable ? kExitOk : kExitUnstable};
}

RunResult run_simulate(const RunConfig& c, const Provenance& prov, std::ostream& log) {
  const auto params = SystemParams::make(c.d, parse_rational(c.p), parse_rational(c.mbar));
  const auto stats = simulate_queue(params, parse_policy(c.policy), c.horizon, c.seed);
  log << "mean q_par = " << format_double(stats.mean_q_par) << ", origin visits = " << stats.origin_visits
      << '\n';
  std::ostringstream out;
  if (c.format == "json") {
    out << trajectory_json(stats, prov) << '\n';
  } else {
    write_trajectory_csv(out, stats, prov);
  }
  return {out.str(), kExitOk};
}

RunResult run_estimate_return(const RunConfig& c, const Provenance& prov, std::ostream& log) {
  EstimateOptions options;
  options.mode = parse_return_mode(c.mode);
  options.workers = c.workers;
  const auto report = estimate_rd(c.n_max, c.d, parse_rational(c.p), c.trials, c.seed, options);
  log << "estimated R(n) for n = 0.." << c.n_max << " from " << c.trials << " trials\n";
  std::ostringstream out;
  if (c.format == "json") {
    out << estimate_json(report, prov) << '\n';
  } else {
    write_estimate_csv(out, report, prov);
  }
  return {out.str(), kExitOk};
}

RunResult run_visit_growth(const RunConfig& c, const Provenance& prov, std::ostream& log) {
  const auto report = visit_growth(c.d, parse_rational(c.p), c.horizon, c.trials, c.seed, c.workers);
  log << "visits(T) = " << format_double(report.visits_t) << ", visits(2T) = " << format_double(report.visits_2t)
      << ", ratio = " << format_double(report.ratio) << '\n';
  if (report.growth_ok) log << "growth check: " << (*report.growth_ok ? "pass" : "fail") << '\n';
  if (report.saturation_ok) log << "saturation check: " << (*report.saturation_ok ? "pass" : "fail") << '\n';
  std::ostringstream out;
  if (c.format == "json") {
    out << visit_growth_json(report, prov) << '\n';
  } else {
    write_visit_growth_csv(out, report, prov);
  }
  return {out.str(), kExitOk};
}

}  // namespace

RunResult run(const RunConfig& config, const std::string& generated_at, std::ostream& log) {
  const Provenance prov{kVersion, to_json(config), generated_at};
  switch (config.command) {
    case Command::kSeries:
      return run_series(config, prov, log);
    case Command::kDriftScan:
      return run_drift_scan(config, prov, log);
    case Command::kSimulate:
      return run_simulate(config, prov, log);
    case Command::kEstimateReturn:
      return run_estimate_return(config, prov, log);
    case Command::kVisitGrowth:
      return run_visit_growth(config, prov, log);
  }
  throw UsageError("unhandled subcommand");
}

RunConfig config_from_document(const std::string& document) {
  if (document.rfind("# syncq ", 0) == 0) {
    std::istringstream in(document);
    const std::string prefix = "# config: ";
    for (std::string line; std::getline(in, line) && line.rfind("#", 0) == 0;) {
      if (line.rfind(prefix, 0) == 0) return from_json(line.substr(prefix.size()));
    }
    throw UsageError("CSV file has no '# config:' line");
  }
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(document);
  } catch (const nlohmann::ordered_json::exception&) {
    throw UsageError("file is neither a syncq CSV nor JSON document");
  }
  if (!doc.contains("config")) throw UsageError("JSON document has no \"config\" key");
  return from_json(doc["config"].dump());
}

}  // namespace syncq::cli
