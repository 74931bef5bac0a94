#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "syncq/error.hpp"
#include "syncq/io.hpp"
#include "syncq/version.hpp"

using namespace syncq;
using namespace syncq::cli;

namespace {

void write_document(const std::string& path, const std::string& document) {
  if (path == "-") {
    std::cout << document << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << document;
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void add_common(CLI::App* sub, RunConfig& c) {
  sub->add_option("--seed", c.seed, "RNG seed")->capture_default_str();
  sub->add_option("--format", c.format, "csv, json or auto")->capture_default_str();
  sub->add_option("--output,-o", c.output, "Output path, '-' for stdout")->capture_default_str();
  sub->add_option("--workers", c.workers, "Worker threads, 0 for all cores")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Return-probability, drift and simulation tools for synchronized queues"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  RunConfig c;

  auto* series = app.add_subcommand("series", "R_d(n), inverse values and partial sums");
  series->add_option("--d", c.d, "Number of queues")->capture_default_str();
  series->add_option("--p", c.p, "Arrival probability, e.g. 1/2 or 0.25")->capture_default_str();
  series->add_option("--n-max", c.n_max, "Largest n")->capture_default_str();
  series->add_option("--backend", c.backend, "exact or log")->capture_default_str();
  series->add_flag("--fig2", c.fig2, "Preset: d = 2..5, p = 1/2, n = 0..40, exact");
  series->add_option("--exact-work-limit", c.exact_work_limit, "Guard for the exact back-end")
      ->capture_default_str();
  add_common(series, c);

  auto* drift = app.add_subcommand("drift-scan", "Drift of ln ln(e + rho) for d = 3, p = 1/2");
  drift->add_option("--d", c.d, "Must be 3 (the default)");
  drift->add_option("--p", c.p, "Must be 1/2");
  drift->add_option("--radius", c.radius, "Scan states with rho <= radius^2")->capture_default_str();
  drift->add_flag("--emit-per-state", c.emit_per_state, "Write a CSV row per scanned state");
  drift->add_option("--max-states", c.max_states, "Guard on scanned states")->capture_default_str();
  add_common(drift, c);

  auto* simulate = app.add_subcommand("simulate", "Simulate the queue under a service policy");
  simulate->add_option("--d", c.d)->capture_default_str();
  simulate->add_option("--p", c.p)->capture_default_str();
  simulate->add_option("--mbar", c.mbar, "Service success probability")->capture_default_str();
  simulate->add_option("--T", c.horizon, "Horizon in slots")->capture_default_str();
  simulate->add_option("--policy", c.policy, "greedy, never-serve or random-admissible")->capture_default_str();
  add_common(simulate, c);

  auto* estimate = app.add_subcommand("estimate-return", "Monte Carlo estimate of R_d(n)");
  estimate->add_option("--d", c.d)->capture_default_str();
  estimate->add_option("--p", c.p)->capture_default_str();
  estimate->add_option("--n-max", c.n_max)->capture_default_str();
  estimate->add_option("--trials", c.trials)->capture_default_str();
  estimate->add_option("--mode", c.mode, "independent or single-path")->capture_default_str();
  add_common(estimate, c);

  auto* growth = app.add_subcommand("visit-growth", "Mean origin visits at T/8 .. 2T");
  growth->add_option("--d", c.d)->capture_default_str();
  growth->add_option("--p", c.p)->capture_default_str();
  growth->add_option("--T", c.horizon)->capture_default_str();
  growth->add_option("--trials", c.trials)->capture_default_str();
  add_common(growth, c);

  std::string replay_path;
  std::string replay_output = "-";
  auto* replay = app.add_subcommand("replay", "Re-run the configuration embedded in an output file");
  replay->add_option("file", replay_path, "CSV or JSON file written by syncq")->required();
  replay->add_option("--output,-o", replay_output, "Output path, '-' for stdout")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    std::string destination;
    if (replay->parsed()) {
      c = config_from_document(read_file(replay_path));
      destination = replay_output;
    } else {
      c.command = parse_command(app.get_subcommands().front()->get_name());
      if (drift->parsed() && drift->count("--d") == 0) c.d = 3;
      destination = c.output;
    }
    normalize_and_validate(c);
    const RunResult result = run(c, utc_timestamp(), std::cerr);
    write_document(destination, result.document);
    return result.exit_code;
  } catch (const WorkLimitExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitWorkLimit;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}
