#include "run_config.hpp"

#include <cmath>

#include "json.hpp"
#include "syncq/error.hpp"
#include "syncq/monte_carlo.hpp"
#include "syncq/queue_model.hpp"
#include "syncq/series.hpp"

namespace syncq::cli {

using nlohmann::ordered_json;

namespace {

struct CommandName {
  Command command;
  const char* name;
};

constexpr CommandName kCommands[] = {
    {Command::kSeries, "series"},
    {Command::kDriftScan, "drift-scan"},
    {Command::kSimulate, "simulate"},
    {Command::kEstimateReturn, "estimate-return"},
    {Command::kVisitGrowth, "visit-growth"},
};

std::string canonical_rational(const std::string& text, const char* flag) {
  try {
    return syncq::to_string(parse_rational(text));
  } catch (const UsageError& e) {
    throw UsageError(std::string(flag) + ": " + e.what());
  }
}

void require(bool ok, const std::string& message) {
  if (!ok) throw UsageError(message);
}

void require_open_unit(const std::string& p) {
  const Rational value = parse_rational(p);
  require(value > 0 && value < 1, "--p must lie strictly between 0 and 1, got " + p);
}

}  // namespace

std::string to_string(Command command) {
  for (const auto& c : kCommands) {
    if (c.command == command) return c.name;
  }
  return "unknown";
}

Command parse_command(std::string_view text) {
  for (const auto& c : kCommands) {
    if (text == c.name) return c.command;
  }
  throw UsageError("unknown subcommand '" + std::string(text) + "'");
}

void normalize_and_validate(RunConfig& config) {
  config.p = canonical_rational(config.p, "--p");
  config.mbar = canonical_rational(config.mbar, "--mbar");
  if (config.format == "auto") {
    const bool json = config.command == Command::kDriftScan && !config.emit_per_state;
    config.format = json ? "json" : "csv";
  }
  require(config.format == "csv" || config.format == "json",
          "--format must be csv or json, got '" + config.format + "'");
  require(!config.output.empty(), "--output must not be empty");

  switch (config.command) {
    case Command::kSeries:
      if (config.fig2) {
        config.p = "1/2";
        config.n_max = 40;
        config.backend = "exact";
      } else {
        require(config.d >= 1, "--d must be at least 1 for series");
        require_open_unit(config.p);
      }
      require(config.n_max >= 0, "--n-max must be nonnegative");
      parse_backend(config.backend);
      require(config.exact_work_limit > 0, "--exact-work-limit must be positive");
      break;
    case Command::kDriftScan:
      require(config.d == 3, "drift-scan is defined for --d 3 only");
      require(config.p == "1/2", "drift-scan is defined for --p 1/2 only");
      require(std::isfinite(config.radius) && config.radius > 0, "--radius must be a positive number");
      if (config.emit_per_state) {
        require(config.format == "csv", "--emit-per-state writes CSV; drop --format json");
      } else {
        require(config.format == "json", "drift-scan writes JSON; add --emit-per-state for CSV");
      }
      require(config.max_states > 0, "--max-states must be positive");
      break;
    case Command::kSimulate:
      require(config.d >= 1, "--d must be at least 1");
      SystemParams::make(config.d, parse_rational(config.p), parse_rational(config.mbar));
      require(config.horizon >= 0, "--T must be nonnegative");
      parse_policy(config.policy);
      break;
    case Command::kEstimateReturn:
      require(config.d >= 2, "--d must be at least 2 for estimate-return");
      require_open_unit(config.p);
      require(config.n_max >= 0, "--n-max must be nonnegative");
      require(config.trials >= 1, "--trials must be at least 1");
      parse_return_mode(config.mode);
      break;
    case Command::kVisitGrowth:
      require(config.d >= 2, "--d must be at least 2 for visit-growth");
      require_open_unit(config.p);
      require(config.horizon >= 8, "--T must be at least 8 (checkpoints start at T/8)");
      require(config.trials >= 1, "--trials must be at least 1");
      break;
  }
}

std::string to_json(const RunConfig& config) {
  ordered_json j;
  j["command"] = to_string(config.command);
  j["d"] = config.d;
  j["p"] = config.p;
  j["mbar"] = config.mbar;
  j["n_max"] = config.n_max;
  j["trials"] = config.trials;
  j["T"] = config.horizon;
  j["seed"] = config.seed;
  j["radius"] = config.radius;
  j["backend"] = config.backend;
  j["format"] = config.format;
  j["output"] = config.output;
  j["workers"] = config.workers;
  j["fig2"] = config.fig2;
  j["emit_per_state"] = config.emit_per_state;
  j["policy"] = config.policy;
  j["mode"] = config.mode;
  j["exact_work_limit"] = config.exact_work_limit;
  j["max_states"] = config.max_states;
  return j.dump();
}

RunConfig from_json(std::string_view text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const ordered_json::exception& e) {
    throw UsageError(std::string("embedded config is not valid JSON: ") + e.what());
  }
  RunConfig c;
  try {
    c.command = parse_command(j.at("command").get<std::string>());
    c.d = j.at("d").get<int>();
    c.p = j.at("p").get<std::string>();
    c.mbar = j.at("mbar").get<std::string>();
    c.n_max = j.at("n_max").get<std::int64_t>();
    c.trials = j.at("trials").get<std::uint64_t>();
    c.horizon = j.at("T").get<std::int64_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.radius = j.at("radius").get<double>();
    c.backend = j.at("backend").get<std::string>();
    c.format = j.at("format").get<std::string>();
    c.output = j.at("output").get<std::string>();
    c.workers = j.at("workers").get<unsigned>();
    c.fig2 = j.at("fig2").get<bool>();
    c.emit_per_state = j.at("emit_per_state").get<bool>();
    c.policy = j.at("policy").get<std::string>();
    c.mode = j.at("mode").get<std::string>();
    c.exact_work_limit = j.at("exact_work_limit").get<double>();
    c.max_states = j.at("max_states").get<std::uint64_t>();
  } catch (const ordered_json::exception& e) {
    throw UsageError(std::string("embedded config is incomplete: ") + e.what());
  }
  return c;
}

}  // namespace syncq::cli
