#pragma once

#include <cstdint>
#include <string>

#include "syncq/rational.hpp"

namespace syncq::cli {

enum class Command { kSeries, kDriftScan, kSimulate, kEstimateReturn, kVisitGrowth };

std::string to_string(Command command);
Command parse_command(std::string_view text);

// Everything needed to reproduce one run. Serialized verbatim into every
// output file; `replay` rebuilds it from there.
struct RunConfig {
  Command command = Command::kSeries;
  int d = 2;
  std::string p = "1/2";
  std::string mbar = "1";
  std::int64_t n_max = 40;
  std::uint64_t trials = 10000;
  std::int64_t horizon = 10000;
  std::uint64_t seed = 1;
  double radius = 200.0;
  std::string backend = "exact";
  std::string format = "auto";  // csv, json, or auto (per command)
  std::string output = "-";
  unsigned workers = 1;
  bool fig2 = false;
  bool emit_per_state = false;
  std::string policy = "greedy";
  std::string mode = "independent";
  double exact_work_limit = 2e10;
  std::uint64_t max_states = 20'000'000;
};

/// Applies presets, canonicalizes rationals and checks every parameter
/// against the preconditions of the command. Throws UsageError.
void normalize_and_validate(RunConfig& config);

/// Compact JSON with a fixed key order.
std::string to_json(const RunConfig& config);
RunConfig from_json(std::string_view text);

}  // namespace syncq::cli
