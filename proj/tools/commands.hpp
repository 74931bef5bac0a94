#pragma once

#include <ostream>
#include <string>

#include "run_config.hpp"

namespace syncq::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitUsage = 2,
  kExitWorkLimit = 3,
  kExitUnstable = 4,
};

struct RunResult {
  std::string document;
  int exit_code = kExitOk;
};

/// Runs a validated config. `generated_at` is stamped into the provenance;
/// `log` receives a short human-readable summary.
RunResult run(const RunConfig& config, const std::string& generated_at, std::ostream& log);

/// Extracts the embedded config from a CSV or JSON output document.
RunConfig config_from_document(const std::string& document);

}  // namespace syncq::cli
