#pragma once

#include "cli.hpp"

namespace circirf::cli {

struct VerifyOutcome {
  nlohmann::json report;
  bool passed = false;
};

/// Runs the invariant suites named in config.verify.suites.
VerifyOutcome run_verify(const RunConfig& config);

}  // namespace circirf::cli
