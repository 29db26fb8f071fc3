#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "circirf/errors.hpp"
#include "circirf/spectral.hpp"

namespace circirf::cli {

enum class Command { Fit, Predict, Simulate, Verify };

struct ModelConfig {
  /// "spline-m1", "spline-m2", "brownian-bridge" or "custom".
  std::string kernel = "spline-m1";
  int kappa = 1;
  double nugget = 0.0;
  /// Empty means equispaced.
  std::vector<double> tau_points;
  /// Resolved spectrum; required in the config file only for "custom".
  std::optional<nlohmann::json> spectrum;
};

struct IoConfig {
  std::string input;
  std::string output;
  bool degrees = false;
  int grid_size = 512;
  int realizations = 100;
  /// Which realization to read when the input CSV carries realization_index.
  int realization = 0;
  std::optional<std::vector<double>> prediction_points;
};

struct VerifyConfig {
  std::vector<std::string> suites = {"allowability", "psd", "primal_dual", "ordinary_universal", "bridge_moments",
                                     "stationarity"};
  int realizations = 20000;
  double tol_factor = 4.0;
  /// Test hook: flips the sign of one spectral coefficient before the PSD suite.
  bool inject_negative_gamma = false;
};

struct RunConfig {
  Command command = Command::Predict;
  ModelConfig model;
  IoConfig io;
  VerifyConfig verify;
  std::uint64_t seed = 0;
};

std::string command_name(Command c);

nlohmann::json to_json(const RunConfig& config);
RunConfig config_from_json(const nlohmann::json& j);

/// Parses "spline-m1", "list:g1,g2,...", "power:a,p[,n_max]" and friends.
SpectralModel spectrum_from_json(const nlohmann::json& j);
nlohmann::json spectrum_to_json(const SpectralModel& model);

/// Runs the command line `args` (without the program name). Diagnostics go to
/// `err`, short progress lines to `out`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInput = 3;
inline constexpr int kExitModel = 4;

}  // namespace circirf::cli
