#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "slabcausal_cli/scenario.hpp"

namespace slabcausal::cli {

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitValidation = 2, kExitNumericalGuard = 3 };

struct RunResult {
  int exit_code = kExitOk;
  std::string message;
  /// Artifact file names written into the output directory, in write order.
  std::vector<std::string> artifacts;
};

/// Runs every enabled analysis and writes artifacts plus report.json into
/// config.output_dir. Errors are mapped to exit codes, not rethrown.
RunResult run_scenario(const ScenarioConfig& config);

/// Renders SVG plots from the artifacts present in `dir` and returns the
/// file names written. Throws ValidationError if no plottable artifact exists.
std::vector<std::string> emit_plots(const std::filesystem::path& dir);

}  // namespace slabcausal::cli
