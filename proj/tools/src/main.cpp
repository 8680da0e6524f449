#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "slabcausal/errors.hpp"
#include "slabcausal_cli/runner.hpp"
#include "slabcausal_cli/scenario.hpp"

using namespace slabcausal;
using namespace slabcausal::cli;

namespace {

int load(const std::string& path, ScenarioConfig& cfg) {
  try {
    cfg = load_scenario(path);
    return kExitOk;
  } catch (const ValidationError& e) {
    std::cerr << "validation failed: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NumericalGuardError& e) {
    std::cerr << fmt::format("numerical guard '{}' tripped (value {:.6g}): {}\n", e.guard(), e.value(), e.what());
    return kExitNumericalGuard;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Causality analysis of transmission through dispersive slabs", "slabcausal"};
  app.require_subcommand(1);

  std::string run_file;
  std::string out_dir;
  bool literal = false;
  unsigned threads = 0;
  bool plots = false;
  auto* run = app.add_subcommand("run", "Run a scenario and write its artifacts");
  run->add_option("scenario", run_file, "Scenario file")->required();
  run->add_option("--out", out_dir, "Output directory (overrides the scenario)");
  run->add_flag("--literal-eq17", literal, "Use the verbatim textbook transmission formula");
  run->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  run->add_flag("--plots", plots, "Also render SVG plots");

  std::string validate_file;
  auto* validate = app.add_subcommand("validate", "Check a scenario file without computing");
  validate->add_option("scenario", validate_file, "Scenario file")->required();

  app.add_subcommand("version", "Print the version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  if (app.got_subcommand("version")) {
    std::cout << "slabcausal " << SLABCAUSAL_VERSION << "\n";
    return kExitOk;
  }

  ScenarioConfig cfg;
  if (validate->parsed()) {
    const int code = load(validate_file, cfg);
    if (code == kExitOk) std::cout << fmt::format("{}: ok\n", validate_file);
    return code;
  }

  if (const int code = load(run_file, cfg); code != kExitOk) return code;
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  if (literal) cfg.literal_eq17 = true;
  if (threads > 0) cfg.threads = threads;

  RunResult result = run_scenario(cfg);
  if (result.exit_code == kExitOk && plots) {
    try {
      for (const auto& name : emit_plots(cfg.output_dir)) result.artifacts.push_back(name);
    } catch (const ValidationError& e) {
      result.exit_code = kExitValidation;
      result.message = fmt::format("plotting failed: {}", e.what());
    }
  }
  (result.exit_code == kExitOk ? std::cout : std::cerr) << result.message << "\n";
  return result.exit_code;
}
