#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "slabcausal/dielectric.hpp"
#include "slabcausal/slab.hpp"
#include "slabcausal/timedomain.hpp"

namespace slabcausal::cli {

enum class Units { natural, si };

struct AnalysisToggles {
  bool spectrum = true;
  bool kk_check = false;
  bool sum_rule = false;
  bool kernel = false;
  bool scan = false;
  bool causality = false;
};

/// Fully resolved scenario in natural units (c = 1, omega_ref = 1). Every
/// "auto" field of the file has been replaced by its concrete value.
struct ScenarioConfig {
  int schema = 1;
  std::string name;
  Units units = Units::natural;
  /// omega_ref in rad/s; only meaningful for SI files.
  double reference_frequency = 1.0;

  SlabConfig slab;
  FrequencyGrid grid{1.0, 8};
  bool grid_auto = true;

  PulseSpec pulse;
  TimeGrid time_grid;
  bool time_grid_auto = true;
  std::size_t pad_factor = 4;

  std::size_t scan_resolution = 64;
  std::optional<ComplexRect> scan_region;

  AnalysisToggles analyses;
  std::filesystem::path output_dir;
  bool literal_eq17 = false;
  unsigned threads = 1;
};

/// Parses and validates a scenario. `default_name` is used when the file has
/// no `name`. Relative paths (tabulated tables, the
/// output directory) are resolved against `base_dir`. Throws ValidationError
/// on any missing, mistyped or out-of-range field.
ScenarioConfig parse_scenario(std::istream& in, const std::filesystem::path& base_dir = {},
                              const std::string& default_name = "scenario");
ScenarioConfig load_scenario(const std::filesystem::path& path);

std::string to_string(Units u);

}  // namespace slabcausal::cli
