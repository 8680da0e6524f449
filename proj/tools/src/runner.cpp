#include "slabcausal_cli/runner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "json.hpp"
#include "slabcausal/analyticity.hpp"
#include "slabcausal/errors.hpp"
#include "slabcausal/export.hpp"

namespace slabcausal::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

class ArtifactWriter {
 public:
  explicit ArtifactWriter(fs::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec || !fs::is_directory(dir_)) {
      throw ValidationError(fmt::format("cannot create output directory '{}'", dir_.string()));
    }
  }

  template <class Fn>
  void write(const std::string& name, Fn&& fill) {
    std::ofstream out(dir_ / name, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError(fmt::format("cannot write '{}'", (dir_ / name).string()));
    fill(out);
    out.flush();
    if (!out) throw ValidationError(fmt::format("failed while writing '{}'", (dir_ / name).string()));
    names_.push_back(name);
  }

  void write_text(const std::string& name, const std::string& text) {
    write(name, [&](std::ostream& out) { out << text; });
  }

  const std::vector<std::string>& names() const { return names_; }

 private:
  fs::path dir_;
  std::vector<std::string> names_;
};

std::string model_type(const DielectricModel& m) {
  switch (m.kind()) {
    case ModelKind::vacuum:
      return "vacuum";
    case ModelKind::constant:
      return "constant";
    case ModelKind::oscillators:
      return "oscillators";
    case ModelKind::tabulated:
      return "tabulated";
  }
  return "vacuum";
}

ordered_json model_json(const DielectricModel& m, const UnitScale& u) {
  ordered_json j{{"type", model_type(m)}};
  if (const auto* c = std::get_if<ConstantMedium>(&m.variant())) j["epsilon"] = c->value;
  if (const auto* o = std::get_if<OscillatorMedium>(&m.variant())) {
    j["plasma_frequency"] = o->plasma_frequency * u.frequency;
    ordered_json res = ordered_json::array();
    for (const auto& r : o->resonances) {
      res.push_back({{"strength", r.strength}, {"frequency", r.frequency * u.frequency}, {"damping", r.damping * u.frequency}});
    }
    j["resonances"] = std::move(res);
  }
  if (const auto* t = std::get_if<TabulatedMedium>(&m.variant())) {
    j["samples"] = t->omega.size();
    j["omega_max"] = t->omega.back() * u.frequency;
  }
  return j;
}

ordered_json rect_json(const ComplexRect& r, double scale) {
  return {{"re_min", r.re_min * scale}, {"re_max", r.re_max * scale}, {"im_min", r.im_min * scale}, {"im_max", r.im_max * scale}};
}

ordered_json resolved_json(const ScenarioConfig& c, const UnitScale& u) {
  constexpr double kSpeedOfLight = 299792458.0;
  const double length_scale = c.units == Units::si ? kSpeedOfLight / c.reference_frequency : 1.0;
  ordered_json j;
  j["units"] = to_string(c.units);
  j["reference_frequency"] = c.reference_frequency;
  j["model"] = model_json(c.slab.model, u);
  j["thickness"] = c.slab.thickness * length_scale;
  j["grid"] = {{"auto", c.grid_auto},
               {"spacing", c.grid.spacing() * u.frequency},
               {"count", c.grid.size()},
               {"max", c.grid.max() * u.frequency}};
  j["pulse"] = {{"kind", to_string(c.pulse.kind)},
                {"amplitude", c.pulse.amplitude},
                {"carrier", c.pulse.carrier * u.frequency},
                {"time", c.pulse.time * u.time},
                {"width", c.pulse.width * u.time},
                {"turn_on", c.pulse.turn_on * u.time}};
  j["time_grid"] = {{"auto", c.time_grid_auto},
                    {"start", c.time_grid.start * u.time},
                    {"step", c.time_grid.step * u.time},
                    {"samples", c.time_grid.count},
                    {"pad_factor", c.pad_factor}};
  j["scan"] = {{"resolution", c.scan_resolution},
               {"region", rect_json(c.scan_region.value_or(default_scan_region(c.slab.model)), u.frequency)}};
  j["analyses"] = {{"spectrum", c.analyses.spectrum}, {"kk_check", c.analyses.kk_check},
                   {"sum_rule", c.analyses.sum_rule}, {"kernel", c.analyses.kernel},
                   {"scan", c.analyses.scan},         {"causality", c.analyses.causality}};
  j["literal_eq17"] = c.literal_eq17;
  j["threads"] = c.threads;
  j["thresholds"] = {{"front_leakage", CausalityThresholds{}.leakage},
                     {"kernel_ratio", CausalityThresholds{}.kernel_ratio},
                     {"singularity_count", CausalityThresholds{}.singularities}};
  return j;
}

// Largest relative deviation of the dispersion-relation reconstruction from
// the model over the real grid samples (the last two cannot be symmetrized).
double kk_max_error(const DielectricModel& model, const FrequencyGrid& grid) {
  const ImagSpectrum spectrum = sample_imag_spectrum(model, grid);
  double worst = 0.0;
  for (std::size_t j = 0; j + 2 < grid.size(); ++j) {
    const Complex zeta{grid.omega(j), 0.0};
    const Complex exact = eval_epsilon(model, zeta);
    const Complex rebuilt = kk_reconstruct(spectrum, zeta);
    worst = std::max(worst, std::abs(rebuilt - exact) / std::abs(exact));
  }
  return worst;
}

PropagationOptions propagation_options(const ScenarioConfig& c) {
  PropagationOptions p;
  p.pad_factor = c.pad_factor;
  p.threads = c.threads;
  return p;
}

ordered_json parse(const std::string& text) { return ordered_json::parse(text); }

void run(const ScenarioConfig& c, ArtifactWriter& out) {
  const UnitScale units =
      c.units == Units::si ? UnitScale{c.reference_frequency, 1.0 / c.reference_frequency} : UnitScale{};
  ordered_json report;
  report["name"] = c.name;
  report["schema"] = c.schema;
  report["resolved"] = resolved_json(c, units);

  if (c.analyses.spectrum) {
    const SpectralResponse r = evaluate_spectrum(c.slab, c.grid, SpectrumOptions{c.threads, c.literal_eq17});
    out.write("spectrum.csv", [&](std::ostream& os) { write_spectrum_csv(os, r, units); });
    out.write_text("spectrum.json", spectrum_json(r, units));
    const auto failed = std::count_if(r.flags.begin(), r.flags.end(), [](auto f) { return (f & kSampleEvalFailed) != 0; });
    double min_delay = std::numeric_limits<double>::infinity();
    double max_power = 0.0;
    for (std::size_t j = 0; j < r.grid.size(); ++j) {
      if (std::isfinite(r.delay[j])) min_delay = std::min(min_delay, r.delay[j]);
      if (std::isfinite(r.power[j])) max_power = std::max(max_power, r.power[j]);
    }
    report["spectrum"] = {{"samples", r.grid.size()},
                          {"failed_samples", failed},
                          {"phase_guard_ok", r.phase_guard_ok},
                          {"min_group_delay", std::isfinite(min_delay) ? ordered_json(min_delay * units.time) : ordered_json(nullptr)},
                          {"max_power", max_power}};
  }

  if (c.analyses.sum_rule) {
    report["sum_rule"] = sum_rule(c.slab.model, c.grid) * units.frequency * units.frequency;
  }
  if (c.analyses.kk_check) report["kk_max_error"] = kk_max_error(c.slab.model, c.grid);

  if (c.analyses.kernel) {
    const Waveform input = synthesize_pulse(c.pulse, c.time_grid);
    const KernelEstimate k = extract_kernel(c.slab, kernel_grid_for(input, c.pad_factor), propagation_options(c));
    out.write("kernel.csv", [&](std::ostream& os) { write_kernel_csv(os, k, units); });
    report["kernel"] = {{"negative_mass", k.negative_mass},
                        {"total_mass", k.total_mass},
                        {"negative_ratio", k.negative_ratio()},
                        {"guard", k.guard * units.time},
                        {"imag_residue", k.imag_residue}};
  }

  if (c.analyses.scan) {
    const ComplexRect region = c.scan_region.value_or(default_scan_region(c.slab.model));
    const SingularityReport s = scan_upper_half_plane(c.slab, region, c.scan_resolution);
    const std::string text = singularity_json(s, units);
    out.write_text("singularities.json", text);
    out.write("scan_grid.csv", [&](std::ostream& os) { write_scan_grid_csv(os, s, units); });
    report["singularities"] = parse(text);
  }

  if (c.analyses.causality) {
    CausalityOptions opts;
    opts.propagation = propagation_options(c);
    opts.scan_region = c.scan_region;
    opts.scan_resolution = c.scan_resolution;
    const CausalityReport cr = assess_causality(c.slab, c.pulse, c.time_grid, opts);
    const std::string text = causality_json(cr, units);
    out.write_text("causality.json", text);
    report["causality"] = parse(text);

    const Waveform input = synthesize_pulse(c.pulse, c.time_grid);
    const Waveform output = propagate(input, c.slab, opts.propagation);
    out.write("waveform_in.csv", [&](std::ostream& os) { write_waveform_csv(os, input, units); });
    out.write("waveform_out.csv", [&](std::ostream& os) { write_waveform_csv(os, output, units); });
    report["waveform"] = {{"front_time", input.front_time ? ordered_json(*input.front_time * units.time) : ordered_json(nullptr)},
                          {"input_energy", input.energy() * units.time},
                          {"output_energy", output.energy() * units.time}};
  }

  report["artifacts"] = out.names();
  report["artifacts"].push_back("report.json");
  out.write_text("report.json", report.dump(2) + "\n");
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& config) {
  RunResult result;
  try {
    ArtifactWriter out(config.output_dir);
    try {
      run(config, out);
    } catch (...) {
      result.artifacts = out.names();
      throw;
    }
    result.artifacts = out.names();
    result.message = fmt::format("wrote {} artifacts to {}", result.artifacts.size(), config.output_dir.string());
  } catch (const ValidationError& e) {
    result.exit_code = kExitValidation;
    result.message = fmt::format("validation failed: {}", e.what());
  } catch (const NumericalGuardError& e) {
    result.exit_code = kExitNumericalGuard;
    result.message = fmt::format("numerical guard '{}' tripped (value {:.6g}): {}", e.guard(), e.value(), e.what());
  } catch (const std::exception& e) {
    result.exit_code = kExitFailure;
    result.message = fmt::format("error: {}", e.what());
  }
  return result;
}

}  // namespace slabcausal::cli
