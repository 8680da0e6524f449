#include "slabcausal_cli/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "slabcausal/errors.hpp"

namespace slabcausal::cli {
namespace {

constexpr double kSpeedOfLight = 299792458.0;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ValidationError(fmt::format("{}: {}", where, what));
}

void reject_unknown(const YAML::Node& node, const std::string& where, const std::set<std::string>& allowed) {
  if (!node.IsMap()) fail(where, "expected a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.contains(key)) fail(where, fmt::format("unknown key '{}'", key));
  }
}

template <class T>
T scalar(const YAML::Node& node, const std::string& where) {
  if (!node.IsScalar()) fail(where, "expected a scalar value");
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    fail(where, fmt::format("cannot read '{}'", node.Scalar()));
  }
}

double number(const YAML::Node& parent, const std::string& key, const std::string& where) {
  const YAML::Node n = parent[key];
  if (!n) fail(where, fmt::format("missing required key '{}'", key));
  const double v = scalar<double>(n, where + "." + key);
  if (!std::isfinite(v)) fail(where + "." + key, "must be finite");
  return v;
}

double number_or(const YAML::Node& parent, const std::string& key, const std::string& where, double fallback) {
  return parent[key] ? number(parent, key, where) : fallback;
}

double positive(const YAML::Node& parent, const std::string& key, const std::string& where) {
  const double v = number(parent, key, where);
  if (!(v > 0.0)) fail(where + "." + key, fmt::format("must be > 0, got {}", v));
  return v;
}

double non_negative(const YAML::Node& parent, const std::string& key, const std::string& where, double fallback) {
  const double v = number_or(parent, key, where, fallback);
  if (!(v >= 0.0)) fail(where + "." + key, fmt::format("must be >= 0, got {}", v));
  return v;
}

double non_negative(const YAML::Node& parent, const std::string& key, const std::string& where) {
  const double v = number(parent, key, where);
  if (!(v >= 0.0)) fail(where + "." + key, fmt::format("must be >= 0, got {}", v));
  return v;
}

std::size_t count(const YAML::Node& parent, const std::string& key, const std::string& where) {
  const YAML::Node n = parent[key];
  if (!n) fail(where, fmt::format("missing required key '{}'", key));
  const auto v = scalar<long long>(n, where + "." + key);
  if (v <= 0) fail(where + "." + key, fmt::format("must be a positive integer, got {}", v));
  return static_cast<std::size_t>(v);
}

bool flag(const YAML::Node& parent, const std::string& key, const std::string& where, bool fallback) {
  const YAML::Node n = parent[key];
  return n ? scalar<bool>(n, where + "." + key) : fallback;
}

bool is_auto(const YAML::Node& n) { return !n || (n.IsScalar() && n.Scalar() == "auto"); }

// Scale factors from file units to natural units.
struct Conversion {
  double frequency = 1.0;  // multiply file frequencies
  double time = 1.0;       // multiply file times
  double length = 1.0;     // multiply file lengths
};

DielectricModel parse_model(const YAML::Node& node, const Conversion& conv, const std::filesystem::path& base) {
  const std::string where = "model";
  if (!node) fail("scenario", "missing required key 'model'");
  if (!node.IsMap()) fail(where, "expected a mapping");
  if (!node["type"]) fail(where, "missing required key 'type'");
  const auto type = scalar<std::string>(node["type"], where + ".type");
  if (type == "vacuum") {
    reject_unknown(node, where, {"type"});
    return DielectricModel::vacuum();
  }
  if (type == "constant") {
    reject_unknown(node, where, {"type", "epsilon"});
    return DielectricModel::constant(positive(node, "epsilon", where));
  }
  if (type == "oscillators") {
    reject_unknown(node, where, {"type", "plasma_frequency", "resonances"});
    const double wp = non_negative(node, "plasma_frequency", where);
    const YAML::Node list = node["resonances"];
    if (!list || !list.IsSequence() || list.size() == 0) fail(where, "'resonances' must be a non-empty list");
    std::vector<Resonance> res;
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string w = fmt::format("{}.resonances[{}]", where, i);
      const YAML::Node r = list[i];
      reject_unknown(r, w, {"strength", "frequency", "damping"});
      const double strength = number(r, "strength", w);
      const double frequency = non_negative(r, "frequency", w);
      const double damping = positive(r, "damping", w);
      res.push_back(Resonance{strength, frequency * conv.frequency, damping * conv.frequency});
    }
    return DielectricModel::oscillators(wp * conv.frequency, std::move(res));
  }
  if (type == "tabulated") {
    reject_unknown(node, where, {"type", "file"});
    if (!node["file"]) fail(where, "missing required key 'file'");
    std::filesystem::path file = scalar<std::string>(node["file"], where + ".file");
    if (file.is_relative()) file = base / file;
    DielectricModel table = DielectricModel::load_csv(file);
    if (conv.frequency == 1.0) return table;
    const auto& t = std::get<TabulatedMedium>(table.variant());
    std::vector<double> omega = t.omega;
    for (double& w : omega) w *= conv.frequency;
    return DielectricModel::tabulated(std::move(omega), t.epsilon);
  }
  fail(where + ".type", fmt::format("unknown model type '{}' (vacuum, constant, oscillators, tabulated)", type));
}

PulseKind parse_kind(const std::string& s, const std::string& where) {
  if (s == "gaussian") return PulseKind::gaussian;
  if (s == "step_sine") return PulseKind::step_sine;
  if (s == "truncated_sine") return PulseKind::truncated_sine;
  fail(where, fmt::format("unknown pulse kind '{}' (gaussian, step_sine, truncated_sine)", s));
}

std::size_t next_power_of_two(double v) {
  std::size_t n = 1;
  while (static_cast<double>(n) < v) n <<= 1;
  return n;
}

// Time grid meeting the sampling rules: band edge >= 25x the top frequency,
// carrier well below Nyquist, 16 samples per linewidth on the padded window.
TimeGrid auto_time_grid(const DielectricModel& model, const PulseSpec& pulse, std::size_t pad) {
  const double top = std::max(model.top_frequency(), pulse.carrier);
  const double dt = std::min(kPi / (25.0 * top), 0.2 * kPi / pulse.carrier);
  double span = 4096.0 * dt;
  const double gamma = model.min_linewidth();
  if (std::isfinite(gamma) && gamma > 0.0) {
    span = std::max(span, 2.0 * kPi * 16.0 / (gamma * static_cast<double>(pad)));
  }
  if (pulse.kind == PulseKind::gaussian) span = std::max(span, 20.0 * pulse.width);
  const std::size_t n = std::max<std::size_t>(next_power_of_two(span / dt), 4096);
  return TimeGrid{pulse.time - 0.5 * static_cast<double>(n) * dt, dt, n};
}

}  // namespace

std::string to_string(Units u) { return u == Units::si ? "SI" : "natural"; }

ScenarioConfig parse_scenario(std::istream& in, const std::filesystem::path& base_dir,
                              const std::string& default_name) {
  YAML::Node root;
  try {
    root = YAML::Load(in);
  } catch (const YAML::Exception& e) {
    throw ValidationError(fmt::format("scenario is not valid YAML: {}", e.what()));
  }
  if (!root || !root.IsMap()) throw ValidationError("scenario must be a mapping");
  reject_unknown(root, "scenario",
                 {"schema", "name", "units", "reference_frequency", "model", "slab", "grid", "pulse", "time_grid",
                  "analyses", "scan", "output", "literal_eq17", "threads"});

  ScenarioConfig cfg;
  if (!root["schema"]) fail("scenario", "missing required key 'schema'");
  cfg.schema = scalar<int>(root["schema"], "schema");
  if (cfg.schema != 1) fail("schema", fmt::format("unsupported schema version {}", cfg.schema));
  cfg.name = root["name"] ? scalar<std::string>(root["name"], "name") : default_name;
  if (cfg.name.empty()) fail("name", "must not be empty");

  if (!root["units"]) fail("scenario", "missing required key 'units'");
  const auto units = scalar<std::string>(root["units"], "units");
  Conversion conv;
  if (units == "natural") {
    cfg.units = Units::natural;
    if (root["reference_frequency"]) cfg.reference_frequency = positive(root, "reference_frequency", "scenario");
  } else if (units == "SI" || units == "si") {
    cfg.units = Units::si;
    cfg.reference_frequency = positive(root, "reference_frequency", "scenario");
    conv.frequency = 1.0 / cfg.reference_frequency;
    conv.time = cfg.reference_frequency;
    conv.length = cfg.reference_frequency / kSpeedOfLight;
  } else {
    fail("units", fmt::format("expected 'natural' or 'SI', got '{}'", units));
  }

  cfg.slab.model = parse_model(root["model"], conv, base_dir);
  const YAML::Node slab = root["slab"];
  if (!slab) fail("scenario", "missing required key 'slab'");
  reject_unknown(slab, "slab", {"thickness"});
  cfg.slab.thickness = non_negative(slab, "thickness", "slab") * conv.length;

  const YAML::Node grid = root["grid"];
  if (is_auto(grid)) {
    cfg.grid = FrequencyGrid::for_model(cfg.slab.model);
  } else {
    reject_unknown(grid, "grid", {"count", "spacing", "max"});
    const std::size_t n = count(grid, "count", "grid");
    if (n < 8) fail("grid.count", "must be >= 8");
    if (grid["spacing"] && grid["max"]) fail("grid", "give either 'spacing' or 'max', not both");
    double spacing = 0.0;
    if (grid["spacing"]) {
      spacing = positive(grid, "spacing", "grid") * conv.frequency;
    } else {
      spacing = positive(grid, "max", "grid") * conv.frequency / static_cast<double>(n - 1);
    }
    cfg.grid = FrequencyGrid(spacing, n);
    cfg.grid_auto = false;
  }

  const AnalysisToggles defaults;
  const YAML::Node analyses = root["analyses"];
  if (analyses) {
    reject_unknown(analyses, "analyses", {"spectrum", "kk_check", "sum_rule", "kernel", "scan", "causality"});
    cfg.analyses.spectrum = flag(analyses, "spectrum", "analyses", defaults.spectrum);
    cfg.analyses.kk_check = flag(analyses, "kk_check", "analyses", defaults.kk_check);
    cfg.analyses.sum_rule = flag(analyses, "sum_rule", "analyses", defaults.sum_rule);
    cfg.analyses.kernel = flag(analyses, "kernel", "analyses", defaults.kernel);
    cfg.analyses.scan = flag(analyses, "scan", "analyses", defaults.scan);
    cfg.analyses.causality = flag(analyses, "causality", "analyses", defaults.causality);
  }
  const bool model_closed_form = cfg.slab.model.kind() != ModelKind::tabulated;
  if ((cfg.analyses.scan || cfg.analyses.causality) && !model_closed_form) {
    fail("analyses", "scan and causality need a closed-form model; tabulated media cannot be continued off axis");
  }

  const YAML::Node pulse = root["pulse"];
  const bool need_pulse = cfg.analyses.kernel || cfg.analyses.causality;
  if (need_pulse && !pulse) fail("scenario", "kernel and causality analyses need a 'pulse' section");
  if (pulse) {
    reject_unknown(pulse, "pulse", {"kind", "amplitude", "carrier", "time", "width", "turn_on"});
    if (!pulse["kind"]) fail("pulse", "missing required key 'kind'");
    cfg.pulse.kind = parse_kind(scalar<std::string>(pulse["kind"], "pulse.kind"), "pulse.kind");
    cfg.pulse.amplitude = number_or(pulse, "amplitude", "pulse", 1.0);
    cfg.pulse.carrier = positive(pulse, "carrier", "pulse") * conv.frequency;
    cfg.pulse.time = number_or(pulse, "time", "pulse", 0.0) * conv.time;
    if (cfg.pulse.kind == PulseKind::gaussian) {
      cfg.pulse.width = positive(pulse, "width", "pulse") * conv.time;
    } else if (pulse["width"]) {
      fail("pulse.width", "only gaussian pulses take a width");
    }
    if (cfg.pulse.kind == PulseKind::truncated_sine) {
      cfg.pulse.turn_on = non_negative(pulse, "turn_on", "pulse", 0.0) * conv.time;
    } else if (pulse["turn_on"]) {
      fail("pulse.turn_on", "only truncated_sine pulses take a turn_on");
    }
  }

  const YAML::Node tg = root["time_grid"];
  if (tg && !is_auto(tg)) {
    reject_unknown(tg, "time_grid", {"samples", "step", "start", "pad_factor"});
    if (tg["pad_factor"]) cfg.pad_factor = count(tg, "pad_factor", "time_grid");
    const std::size_t n = count(tg, "samples", "time_grid");
    if (n < 8) fail("time_grid.samples", "must be >= 8");
    const double dt = positive(tg, "step", "time_grid") * conv.time;
    const double start = tg["start"] ? number(tg, "start", "time_grid") * conv.time
                                     : cfg.pulse.time - 0.5 * static_cast<double>(n) * dt;
    cfg.time_grid = TimeGrid{start, dt, n};
    cfg.time_grid_auto = false;
  } else if (pulse) {
    cfg.time_grid = auto_time_grid(cfg.slab.model, cfg.pulse, cfg.pad_factor);
  }
  if ((cfg.pad_factor * cfg.time_grid.count) % 2 != 0) fail("time_grid", "samples x pad_factor must be even");

  const YAML::Node scan = root["scan"];
  if (scan) {
    reject_unknown(scan, "scan", {"resolution", "region"});
    if (scan["resolution"]) cfg.scan_resolution = count(scan, "resolution", "scan");
    if (const YAML::Node r = scan["region"]) {
      reject_unknown(r, "scan.region", {"re_min", "re_max", "im_min", "im_max"});
      ComplexRect rect{number(r, "re_min", "scan.region") * conv.frequency,
                       number(r, "re_max", "scan.region") * conv.frequency,
                       number(r, "im_min", "scan.region") * conv.frequency,
                       number(r, "im_max", "scan.region") * conv.frequency};
      if (!(rect.re_max > rect.re_min) || !(rect.im_max > rect.im_min)) fail("scan.region", "must be non-empty");
      if (!(rect.im_min >= 1e-6)) fail("scan.region.im_min", "must be >= 1e-6 in natural units");
      cfg.scan_region = rect;
    }
  }
  if (cfg.scan_resolution < 32) fail("scan.resolution", "must be >= 32");

  if (root["output"]) {
    std::filesystem::path out = scalar<std::string>(root["output"], "output");
    cfg.output_dir = out.is_relative() ? base_dir / out : out;
  } else {
    cfg.output_dir = base_dir / "out" / cfg.name;
  }
  cfg.literal_eq17 = flag(root, "literal_eq17", "scenario", false);
  if (root["threads"]) cfg.threads = static_cast<unsigned>(count(root, "threads", "scenario"));
  return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(fmt::format("cannot open scenario file '{}'", path.string()));
  return parse_scenario(in, path.parent_path(), path.stem().string());
}

}  // namespace slabcausal::cli
