// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "slabcausal/analyticity.hpp"
#include "slabcausal/timedomain.hpp"
#include "slabcausal_cli/runner.hpp"
#include "slabcausal_cli/scenario.hpp"
#include "support/oracles.hpp"

using namespace slabcausal;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

const DielectricModel kLorentz = DielectricModel::lorentz(1.0, 1.0, 2.0, 0.1);
const DielectricModel kInverted = DielectricModel::lorentz(-1.0, 2.0, 1.0, 0.1);
// Passive line with an anomalous-dispersion band; parameters fixed from a sweep
// over strength, damping and thickness.
const SlabConfig kNegativeDelaySlab{1.0, DielectricModel::lorentz(1.0, 1.0, 2.0, 0.3)};
constexpr double kNegativeDelayCarrier = 2.04;

TimeGrid centred(std::size_t n, double dt) { return TimeGrid{-0.5 * dt * static_cast<double>(n), dt, n}; }

double rel(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

Outcome sum_rules() {
  const double a = sum_rule(kLorentz, FrequencyGrid::for_model(kLorentz));
  const double b = sum_rule(kInverted, FrequencyGrid::for_model(kInverted));
  const double ea = std::abs(a - 1.0);
  const double eb = std::abs(b + 4.0) / 4.0;
  return {ea < 1e-4 && eb < 1e-4, fmt::format("lorentz {:.8f} (rel err {:.2e}), inverted {:.8f} (rel err {:.2e})", a,
                                               ea, b, eb)};
}

Outcome kk_round_trip() {
  const std::vector<DielectricModel> models{
      DielectricModel::lorentz(1.0, 1.0, 2.0, 0.2), kLorentz,
      DielectricModel::oscillators(1.2, {Resonance{0.6, 1.0, 0.2}, Resonance{0.4, 3.0, 0.15}})};
  double worst_grid = 0.0;
  double worst_axis = 0.0;
  for (const auto& m : models) {
    const auto grid = FrequencyGrid::for_model(m);
    const auto spec = sample_imag_spectrum(m, grid);
    for (std::size_t j = 0; j + 2 < grid.size(); ++j) {
      const Complex z{grid.omega(j), 0.0};
      worst_grid = std::max(worst_grid, rel(kk_reconstruct(spec, z), eval_epsilon(m, z)));
    }
    const Complex z{0.0, 3.0};
    worst_axis = std::max(worst_axis, rel(kk_reconstruct(spec, z), eval_epsilon(m, z)));
  }
  return {worst_grid < 1e-3 && worst_axis < 1e-4,
          fmt::format("max rel err on grid {:.2e}, at 3i {:.2e} ({} passive models)", worst_grid, worst_axis,
                      models.size())};
}

Outcome slab_limits() {
  double unity = 0.0;
  for (const SlabConfig& s : {SlabConfig{2.0, DielectricModel::vacuum()}, SlabConfig{0.0, kLorentz}}) {
    const auto r = evaluate_spectrum(s, FrequencyGrid::for_model(kLorentz));
    for (const Complex& t : r.tau) unity = std::max(unity, std::abs(t - 1.0));
  }
  double excess = -1.0;
  double lossless_gap = 0.0;
  std::size_t lossless_points = 0;
  const std::vector<SlabConfig> passive{
      SlabConfig{5.0, kLorentz}, SlabConfig{0.5, kLorentz}, kNegativeDelaySlab,
      SlabConfig{1.0, DielectricModel::constant(4.0)},
      SlabConfig{1.5, DielectricModel::oscillators(1.2, {Resonance{0.6, 1.0, 0.2}, Resonance{0.4, 3.0, 0.15}})}};
  for (const auto& s : passive) {
    const auto grid = FrequencyGrid::for_model(s.model);
    const auto r = evaluate_spectrum(s, grid);
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double total = std::norm(r.tau[j]) + std::norm(r.rho[j]);
      excess = std::max(excess, total - 1.0);
      if (r.epsilon[j].imag() == 0.0) {
        lossless_gap = std::max(lossless_gap, std::abs(total - 1.0));
        ++lossless_points;
      }
    }
  }
  return {unity <= 1e-14 && excess <= 1e-9 && lossless_gap <= 1e-9 && lossless_points > 0,
          fmt::format("max |tau-1| {:.1e}; max |tau|^2+|rho|^2-1 {:.1e}; lossless gap {:.1e} over {} points", unity,
                      excess, lossless_gap, lossless_points)};
}

Outcome passive_causal() {
  const SlabConfig slab{5.0, kLorentz};
  PulseSpec p;
  p.carrier = 2.0;
  const auto grid = centred(1u << 16, 0.05);
  const Waveform in = synthesize_pulse(p, grid);
  const double lambda = front_leakage(propagate(in, slab), 10.0 * grid.step);
  const KernelEstimate k = extract_kernel(slab, kernel_grid_for(in));
  const SingularityReport scan = scan_upper_half_plane(slab, default_scan_region(slab.model));
  return {lambda < 1e-6 && k.negative_ratio() < 1e-6 && scan.singularity_count() == 0 && scan.straddles.empty(),
          fmt::format("lambda {:.2e}, M-/M {:.2e}, singularities {}", lambda, k.negative_ratio(),
                      scan.singularity_count())};
}

Outcome inverted_acausal() {
  const SlabConfig slab{1.0, kInverted};
  const Complex expected{0.0, std::sqrt(3.01) - 0.1};
  const SingularityReport scan = scan_upper_half_plane(slab, default_scan_region(slab.model));
  double located = 1e300;
  for (Complex z : scan.scanned_epsilon_zeros) located = std::min(located, std::abs(z - expected));
  PulseSpec p;
  p.carrier = 1.0;
  const auto grid = centred(1u << 16, 0.05);
  const CausalityReport report = assess_causality(slab, p, grid);
  const KernelEstimate k = extract_kernel(slab, kernel_grid_for(synthesize_pulse(p, grid)));
  return {located < 1e-6 && report.verdict == Verdict::acausal && k.negative_ratio() > 1e-3,
          fmt::format("eps zero located to {:.1e}, verdict {}, M-/M {:.3f}", located, to_string(report.verdict),
                      k.negative_ratio())};
}

Outcome negative_delay() {
  const auto grid = FrequencyGrid::for_model(kNegativeDelaySlab.model);
  const auto r = evaluate_spectrum(kNegativeDelaySlab, grid);
  double min_delay = 1e300;
  double at = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (r.delay[j] < min_delay) {
      min_delay = r.delay[j];
      at = grid.omega(j);
    }
  }
  PulseSpec p;
  p.carrier = kNegativeDelayCarrier;
  const auto tgrid = centred(1u << 16, 0.05);
  const double lambda = front_leakage(propagate(synthesize_pulse(p, tgrid), kNegativeDelaySlab), 10.0 * tgrid.step);
  const double at_carrier = group_delay(r, kNegativeDelayCarrier);
  return {min_delay < 0.0 && at_carrier < 0.0 && lambda < 1e-6,
          fmt::format("min t_delay {:.3f} at omega {:.3f}, t_delay(carrier) {:.3f}, lambda {:.2e}", min_delay, at,
                      at_carrier, lambda)};
}

Outcome oracle_equivalences() {
  // Closed form against the transfer-matrix product.
  oracle::Draw draw(20240601);
  double worst_tm = 0.0;
  int triples = 0;
  while (triples < 10000) {
    const auto model = DielectricModel::oscillators(
        draw.uniform(0.5, 2.0), {Resonance{draw.uniform(0.1, 2.0), draw.uniform(0.5, 3.0), draw.uniform(0.05, 1.0)}});
    const double length = draw.uniform(0.0, 3.0);
    const Complex z{draw.uniform(0.01, 10.0), 0.0};
    // The matrix product loses about e^{2|Im phi|} in relative accuracy.
    if (std::abs((z * std::sqrt(eval_epsilon(model, z)) * length).imag()) > 2.0) continue;
    ++triples;
    const SlabSolver s(SlabConfig{length, model});
    worst_tm = std::max(worst_tm, rel(s.transfer_matrix_amplitudes(z).transmission, s.transmission(z)));
  }

  // Branch points against companion-matrix roots.
  double worst_roots = 0.0;
  for (int k = 0; k < 200; ++k) {
    const double wp = draw.uniform(0.5, 2.0);
    std::vector<oracle::Line> lines;
    std::vector<Resonance> res;
    const int count = draw.integer(1, 3);
    for (int j = 0; j < count; ++j) {
      oracle::Line l{draw.uniform(-1.0, 2.0), draw.uniform(0.3, 3.0), draw.uniform(0.05, 0.5)};
      lines.push_back(l);
      res.push_back(Resonance{l.strength, l.frequency, l.damping});
    }
    const auto got = find_branch_points(DielectricModel::oscillators(wp, res), ComplexRect{-1e9, 1e9, -1e9, 1e9});
    for (Complex w : oracle::epsilon_zeros_and_poles(wp, lines)) {
      double best = 1e300;
      for (const auto& b : got) best = std::min(best, std::abs(b.location - w));
      worst_roots = std::max(worst_roots, best / std::max(1.0, std::abs(w)));
    }
  }

  // Propagation against direct convolution with the extracted kernel.
  double worst_conv = 0.0;
  for (const auto& [slab, carrier] : {std::pair{SlabConfig{5.0, kLorentz}, 2.0},
                                      std::pair{kNegativeDelaySlab, kNegativeDelayCarrier}}) {
    PulseSpec p;
    p.carrier = carrier;
    const Waveform in = synthesize_pulse(p, centred(8192, 0.05));
    const Waveform out = propagate(in, slab);
    const KernelEstimate k = extract_kernel(slab, kernel_grid_for(in));
    double gmax = 0.0;
    for (double v : k.density) gmax = std::max(gmax, std::abs(v));
    std::vector<double> g = k.density;
    for (double& v : g)
      if (std::abs(v) < 1e-13 * gmax) v = 0.0;
    const auto direct = oracle::subtract_convolution(in.samples, in.start, in.step, g, k.start, k.step, out.start,
                                                     out.samples.size());
    double err = 0.0;
    double peak = 0.0;
    for (std::size_t n = 0; n < direct.size(); ++n) {
      err = std::max(err, std::abs(direct[n] - out.samples[n]));
      peak = std::max(peak, std::abs(out.samples[n]));
    }
    worst_conv = std::max(worst_conv, err / peak);
  }
  return {worst_tm < 1e-12 && worst_roots < 1e-12 && worst_conv < 1e-6,
          fmt::format("transfer matrix {:.1e} over {} triples; roots {:.1e}; convolution {:.1e}", worst_tm, triples,
                      worst_roots, worst_conv)};
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    files[e.path().filename().string()] = ss.str();
  }
  return files;
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "slabcausal-acceptance";
  std::size_t compared = 0;
  std::string mismatch;
  for (const char* name : {"lorentz_passive", "chiao_inverted", "vacuum"}) {
    std::map<std::string, std::string> first;
    for (int round = 0; round < 2; ++round) {
      cli::ScenarioConfig cfg = cli::load_scenario(fs::path(SLABCAUSAL_SCENARIO_DIR) / (std::string(name) + ".scenario"));
      cfg.output_dir = root / fmt::format("{}-{}", name, round);
      fs::remove_all(cfg.output_dir);
      const cli::RunResult r = cli::run_scenario(cfg);
      if (r.exit_code != cli::kExitOk) return {false, fmt::format("{} failed: {}", name, r.message)};
      cli::emit_plots(cfg.output_dir);
      auto files = snapshot(cfg.output_dir);
      if (round == 0) {
        first = std::move(files);
      } else if (files != first) {
        mismatch = name;
      } else {
        compared += files.size();
      }
    }
  }
  return {mismatch.empty(), mismatch.empty() ? fmt::format("{} artifacts byte-identical across two runs", compared)
                                             : fmt::format("artifacts differ for {}", mismatch)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget;  // seconds
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "sum rule", 2.0, sum_rules},
      {2, "dispersion-relation round trip", 5.0, kk_round_trip},
      {3, "slab limits", 1.0, slab_limits},
      {4, "passive slab is causal", 10.0, passive_causal},
      {5, "inverted slab is acausal", 15.0, inverted_acausal},
      {6, "negative group delay without acausality", 15.0, negative_delay},
      {7, "independent-route equivalences", 20.0, oracle_equivalences},
      {8, "determinism of bundled scenarios", 60.0, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, fmt::format("threw: {}", e.what())};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = o.pass && secs < c.budget;
    failed += !pass;
    std::cout << fmt::format("[{}] {}. {}: {} ({:.2f} s, budget {:.0f} s)\n", pass ? "PASS" : "FAIL", c.id, c.name,
                             o.detail, secs, c.budget);
  }
  return failed == 0 ? 0 : 1;
}
