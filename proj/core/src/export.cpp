#include "slabcausal/export.hpp"

#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "json.hpp"

namespace slabcausal {
namespace {

using nlohmann::ordered_json;

// Shortest round-trip representation keeps artifacts byte-stable.
std::string num(double v) { return fmt::format("{:.17g}", v); }

ordered_json complex_json(Complex z) { return ordered_json::array({z.real(), z.imag()}); }

ordered_json rect_json(const ComplexRect& r, double scale) {
  return ordered_json{{"re_min", r.re_min * scale},
                      {"re_max", r.re_max * scale},
                      {"im_min", r.im_min * scale},
                      {"im_max", r.im_max * scale}};
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string to_string(SingularityKind kind) {
  return kind == SingularityKind::zero_of_epsilon ? "zero_of_epsilon" : "pole_of_epsilon";
}

std::string to_string(Certificate c) {
  switch (c) {
    case Certificate::analytic:
      return "analytic";
    case Certificate::singular:
      return "singular";
    case Certificate::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

void write_spectrum_csv(std::ostream& out, const SpectralResponse& r, const UnitScale& units) {
  out << "omega,re_tau,im_tau,re_rho,im_rho,P,theta,t_delay\n";
  for (std::size_t j = 0; j < r.grid.size(); ++j) {
    fmt::print(out, "{},{},{},{},{},{},{},{}\n", num(r.grid.omega(j) * units.frequency), num(r.tau[j].real()),
               num(r.tau[j].imag()), num(r.rho[j].real()), num(r.rho[j].imag()), num(r.power[j]), num(r.phase[j]),
               num(r.delay[j] * units.time));
  }
}

std::string spectrum_json(const SpectralResponse& r, const UnitScale& units) {
  ordered_json j;
  j["spacing"] = r.grid.spacing() * units.frequency;
  j["count"] = r.grid.size();
  j["literal_eq17"] = r.literal_eq17;
  j["phase_guard_ok"] = r.phase_guard_ok;
  ordered_json omega = ordered_json::array();
  ordered_json tau = ordered_json::array();
  ordered_json rho = ordered_json::array();
  ordered_json power = ordered_json::array();
  ordered_json phase = ordered_json::array();
  ordered_json delay = ordered_json::array();
  ordered_json flags = ordered_json::array();
  for (std::size_t k = 0; k < r.grid.size(); ++k) {
    omega.push_back(r.grid.omega(k) * units.frequency);
    tau.push_back(complex_json(r.tau[k]));
    rho.push_back(complex_json(r.rho[k]));
    power.push_back(r.power[k]);
    phase.push_back(r.phase[k]);
    delay.push_back(r.delay[k] * units.time);
    flags.push_back(r.flags[k]);
  }
  j["omega"] = std::move(omega);
  j["tau"] = std::move(tau);
  j["rho"] = std::move(rho);
  j["P"] = std::move(power);
  j["theta"] = std::move(phase);
  j["t_delay"] = std::move(delay);
  j["flags"] = std::move(flags);
  return dump(j);
}

void write_waveform_csv(std::ostream& out, const Waveform& w, const UnitScale& units) {
  out << "t,V\n";
  for (std::size_t n = 0; n < w.samples.size(); ++n) {
    fmt::print(out, "{},{}\n", num(w.time(n) * units.time), num(w.samples[n]));
  }
}

void write_kernel_csv(std::ostream& out, const KernelEstimate& k, const UnitScale& units) {
  out << "s,g\n";
  for (std::size_t n = 0; n < k.density.size(); ++n) {
    fmt::print(out, "{},{}\n", num(k.time(n) * units.time), num(k.density[n] / units.time));
  }
}

std::string causality_json(const CausalityReport& r, const UnitScale& units) {
  ordered_json j;
  j["verdict"] = to_string(r.verdict);
  j["front_leakage"] = r.leakage_available ? ordered_json(r.front_leakage) : ordered_json(nullptr);
  j["kernel_ratio"] = r.kernel_available ? ordered_json(r.kernel_ratio) : ordered_json(nullptr);
  j["singularity_count"] = r.scan_available ? ordered_json(r.singularity_count) : ordered_json(nullptr);
  j["guard"] = r.guard * units.time;
  j["thresholds"] = ordered_json{{"front_leakage", r.thresholds.leakage},
                                 {"kernel_ratio", r.thresholds.kernel_ratio},
                                 {"singularity_count", r.thresholds.singularities}};
  j["failures"] = r.failures;
  return dump(j);
}

std::string singularity_json(const SingularityReport& r, const UnitScale& units) {
  const double f = units.frequency;
  ordered_json j;
  j["certificate"] = to_string(certify(r));
  j["singularity_count"] = r.singularity_count();
  j["region"] = rect_json(r.region, f);
  j["resolution"] = r.resolution;
  j["cells_scanned"] = r.cells_scanned;
  j["denominator_winding"] = r.denominator_winding;
  j["epsilon_winding"] = r.epsilon_winding;
  ordered_json branch = ordered_json::array();
  for (const auto& b : r.branch_points) {
    branch.push_back(ordered_json{{"location", complex_json(b.location * f)},
                                  {"kind", to_string(b.kind)},
                                  {"upper_half_plane", b.in_upper_half_plane}});
  }
  j["branch_points"] = std::move(branch);
  ordered_json zeros = ordered_json::array();
  for (Complex z : r.denominator_zeros) zeros.push_back(complex_json(z * f));
  j["denominator_zeros"] = std::move(zeros);
  ordered_json eps_zeros = ordered_json::array();
  for (Complex z : r.scanned_epsilon_zeros) eps_zeros.push_back(complex_json(z * f));
  j["scanned_epsilon_zeros"] = std::move(eps_zeros);
  ordered_json cells = ordered_json::array();
  for (const auto& c : r.nonzero_cells) {
    cells.push_back(ordered_json{{"cell", rect_json(c.cell, f)},
                                 {"denominator_winding", c.denominator_winding},
                                 {"epsilon_winding", c.epsilon_winding}});
  }
  j["nonzero_cells"] = std::move(cells);
  ordered_json straddles = ordered_json::array();
  for (const auto& s : r.straddles) straddles.push_back(rect_json(s, f));
  j["straddles"] = std::move(straddles);
  return dump(j);
}

void write_scan_grid_csv(std::ostream& out, const SingularityReport& r, const UnitScale& units) {
  out << "re_zeta,im_zeta,re_value,im_value\n";
  for (const auto& s : r.landscape) {
    fmt::print(out, "{},{},{},{}\n", num(s.zeta.real() * units.frequency), num(s.zeta.imag() * units.frequency),
               num(s.value.real()), num(s.value.imag()));
  }
}

}  // namespace slabcausal
