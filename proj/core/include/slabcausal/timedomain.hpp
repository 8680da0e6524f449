#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "slabcausal/dielectric.hpp"
#include "slabcausal/slab.hpp"
#include "slabcausal/types.hpp"

namespace slabcausal {

struct TimeGrid {
  double start = 0.0;
  double step = 1.0;
  std::size_t count = 0;

  double time(std::size_t n) const noexcept { return start + step * static_cast<double>(n); }
};

/// Uniformly sampled real signal. `front_time`, when set, is the instant
/// before which the signal is exactly zero.
struct Waveform {
  double start = 0.0;
  double step = 1.0;
  std::vector<double> samples;
  std::optional<double> front_time;

  double time(std::size_t n) const noexcept { return start + step * static_cast<double>(n); }
  double energy() const noexcept;
};

enum class PulseKind { gaussian, step_sine, truncated_sine };

struct PulseSpec {
  PulseKind kind = PulseKind::step_sine;
  double amplitude = 1.0;
  double carrier = 1.0;
  /// Front t_f for the sine pulses, centre t0 for the gaussian.
  double time = 0.0;
  /// Gaussian standard deviation sigma.
  double width = 1.0;
  /// Raised-cosine turn-on length of the truncated sine.
  double turn_on = 0.0;
};

/// gaussian: A exp(-(t-t0)^2 / (2 sigma^2)) cos(w0 (t-t0)), no front.
/// step_sine: A sin(w0 (t-tf)) for t >= tf, exactly 0 before.
/// truncated_sine: step_sine times a raised-cosine ramp over [tf, tf + turn_on].
Waveform synthesize_pulse(const PulseSpec& spec, const TimeGrid& grid);

struct PropagationOptions {
  /// Window length as a multiple of the input length; the input sits in the middle.
  std::size_t pad_factor = 4;
  unsigned threads = 1;
  double per_linewidth = 16.0;
  double coverage = 20.0;
  double wraparound_tolerance = 1e-8;
};

/// Transmitted waveform V_out on the padded window. Transfer samples are taken
/// at the bilinear-mapped frequencies (2/dt) tan(w dt / 2), which sends the
/// upper half plane onto the discrete causal region: a tau analytic for
/// Im zeta > 0 yields an exactly causal discrete response.
Waveform propagate(const Waveform& input, const SlabConfig& slab, const PropagationOptions& options = {});

/// max |V_out| before front - guard over max |V_out|.
double front_leakage(const Waveform& output, double guard);

struct KernelEstimate {
  double step = 1.0;
  /// Time of density[0]; the support runs over [start, start + size * step).
  double start = 0.0;
  std::vector<double> density;
  double guard = 0.0;
  double negative_mass = 0.0;
  double total_mass = 0.0;
  /// max |Im g| / max |g| before the real part was kept.
  double imag_residue = 0.0;

  double time(std::size_t n) const noexcept { return start + step * static_cast<double>(n); }
  double negative_ratio() const noexcept { return total_mass > 0.0 ? negative_mass / total_mass : 0.0; }
};

/// Density g of 1 - tau(w) = int e^{i w s} g(s) ds on the time grid dual to
/// `grid` (step pi / omega_max, 2 (N - 1) samples).
KernelEstimate extract_kernel(const SlabConfig& slab, const FrequencyGrid& grid,
                              const PropagationOptions& options = {});

/// Frequency grid whose dual time grid matches propagate() for `input`.
FrequencyGrid kernel_grid_for(const Waveform& input, std::size_t pad_factor = 4);

enum class Verdict { causal, acausal, inconclusive };

std::string to_string(Verdict v);
std::string to_string(PulseKind k);

struct CausalityThresholds {
  double leakage = 1e-4;
  double kernel_ratio = 1e-3;
  std::size_t singularities = 1;
};

struct CausalityReport {
  double front_leakage = 0.0;
  double kernel_ratio = 0.0;
  std::size_t singularity_count = 0;
  bool leakage_available = false;
  bool kernel_available = false;
  bool scan_available = false;
  Verdict verdict = Verdict::inconclusive;
  CausalityThresholds thresholds;
  double guard = 0.0;
  /// Constituents that failed, as "stage: message".
  std::vector<std::string> failures;
};

struct CausalityOptions {
  CausalityThresholds thresholds;
  PropagationOptions propagation;
  std::optional<ComplexRect> scan_region;
  std::size_t scan_resolution = 64;
  /// Guard band before the front, in samples.
  double guard_samples = 10.0;
};

/// Two-of-three verdict from a step-sine probe, the extracted kernel and the
/// upper-half-plane scan. The probe keeps the pulse's carrier, amplitude and
/// front; its kind is forced to step_sine.
CausalityReport assess_causality(const SlabConfig& slab, const PulseSpec& probe, const TimeGrid& grid,
                                 const CausalityOptions& options = {});

}  // namespace slabcausal
