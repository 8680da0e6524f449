#include "slabcausal/timedomain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "fft.hpp"
#include "parallel.hpp"
#include "slabcausal/analyticity.hpp"
#include "slabcausal/errors.hpp"

namespace slabcausal {
namespace {

void check_time_grid(double step, std::size_t count) {
  if (!(step > 0.0) || !std::isfinite(step)) throw ValidationError(fmt::format("time step must be > 0, got {}", step));
  if (count < 8) throw ValidationError(fmt::format("time grid needs at least 8 samples, got {}", count));
}

// Linewidth and bandwidth rules shared by propagate and extract_kernel.
void check_resolution(const DielectricModel& model, double spacing, double omega_max, double per_linewidth,
                      double coverage) {
  if (model.kind() == ModelKind::oscillators && !model.is_vacuum()) {
    const double gamma = model.min_linewidth();
    if (!(gamma > 0.0)) {
      throw ResolutionError("linewidth_resolution", gamma, "an undamped resonance cannot be resolved on a finite grid");
    }
    if (spacing > gamma / per_linewidth) {
      throw ResolutionError("linewidth_resolution", spacing,
                            fmt::format("frequency spacing {:.6g} exceeds linewidth {:.6g} / {}", spacing, gamma,
                                        per_linewidth));
    }
  }
  const double top = model.top_frequency();
  if (omega_max < coverage * top) {
    throw ResolutionError("bandwidth_coverage", omega_max,
                          fmt::format("band edge {:.6g} is below {} x top frequency {:.6g}", omega_max, coverage, top));
  }
}

// Bilinear frequency map of FFT bin k in a window of m samples of step dt.
double warped_frequency(std::size_t k, std::size_t m, double dt) {
  return 2.0 / dt * std::tan(kPi * static_cast<double>(k) / static_cast<double>(m));
}

}  // namespace

double Waveform::energy() const noexcept {
  double sum = 0.0;
  for (double v : samples) sum += v * v;
  return sum * step;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::causal:
      return "causal";
    case Verdict::acausal:
      return "acausal";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

std::string to_string(PulseKind k) {
  switch (k) {
    case PulseKind::gaussian:
      return "gaussian";
    case PulseKind::step_sine:
      return "step_sine";
    case PulseKind::truncated_sine:
      return "truncated_sine";
  }
  return "step_sine";
}

Waveform synthesize_pulse(const PulseSpec& spec, const TimeGrid& grid) {
  check_time_grid(grid.step, grid.count);
  if (!std::isfinite(grid.start)) throw ValidationError("time grid start must be finite");
  if (!(spec.carrier > 0.0) || !std::isfinite(spec.carrier)) {
    throw ValidationError(fmt::format("carrier frequency must be > 0, got {}", spec.carrier));
  }
  if (!std::isfinite(spec.amplitude) || !std::isfinite(spec.time)) {
    throw ValidationError("pulse amplitude and time must be finite");
  }
  const double nyquist = kPi / grid.step;
  if (spec.carrier > 0.25 * nyquist) {
    throw AliasingError("carrier_aliasing", spec.carrier,
                        fmt::format("carrier {:.6g} exceeds a quarter of the Nyquist frequency {:.6g}", spec.carrier,
                                    nyquist));
  }

  Waveform w;
  w.start = grid.start;
  w.step = grid.step;
  w.samples.assign(grid.count, 0.0);
  const double a = spec.amplitude;
  const double w0 = spec.carrier;

  switch (spec.kind) {
    case PulseKind::gaussian: {
      if (!(spec.width > 0.0) || !std::isfinite(spec.width)) {
        throw ValidationError(fmt::format("gaussian width must be > 0, got {}", spec.width));
      }
      const double sigma = spec.width;
      auto envelope = [&](double t) { return std::exp(-(t - spec.time) * (t - spec.time) / (2.0 * sigma * sigma)); };
      const double edge = std::max(envelope(grid.time(0)), envelope(grid.time(grid.count - 1)));
      if (edge > 1e-12) {
        throw ValidationError(
            fmt::format("gaussian envelope is {:.3g} of peak at the grid edge; the grid must contain it to 1e-12", edge));
      }
      for (std::size_t n = 0; n < grid.count; ++n) {
        const double t = grid.time(n);
        w.samples[n] = a * envelope(t) * std::cos(w0 * (t - spec.time));
      }
      break;
    }
    case PulseKind::step_sine:
    case PulseKind::truncated_sine: {
      double ramp = 0.0;
      if (spec.kind == PulseKind::truncated_sine) {
        if (!(spec.turn_on >= 0.0) || !std::isfinite(spec.turn_on)) {
          throw ValidationError(fmt::format("turn-on length must be >= 0, got {}", spec.turn_on));
        }
        ramp = spec.turn_on;
      }
      w.front_time = spec.time;
      for (std::size_t n = 0; n < grid.count; ++n) {
        const double t = grid.time(n);
        if (t < spec.time) continue;
        const double u = t - spec.time;
        double v = a * std::sin(w0 * u);
        if (u < ramp) v *= 0.5 * (1.0 - std::cos(kPi * u / ramp));
        w.samples[n] = v;
      }
      break;
    }
  }
  return w;
}

Waveform propagate(const Waveform& input, const SlabConfig& slab, const PropagationOptions& options) {
  check_time_grid(input.step, input.samples.size());
  if (options.pad_factor < 1) throw ValidationError("pad factor must be >= 1");
  for (double v : input.samples) {
    if (!std::isfinite(v)) throw ValidationError("input waveform has non-finite samples");
  }

  const std::size_t n = input.samples.size();
  const std::size_t m = options.pad_factor * n;
  if (m % 2 != 0) throw ValidationError("padded window length must be even");
  const std::size_t lead = (m - n) / 2;
  const double dt = input.step;

  Waveform out;
  out.step = dt;
  out.start = input.start - static_cast<double>(lead) * dt;
  out.front_time = input.front_time;

  std::vector<double> x(m, 0.0);
  std::copy(input.samples.begin(), input.samples.end(), x.begin() + static_cast<std::ptrdiff_t>(lead));

  const SlabSolver solver(slab);
  if (slab.thickness == 0.0 || slab.model.is_vacuum()) {
    out.samples = std::move(x);
    return out;
  }

  const double spacing = 2.0 * kPi / (static_cast<double>(m) * dt);
  check_resolution(slab.model, spacing, kPi / dt, options.per_linewidth, options.coverage);

  std::vector<Complex> spectrum = detail::real_forward(x);
  const std::size_t bins = spectrum.size();  // m / 2 + 1
  detail::parallel_for(bins, options.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      // The Nyquist bin maps to infinite frequency, where tau -> 1.
      const Complex tau = k == m / 2 ? Complex{1.0, 0.0} : solver.transmission(Complex{warped_frequency(k, m, dt), 0.0});
      // FFTW's forward sign is the conjugate of the e^{-i w t} synthesis convention.
      spectrum[k] *= std::conj(tau);
    }
  });

  std::vector<double> y = detail::real_backward(spectrum, m);
  const double scale = 1.0 / static_cast<double>(m);
  for (double& v : y) v *= scale;

  double total = 0.0;
  for (double v : y) total += v * v;
  const std::size_t edge = std::max<std::size_t>(1, m / 100);
  double head = 0.0;
  double tail = 0.0;
  for (std::size_t i = 0; i < edge; ++i) {
    head += y[i] * y[i];
    tail += y[m - 1 - i] * y[m - 1 - i];
  }
  if (total > 0.0) {
    const double frac = std::max(head, tail) / total;
    if (frac > options.wraparound_tolerance) {
      throw WraparoundError("wraparound", frac,
                            fmt::format("{:.3g} of the output energy sits in the outer 1% of the window", frac));
    }
  }
  out.samples = std::move(y);
  return out;
}

double front_leakage(const Waveform& output, double guard) {
  if (!output.front_time) throw ValidationError("front leakage needs a front-limited waveform");
  if (!(guard >= 0.0)) throw ValidationError("guard band must be >= 0");
  const double cutoff = *output.front_time - guard;
  double early = 0.0;
  double peak = 0.0;
  for (std::size_t i = 0; i < output.samples.size(); ++i) {
    const double a = std::abs(output.samples[i]);
    peak = std::max(peak, a);
    if (output.time(i) < cutoff) early = std::max(early, a);
  }
  return peak > 0.0 ? early / peak : 0.0;
}

FrequencyGrid kernel_grid_for(const Waveform& input, std::size_t pad_factor) {
  check_time_grid(input.step, input.samples.size());
  const std::size_t m = pad_factor * input.samples.size();
  if (m % 2 != 0) throw ValidationError("padded window length must be even");
  return FrequencyGrid(2.0 * kPi / (static_cast<double>(m) * input.step), m / 2 + 1);
}

KernelEstimate extract_kernel(const SlabConfig& slab, const FrequencyGrid& grid, const PropagationOptions& options) {
  const std::size_t bins = grid.size();
  const std::size_t m = 2 * (bins - 1);
  const double ds = kPi / grid.max();

  KernelEstimate k;
  k.step = ds;
  k.start = -static_cast<double>(m / 2) * ds;
  k.guard = 5.0 * ds;
  k.density.assign(m, 0.0);

  if (slab.thickness == 0.0 || slab.model.is_vacuum()) return k;
  check_resolution(slab.model, grid.spacing(), grid.max(), options.per_linewidth, options.coverage);

  const SlabSolver solver(slab);
  std::vector<Complex> values(m, Complex{0.0, 0.0});
  detail::parallel_for(bins - 1, options.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) {
      const double w = warped_frequency(j, m, ds);
      values[j] = 1.0 - solver.transmission(Complex{w, 0.0});
      if (j > 0) values[m - j] = 1.0 - solver.transmission(Complex{-w, 0.0});
    }
  });

  const std::vector<Complex> g = detail::complex_forward(values);
  const double norm = 1.0 / (static_cast<double>(m) * ds);
  double peak_re = 0.0;
  double peak_im = 0.0;
  for (const Complex& v : g) {
    peak_re = std::max(peak_re, std::abs(v.real()));
    peak_im = std::max(peak_im, std::abs(v.imag()));
  }
  k.imag_residue = peak_re > 0.0 ? peak_im / peak_re : 0.0;
  if (k.imag_residue > 1e-9) {
    throw NumericalGuardError("kernel_realness", k.imag_residue,
                              "kernel has a non-negligible imaginary part; 1 - tau is not conjugate-symmetric");
  }

  // Reorder so density[0] sits at s = -(m/2) ds.
  for (std::size_t i = 0; i < m; ++i) k.density[i] = g[(i + m / 2) % m].real() * norm;

  for (std::size_t i = 0; i < m; ++i) {
    const double mass = std::abs(k.density[i]) * ds;
    k.total_mass += mass;
    if (k.time(i) < -k.guard) k.negative_mass += mass;
  }
  return k;
}

CausalityReport assess_causality(const SlabConfig& slab, const PulseSpec& probe, const TimeGrid& grid,
                                 const CausalityOptions& options) {
  CausalityReport report;
  report.thresholds = options.thresholds;
  report.guard = options.guard_samples * grid.step;

  PulseSpec step = probe;
  step.kind = PulseKind::step_sine;
  const Waveform input = synthesize_pulse(step, grid);

  try {
    const Waveform out = propagate(input, slab, options.propagation);
    report.front_leakage = front_leakage(out, report.guard);
    report.leakage_available = true;
  } catch (const Error& e) {
    report.failures.push_back(fmt::format("propagate: {}", e.what()));
  }

  try {
    const KernelEstimate kernel =
        extract_kernel(slab, kernel_grid_for(input, options.propagation.pad_factor), options.propagation);
    report.kernel_ratio = kernel.negative_ratio();
    report.kernel_available = true;
  } catch (const Error& e) {
    report.failures.push_back(fmt::format("kernel: {}", e.what()));
  }

  try {
    const ComplexRect region = options.scan_region.value_or(default_scan_region(slab.model));
    const SingularityReport scan = scan_upper_half_plane(slab, region, options.scan_resolution);
    report.singularity_count = scan.singularity_count();
    if (!scan.straddles.empty()) {
      report.failures.push_back(fmt::format("scan: {} cells with inconsistent windings", scan.straddles.size()));
    } else {
      report.scan_available = true;
    }
  } catch (const Error& e) {
    report.failures.push_back(fmt::format("scan: {}", e.what()));
  }

  const CausalityThresholds& t = options.thresholds;
  int exceeded = 0;
  if (report.leakage_available && report.front_leakage > t.leakage) ++exceeded;
  if (report.kernel_available && report.kernel_ratio > t.kernel_ratio) ++exceeded;
  if (report.scan_available && report.singularity_count >= t.singularities) ++exceeded;

  if (!report.failures.empty() || exceeded == 1) {
    report.verdict = Verdict::inconclusive;
  } else if (exceeded >= 2) {
    report.verdict = Verdict::acausal;
  } else {
    report.verdict = Verdict::causal;
  }
  return report;
}

}  // namespace slabcausal
