#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "slabcausal/errors.hpp"
#include "slabcausal/timedomain.hpp"
#include "support/oracles.hpp"

using namespace slabcausal;

namespace {

const SlabConfig kPassive{5.0, DielectricModel::lorentz(1.0, 1.0, 2.0, 0.1)};
const SlabConfig kInverted{1.0, DielectricModel::lorentz(-1.0, 2.0, 1.0, 0.1)};

TimeGrid centred(std::size_t n, double dt, double front = 0.0) {
  return TimeGrid{front - 0.5 * dt * static_cast<double>(n), dt, n};
}

double peak(const std::vector<double>& v) {
  double p = 0.0;
  for (double x : v) p = std::max(p, std::abs(x));
  return p;
}

}  // namespace

TEST_CASE("step sine is exactly zero before its front") {
  PulseSpec p;
  p.carrier = 1.0;
  const Waveform w = synthesize_pulse(p, centred(1024, 0.1));
  REQUIRE(w.front_time);
  for (std::size_t n = 0; n < w.samples.size(); ++n) {
    if (w.time(n) < 0.0) CHECK(w.samples[n] == 0.0);
  }
}

TEST_CASE("truncated sine with no turn-on equals the step sine") {
  PulseSpec a;
  a.carrier = 1.3;
  PulseSpec b = a;
  b.kind = PulseKind::truncated_sine;
  b.turn_on = 0.0;
  const auto grid = centred(512, 0.05);
  CHECK(synthesize_pulse(a, grid).samples == synthesize_pulse(b, grid).samples);
}

TEST_CASE("gaussian energy matches the closed form") {
  PulseSpec p;
  p.kind = PulseKind::gaussian;
  p.carrier = 1.0;
  p.width = 3.0;
  const Waveform w = synthesize_pulse(p, centred(4096, 0.05));
  CHECK_FALSE(w.front_time);
  const double expected = oracle::gaussian_energy(1.0, 3.0, 1.0);
  CHECK(std::abs(w.energy() - expected) / expected < 1e-6);
}

TEST_CASE("pulse synthesis guards") {
  PulseSpec p;
  p.carrier = 20.0;
  CHECK_THROWS_AS(synthesize_pulse(p, centred(512, 0.1)), AliasingError);
  p.carrier = 1.0;
  p.kind = PulseKind::gaussian;
  p.width = 50.0;
  CHECK_THROWS_AS(synthesize_pulse(p, centred(512, 0.1)), ValidationError);
  p.carrier = -1.0;
  CHECK_THROWS_AS(synthesize_pulse(p, centred(512, 0.1)), ValidationError);
}

TEST_CASE("vacuum propagation returns the input") {
  PulseSpec p;
  p.carrier = 1.0;
  const Waveform in = synthesize_pulse(p, centred(2048, 0.05));
  const Waveform out = propagate(in, SlabConfig{2.0, DielectricModel::vacuum()});
  const std::size_t lead = (out.samples.size() - in.samples.size()) / 2;
  for (std::size_t n = 0; n < in.samples.size(); ++n) CHECK(std::abs(out.samples[lead + n] - in.samples[n]) <= 1e-12);
  CHECK(front_leakage(out, 0.5) == 0.0);
}

TEST_CASE("propagation is linear and shift invariant") {
  const SlabConfig& slab = kPassive;
  const auto grid = centred(8192, 0.05);
  PulseSpec a;
  a.carrier = 1.0;
  PulseSpec b;
  b.kind = PulseKind::gaussian;
  b.carrier = 2.0;
  b.width = 2.0;
  const Waveform wa = synthesize_pulse(a, grid);
  const Waveform wb = synthesize_pulse(b, grid);
  oracle::Draw draw(5);
  const double ca = draw.uniform(-2.0, 2.0);
  const double cb = draw.uniform(-2.0, 2.0);
  Waveform mix = wa;
  for (std::size_t n = 0; n < mix.samples.size(); ++n) mix.samples[n] = ca * wa.samples[n] + cb * wb.samples[n];
  const Waveform oa = propagate(wa, slab);
  const Waveform ob = propagate(wb, slab);
  const Waveform om = propagate(mix, slab);
  const double scale = peak(om.samples);
  for (std::size_t n = 0; n < om.samples.size(); ++n) {
    CHECK(std::abs(om.samples[n] - (ca * oa.samples[n] + cb * ob.samples[n])) <= 1e-10 * scale);
  }

  // Shift by k samples inside the same window.
  const std::size_t k = 37;
  Waveform shifted = wb;
  std::fill(shifted.samples.begin(), shifted.samples.end(), 0.0);
  std::copy(wb.samples.begin(), wb.samples.end() - static_cast<std::ptrdiff_t>(k), shifted.samples.begin() + static_cast<std::ptrdiff_t>(k));
  const Waveform os = propagate(shifted, slab);
  const double sb = peak(ob.samples);
  for (std::size_t n = k; n < os.samples.size(); ++n) CHECK(std::abs(os.samples[n] - ob.samples[n - k]) <= 1e-10 * sb);
}

TEST_CASE("propagation satisfies Parseval with the sampled power spectrum") {
  PulseSpec p;
  p.kind = PulseKind::gaussian;
  p.carrier = 2.0;
  p.width = 6.0;
  const auto grid = centred(8192, 0.05);
  const Waveform in = synthesize_pulse(p, grid);
  const Waveform out = propagate(in, kPassive);

  const std::size_t m = out.samples.size();
  std::vector<double> padded(m, 0.0);
  std::copy(in.samples.begin(), in.samples.end(), padded.begin() + static_cast<std::ptrdiff_t>((m - in.samples.size()) / 2));
  const auto spectrum = oracle::full_spectrum(padded);
  const SlabSolver solver(kPassive);
  double predicted = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t kk = k <= m / 2 ? k : m - k;
    const double w = 2.0 / in.step * std::tan(kPi * static_cast<double>(kk) / static_cast<double>(m));
    const double power = kk == m / 2 ? 1.0 : std::norm(solver.transmission(Complex{w, 0.0}));
    predicted += power * std::norm(spectrum[k]);
  }
  predicted *= in.step / static_cast<double>(m);
  CHECK(std::abs(out.energy() - predicted) / predicted < 1e-9);
}

TEST_CASE("under-resolved linewidth raises ResolutionError") {
  PulseSpec p;
  p.carrier = 2.0;
  const Waveform in = synthesize_pulse(p, centred(1024, 0.05));
  CHECK_THROWS_AS(propagate(in, kPassive), ResolutionError);
  const SlabConfig undamped{1.0, DielectricModel::oscillators(1.0, {Resonance{1.0, 2.0, 0.0}})};
  CHECK_THROWS_AS(propagate(synthesize_pulse(p, centred(8192, 0.05)), undamped), ResolutionError);
}

TEST_CASE("too little padding raises WraparoundError") {
  PulseSpec p;
  p.carrier = 2.0;
  const Waveform in = synthesize_pulse(p, centred(32768, 0.05));
  PropagationOptions opts;
  opts.pad_factor = 1;
  CHECK_THROWS_AS(propagate(in, kPassive, opts), WraparoundError);
}

TEST_CASE("front leakage needs a front") {
  Waveform w;
  w.samples.assign(16, 1.0);
  CHECK_THROWS_AS(front_leakage(w, 0.0), ValidationError);
}

TEST_CASE("passive kernel is supported on non-negative delays") {
  PulseSpec p;
  p.carrier = 2.0;
  const Waveform in = synthesize_pulse(p, centred(8192, 0.05));
  const KernelEstimate k = extract_kernel(kPassive, kernel_grid_for(in));
  CHECK(k.total_mass > 0.0);
  CHECK(k.negative_ratio() < 1e-6);
  CHECK(k.imag_residue < 1e-9);
  CHECK(k.density.size() == 4 * 8192);
}

TEST_CASE("vacuum kernel vanishes") {
  const KernelEstimate k = extract_kernel(SlabConfig{1.0, DielectricModel::vacuum()}, FrequencyGrid(0.01, 1025));
  CHECK(k.total_mass == 0.0);
  CHECK(k.negative_mass == 0.0);
}

TEST_CASE("inverted kernel carries anticausal mass") {
  PulseSpec p;
  p.carrier = 1.0;
  const Waveform in = synthesize_pulse(p, centred(8192, 0.05));
  const KernelEstimate k = extract_kernel(kInverted, kernel_grid_for(in));
  CHECK(k.negative_ratio() > 1e-2);
}

TEST_CASE("output equals input minus its convolution with the kernel") {
  PulseSpec p;
  p.carrier = 2.0;
  const Waveform in = synthesize_pulse(p, centred(8192, 0.05));
  const Waveform out = propagate(in, kPassive);
  const KernelEstimate k = extract_kernel(kPassive, kernel_grid_for(in));
  // Keep the kernel where it is not negligible to bound the direct sum.
  const double gmax = peak(k.density);
  std::vector<double> g = k.density;
  for (double& v : g)
    if (std::abs(v) < 1e-13 * gmax) v = 0.0;
  const auto direct = oracle::subtract_convolution(in.samples, in.start, in.step, g, k.start, k.step, out.start,
                                                   out.samples.size());
  double err = 0.0;
  for (std::size_t n = 0; n < direct.size(); ++n) err = std::max(err, std::abs(direct[n] - out.samples[n]));
  CHECK(err / peak(out.samples) < 1e-6);
}

TEST_CASE("verdicts for vacuum, passive and inverted slabs") {
  PulseSpec p;
  p.carrier = 2.0;
  const auto vac = assess_causality(SlabConfig{1.0, DielectricModel::vacuum()}, p, centred(4096, 0.05));
  CHECK(vac.verdict == Verdict::causal);
  CHECK(vac.front_leakage == 0.0);
  CHECK(vac.kernel_ratio == 0.0);
  CHECK(vac.singularity_count == 0);

  const auto passive = assess_causality(kPassive, p, centred(8192, 0.05));
  CHECK(passive.verdict == Verdict::causal);
  CHECK(passive.failures.empty());

  p.carrier = 1.0;
  const auto inverted = assess_causality(kInverted, p, centred(8192, 0.05));
  CHECK(inverted.verdict == Verdict::acausal);
  CHECK(inverted.front_leakage > 1e-4);
  CHECK(inverted.kernel_ratio > 1e-3);
  CHECK(inverted.singularity_count >= 1);
}

TEST_CASE("a failed constituent makes the verdict inconclusive") {
  PulseSpec p;
  p.carrier = 2.0;
  const auto r = assess_causality(kPassive, p, centred(1024, 0.05));
  CHECK(r.verdict == Verdict::inconclusive);
  CHECK_FALSE(r.failures.empty());
}
