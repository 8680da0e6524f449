#include "slabcausal/slab.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "parallel.hpp"
#include "slabcausal/errors.hpp"

namespace slabcausal {
namespace {

const Complex kI{0.0, 1.0};
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Field-matched amplitudes written with e^{+-2 i phi} so that the factor whose
// modulus is <= 1 is the one exponentiated (no overflow for thick lossy or
// gain slabs). eta - 1 is formed as (eps - 1) / (eta + 1) to keep the
// high-frequency phase accurate.
Amplitudes field_matched(Complex zeta, Complex eta, Complex eps, double length) {
  const Complex eta_plus = eta + 1.0;
  const Complex eta_minus = std::abs(eta_plus) > 1e-8 ? (eps - 1.0) / eta_plus : eta - 1.0;
  const Complex phi = zeta * eta * length;
  const Complex up = eta_plus * eta_plus;
  const Complex um = eta_minus * eta_minus;

  Complex den;
  Complex tau_num;
  Complex rho_num;
  double scale;
  if (phi.imag() >= 0.0) {
    const Complex e2 = std::exp(2.0 * kI * phi);
    den = up - um * e2;
    tau_num = 4.0 * eta * std::exp(kI * zeta * length * eta_minus);
    rho_num = (eps - 1.0) * (e2 - 1.0);
    scale = std::abs(up) + std::abs(um) * std::abs(e2);
  } else {
    const Complex e2 = std::exp(-2.0 * kI * phi);
    den = up * e2 - um;
    tau_num = 4.0 * eta * std::exp(-kI * zeta * length * (1.0 + eta));
    rho_num = (eps - 1.0) * (1.0 - e2);
    scale = std::abs(up) * std::abs(e2) + std::abs(um);
  }
  if (!(std::abs(den) >= 1e-14 * scale)) {
    throw DenominatorZeroError("transmission_denominator", std::abs(den),
                               fmt::format("slab denominator vanishes at zeta = {}{:+}i", zeta.real(), zeta.imag()));
  }
  return {tau_num / den, rho_num / den};
}

}  // namespace

SlabSolver::SlabSolver(SlabConfig slab, IndexOptions options)
    : slab_(std::move(slab)), index_(slab_.model, options) {
  if (!(slab_.thickness >= 0.0) || !std::isfinite(slab_.thickness)) {
    throw ValidationError(fmt::format("slab thickness must be finite and >= 0, got {}", slab_.thickness));
  }
}

Amplitudes SlabSolver::amplitudes(Complex zeta) const {
  if (trivial()) return {Complex{1.0, 0.0}, Complex{0.0, 0.0}};
  const Complex eps = eval_epsilon(slab_.model, zeta);
  const Complex eta = index_(zeta).eta;
  return field_matched(zeta, eta, eps, slab_.thickness);
}

Complex SlabSolver::transmission(Complex zeta) const { return amplitudes(zeta).transmission; }

Complex SlabSolver::reflection(Complex zeta) const { return amplitudes(zeta).reflection; }

Complex SlabSolver::transmission_literal(Complex zeta) const {
  const Complex eta = index_(zeta).eta;
  const Complex phi = zeta * eta * slab_.thickness;
  const Complex den = (1.0 + eta * eta) * std::cos(phi) + 2.0 * kI * eta * std::sin(phi);
  if (den == Complex{0.0, 0.0}) {
    throw DenominatorZeroError("literal_denominator", 0.0, "literal transmission denominator vanishes");
  }
  return 2.0 * eta * std::exp(kI * zeta * slab_.thickness) / den;
}

Complex SlabSolver::transmission_denominator(Complex zeta) const {
  const double length = slab_.thickness;
  const Complex eps = eval_epsilon(slab_.model, zeta);
  const Complex w = zeta * zeta * length * length * eps;
  const Complex s = std::sqrt(w);
  Complex c;
  Complex sinc;
  if (std::abs(s) < 1e-3) {
    c = 1.0 - w / 2.0 + w * w / 24.0 - w * w * w / 720.0;
    sinc = 1.0 - w / 6.0 + w * w / 120.0 - w * w * w / 5040.0;
  } else {
    c = std::cos(s);
    sinc = std::sin(s) / s;
  }
  return 2.0 * c - kI * zeta * length * (1.0 + eps) * sinc;
}

Amplitudes SlabSolver::transfer_matrix_amplitudes(Complex zeta) const {
  const double length = slab_.thickness;
  const Complex eta = slab_.model.is_vacuum() ? Complex{1.0, 0.0} : index_(zeta).eta;
  const Complex phi = zeta * eta * length;
  // Characteristic matrix mapping (V, V'/(i zeta)) across the layer.
  const Complex a = std::cos(phi);
  const Complex b = kI * std::sin(phi) / eta;
  const Complex c = kI * eta * std::sin(phi);
  const Complex d = std::cos(phi);
  // M (1 + rho, 1 - rho)^T = tau e^{i zeta L} (1, 1)^T
  const Complex rho = -(a + b - c - d) / (a - b - c + d);
  const Complex out = a + b + rho * (a - b);
  return {out * std::exp(-kI * zeta * length), rho};
}

Complex transmission(const SlabConfig& slab, Complex zeta) { return SlabSolver(slab).transmission(zeta); }

Complex reflection(const SlabConfig& slab, Complex zeta) { return SlabSolver(slab).reflection(zeta); }

SpectralResponse evaluate_spectrum(const SlabConfig& slab, const FrequencyGrid& grid,
                                   const SpectrumOptions& options) {
  const SlabSolver solver(slab);
  const std::size_t n = grid.size();
  SpectralResponse r;
  r.grid = grid;
  r.literal_eq17 = options.literal_eq17;
  r.epsilon.assign(n, Complex{kNaN, kNaN});
  r.eta.assign(n, Complex{kNaN, kNaN});
  r.tau.assign(n, Complex{kNaN, kNaN});
  r.rho.assign(n, Complex{kNaN, kNaN});
  r.power.assign(n, kNaN);
  r.phase.assign(n, kNaN);
  r.delay.assign(n, kNaN);
  r.flags.assign(n, kSampleOk);

  detail::parallel_for(n, options.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) {
      const Complex zeta{grid.omega(j), 0.0};
      try {
        r.epsilon[j] = eval_epsilon(slab.model, zeta);
        const IndexValue eta = solver.index()(zeta);
        r.eta[j] = eta.eta;
        if (eta.path_crossing) r.flags[j] |= kSampleBranchCrossing;
        if (options.literal_eq17) {
          r.tau[j] = solver.transmission_literal(zeta);
          r.rho[j] = solver.reflection(zeta);
        } else {
          const Amplitudes a = solver.amplitudes(zeta);
          r.tau[j] = a.transmission;
          r.rho[j] = a.reflection;
        }
        r.power[j] = std::norm(r.tau[j]);
      } catch (const Error&) {
        r.flags[j] |= kSampleEvalFailed;
      }
    }
  });

  // Cumulative unwrapping from omega = 0.
  std::ptrdiff_t prev = -1;
  for (std::size_t j = 0; j < n; ++j) {
    if (r.flags[j] & kSampleEvalFailed) continue;
    if (prev < 0) {
      r.phase[j] = std::arg(r.tau[j]);
    } else {
      const auto p = static_cast<std::size_t>(prev);
      const double step = std::arg(r.tau[j] * std::conj(r.tau[p]));
      if (std::abs(step) >= kPi / 2.0) {
        r.flags[j] |= kSamplePhaseStep;
        r.phase_guard_ok = false;
      }
      r.phase[j] = r.phase[p] + step;
    }
    prev = static_cast<std::ptrdiff_t>(j);
  }

  // Group delay: 5-point central stencil using theta(-w) = -theta(w) below the
  // grid start, 3-point near the top edge.
  const double h = grid.spacing();
  auto theta = [&](std::ptrdiff_t j) {
    return j < 0 ? -r.phase[static_cast<std::size_t>(-j)] : r.phase[static_cast<std::size_t>(j)];
  };
  for (std::size_t j = 0; j < n; ++j) {
    const auto i = static_cast<std::ptrdiff_t>(j);
    if (j + 2 < n) {
      r.delay[j] = (theta(i - 2) - 8.0 * theta(i - 1) + 8.0 * theta(i + 1) - theta(i + 2)) / (12.0 * h);
    } else if (j + 1 < n) {
      r.delay[j] = (theta(i + 1) - theta(i - 1)) / (2.0 * h);
    } else {
      r.delay[j] = (3.0 * theta(i) - 4.0 * theta(i - 1) + theta(i - 2)) / (2.0 * h);
    }
  }
  return r;
}

double group_delay(const SpectralResponse& response, double omega) {
  const FrequencyGrid& grid = response.grid;
  if (!(omega > 0.0 && omega < grid.max())) {
    throw BoundaryError("group_delay_boundary", omega,
                        fmt::format("group delay needs 0 < omega < {}", grid.max()));
  }
  const double pos = omega / grid.spacing();
  const auto j = static_cast<std::size_t>(std::floor(pos));
  const double u = pos - static_cast<double>(j);
  if (j + 1 >= grid.size()) return response.delay.back();
  return (1.0 - u) * response.delay[j] + u * response.delay[j + 1];
}

}  // namespace slabcausal
