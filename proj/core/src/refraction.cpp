#include "slabcausal/refraction.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include <fmt/format.h>

#include "slabcausal/errors.hpp"
#include "slabcausal/polynomial.hpp"

namespace slabcausal {
namespace {

const Complex kI{0.0, 1.0};

// Resonances with identical (Omega, gamma) share a pole; fold them together so
// the numerator polynomial has no spurious common roots with the denominator.
std::vector<Resonance> merged_resonances(const OscillatorMedium& m) {
  std::map<std::pair<double, double>, double> merged;
  for (const auto& r : m.resonances) merged[{r.frequency, r.damping}] += r.strength;
  std::vector<Resonance> out;
  for (const auto& [key, strength] : merged) {
    if (strength != 0.0) out.push_back(Resonance{strength, key.first, key.second});
  }
  return out;
}

// Omega^2 - 2 i gamma zeta - zeta^2, ascending coefficients.
Polynomial resonance_polynomial(const Resonance& r) {
  return Polynomial({Complex{r.frequency * r.frequency, 0.0}, -2.0 * kI * r.damping, Complex{-1.0, 0.0}});
}

Complex polish_zero(const DielectricModel& model, Complex z) {
  for (int it = 0; it < 8; ++it) {
    const Complex d = eval_epsilon_derivative(model, z);
    if (d == Complex{0.0, 0.0}) break;
    const Complex step = eval_epsilon(model, z) / d;
    z -= step;
    if (std::abs(step) < 1e-16 * std::max(1.0, std::abs(z))) break;
  }
  return z;
}

bool location_less(const BranchPoint& a, const BranchPoint& b) {
  if (a.location.real() != b.location.real()) return a.location.real() < b.location.real();
  return a.location.imag() < b.location.imag();
}

}  // namespace

std::vector<BranchPoint> epsilon_singularities(const DielectricModel& model) {
  if (model.kind() == ModelKind::tabulated) {
    throw UnsupportedModelError("tabulated_continuation", 0.0,
                                "branch points need a closed-form model; tabulated media are not continued off axis");
  }
  const auto* m = std::get_if<OscillatorMedium>(&model.variant());
  if (m == nullptr) return {};
  const auto res = merged_resonances(*m);
  if (res.empty()) return {};
  const double wp2 = m->plasma_frequency * m->plasma_frequency;

  std::vector<BranchPoint> out;
  auto push = [&](Complex z, SingularityKind kind) {
    out.push_back(BranchPoint{z, kind, z.imag() > 0.0});
  };

  // Poles: zeta^2 + 2 i gamma zeta - Omega^2 = 0.
  for (const auto& r : res) {
    auto [p1, p2] = quadratic_roots(2.0 * kI * r.damping, Complex{-r.frequency * r.frequency, 0.0});
    push(p1, SingularityKind::pole_of_epsilon);
    push(p2, SingularityKind::pole_of_epsilon);
  }

  // Zeros.
  if (res.size() == 1) {
    const auto& r = res.front();
    auto [z1, z2] =
        quadratic_roots(2.0 * kI * r.damping, Complex{-(r.frequency * r.frequency + r.strength * wp2), 0.0});
    push(z1, SingularityKind::zero_of_epsilon);
    push(z2, SingularityKind::zero_of_epsilon);
  } else {
    Polynomial denominator({Complex{1.0, 0.0}});
    for (const auto& r : res) denominator = denominator * resonance_polynomial(r);
    Polynomial numerator = denominator;
    for (std::size_t j = 0; j < res.size(); ++j) {
      Polynomial others({Complex{res[j].strength * wp2, 0.0}});
      for (std::size_t k = 0; k < res.size(); ++k)
        if (k != j) others = others * resonance_polynomial(res[k]);
      numerator = numerator + others;
    }
    for (Complex z : numerator.roots()) push(polish_zero(model, z), SingularityKind::zero_of_epsilon);
  }
  std::sort(out.begin(), out.end(), location_less);
  return out;
}

std::vector<BranchPoint> find_branch_points(const DielectricModel& model, const ComplexRect& region) {
  std::vector<BranchPoint> all = epsilon_singularities(model);
  std::vector<BranchPoint> inside;
  std::copy_if(all.begin(), all.end(), std::back_inserter(inside),
               [&](const BranchPoint& b) { return region.contains(b.location); });
  return inside;
}

IndexEvaluator::IndexEvaluator(DielectricModel model, IndexOptions options)
    : model_(std::move(model)), options_(options) {
  if (model_.kind() == ModelKind::oscillators) {
    singularities_ = epsilon_singularities(model_);
  }
  start_radius_ = options_.start_scale * std::max(model_.top_frequency(), 1.0);
}

Complex IndexEvaluator::walk(Complex from, Complex to, Complex eta) const {
  const Complex dir = to - from;
  Complex eps = eval_epsilon(model_, from);
  double t = 0.0;
  double h = 0.125;
  while (t < 1.0) {
    h = std::min(h, 1.0 - t);
    Complex next_eps;
    bool last = false;
    for (;;) {
      last = t + h >= 1.0;
      const Complex z = last ? to : from + (t + h) * dir;
      next_eps = eval_epsilon(model_, z);
      if (std::abs(next_eps - eps) <= 0.1 * std::abs(eps) || h < 1e-15) break;
      h *= 0.5;
    }
    const Complex s = std::sqrt(next_eps);
    eta = std::abs(s - eta) <= std::abs(s + eta) ? s : -s;
    eps = next_eps;
    t = last ? 1.0 : t + h;
    h *= 2.0;
  }
  return eta;
}

IndexValue IndexEvaluator::operator()(Complex zeta) const {
  switch (model_.kind()) {
    case ModelKind::vacuum:
      return {Complex{1.0, 0.0}, false};
    case ModelKind::constant:
      return {std::sqrt(eval_epsilon(model_, zeta)), false};
    case ModelKind::tabulated: {
      // Real axis only: the root continuous with eta -> 1, mirrored for omega < 0.
      const Complex eps = eval_epsilon(model_, zeta);
      if (zeta.real() < 0.0) return {std::conj(std::sqrt(std::conj(eps))), false};
      return {std::sqrt(eps), false};
    }
    case ModelKind::oscillators:
      break;
  }
  if (singularities_.empty()) return {Complex{1.0, 0.0}, false};

  const double tol = options_.branch_tolerance;
  for (const auto& b : singularities_) {
    const double d = std::abs(zeta - b.location);
    if (d < tol) {
      throw BranchPointError("branch_point_proximity", d,
                             fmt::format("eta requested within {:.3g} of a branch point at {}{:+}i", d,
                                         b.location.real(), b.location.imag()));
    }
  }

  const Complex start{0.0, start_radius_};
  const Complex dir = zeta - start;
  const double len2 = std::norm(dir);

  // Parameters along the path where it grazes a branch point.
  std::vector<double> crossings;
  for (const auto& b : singularities_) {
    const double t = std::clamp(((b.location - start) * std::conj(dir)).real() / len2, 0.0, 1.0);
    if (std::abs(start + t * dir - b.location) < tol) crossings.push_back(t);
  }
  std::sort(crossings.begin(), crossings.end());

  IndexValue result{std::sqrt(eval_epsilon(model_, start)), !crossings.empty()};
  Complex from = start;
  const double skip = 2.0 * tol / std::sqrt(len2);
  for (double t : crossings) {
    const Complex before = start + std::max(t - skip, 0.0) * dir;
    result.eta = walk(from, before, result.eta);
    from = start + std::min(t + skip, 1.0) * dir;
    result.eta = std::sqrt(eval_epsilon(model_, from));
  }
  result.eta = walk(from, zeta, result.eta);
  return result;
}

IndexValue eval_eta(const DielectricModel& model, Complex zeta, const IndexOptions& options) {
  return IndexEvaluator(model, options)(zeta);
}

}  // namespace slabcausal
