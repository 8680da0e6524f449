#pragma once

#include <cstdint>
#include <vector>

#include "slabcausal/dielectric.hpp"
#include "slabcausal/refraction.hpp"
#include "slabcausal/types.hpp"

namespace slabcausal {

/// Homogeneous slab of thickness L (units of c / omega_ref) at normal incidence.
struct SlabConfig {
  double thickness = 0.0;
  DielectricModel model;
};

struct Amplitudes {
  Complex transmission;
  Complex reflection;
};

/// Single-slab scattering amplitudes, normalized so that an absent slab gives
/// tau = 1 and rho = 0. Holds the precomputed index evaluator; immutable.
class SlabSolver {
 public:
  explicit SlabSolver(SlabConfig slab, IndexOptions options = {});

  const SlabConfig& slab() const noexcept { return slab_; }
  const IndexEvaluator& index() const noexcept { return index_; }

  /// tau = 2 eta e^{-i zeta L} / (2 eta cos(phi) - i (1 + eta^2) sin(phi)), phi = zeta eta L.
  Complex transmission(Complex zeta) const;
  Complex reflection(Complex zeta) const;
  Amplitudes amplitudes(Complex zeta) const;

  /// 2 eta e^{i zeta L} / ((1 + eta^2) cos(phi) + 2 i eta sin(phi)), evaluated verbatim.
  Complex transmission_literal(Complex zeta) const;

  /// D / eta = 2 cos(s) - i zeta L (1 + eps) sin(s) / s with s^2 = zeta^2 L^2 eps.
  /// tau = 2 e^{-i zeta L} / F. Even in eta, hence free of the sqrt branch cut.
  Complex transmission_denominator(Complex zeta) const;

  /// Same amplitudes from the 2x2 characteristic-matrix product.
  Amplitudes transfer_matrix_amplitudes(Complex zeta) const;

 private:
  bool trivial() const noexcept { return slab_.thickness == 0.0 || slab_.model.is_vacuum(); }

  SlabConfig slab_;
  IndexEvaluator index_;
};

Complex transmission(const SlabConfig& slab, Complex zeta);
Complex reflection(const SlabConfig& slab, Complex zeta);

/// Per-sample status bits of a SpectralResponse.
enum SampleFlag : std::uint32_t {
  kSampleOk = 0,
  kSampleEvalFailed = 1u << 0,
  kSampleBranchCrossing = 1u << 1,
  kSamplePhaseStep = 1u << 2,
};

struct SpectralResponse {
  FrequencyGrid grid{1.0, 8};
  std::vector<Complex> epsilon;
  std::vector<Complex> eta;
  std::vector<Complex> tau;
  std::vector<Complex> rho;
  std::vector<double> power;
  std::vector<double> phase;
  std::vector<double> delay;
  std::vector<std::uint32_t> flags;
  /// False if any adjacent-sample phase step reached pi/2.
  bool phase_guard_ok = true;
  bool literal_eq17 = false;
};

struct SpectrumOptions {
  unsigned threads = 1;
  /// Fill tau with the verbatim textbook expression instead of the field-matched one.
  bool literal_eq17 = false;
};

SpectralResponse evaluate_spectrum(const SlabConfig& slab, const FrequencyGrid& grid,
                                   const SpectrumOptions& options = {});

/// dtheta/domega interpolated at omega; throws BoundaryError outside (0, omega_max).
double group_delay(const SpectralResponse& response, double omega);

}  // namespace slabcausal
