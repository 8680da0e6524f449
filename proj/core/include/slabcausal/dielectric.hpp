#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <variant>
#include <vector>

#include "slabcausal/types.hpp"

namespace slabcausal {

/// One damped oscillator term f * wp^2 / (Omega^2 - 2 i zeta gamma - zeta^2).
/// A negative strength describes an inverted (gain) population.
struct Resonance {
  double strength = 1.0;
  double frequency = 0.0;
  double damping = 0.0;
};

struct VacuumMedium {};

/// Non-dispersive lossless dielectric, eps(zeta) = value for every zeta.
struct ConstantMedium {
  double value = 1.0;
};

/// Sum of resonances sharing one plasma frequency.
struct OscillatorMedium {
  double plasma_frequency = 0.0;
  std::vector<Resonance> resonances;
};

/// Complex eps sampled on a strictly increasing real grid (omega >= 0).
/// Negative frequencies are served through eps(-w) = conj(eps(w)).
struct TabulatedMedium {
  std::vector<double> omega;
  std::vector<Complex> epsilon;
};

enum class ModelKind { vacuum, constant, oscillators, tabulated };

/// Closed-form or tabulated dielectric function. Immutable once built; the
/// factories validate every invariant and throw ValidationError otherwise.
class DielectricModel {
 public:
  using Variant = std::variant<VacuumMedium, ConstantMedium, OscillatorMedium, TabulatedMedium>;

  DielectricModel() = default;

  static DielectricModel vacuum();
  static DielectricModel constant(double epsilon);
  static DielectricModel oscillators(double plasma_frequency, std::vector<Resonance> resonances);
  static DielectricModel lorentz(double strength, double plasma_frequency, double frequency, double damping);
  static DielectricModel tabulated(std::vector<double> omega, std::vector<Complex> epsilon);

  /// Reads `omega,re_eps,im_eps` CSV with that exact header line.
  static DielectricModel read_csv(std::istream& in);
  static DielectricModel load_csv(const std::filesystem::path& path);

  ModelKind kind() const noexcept { return static_cast<ModelKind>(model_.index()); }
  const Variant& variant() const noexcept { return model_; }

  /// Highest characteristic frequency: max(Omega_j, wp) for oscillators, the
  /// table end for tabulated media, 0 otherwise.
  double top_frequency() const noexcept;
  /// Narrowest resonance damping; +inf when the model has no resonance.
  double min_linewidth() const noexcept;
  /// True when eps is identically 1.
  bool is_vacuum() const noexcept;

 private:
  explicit DielectricModel(Variant v) : model_(std::move(v)) {}
  Variant model_{VacuumMedium{}};
};

Complex eval_epsilon(const DielectricModel& model, Complex zeta);

/// d eps / d zeta for closed-form models. Throws UnsupportedModelError for tabulated media.
Complex eval_epsilon_derivative(const DielectricModel& model, Complex zeta);

/// Uniform real-frequency grid omega_n = n * spacing, n = 0..count-1.
class FrequencyGrid {
 public:
  FrequencyGrid(double spacing, std::size_t count);

  /// Grid that reaches `coverage` times the model's top frequency with
  /// `per_linewidth` samples across the narrowest damping.
  static FrequencyGrid for_model(const DielectricModel& model, double coverage = 20.0,
                                 double per_linewidth = 16.0);

  double spacing() const noexcept { return spacing_; }
  std::size_t size() const noexcept { return count_; }
  double omega(std::size_t n) const noexcept { return spacing_ * static_cast<double>(n); }
  double max() const noexcept { return omega(count_ - 1); }

  /// Throws ResolutionError if max() < coverage * top frequency.
  void check_covers(const DielectricModel& model, double coverage = 20.0) const;

 private:
  double spacing_;
  std::size_t count_;
};

/// Samples of omega * Im eps(omega + i0) on a grid, with the large-omega
/// series used to close the integrals beyond the grid end.
struct ImagSpectrum {
  FrequencyGrid grid;
  std::vector<double> omega_im_eps;
  /// Coefficients a_n of omega * Im eps ~ sum_n a_n omega^-n beyond grid.max().
  /// Empty means the tail is taken as zero.
  std::vector<double> tail_series;
  /// |Im eps| at grid.max() above which the spectrum is rejected.
  double tail_threshold = 1e-4;
};

ImagSpectrum sample_imag_spectrum(const DielectricModel& model, const FrequencyGrid& grid,
                                  double tail_threshold = 1e-4);

/// Coefficients of the large-|omega| expansion of omega * Im eps for an
/// oscillator model; empty for every other kind.
std::vector<double> high_frequency_series(const DielectricModel& model, std::size_t terms = 64);

/// Dispersion-relation reconstruction
///   eps(zeta) = 1 + (2/pi) int_0^inf omega Im eps(omega) / (omega^2 - zeta^2) d omega.
/// Real zeta is evaluated as a principal value at a grid sample (the imaginary
/// part then comes from the delta-function term).
Complex kk_reconstruct(const ImagSpectrum& spectrum, Complex zeta);

/// (2/pi) int_0^inf omega Im eps d omega; equals f * wp^2 for a single oscillator.
double sum_rule(const DielectricModel& model, const FrequencyGrid& grid, double tail_threshold = 1e-4);

struct PassivityResult {
  bool passive = true;
  double worst_value = 0.0;  ///< most negative omega * Im eps seen on the grid
  double worst_omega = 0.0;
  double tolerance = 0.0;
};

PassivityResult passivity_check(const DielectricModel& model, const FrequencyGrid& grid);

}  // namespace slabcausal
