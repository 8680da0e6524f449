#pragma once

#include <iosfwd>
#include <string>

#include "slabcausal/analyticity.hpp"
#include "slabcausal/slab.hpp"
#include "slabcausal/timedomain.hpp"

namespace slabcausal {

/// Multipliers applied on output: frequencies (and complex zeta) by
/// `frequency`, times and delays by `time`. Natural units by default.
struct UnitScale {
  double frequency = 1.0;
  double time = 1.0;
};

/// Columns omega,re_tau,im_tau,re_rho,im_rho,P,theta,t_delay.
void write_spectrum_csv(std::ostream& out, const SpectralResponse& response, const UnitScale& units = {});
std::string spectrum_json(const SpectralResponse& response, const UnitScale& units = {});

/// Columns t,V.
void write_waveform_csv(std::ostream& out, const Waveform& waveform, const UnitScale& units = {});

/// Columns s,g. g is per unit of s as written.
void write_kernel_csv(std::ostream& out, const KernelEstimate& kernel, const UnitScale& units = {});

std::string causality_json(const CausalityReport& report, const UnitScale& units = {});
std::string singularity_json(const SingularityReport& report, const UnitScale& units = {});

/// Columns re_zeta,im_zeta,re_value,im_value with value = tau(zeta).
void write_scan_grid_csv(std::ostream& out, const SingularityReport& report, const UnitScale& units = {});

std::string to_string(SingularityKind kind);
std::string to_string(Certificate c);

}  // namespace slabcausal
