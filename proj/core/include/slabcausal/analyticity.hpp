#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "slabcausal/refraction.hpp"
#include "slabcausal/slab.hpp"
#include "slabcausal/types.hpp"

namespace slabcausal {

struct CellWinding {
  ComplexRect cell;
  int denominator_winding = 0;
  int epsilon_winding = 0;
};

struct LandscapeSample {
  Complex zeta;
  Complex value;
};

struct SingularityReport {
  ComplexRect region;
  std::size_t resolution = 0;
  /// Closed-form zeros and poles of eps inside the region.
  std::vector<BranchPoint> branch_points;
  /// Zeros of the transmission denominator (poles of tau) with Im zeta > 0.
  std::vector<Complex> denominator_zeros;
  /// Zeros of eps located by the contour scan, kept for cross-checking.
  std::vector<Complex> scanned_epsilon_zeros;
  /// Coarse cells with a nonzero winding of either function.
  std::vector<CellWinding> nonzero_cells;
  int denominator_winding = 0;
  int epsilon_winding = 0;
  std::size_t cells_scanned = 0;
  /// Cells whose refinement gave inconsistent windings.
  std::vector<ComplexRect> straddles;
  /// tau on the coarse lattice, for plotting.
  std::vector<LandscapeSample> landscape;

  std::size_t singularity_count() const noexcept;
};

struct ScanOptions {
  int max_depth = 8;
};

/// [-4 w_top, 4 w_top] x [1e-6, 4 w_top], w_top = max(Omega_j, wp) (1 for media without resonances).
ComplexRect default_scan_region(const DielectricModel& model);

/// Argument-principle scan of the transmission denominator and of eps over a
/// resolution x resolution lattice of cells, with quadtree refinement and
/// Newton location of every enclosed zero.
SingularityReport scan_upper_half_plane(const SlabConfig& slab, const ComplexRect& region,
                                        std::size_t resolution = 64, const ScanOptions& options = {});

enum class Certificate { analytic, singular, inconclusive };

Certificate certify(const SingularityReport& report);

struct Winding {
  double turns = 0.0;
  /// False if the contour passed through a zero or a non-finite value.
  bool clean = true;
};

/// Winding number of f around the rectangle boundary (counter-clockwise),
/// subdividing each edge until every phase increment is below pi/2.
Winding contour_winding(const std::function<Complex(Complex)>& f, const ComplexRect& rect,
                        std::size_t samples_per_side = 16);

}  // namespace slabcausal
