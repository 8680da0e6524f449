#pragma once

#include <vector>

#include "slabcausal/dielectric.hpp"
#include "slabcausal/types.hpp"

namespace slabcausal {

enum class SingularityKind { zero_of_epsilon, pole_of_epsilon };

/// A zero or pole of eps, i.e. a branch point of eta = sqrt(eps).
struct BranchPoint {
  Complex location;
  SingularityKind kind = SingularityKind::zero_of_epsilon;
  bool in_upper_half_plane = false;
};

/// Every zero and pole of eps for an oscillator model, solved in closed form
/// (quadratic formula for one resonance, polynomial roots otherwise). Empty
/// for vacuum and constant media; throws UnsupportedModelError for tables.
std::vector<BranchPoint> epsilon_singularities(const DielectricModel& model);

/// The subset of epsilon_singularities() inside `region`, sorted by location.
std::vector<BranchPoint> find_branch_points(const DielectricModel& model, const ComplexRect& region);

struct IndexOptions {
  /// Queries closer than this to a branch point are rejected; paths passing
  /// closer are flagged as crossings.
  double branch_tolerance = 1e-6;
  /// Path start i*R with R = start_scale * max(top frequency, 1).
  double start_scale = 1e4;
};

struct IndexValue {
  Complex eta;
  /// The continuity path passed within tolerance of a branch point; the
  /// branch past it was re-seeded with the principal root.
  bool path_crossing = false;
};

/// Evaluates eta = sqrt(eps) with the branch fixed by continuity along the
/// straight path from i*R (where eta -> 1) to the query point. The branch
/// points are solved once at construction; the evaluator is immutable and
/// safe to share between threads.
class IndexEvaluator {
 public:
  explicit IndexEvaluator(DielectricModel model, IndexOptions options = {});

  IndexValue operator()(Complex zeta) const;

  const DielectricModel& model() const noexcept { return model_; }
  const std::vector<BranchPoint>& singularities() const noexcept { return singularities_; }

 private:
  Complex walk(Complex from, Complex to, Complex eta_start) const;

  DielectricModel model_;
  IndexOptions options_;
  std::vector<BranchPoint> singularities_;
  double start_radius_ = 1.0;
};

IndexValue eval_eta(const DielectricModel& model, Complex zeta, const IndexOptions& options = {});

}  // namespace slabcausal
