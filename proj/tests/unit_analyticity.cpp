#include <cmath>

#include "doctest.h"
#include "slabcausal/analyticity.hpp"
#include "slabcausal/errors.hpp"

using namespace slabcausal;

namespace {

const ComplexRect kRegion{-5.0, 5.0, 0.01, 5.0};

}  // namespace

TEST_CASE("vacuum scan is empty") {
  const auto r = scan_upper_half_plane(SlabConfig{1.0, DielectricModel::vacuum()}, kRegion, 32);
  CHECK(r.singularity_count() == 0);
  CHECK(r.nonzero_cells.empty());
  CHECK(r.denominator_winding == 0);
  CHECK(r.epsilon_winding == 0);
  CHECK(certify(r) == Certificate::analytic);
}

TEST_CASE("passive line is analytic in the upper half plane") {
  const auto r = scan_upper_half_plane(SlabConfig{5.0, DielectricModel::lorentz(1.0, 1.0, 2.0, 0.1)}, kRegion, 64);
  CHECK(r.singularity_count() == 0);
  CHECK(r.straddles.empty());
  CHECK(certify(r) == Certificate::analytic);
  CHECK(r.cells_scanned == 64 * 64);
}

TEST_CASE("inverted line: eps zero and transmission poles are found") {
  const SlabConfig slab{1.0, DielectricModel::lorentz(-1.0, 2.0, 1.0, 0.1)};
  const auto r = scan_upper_half_plane(slab, default_scan_region(slab.model));
  REQUIRE(r.scanned_epsilon_zeros.size() == 1);
  CHECK(std::abs(r.scanned_epsilon_zeros[0] - Complex{0.0, std::sqrt(3.01) - 0.1}) < 1e-6);
  REQUIRE(r.branch_points.size() == 1);
  CHECK(r.denominator_zeros.size() == 4);
  for (Complex z : r.denominator_zeros) {
    CHECK(z.imag() > 0.0);
    CHECK(std::abs(SlabSolver(slab).transmission_denominator(z)) < 1e-9);
  }
  CHECK(certify(r) == Certificate::singular);
}

TEST_CASE("winding is additive over quadrants") {
  const auto model = DielectricModel::lorentz(-1.0, 2.0, 1.0, 0.1);
  auto eps = [&](Complex z) { return eval_epsilon(model, z); };
  const ComplexRect big{-1.03, 0.97, 0.51, 2.49};
  const double xm = -0.03;
  const double ym = 1.21;
  const Winding whole = contour_winding(eps, big);
  int parts = 0;
  for (const ComplexRect& q : {ComplexRect{big.re_min, xm, big.im_min, ym}, ComplexRect{xm, big.re_max, big.im_min, ym},
                               ComplexRect{big.re_min, xm, ym, big.im_max}, ComplexRect{xm, big.re_max, ym, big.im_max}}) {
    const Winding w = contour_winding(eps, q);
    CHECK(w.clean);
    parts += static_cast<int>(std::lround(w.turns));
  }
  CHECK(std::lround(whole.turns) == 1);
  CHECK(parts == 1);
}

TEST_CASE("contour through a zero is flagged") {
  auto f = [](Complex z) { return z - Complex{0.5, 0.0}; };
  const Winding w = contour_winding(f, ComplexRect{0.0, 1.0, 0.0, 1.0});
  CHECK_FALSE(w.clean);
}

TEST_CASE("certificate reports straddles as inconclusive") {
  SingularityReport r;
  CHECK(certify(r) == Certificate::analytic);
  r.straddles.push_back(ComplexRect{0.0, 1.0, 0.1, 1.0});
  CHECK(certify(r) == Certificate::inconclusive);
  SingularityReport s;
  s.branch_points.push_back(BranchPoint{Complex{0.0, 1.0}, SingularityKind::zero_of_epsilon, true});
  CHECK(certify(s) == Certificate::singular);
}

TEST_CASE("scan preconditions") {
  const SlabConfig slab{1.0, DielectricModel::vacuum()};
  CHECK_THROWS_AS(scan_upper_half_plane(slab, ComplexRect{-1.0, 1.0, 0.0, 1.0}, 32), ValidationError);
  CHECK_THROWS_AS(scan_upper_half_plane(slab, kRegion, 16), ValidationError);
  const SlabConfig table{1.0, DielectricModel::tabulated({0.0, 1.0}, {Complex{2.0, 0.0}, Complex{2.0, 0.0}})};
  CHECK_THROWS_AS(scan_upper_half_plane(table, kRegion, 32), UnsupportedModelError);
}

TEST_CASE("scanner agrees with closed-form eps zeros for several lines") {
  const auto model = DielectricModel::oscillators(2.0, {Resonance{-0.8, 0.7, 0.1}, Resonance{0.5, 1.8, 0.2}});
  const SlabConfig slab{0.7, model};
  const auto region = default_scan_region(model);
  const auto r = scan_upper_half_plane(slab, region);
  const auto closed = find_branch_points(model, region);
  REQUIRE(r.scanned_epsilon_zeros.size() == closed.size());
  for (std::size_t i = 0; i < closed.size(); ++i) {
    CHECK(std::abs(r.scanned_epsilon_zeros[i] - closed[i].location) < 1e-6);
  }
}
