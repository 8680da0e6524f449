#include <cmath>
#include <sstream>

#include "doctest.h"
#include "slabcausal/dielectric.hpp"
#include "slabcausal/errors.hpp"
#include "slabcausal/polynomial.hpp"
#include "support/oracles.hpp"

using namespace slabcausal;

namespace {

const DielectricModel kPassive = DielectricModel::lorentz(1.0, 1.0, 2.0, 0.1);
const DielectricModel kInverted = DielectricModel::lorentz(-1.0, 2.0, 1.0, 0.1);

double rel(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("vacuum permittivity is one everywhere") {
  const auto vac = DielectricModel::vacuum();
  for (Complex z : {Complex{0.0, 0.0}, Complex{3.0, 0.0}, Complex{-1.5, 2.0}}) {
    CHECK(eval_epsilon(vac, z) == Complex{1.0, 0.0});
  }
  CHECK(vac.is_vacuum());
}

TEST_CASE("oscillator permittivity matches a direct evaluation") {
  oracle::Draw draw(11);
  for (int k = 0; k < 200; ++k) {
    const double wp = draw.uniform(0.3, 2.0);
    std::vector<oracle::Line> lines;
    std::vector<Resonance> res;
    const int count = draw.integer(1, 3);
    for (int j = 0; j < count; ++j) {
      oracle::Line l{draw.uniform(-1.0, 2.0), draw.uniform(0.2, 3.0), draw.uniform(0.05, 0.5)};
      lines.push_back(l);
      res.push_back(Resonance{l.strength, l.frequency, l.damping});
    }
    const auto model = DielectricModel::oscillators(wp, res);
    const Complex z{draw.uniform(-5.0, 5.0), draw.uniform(0.0, 5.0)};
    CHECK(rel(eval_epsilon(model, z), oracle::epsilon(wp, lines, z)) < 1e-14);
  }
}

TEST_CASE("permittivity is conjugate-symmetric on the real axis") {
  for (double w : {0.3, 1.9, 2.0, 7.5}) {
    CHECK(eval_epsilon(kPassive, Complex{-w, 0.0}) == std::conj(eval_epsilon(kPassive, Complex{w, 0.0})));
  }
}

TEST_CASE("derivative agrees with a central difference") {
  const Complex z{1.3, 0.4};
  const double h = 1e-6;
  const Complex fd = (eval_epsilon(kInverted, z + h) - eval_epsilon(kInverted, z - h)) / (2.0 * h);
  CHECK(rel(eval_epsilon_derivative(kInverted, z), fd) < 1e-8);
}

TEST_CASE("pole evaluation raises PoleError") {
  // Undamped line: the pole sits on the real axis at Omega.
  const auto undamped = DielectricModel::oscillators(1.0, {Resonance{1.0, 2.0, 0.0}});
  CHECK_THROWS_AS(eval_epsilon(undamped, Complex{2.0, 0.0}), PoleError);
}

TEST_CASE("model factories validate their parameters") {
  CHECK_THROWS_AS(DielectricModel::constant(-1.0), ValidationError);
  CHECK_THROWS_AS(DielectricModel::lorentz(1.0, 1.0, 2.0, -0.1), ValidationError);
  CHECK_THROWS_AS(DielectricModel::lorentz(1.0, std::nan(""), 2.0, 0.1), ValidationError);
  CHECK_THROWS_AS(DielectricModel::tabulated({0.0, 1.0, 0.5}, {1.0, 1.0, 1.0}), ValidationError);
}

TEST_CASE("tabulated media interpolate and refuse off-axis queries") {
  std::istringstream csv("omega,re_eps,im_eps\n0,2,0\n1,3,1\n2,2,0\n");
  const auto t = DielectricModel::read_csv(csv);
  CHECK(eval_epsilon(t, Complex{0.5, 0.0}) == Complex{2.5, 0.5});
  CHECK(eval_epsilon(t, Complex{-0.5, 0.0}) == Complex{2.5, -0.5});
  CHECK_THROWS_AS(eval_epsilon(t, Complex{0.5, 0.1}), RangeError);
  CHECK_THROWS_AS(eval_epsilon(t, Complex{2.5, 0.0}), RangeError);

  std::istringstream bad("w,re,im\n0,1,0\n");
  CHECK_THROWS_AS(DielectricModel::read_csv(bad), ValidationError);
}

TEST_CASE("sum rule reproduces the oscillator strength") {
  const auto grid = FrequencyGrid::for_model(kPassive);
  CHECK(std::abs(sum_rule(kPassive, grid) - 1.0) < 1e-4);
  const auto g2 = FrequencyGrid::for_model(kInverted);
  CHECK(std::abs(sum_rule(kInverted, g2) + 4.0) < 4e-4);
  CHECK(sum_rule(DielectricModel::vacuum(), FrequencyGrid(0.1, 100)) == 0.0);
}

TEST_CASE("sum rule of several lines adds their strengths") {
  const auto model = DielectricModel::oscillators(1.5, {Resonance{0.5, 1.0, 0.2}, Resonance{0.8, 3.0, 0.3}});
  const double expected = (0.5 + 0.8) * 1.5 * 1.5;
  CHECK(std::abs(sum_rule(model, FrequencyGrid::for_model(model)) - expected) / expected < 1e-4);
}

TEST_CASE("dispersion relation reconstructs the model on and off the axis") {
  const auto model = DielectricModel::lorentz(1.0, 1.0, 2.0, 0.2);
  const auto grid = FrequencyGrid::for_model(model);
  const auto spec = sample_imag_spectrum(model, grid);
  double worst = 0.0;
  for (std::size_t j = 0; j + 2 < grid.size(); j += 7) {
    const Complex z{grid.omega(j), 0.0};
    worst = std::max(worst, rel(kk_reconstruct(spec, z), eval_epsilon(model, z)));
  }
  CHECK(worst < 1e-3);
  CHECK(rel(kk_reconstruct(spec, Complex{0.0, 3.0}), eval_epsilon(model, Complex{0.0, 3.0})) < 1e-4);
  CHECK(rel(kk_reconstruct(spec, Complex{1.0, 1.0}), eval_epsilon(model, Complex{1.0, 1.0})) < 1e-4);
}

TEST_CASE("dispersion relation rejects points it cannot symmetrize") {
  const auto grid = FrequencyGrid::for_model(kPassive);
  const auto spec = sample_imag_spectrum(kPassive, grid);
  CHECK_THROWS_AS(kk_reconstruct(spec, Complex{grid.max(), 0.0}), SingularityError);
  CHECK_THROWS_AS(kk_reconstruct(spec, Complex{0.5 * grid.spacing() + 1.0, 0.0}), SingularityError);
  CHECK_THROWS_AS(kk_reconstruct(spec, Complex{1.0, -1.0}), RangeError);
}

TEST_CASE("short grids trip the tail guard") {
  CHECK_THROWS_AS(sample_imag_spectrum(kPassive, FrequencyGrid(0.01, 300)), TailDominanceError);
}

TEST_CASE("high-frequency series matches the model far from resonance") {
  const auto a = high_frequency_series(kPassive, 32);
  for (double w : {30.0, 80.0}) {
    double series = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) series += a[n] * std::pow(w, -static_cast<double>(n));
    const double exact = w * eval_epsilon(kPassive, Complex{w, 0.0}).imag();
    CHECK(std::abs(series - exact) / std::abs(exact) < 1e-12);
  }
}

TEST_CASE("passivity check separates gain from loss") {
  CHECK(passivity_check(kPassive, FrequencyGrid::for_model(kPassive)).passive);
  const auto r = passivity_check(kInverted, FrequencyGrid::for_model(kInverted));
  CHECK_FALSE(r.passive);
  CHECK(r.worst_value < 0.0);
}

TEST_CASE("frequency grid for a model resolves its linewidth and reaches the band edge") {
  const auto grid = FrequencyGrid::for_model(kPassive);
  CHECK(grid.spacing() <= 0.1 / 16.0 + 1e-15);
  CHECK(grid.max() >= 20.0 * 2.0);
  CHECK_NOTHROW(grid.check_covers(kPassive));
  CHECK_THROWS_AS(FrequencyGrid(0.01, 100).check_covers(kPassive), ResolutionError);
}

TEST_CASE("polynomial roots satisfy the polynomial") {
  const Polynomial p({Complex{2.0, 1.0}, Complex{-1.0, 0.0}, Complex{0.5, 0.5}, Complex{1.0, 0.0}});
  for (Complex z : p.roots()) CHECK(std::abs(p(z)) < 1e-12);
  const auto [a, b] = quadratic_roots(Complex{0.0, 0.2}, Complex{-3.01 + 0.0, 0.0});
  for (Complex z : {a, b}) CHECK(std::abs(z * z + Complex{0.0, 0.2} * z - 3.01) < 1e-13);
}
