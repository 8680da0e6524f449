#include "slabcausal/analyticity.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <fmt/format.h>

#include "slabcausal/errors.hpp"

namespace slabcausal {
namespace {

const Complex kI{0.0, 1.0};
constexpr int kMaxEdgeDepth = 40;

// Interior lattice lines are shifted by this fraction of a cell so that zeros
// on symmetry axes (Re zeta = 0 for every rational model) avoid cell edges.
constexpr double kLatticeOffset = 0.0137;

struct Phase {
  double value = 0.0;
  bool clean = true;
};

bool usable(Complex v) { return std::isfinite(v.real()) && std::isfinite(v.imag()) && v != Complex{0.0, 0.0}; }

// Phase change of f along [a, b], bisected until every increment is below
// pi/2 and agrees with its own midpoint split.
Phase edge_phase(const std::function<Complex(Complex)>& f, Complex a, Complex b, Complex fa, Complex fb, int depth) {
  if (!usable(fa) || !usable(fb)) return {0.0, false};
  const double d = std::arg(fb / fa);
  const Complex mid = 0.5 * (a + b);
  const Complex fm = f(mid);
  if (!usable(fm)) return {d, false};
  const double d1 = std::arg(fm / fa);
  const double d2 = std::arg(fb / fm);
  if (std::abs(d) < kPi / 2.0 && std::abs(d1) < kPi / 2.0 && std::abs(d2) < kPi / 2.0 &&
      std::abs(d1 + d2 - d) < 1e-9) {
    return {d, true};
  }
  if (depth >= kMaxEdgeDepth) return {d1 + d2, false};
  const Phase left = edge_phase(f, a, mid, fa, fm, depth + 1);
  const Phase right = edge_phase(f, mid, b, fm, fb, depth + 1);
  return {left.value + right.value, left.clean && right.clean};
}

struct IntWinding {
  int turns = 0;
  bool clean = true;
};

IntWinding to_integer(const Winding& w) {
  const double r = std::round(w.turns);
  return {static_cast<int>(r), w.clean && std::abs(w.turns - r) < 0.05};
}

// 1/tau = e^{i zeta L} F / 2, written with q = e^{2 i s}, Im s >= 0, so that
// nothing overflows deep in the upper half plane. Same zeros as F there.
class InverseTransmission {
 public:
  explicit InverseTransmission(const SlabConfig& slab) : slab_(slab) {}

  Complex operator()(Complex zeta) const {
    const double length = slab_.thickness;
    if (length == 0.0 || slab_.model.is_vacuum()) return {1.0, 0.0};
    const Complex eps = eval_epsilon(slab_.model, zeta);
    const Complex zl = zeta * length;
    Complex s = std::sqrt(zl * zl * eps);
    if (std::abs(s) < 1e-3) {
      const Complex w = s * s;
      const Complex c = 1.0 - w / 2.0 + w * w / 24.0 - w * w * w / 720.0;
      const Complex sinc = 1.0 - w / 6.0 + w * w / 120.0 - w * w * w / 5040.0;
      return std::exp(kI * zl) * (c - 0.5 * kI * zl * (1.0 + eps) * sinc);
    }
    if (s.imag() < 0.0) s = -s;
    const Complex q = std::exp(2.0 * kI * s);
    const Complex r = zl * (1.0 + eps) / (4.0 * s);
    return std::exp(kI * (zl - s)) * (0.5 * (1.0 + q) - r * (q - 1.0));
  }

  // Magnitude of the largest term, for a relative zero test.
  double scale(Complex zeta) const {
    const double length = slab_.thickness;
    if (length == 0.0 || slab_.model.is_vacuum()) return 1.0;
    const Complex eps = eval_epsilon(slab_.model, zeta);
    const Complex zl = zeta * length;
    Complex s = std::sqrt(zl * zl * eps);
    if (std::abs(s) < 1e-3) return std::max(1.0, std::abs(zl * (1.0 + eps)));
    if (s.imag() < 0.0) s = -s;
    const Complex q = std::exp(2.0 * kI * s);
    const Complex r = zl * (1.0 + eps) / (4.0 * s);
    return std::abs(std::exp(kI * (zl - s))) * (0.5 * (1.0 + std::abs(q)) + std::abs(r) * (1.0 + std::abs(q)));
  }

 private:
  const SlabConfig& slab_;
};

double epsilon_scale(const DielectricModel& model, Complex zeta) {
  const auto* m = std::get_if<OscillatorMedium>(&model.variant());
  if (m == nullptr) return 1.0;
  double sum = 1.0;
  const double wp2 = m->plasma_frequency * m->plasma_frequency;
  for (const auto& r : m->resonances) {
    sum += std::abs(r.strength * wp2 / (r.frequency * r.frequency - 2.0 * kI * zeta * r.damping - zeta * zeta));
  }
  return sum;
}

Complex cell_centre(const ComplexRect& r) {
  return {0.5 * (r.re_min + r.re_max), 0.5 * (r.im_min + r.im_max)};
}

bool inside(const ComplexRect& r, Complex z) {
  const double tol = 1e-9 * std::max(r.width(), r.height());
  return z.real() >= r.re_min - tol && z.real() <= r.re_max + tol && z.imag() >= r.im_min - tol &&
         z.imag() <= r.im_max + tol;
}

struct Target {
  std::function<Complex(Complex)> f;
  std::function<Complex(Complex)> derivative;  // empty: central difference
  std::function<double(Complex)> scale;
};

bool newton(const Target& t, const ComplexRect& cell, Complex& z) {
  const double size = std::max(cell.width(), cell.height());
  for (int it = 0; it < 60; ++it) {
    const Complex fz = t.f(z);
    if (!usable(fz)) return fz == Complex{0.0, 0.0};
    Complex d;
    if (t.derivative) {
      d = t.derivative(z);
    } else {
      const double h = std::min(1e-6 * std::max(1.0, std::abs(z)), 1e-3 * size);
      d = (t.f(z + h) - t.f(z - h)) / (2.0 * h);
    }
    if (!usable(d)) return false;
    const Complex step = fz / d;
    z -= step;
    if (std::abs(z - cell_centre(cell)) > 4.0 * size) return false;
    if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(z))) break;
  }
  return std::abs(t.f(z)) < 1e-9 * t.scale(z);
}

// Children are split slightly off-centre for the same reason as the lattice.
std::array<ComplexRect, 4> split(const ComplexRect& r) {
  const double xm = r.re_min + (0.5 + kLatticeOffset) * r.width();
  const double ym = r.im_min + (0.5 + kLatticeOffset) * r.height();
  return {ComplexRect{r.re_min, xm, r.im_min, ym}, ComplexRect{xm, r.re_max, r.im_min, ym},
          ComplexRect{r.re_min, xm, ym, r.im_max}, ComplexRect{xm, r.re_max, ym, r.im_max}};
}

struct Locator {
  const Target& target;
  int max_depth;
  std::vector<Complex>& roots;
  std::vector<ComplexRect>& straddles;

  void run(const ComplexRect& cell, int winding, int depth) {
    if (winding <= 0) {
      // Poles of eps (and hence of the denominator) lie below the real axis
      // for damped media, so a negative count here means a broken contour.
      if (winding < 0) straddles.push_back(cell);
      return;
    }
    if (winding == 1) {
      Complex z = cell_centre(cell);
      if (newton(target, cell, z) && inside(cell, z)) {
        roots.push_back(z);
        return;
      }
    }
    if (depth >= max_depth) {
      Complex z = cell_centre(cell);
      if (newton(target, cell, z) && inside(cell, z)) {
        roots.insert(roots.end(), static_cast<std::size_t>(winding), z);
      } else {
        straddles.push_back(cell);
      }
      return;
    }
    const auto children = split(cell);
    std::array<IntWinding, 4> w;
    int sum = 0;
    bool clean = true;
    for (std::size_t c = 0; c < 4; ++c) {
      w[c] = to_integer(contour_winding(target.f, children[c], 4));
      sum += w[c].turns;
      clean = clean && w[c].clean;
    }
    if (!clean || sum != winding) straddles.push_back(cell);
    for (std::size_t c = 0; c < 4; ++c) {
      if (w[c].clean) run(children[c], w[c].turns, depth + 1);
    }
  }
};

bool location_less(Complex a, Complex b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

bool rect_less(const ComplexRect& a, const ComplexRect& b) {
  return location_less(Complex{a.re_min, a.im_min}, Complex{b.re_min, b.im_min});
}

// Argument-principle windings of f on every lattice cell. Vertex values and
// edge phases are shared between neighbouring cells.
struct LatticeWindings {
  std::vector<IntWinding> cells;  // row-major, j * res + i
  std::vector<Complex> vertex_values;
};

LatticeWindings lattice_windings(const std::function<Complex(Complex)>& f, const std::vector<double>& xs,
                                 const std::vector<double>& ys) {
  const std::size_t nx = xs.size();
  const std::size_t ny = ys.size();
  LatticeWindings out;
  out.vertex_values.resize(nx * ny);
  auto vertex = [&](std::size_t i, std::size_t j) { return Complex{xs[i], ys[j]}; };
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i) out.vertex_values[j * nx + i] = f(vertex(i, j));
  auto value = [&](std::size_t i, std::size_t j) { return out.vertex_values[j * nx + i]; };

  std::vector<Phase> horizontal((nx - 1) * ny);
  std::vector<Phase> vertical(nx * (ny - 1));
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i + 1 < nx; ++i)
      horizontal[j * (nx - 1) + i] = edge_phase(f, vertex(i, j), vertex(i + 1, j), value(i, j), value(i + 1, j), 0);
  for (std::size_t j = 0; j + 1 < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i)
      vertical[j * nx + i] = edge_phase(f, vertex(i, j), vertex(i, j + 1), value(i, j), value(i, j + 1), 0);

  out.cells.resize((nx - 1) * (ny - 1));
  for (std::size_t j = 0; j + 1 < ny; ++j) {
    for (std::size_t i = 0; i + 1 < nx; ++i) {
      const Phase& bottom = horizontal[j * (nx - 1) + i];
      const Phase& top = horizontal[(j + 1) * (nx - 1) + i];
      const Phase& left = vertical[j * nx + i];
      const Phase& right = vertical[j * nx + i + 1];
      const Winding w{(bottom.value + right.value - top.value - left.value) / (2.0 * kPi),
                      bottom.clean && top.clean && left.clean && right.clean};
      out.cells[j * (nx - 1) + i] = to_integer(w);
    }
  }
  return out;
}

std::vector<double> lattice_lines(double lo, double hi, std::size_t cells) {
  std::vector<double> lines(cells + 1);
  const double h = (hi - lo) / static_cast<double>(cells);
  for (std::size_t i = 0; i <= cells; ++i) lines[i] = lo + h * static_cast<double>(i);
  for (std::size_t i = 1; i < cells; ++i) lines[i] += kLatticeOffset * h;
  lines.back() = hi;
  return lines;
}

}  // namespace

std::size_t SingularityReport::singularity_count() const noexcept {
  const auto upper = static_cast<std::size_t>(std::count_if(
      branch_points.begin(), branch_points.end(), [](const BranchPoint& b) { return b.in_upper_half_plane; }));
  return denominator_zeros.size() + upper;
}

ComplexRect default_scan_region(const DielectricModel& model) {
  double top = model.top_frequency();
  if (model.kind() != ModelKind::oscillators || !(top > 0.0)) top = 1.0;
  return ComplexRect{-4.0 * top, 4.0 * top, 1e-6, 4.0 * top};
}

Winding contour_winding(const std::function<Complex(Complex)>& f, const ComplexRect& rect,
                        std::size_t samples_per_side) {
  const std::size_t n = std::max<std::size_t>(samples_per_side, 1);
  const std::array<Complex, 5> corners{Complex{rect.re_min, rect.im_min}, Complex{rect.re_max, rect.im_min},
                                       Complex{rect.re_max, rect.im_max}, Complex{rect.re_min, rect.im_max},
                                       Complex{rect.re_min, rect.im_min}};
  Winding w;
  double total = 0.0;
  for (std::size_t side = 0; side < 4; ++side) {
    const Complex a = corners[side];
    const Complex b = corners[side + 1];
    Complex za = a;
    Complex fa = f(za);
    for (std::size_t k = 1; k <= n; ++k) {
      const Complex zb = k == n ? b : a + (b - a) * (static_cast<double>(k) / static_cast<double>(n));
      const Complex fb = f(zb);
      const Phase p = edge_phase(f, za, zb, fa, fb, 0);
      total += p.value;
      w.clean = w.clean && p.clean;
      za = zb;
      fa = fb;
    }
  }
  w.turns = total / (2.0 * kPi);
  return w;
}

SingularityReport scan_upper_half_plane(const SlabConfig& slab, const ComplexRect& region, std::size_t resolution,
                                        const ScanOptions& options) {
  if (!(region.im_min >= 1e-6)) {
    throw ValidationError(fmt::format("scan region must satisfy Im zeta >= 1e-6, got {}", region.im_min));
  }
  if (!(region.re_max > region.re_min) || !(region.im_max > region.im_min) || !std::isfinite(region.re_min) ||
      !std::isfinite(region.re_max) || !std::isfinite(region.im_max)) {
    throw ValidationError("scan region must be a finite, non-empty rectangle");
  }
  if (resolution < 32) throw ValidationError(fmt::format("scan resolution must be >= 32, got {}", resolution));
  if (options.max_depth < 0) throw ValidationError("refinement depth must be >= 0");
  if (!(slab.thickness >= 0.0)) throw ValidationError("slab thickness must be >= 0");

  SingularityReport report;
  report.region = region;
  report.resolution = resolution;
  report.branch_points = find_branch_points(slab.model, region);

  const InverseTransmission inverse(slab);
  const DielectricModel& model = slab.model;
  const Target denominator{[&](Complex z) { return inverse(z); }, {}, [&](Complex z) { return inverse.scale(z); }};
  const Target epsilon{[&](Complex z) { return eval_epsilon(model, z); },
                       [&](Complex z) { return eval_epsilon_derivative(model, z); },
                       [&](Complex z) { return epsilon_scale(model, z); }};

  const std::vector<double> xs = lattice_lines(region.re_min, region.re_max, resolution);
  const std::vector<double> ys = lattice_lines(region.im_min, region.im_max, resolution);
  const LatticeWindings den = lattice_windings(denominator.f, xs, ys);
  const LatticeWindings eps = lattice_windings(epsilon.f, xs, ys);
  report.cells_scanned = resolution * resolution;

  for (std::size_t j = 0; j < ys.size(); ++j) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const Complex g = den.vertex_values[j * xs.size() + i];
      if (usable(g)) report.landscape.push_back(LandscapeSample{Complex{xs[i], ys[j]}, 1.0 / g});
    }
  }

  Locator den_locator{denominator, options.max_depth, report.denominator_zeros, report.straddles};
  Locator eps_locator{epsilon, options.max_depth, report.scanned_epsilon_zeros, report.straddles};
  for (std::size_t j = 0; j < resolution; ++j) {
    for (std::size_t i = 0; i < resolution; ++i) {
      const std::size_t c = j * resolution + i;
      const ComplexRect cell{xs[i], xs[i + 1], ys[j], ys[j + 1]};
      const IntWinding& wd = den.cells[c];
      const IntWinding& we = eps.cells[c];
      if (!wd.clean || !we.clean) {
        report.straddles.push_back(cell);
        continue;
      }
      report.denominator_winding += wd.turns;
      report.epsilon_winding += we.turns;
      if (wd.turns == 0 && we.turns == 0) continue;
      report.nonzero_cells.push_back(CellWinding{cell, wd.turns, we.turns});
      den_locator.run(cell, wd.turns, 0);
      eps_locator.run(cell, we.turns, 0);
    }
  }

  std::sort(report.denominator_zeros.begin(), report.denominator_zeros.end(), location_less);
  std::sort(report.scanned_epsilon_zeros.begin(), report.scanned_epsilon_zeros.end(), location_less);
  std::sort(report.straddles.begin(), report.straddles.end(), rect_less);
  return report;
}

Certificate certify(const SingularityReport& report) {
  if (!report.straddles.empty()) return Certificate::inconclusive;
  const bool windings_zero = report.denominator_winding == 0 && report.epsilon_winding == 0 && report.nonzero_cells.empty();
  if (report.singularity_count() == 0 && report.scanned_epsilon_zeros.empty() && windings_zero) {
    return Certificate::analytic;
  }
  return Certificate::singular;
}

}  // namespace slabcausal
