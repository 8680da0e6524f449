#include "slabcausal/dielectric.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "slabcausal/errors.hpp"

namespace slabcausal {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool finite(double x) { return std::isfinite(x); }

Complex oscillator_denominator(const Resonance& r, Complex zeta) {
  const Complex i{0.0, 1.0};
  return r.frequency * r.frequency - 2.0 * i * zeta * r.damping - zeta * zeta;
}

Complex eval_oscillators(const OscillatorMedium& m, Complex zeta) {
  const double wp2 = m.plasma_frequency * m.plasma_frequency;
  Complex eps{1.0, 0.0};
  for (const auto& r : m.resonances) {
    const Complex d = oscillator_denominator(r, zeta);
    const double scale = r.frequency * r.frequency + std::norm(zeta) + 2.0 * r.damping * std::abs(zeta);
    if (std::abs(d) <= 1e-14 * scale) {
      throw PoleError("pole_proximity", std::abs(d),
                      fmt::format("eps evaluated on a resonance pole at zeta = {}{:+}i", zeta.real(),
                                  zeta.imag()));
    }
    eps += r.strength * wp2 / d;
  }
  return eps;
}

Complex eval_table(const TabulatedMedium& t, Complex zeta) {
  if (zeta.imag() != 0.0) {
    throw RangeError("tabulated_off_axis", zeta.imag(),
                     "tabulated media can only be evaluated on the real frequency axis");
  }
  const double w = std::abs(zeta.real());
  if (w < t.omega.front() || w > t.omega.back()) {
    throw RangeError("tabulated_range", zeta.real(),
                     fmt::format("frequency outside table range [{}, {}]", t.omega.front(), t.omega.back()));
  }
  auto hi = std::upper_bound(t.omega.begin(), t.omega.end(), w);
  std::size_t j = hi == t.omega.end() ? t.omega.size() - 1 : static_cast<std::size_t>(hi - t.omega.begin());
  if (j == 0) j = 1;
  const double w0 = t.omega[j - 1];
  const double w1 = t.omega[j];
  const double u = (w - w0) / (w1 - w0);
  const Complex e = (1.0 - u) * t.epsilon[j - 1] + u * t.epsilon[j];
  return zeta.real() < 0.0 ? std::conj(e) : e;
}

}  // namespace

DielectricModel DielectricModel::vacuum() { return DielectricModel(VacuumMedium{}); }

DielectricModel DielectricModel::constant(double epsilon) {
  if (!finite(epsilon) || epsilon <= 0.0) {
    throw ValidationError(fmt::format("constant permittivity must be finite and positive, got {}", epsilon));
  }
  return DielectricModel(ConstantMedium{epsilon});
}

DielectricModel DielectricModel::oscillators(double plasma_frequency, std::vector<Resonance> resonances) {
  if (!resonances.empty() && !(plasma_frequency > 0.0 && finite(plasma_frequency))) {
    throw ValidationError(fmt::format("plasma frequency must be positive, got {}", plasma_frequency));
  }
  for (const auto& r : resonances) {
    if (!finite(r.strength) || !finite(r.frequency) || !finite(r.damping)) {
      throw ValidationError("resonance parameters must be finite");
    }
    if (r.damping < 0.0) {
      throw ValidationError(fmt::format("resonance damping must be >= 0, got {}", r.damping));
    }
    if (r.frequency < 0.0) {
      throw ValidationError(fmt::format("resonance frequency must be >= 0, got {}", r.frequency));
    }
  }
  return DielectricModel(OscillatorMedium{plasma_frequency, std::move(resonances)});
}

DielectricModel DielectricModel::lorentz(double strength, double plasma_frequency, double frequency,
                                         double damping) {
  return oscillators(plasma_frequency, {Resonance{strength, frequency, damping}});
}

DielectricModel DielectricModel::tabulated(std::vector<double> omega, std::vector<Complex> epsilon) {
  if (omega.size() != epsilon.size()) {
    throw ValidationError("tabulated omega and epsilon sizes differ");
  }
  if (omega.size() < 2) {
    throw ValidationError("tabulated spectrum needs at least two samples");
  }
  for (std::size_t i = 0; i < omega.size(); ++i) {
    if (!finite(omega[i]) || !finite(epsilon[i].real()) || !finite(epsilon[i].imag())) {
      throw ValidationError(fmt::format("non-finite tabulated sample at row {}", i));
    }
    if (omega[i] < 0.0) {
      throw ValidationError(fmt::format("tabulated frequencies must be >= 0, got {}", omega[i]));
    }
    if (i > 0 && !(omega[i] > omega[i - 1])) {
      throw ValidationError(fmt::format("tabulated frequencies must strictly increase (row {})", i));
    }
  }
  return DielectricModel(TabulatedMedium{std::move(omega), std::move(epsilon)});
}

DielectricModel DielectricModel::read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw ValidationError("empty tabulated spectrum");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "omega,re_eps,im_eps") {
    throw ValidationError(fmt::format("expected header 'omega,re_eps,im_eps', got '{}'", line));
  }
  std::vector<double> omega;
  std::vector<Complex> eps;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ss(line);
    double w = 0.0, re = 0.0, im = 0.0;
    char c1 = 0, c2 = 0;
    if (!(ss >> w >> c1 >> re >> c2 >> im) || c1 != ',' || c2 != ',') {
      throw ValidationError(fmt::format("malformed tabulated row {}: '{}'", row, line));
    }
    omega.push_back(w);
    eps.emplace_back(re, im);
  }
  return tabulated(std::move(omega), std::move(eps));
}

DielectricModel DielectricModel::load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError(fmt::format("cannot open tabulated spectrum '{}'", path.string()));
  }
  return read_csv(in);
}

double DielectricModel::top_frequency() const noexcept {
  return std::visit(overloaded{
                        [](const VacuumMedium&) { return 0.0; },
                        [](const ConstantMedium&) { return 0.0; },
                        [](const OscillatorMedium& m) {
                          double top = m.resonances.empty() ? 0.0 : m.plasma_frequency;
                          for (const auto& r : m.resonances) top = std::max(top, r.frequency);
                          return top;
                        },
                        [](const TabulatedMedium& t) { return t.omega.back(); },
                    },
                    model_);
}

double DielectricModel::min_linewidth() const noexcept {
  double g = std::numeric_limits<double>::infinity();
  if (const auto* m = std::get_if<OscillatorMedium>(&model_)) {
    for (const auto& r : m->resonances) g = std::min(g, r.damping);
  }
  return g;
}

bool DielectricModel::is_vacuum() const noexcept {
  if (std::holds_alternative<VacuumMedium>(model_)) return true;
  if (const auto* c = std::get_if<ConstantMedium>(&model_)) return c->value == 1.0;
  if (const auto* m = std::get_if<OscillatorMedium>(&model_)) {
    return std::all_of(m->resonances.begin(), m->resonances.end(),
                       [](const Resonance& r) { return r.strength == 0.0; });
  }
  return false;
}

Complex eval_epsilon(const DielectricModel& model, Complex zeta) {
  return std::visit(overloaded{
                        [](const VacuumMedium&) { return Complex{1.0, 0.0}; },
                        [](const ConstantMedium& c) { return Complex{c.value, 0.0}; },
                        [zeta](const OscillatorMedium& m) { return eval_oscillators(m, zeta); },
                        [zeta](const TabulatedMedium& t) { return eval_table(t, zeta); },
                    },
                    model.variant());
}

Complex eval_epsilon_derivative(const DielectricModel& model, Complex zeta) {
  if (model.kind() == ModelKind::tabulated) {
    throw UnsupportedModelError("tabulated_derivative", 0.0, "tabulated media have no analytic derivative");
  }
  const auto* m = std::get_if<OscillatorMedium>(&model.variant());
  if (m == nullptr) return Complex{0.0, 0.0};
  const Complex i{0.0, 1.0};
  const double wp2 = m->plasma_frequency * m->plasma_frequency;
  Complex d{0.0, 0.0};
  for (const auto& r : m->resonances) {
    const Complex den = oscillator_denominator(r, zeta);
    d += r.strength * wp2 * (2.0 * i * r.damping + 2.0 * zeta) / (den * den);
  }
  return d;
}

FrequencyGrid::FrequencyGrid(double spacing, std::size_t count) : spacing_(spacing), count_(count) {
  if (!(spacing > 0.0) || !finite(spacing)) {
    throw ValidationError(fmt::format("frequency spacing must be positive, got {}", spacing));
  }
  if (count < 8) {
    throw ValidationError(fmt::format("frequency grid needs at least 8 samples, got {}", count));
  }
}

FrequencyGrid FrequencyGrid::for_model(const DielectricModel& model, double coverage, double per_linewidth) {
  if (model.kind() == ModelKind::tabulated) {
    const auto& t = std::get<TabulatedMedium>(model.variant());
    const std::size_t n = std::max<std::size_t>(t.omega.size(), 1024);
    return FrequencyGrid(t.omega.back() / static_cast<double>(n - 1), n);
  }
  const double top = model.top_frequency();
  const double wmax = coverage * (top > 0.0 ? top : 1.0);
  const double gamma = model.min_linewidth();
  double dw = wmax / 1023.0;
  if (std::isfinite(gamma) && gamma > 0.0) dw = std::min(dw, gamma / per_linewidth);
  const auto n = static_cast<std::size_t>(std::ceil(wmax / dw)) + 1;
  return FrequencyGrid(dw, std::max<std::size_t>(n, 8));
}

void FrequencyGrid::check_covers(const DielectricModel& model, double coverage) const {
  if (model.kind() == ModelKind::tabulated) return;
  const double need = coverage * model.top_frequency();
  if (max() < need * (1.0 - 1e-12)) {
    throw ResolutionError("grid_coverage", max(),
                          fmt::format("grid ends at {} but must reach {} ({}x the top resonance)", max(), need,
                                      coverage));
  }
}

std::vector<double> high_frequency_series(const DielectricModel& model, std::size_t terms) {
  const auto* m = std::get_if<OscillatorMedium>(&model.variant());
  if (m == nullptr || m->resonances.empty()) return {};
  const double wp2 = m->plasma_frequency * m->plasma_frequency;
  const Complex i{0.0, 1.0};
  std::vector<double> a(terms + 1, 0.0);
  for (const auto& r : m->resonances) {
    // 1/((w-p1)(w-p2)) = w^-2 sum_k e_k w^-k with e_k the complete homogeneous
    // symmetric polynomials of the poles: p1+p2 = -2i gamma, p1 p2 = -Omega^2.
    Complex e_prev{0.0, 0.0};
    Complex e_cur{1.0, 0.0};
    for (std::size_t k = 0; k < terms; ++k) {
      a[k + 1] += -r.strength * wp2 * e_cur.imag();
      const Complex next = -2.0 * i * r.damping * e_cur + r.frequency * r.frequency * e_prev;
      e_prev = e_cur;
      e_cur = next;
    }
  }
  return a;
}

namespace {

// Largest pole modulus of an oscillator model, governing the radius of
// convergence of the large-omega series.
double max_pole_modulus(const DielectricModel& model) {
  const auto* m = std::get_if<OscillatorMedium>(&model.variant());
  if (m == nullptr) return 0.0;
  double r = 0.0;
  for (const auto& res : m->resonances) {
    const Complex disc = std::sqrt(Complex{res.frequency * res.frequency - res.damping * res.damping, 0.0});
    const Complex p1 = Complex{0.0, -res.damping} + disc;
    const Complex p2 = Complex{0.0, -res.damping} - disc;
    r = std::max({r, std::abs(p1), std::abs(p2)});
  }
  return r;
}

void check_tail(const ImagSpectrum& s) {
  const double wmax = s.grid.max();
  const double im_end = std::abs(s.omega_im_eps.back()) / wmax;
  if (im_end > s.tail_threshold) {
    throw TailDominanceError("tail_dominance", im_end,
                             fmt::format("|Im eps| = {:.3g} at omega_max = {} exceeds the tail threshold {:.3g}",
                                         im_end, wmax, s.tail_threshold));
  }
}

// sum_m y^(2m) / (c + 2m), the moment that closes int_W^inf w^-(c+1)/(w^2 - zeta^2) dw
// after scaling by W^-(c). Uses int_0^y t^(c-1)/(1-t^2) dt for |y| > 1/2.
Complex tail_moment(int c, Complex y) {
  if (std::abs(y) <= 0.5) {
    const Complex y2 = y * y;
    Complex term{1.0, 0.0};
    Complex sum{0.0, 0.0};
    for (int m = 0; m < 200; ++m) {
      const Complex add = term / static_cast<double>(c + 2 * m);
      sum += add;
      if (std::abs(add) < 1e-18 * std::abs(sum)) break;
      term *= y2;
    }
    return sum;
  }
  Complex integral = (c % 2 == 1) ? std::atanh(y) : -0.5 * std::log(1.0 - y * y);
  for (int k = (c % 2 == 1) ? 1 : 2; k < c; k += 2) {
    integral -= std::pow(y, k) / static_cast<double>(k);
  }
  return integral / std::pow(y, c);
}

// int_W^inf (sum_n a_n w^-n) / (w^2 - zeta^2) dw.
Complex tail_integral(const std::vector<double>& a, double wmax, Complex zeta) {
  Complex sum{0.0, 0.0};
  const Complex y = zeta / wmax;
  double wpow = 1.0 / wmax;  // W^-(n+1)
  for (std::size_t n = 0; n < a.size(); ++n, wpow /= wmax) {
    if (a[n] == 0.0) continue;
    sum += a[n] * wpow * tail_moment(static_cast<int>(n) + 1, y);
  }
  return sum;
}

double trapezoid_weight(std::size_t j, std::size_t n) { return (j == 0 || j + 1 == n) ? 0.5 : 1.0; }

}  // namespace

ImagSpectrum sample_imag_spectrum(const DielectricModel& model, const FrequencyGrid& grid, double tail_threshold) {
  ImagSpectrum s{grid, std::vector<double>(grid.size()), {}, tail_threshold};
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double w = grid.omega(j);
    s.omega_im_eps[j] = w * eval_epsilon(model, Complex{w, 0.0}).imag();
  }
  if (model.kind() == ModelKind::oscillators) {
    const double ratio = max_pole_modulus(model) / grid.max();
    if (ratio > 0.5) {
      throw TailDominanceError("tail_series_convergence", ratio,
                               "grid too short for the large-frequency tail series (pole modulus / omega_max > 0.5)");
    }
    s.tail_series = high_frequency_series(model);
  }
  check_tail(s);
  return s;
}

Complex kk_reconstruct(const ImagSpectrum& spectrum, Complex zeta) {
  const auto& g = spectrum.omega_im_eps;
  const FrequencyGrid& grid = spectrum.grid;
  if (g.size() != grid.size()) {
    throw ValidationError("imaginary spectrum size does not match its grid");
  }
  check_tail(spectrum);
  const double dw = grid.spacing();
  const double wmax = grid.max();
  const std::size_t n = grid.size();

  if (zeta.imag() < 0.0) {
    throw RangeError("kk_lower_half_plane", zeta.imag(), "dispersion relation is only valid for Im zeta >= 0");
  }

  if (zeta.imag() > 0.0) {
    if (zeta.imag() < 4.0 * dw) {
      throw SingularityError("kk_near_axis", zeta.imag(),
                             "Im zeta is below four grid spacings; quadrature does not resolve the near pole");
    }
    Complex sum{0.0, 0.0};
    const Complex z2 = zeta * zeta;
    for (std::size_t j = 0; j < n; ++j) {
      const double w = grid.omega(j);
      sum += trapezoid_weight(j, n) * g[j] / (w * w - z2);
    }
    sum *= dw;
    sum += tail_integral(spectrum.tail_series, wmax, zeta);
    return 1.0 + (2.0 / kPi) * sum;
  }

  // Principal value on the real axis, centred on a grid sample.
  const double ws = std::abs(zeta.real());
  const double pos = ws / dw;
  const auto s = static_cast<std::size_t>(std::llround(pos));
  if (std::abs(pos - static_cast<double>(s)) > 1e-9 * std::max(1.0, pos)) {
    throw SingularityError("kk_pv_alignment", zeta.real(),
                           "real evaluation point is not a grid sample; principal value cannot be symmetrized");
  }
  if (s + 2 >= n) {
    throw SingularityError("kk_pv_symmetrization", zeta.real(),
                           "real evaluation point too close to omega_max to symmetrize the principal value");
  }
  auto gext = [&](std::ptrdiff_t j) { return g[static_cast<std::size_t>(j < 0 ? -j : j)]; };
  const auto si = static_cast<std::ptrdiff_t>(s);
  const double gs = g[s];

  // Regularized integrand h(w) = (g(w) - g_s) / (w^2 - w_s^2), even in w.
  double centre = 0.0;
  if (s == 0) {
    auto hq = [&](std::size_t j) { return g[j] / (grid.omega(j) * grid.omega(j)); };
    centre = (15.0 * hq(1) - 6.0 * hq(2) + hq(3)) / 10.0;
  } else {
    const double dg = (gext(si - 2) - 8.0 * gext(si - 1) + 8.0 * gext(si + 1) - gext(si + 2)) / (12.0 * dw);
    centre = dg / (2.0 * ws);
  }
  auto h = [&](std::size_t j) {
    const double w = grid.omega(j);
    return trapezoid_weight(j, n) * (g[j] - gs) / ((w - ws) * (w + ws));
  };
  double sum = trapezoid_weight(s, n) * centre;
  // Symmetric pairs about the singular sample, then the unpaired remainder.
  std::size_t k = 1;
  for (; k <= s && s + k < n; ++k) sum += h(s + k) + h(s - k);
  for (std::size_t j = s + k; j < n; ++j) sum += h(j);
  for (std::size_t j = 0; j + k <= s; ++j) sum += h(j);
  sum *= dw;

  double tail = tail_integral(spectrum.tail_series, wmax, Complex{ws, 0.0}).real();
  const double y = ws / wmax;
  tail -= gs * (s == 0 ? 1.0 / wmax : std::atanh(y) / ws);

  const double re = 1.0 + (2.0 / kPi) * (sum + tail);
  const double im = s == 0 ? 0.0 : gs / ws;
  return zeta.real() < 0.0 ? Complex{re, -im} : Complex{re, im};
}

double sum_rule(const DielectricModel& model, const FrequencyGrid& grid, double tail_threshold) {
  const ImagSpectrum s = sample_imag_spectrum(model, grid, tail_threshold);
  double sum = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) sum += trapezoid_weight(j, grid.size()) * s.omega_im_eps[j];
  sum *= grid.spacing();
  const double wmax = grid.max();
  double tail = 0.0;
  for (std::size_t n = 2; n < s.tail_series.size(); ++n) {
    tail += s.tail_series[n] * std::pow(wmax, 1.0 - static_cast<double>(n)) / static_cast<double>(n - 1);
  }
  return (2.0 / kPi) * (sum + tail);
}

PassivityResult passivity_check(const DielectricModel& model, const FrequencyGrid& grid) {
  PassivityResult result;
  if (const auto* m = std::get_if<OscillatorMedium>(&model.variant())) {
    result.tolerance = 1e-12 * m->plasma_frequency * m->plasma_frequency;
  } else {
    result.tolerance = 1e-12;
  }
  result.worst_value = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double w = grid.omega(j);
    const double v = w * eval_epsilon(model, Complex{w, 0.0}).imag();
    if (v < result.worst_value) {
      result.worst_value = v;
      result.worst_omega = w;
    }
  }
  result.passive = result.worst_value >= -result.tolerance;
  return result;
}

}  // namespace slabcausal
