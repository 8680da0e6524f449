#include "slabcausal/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include "slabcausal/errors.hpp"

namespace slabcausal {

Polynomial::Polynomial(std::vector<Complex> coefficients) : coeffs_(std::move(coefficients)) { trim(); }

void Polynomial::trim() {
  while (coeffs_.size() > 1 && coeffs_.back() == Complex{0.0, 0.0}) coeffs_.pop_back();
}

Complex Polynomial::operator()(Complex z) const noexcept {
  Complex acc{0.0, 0.0};
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Complex Polynomial::derivative(Complex z) const noexcept {
  Complex acc{0.0, 0.0};
  for (std::size_t k = coeffs_.size(); k-- > 1;) acc = acc * z + static_cast<double>(k) * coeffs_[k];
  return acc;
}

Polynomial Polynomial::operator*(const Polynomial& rhs) const {
  if (coeffs_.empty() || rhs.coeffs_.empty()) return Polynomial{};
  std::vector<Complex> out(coeffs_.size() + rhs.coeffs_.size() - 1, Complex{0.0, 0.0});
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j) out[i + j] += coeffs_[i] * rhs.coeffs_[j];
  return Polynomial(std::move(out));
}

Polynomial Polynomial::operator+(const Polynomial& rhs) const {
  std::vector<Complex> out(std::max(coeffs_.size(), rhs.coeffs_.size()), Complex{0.0, 0.0});
  for (std::size_t i = 0; i < coeffs_.size(); ++i) out[i] += coeffs_[i];
  for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) out[i] += rhs.coeffs_[i];
  return Polynomial(std::move(out));
}

Polynomial Polynomial::operator*(Complex scalar) const {
  std::vector<Complex> out(coeffs_);
  for (auto& c : out) c *= scalar;
  return Polynomial(std::move(out));
}

std::vector<Complex> Polynomial::roots() const {
  const std::size_t n = degree();
  if (n == 0) return {};
  if (n == 1) return {-coeffs_[0] / coeffs_[1]};
  if (n == 2) {
    auto [r1, r2] = quadratic_roots(coeffs_[1] / coeffs_[2], coeffs_[0] / coeffs_[2]);
    return {r1, r2};
  }
  // Initial guesses on a circle bounded by the Cauchy radius, rotated off the axes.
  double radius = 0.0;
  for (std::size_t k = 0; k < n; ++k) radius = std::max(radius, std::abs(coeffs_[k] / coeffs_[n]));
  radius = 1.0 + radius;
  std::vector<Complex> z(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double angle = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n) + 0.4;
    z[k] = std::polar(0.5 * radius, angle);
  }
  for (int iter = 0; iter < 500; ++iter) {
    double max_step = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const Complex p = (*this)(z[k]);
      if (p == Complex{0.0, 0.0}) continue;
      const Complex ratio = p / derivative(z[k]);
      Complex repulsion{0.0, 0.0};
      for (std::size_t j = 0; j < n; ++j)
        if (j != k) repulsion += 1.0 / (z[k] - z[j]);
      const Complex step = ratio / (1.0 - ratio * repulsion);
      z[k] -= step;
      max_step = std::max(max_step, std::abs(step) / std::max(1.0, std::abs(z[k])));
    }
    if (max_step < 1e-16) break;
  }
  return z;
}

std::pair<Complex, Complex> quadratic_roots(Complex b, Complex c) {
  const Complex disc = std::sqrt(b * b - 4.0 * c);
  // Choose the sign that avoids cancellation in b + disc.
  const Complex q = std::abs(b + disc) >= std::abs(b - disc) ? -0.5 * (b + disc) : -0.5 * (b - disc);
  if (q == Complex{0.0, 0.0}) return {Complex{0.0, 0.0}, Complex{0.0, 0.0}};
  return {q, c / q};
}

}  // namespace slabcausal
