#pragma once

#include <span>
#include <vector>

#include "slabcausal/types.hpp"

namespace slabcausal {

/// Dense complex polynomial, coefficients in ascending powers.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Complex> coefficients);

  std::size_t degree() const noexcept { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }
  const std::vector<Complex>& coefficients() const noexcept { return coeffs_; }

  Complex operator()(Complex z) const noexcept;
  Complex derivative(Complex z) const noexcept;

  Polynomial operator*(const Polynomial& rhs) const;
  Polynomial operator+(const Polynomial& rhs) const;
  Polynomial operator*(Complex scalar) const;

  /// All roots by simultaneous Aberth-Ehrlich iteration.
  std::vector<Complex> roots() const;

 private:
  void trim();
  std::vector<Complex> coeffs_;
};

/// Both roots of z^2 + b z + c, computed without cancellation.
std::pair<Complex, Complex> quadratic_roots(Complex b, Complex c);

}  // namespace slabcausal
