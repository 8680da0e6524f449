#pragma once

#include <complex>
#include <cstddef>

namespace slabcausal {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

/// Axis-aligned rectangle in the complex frequency plane.
struct ComplexRect {
  double re_min = 0.0;
  double re_max = 0.0;
  double im_min = 0.0;
  double im_max = 0.0;

  bool contains(Complex z) const noexcept {
    return z.real() >= re_min && z.real() <= re_max && z.imag() >= im_min && z.imag() <= im_max;
  }
  double width() const noexcept { return re_max - re_min; }
  double height() const noexcept { return im_max - im_min; }
};

}  // namespace slabcausal
