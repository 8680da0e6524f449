#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace slabcausal::detail {

// Thin FFTW wrappers. Buffers are allocated through FFTW so every call sees
// the same alignment, which keeps results bit-reproducible across runs.
// Sign convention is FFTW's: forward uses e^{-2 pi i k n / N}.

std::vector<std::complex<double>> real_forward(const std::vector<double>& x);
/// Inverse of real_forward without the 1/N factor.
std::vector<double> real_backward(const std::vector<std::complex<double>>& spectrum, std::size_t n);
std::vector<std::complex<double>> complex_forward(const std::vector<std::complex<double>>& x);

}  // namespace slabcausal::detail
