#include "fft.hpp"

#include <algorithm>
#include <memory>
#include <mutex>

#include <fftw3.h>

namespace slabcausal::detail {
namespace {

// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const noexcept { fftw_free(p); }
};
template <class T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

struct PlanDeleter {
  void operator()(fftw_plan p) const noexcept {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(p);
  }
};
using Plan = std::unique_ptr<std::remove_pointer_t<fftw_plan>, PlanDeleter>;

}  // namespace

std::vector<std::complex<double>> real_forward(const std::vector<double>& x) {
  const std::size_t n = x.size();
  FftwBuffer<double> in(fftw_alloc_real(n));
  FftwBuffer<fftw_complex> out(fftw_alloc_complex(n / 2 + 1));
  Plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan.reset(fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE));
  }
  std::copy(x.begin(), x.end(), in.get());
  fftw_execute(plan.get());
  std::vector<std::complex<double>> result(n / 2 + 1);
  for (std::size_t k = 0; k < result.size(); ++k) result[k] = {out[k][0], out[k][1]};
  return result;
}

std::vector<double> real_backward(const std::vector<std::complex<double>>& spectrum, std::size_t n) {
  FftwBuffer<fftw_complex> in(fftw_alloc_complex(n / 2 + 1));
  FftwBuffer<double> out(fftw_alloc_real(n));
  Plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan.reset(fftw_plan_dft_c2r_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE));
  }
  for (std::size_t k = 0; k < n / 2 + 1; ++k) {
    in[k][0] = spectrum[k].real();
    in[k][1] = spectrum[k].imag();
  }
  fftw_execute(plan.get());
  return std::vector<double>(out.get(), out.get() + n);
}

std::vector<std::complex<double>> complex_forward(const std::vector<std::complex<double>>& x) {
  const std::size_t n = x.size();
  FftwBuffer<fftw_complex> in(fftw_alloc_complex(n));
  FftwBuffer<fftw_complex> out(fftw_alloc_complex(n));
  Plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan.reset(fftw_plan_dft_1d(static_cast<int>(n), in.get(), out.get(), FFTW_FORWARD, FFTW_ESTIMATE));
  }
  for (std::size_t k = 0; k < n; ++k) {
    in[k][0] = x[k].real();
    in[k][1] = x[k].imag();
  }
  fftw_execute(plan.get());
  std::vector<std::complex<double>> result(n);
  for (std::size_t k = 0; k < n; ++k) result[k] = {out[k][0], out[k][1]};
  return result;
}

}  // namespace slabcausal::detail
