#include "axsim/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <mutex>
#include <stdexcept>

namespace axsim {
namespace {
// FFTW's planner is not thread-safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct RealFft::Impl {
  double* real = nullptr;
  fftw_complex* spectrum = nullptr;
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;

  explicit Impl(std::size_t n) {
    const int len = static_cast<int>(n);
    std::lock_guard lock(planner_mutex());
    real = fftw_alloc_real(n);
    spectrum = fftw_alloc_complex(n / 2 + 1);
    if (real == nullptr || spectrum == nullptr) throw std::bad_alloc();
    r2c = fftw_plan_dft_r2c_1d(len, real, spectrum, FFTW_ESTIMATE);
    c2r = fftw_plan_dft_c2r_1d(len, spectrum, real, FFTW_ESTIMATE);
  }

  ~Impl() {
    std::lock_guard lock(planner_mutex());
    if (r2c) fftw_destroy_plan(r2c);
    if (c2r) fftw_destroy_plan(c2r);
    fftw_free(real);
    fftw_free(spectrum);
  }
};

RealFft::RealFft(std::size_t n) : n_(n) {
  if (n < 2) throw std::invalid_argument("RealFft: length must be >= 2");
  impl_ = std::make_unique<Impl>(n);
}

RealFft::~RealFft() = default;
RealFft::RealFft(RealFft&&) noexcept = default;
RealFft& RealFft::operator=(RealFft&&) noexcept = default;

void RealFft::forward(std::span<const double> in,
                      std::vector<std::complex<double>>& out) {
  if (in.size() != n_) throw std::invalid_argument("RealFft::forward: size mismatch");
  std::copy(in.begin(), in.end(), impl_->real);
  fftw_execute(impl_->r2c);
  out.resize(spectrum_size());
  std::memcpy(static_cast<void*>(out.data()), impl_->spectrum, spectrum_size() * sizeof(fftw_complex));
}

void RealFft::inverse(std::span<const std::complex<double>> in,
                      std::vector<double>& out) {
  if (in.size() != spectrum_size()) {
    throw std::invalid_argument("RealFft::inverse: size mismatch");
  }
  // c2r destroys its input, so it always works on the internal copy.
  std::memcpy(impl_->spectrum, in.data(), spectrum_size() * sizeof(fftw_complex));
  fftw_execute(impl_->c2r);
  out.assign(impl_->real, impl_->real + n_);
}

}  // namespace axsim
