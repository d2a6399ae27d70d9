#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace axsim {

/// Real-input DFT of fixed length backed by FFTW. Plans are created with
/// FFTW_ESTIMATE so the transform is bit-reproducible from run to run.
/// One instance must not be used concurrently from several threads;
/// distinct instances may.
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;
  RealFft(RealFft&&) noexcept;
  RealFft& operator=(RealFft&&) noexcept;

  std::size_t size() const { return n_; }
  std::size_t spectrum_size() const { return n_ / 2 + 1; }

  /// Unnormalized forward transform, X_k = sum_j x_j exp(-2 pi i jk/n).
  void forward(std::span<const double> in, std::vector<std::complex<double>>& out);

  /// Unnormalized inverse; the result is n times the original signal.
  void inverse(std::span<const std::complex<double>> in, std::vector<double>& out);

 private:
  struct Impl;
  std::size_t n_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace axsim
