#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace axsim {

/// Uniform sampling grid t_k = t0 + k * dt, k = 0..n_samples-1.
struct TimeGrid {
  double dt = 2e-12;
  std::size_t n_samples = 90000;
  double t0 = 0.0;

  double sample_rate() const { return 1.0 / dt; }
  double nyquist() const { return 0.5 / dt; }
  double duration() const { return dt * static_cast<double>(n_samples); }
  double time(std::size_t k) const { return t0 + dt * static_cast<double>(k); }

  /// Throws std::invalid_argument unless dt > 0 and n_samples >= 2.
  void validate() const;

  /// Throws std::invalid_argument if `frequency_hz` is not below Nyquist.
  void require_below_nyquist(double frequency_hz, const char* what) const;

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;
};

/// Real-valued sampled signal with its grid and the seed it was drawn from
/// (0 for deterministic traces).
struct Trace {
  TimeGrid grid;
  std::vector<double> values;
  std::uint64_t seed = 0;

  Trace() = default;
  explicit Trace(TimeGrid g, std::uint64_t s = 0)
      : grid(g), values(g.n_samples, 0.0), seed(s) {}
  Trace(TimeGrid g, std::vector<double> v, std::uint64_t s = 0)
      : grid(g), values(std::move(v)), seed(s) {}

  std::size_t size() const { return values.size(); }
  double sample_rate() const { return grid.sample_rate(); }
  double operator[](std::size_t k) const { return values[k]; }
  double& operator[](std::size_t k) { return values[k]; }
};

Trace operator+(const Trace& a, const Trace& b);
Trace& operator+=(Trace& a, const Trace& b);
Trace operator*(double gain, const Trace& a);

}  // namespace axsim
