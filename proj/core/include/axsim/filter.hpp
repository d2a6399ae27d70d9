#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "axsim/trace.hpp"

namespace axsim {

enum class FilterFamily { butterworth };

/// Band-pass specification. `order` is the order of the low-pass prototype,
/// so the digital filter has 2*order poles in `order` second-order sections.
struct BandpassSpec {
  double f_low = 12.6e9;
  double f_high = 15.4e9;
  int order = 4;
  FilterFamily family = FilterFamily::butterworth;

  /// Throws std::invalid_argument for an inverted band, cutoffs at or above
  /// Nyquist of `sample_rate`, or order < 1.
  void validate(double sample_rate) const;

  /// Band [low_factor, high_factor] * f_main.
  static BandpassSpec around(double f_main, double low_factor = 0.9,
                             double high_factor = 1.1, int order = 4);

  friend bool operator==(const BandpassSpec&, const BandpassSpec&) = default;
};

/// One biquad b0 + b1 z^-1 + b2 z^-2 over 1 + a1 z^-1 + a2 z^-2.
struct Biquad {
  std::array<double, 3> b{};
  std::array<double, 3> a{1.0, 0.0, 0.0};

  friend bool operator==(const Biquad&, const Biquad&) = default;
};

struct FilterRealization {
  std::vector<Biquad> sections;
  BandpassSpec spec;
  double sample_rate = 0.0;
  double center_hz = 0.0;  // digital frequency of unit gain
  /// Impulse-response length after which h^2 stays below 1e-6 of its peak.
  std::size_t settling_samples = 0;

  std::complex<double> response(double f_hz) const;
  double magnitude_db(double f_hz) const;
  bool stable() const;
  /// Largest pole radius over all sections.
  double max_pole_radius() const;
};

FilterRealization design_bandpass(const BandpassSpec& spec, double sample_rate);

/// Cascade of transposed direct-form II biquads, zero initial state.
Trace filter_causal(const Trace& x, const FilterRealization& h);

/// Forward-backward filtering with odd reflective padding of
/// 3 * settling_samples on each side and steady-state initial conditions.
/// Throws std::invalid_argument when the trace is not longer than the pad.
Trace filter_zero_phase(const Trace& x, const FilterRealization& h);

std::size_t zero_phase_padding(const FilterRealization& h);

/// Impulse response of the cascade, n samples.
std::vector<double> impulse_response(const FilterRealization& h, std::size_t n);

std::string filter_to_json(const FilterRealization& h);
FilterRealization filter_from_json(const std::string& text);

/// Description of the shortfall when f_main +- 2 f_axion does not lie
/// inside [f_low, f_high], empty otherwise.
std::string sideband_retention_issue(const BandpassSpec& spec, double f_main, double f_axion);

/// Largest attenuation (dB, >= 0) the filter applies to the lines
/// f_main +- 2 f_axion; +infinity when one of them is outside (0, Nyquist).
double second_sideband_loss_db(const FilterRealization& h, double f_main, double f_axion);

/// Throws ConfigError naming the band and the axion mass when a second-order
/// sideband is attenuated by more than max_loss_db.
void check_sideband_retention(const FilterRealization& h, double f_main, double f_axion,
                              double max_loss_db = 6.0);

}  // namespace axsim
