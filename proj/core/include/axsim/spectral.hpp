#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "axsim/trace.hpp"

namespace axsim {

enum class Window { rectangular, hann, hamming, blackman };

const char* window_name(Window w);
Window window_from_name(const std::string& name);

struct PsdOptions {
  Window window = Window::hann;
  std::size_t segment_len = 0;  // 0: one segment spanning the whole trace
  double overlap = 0.5;
  bool detrend_mean = false;
};

/// One-sided power spectral density (units^2/Hz) on bins k * fs / segment_len.
struct Psd {
  std::vector<double> frequency;
  std::vector<double> power;
  Window window = Window::hann;
  std::size_t segment_len = 0;
  double overlap = 0.0;
  std::size_t n_segments = 0;

  double bin_width() const;
  std::size_t size() const { return power.size(); }
  /// Sum of power * bin width, i.e. the mean square of the input.
  double total_power() const;
  /// Nearest bin to f_hz.
  std::size_t bin_of(double f_hz) const;
};

/// Welch estimate: averaged modified periodograms in fixed segment order.
/// Throws std::invalid_argument for empty traces, segments longer than the
/// trace or overlap outside [0, 1).
Psd estimate_psd(const Trace& x, const PsdOptions& opt = {});

/// Single full-length periodogram with the given window.
Psd periodogram(const Trace& x, Window window = Window::rectangular);

struct SpectralLine {
  int order = 0;  // 0 for the carrier
  int side = 0;   // -1 lower, +1 upper, 0 carrier
  double predicted_hz = 0.0;
  double frequency_hz = 0.0;  // interpolated peak; equals predicted when not found
  double power = 0.0;         // integrated over the line, units^2
  double prominence_db = 0.0;
  bool found = false;
};

struct SidebandOptions {
  int search_bins = 2;        // local-maximum search half-width
  int power_half_width = 3;   // integration half-width for line power
  double prominence_db = 3.0;
};

struct SidebandReport {
  SpectralLine carrier;
  std::vector<SpectralLine> sidebands;  // order 1..n_max, lower then upper
  double noise_floor = 0.0;             // units^2/Hz
  double bin_width = 0.0;

  const SpectralLine* find(int order, int side) const;
  int found_count() const;
};

/// Looks for the carrier and the lines f_main +- n f_axion, n = 1..n_max.
/// Prominence is the mean density over the line in excess of the local
/// noise floor, relative to that floor. The floor is the median of the
/// neighbourhood with all predicted lines masked, corrected to a mean for
/// the averaging depth of the estimate, and never below the rounding residue
/// of a double trace ((100 eps)^2 of the total power density). No excess
/// reports the -300 dB sentinel.
/// Lines outside (0, Nyquist) or below the prominence threshold come back
/// with found = false.
SidebandReport detect_sidebands(const Psd& p, double f_main, double f_axion, int n_max,
                                const SidebandOptions& opt = {});

std::string sideband_report_to_json(const SidebandReport& r);

/// Running trapezoidal integral of the PSD normalized to 1 at Nyquist.
/// Returns all zeros for an all-zero PSD.
std::vector<double> cumulative_power(const Psd& p);

using Band = std::pair<double, double>;

struct DynamicSnrOptions {
  std::size_t window = 100;
  std::size_t hop = 1;
  Band signal_band{0.0, 0.0};
  Band noise_band{0.0, 0.0};
  int filter_order = 4;
};

inline constexpr double kSnrSaturatedDb = 300.0;

struct DynamicSnr {
  std::vector<double> time;  // window centres, s
  std::vector<double> db;

  double mean_db() const;
  double min_db() const;
  double max_db() const;
};

/// Sliding-window 10 log10(var(signal band) / var(noise band)) on
/// zero-phase band-isolated copies of x. Equal variances give 0 dB, zero
/// noise variance gives +kSnrSaturatedDb.
DynamicSnr dynamic_snr(const Trace& x, const DynamicSnrOptions& opt);

/// Bands around the lower first sideband and halfway to the second one,
/// each width_fraction * f_axion wide.
DynamicSnrOptions lower_sideband_bands(double f_main, double f_axion,
                                       double width_fraction = 0.3);

/// 10 log10(num / den) clamped to +-kSnrSaturatedDb; 0 dB when both are
/// zero, +kSnrSaturatedDb when only den is.
double power_ratio_db(double num, double den);

/// 20 log10(ratio); ratio 0 gives -kSnrSaturatedDb.
double snr_db(double amplitude_ratio);

}  // namespace axsim
