#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "axsim/trace.hpp"

namespace axsim {

/// Amplitudes and shape parameters of the seven noise channels. Amplitudes
/// are target RMS values in the same dimensionless units as the
/// polarization signal the noise is added to. Defaults are the reference
/// noise configuration; telegraph_tau, spike_factor and johnson_gain are not
/// fixed by it and are flagged when left at their defaults.
struct NoiseConfig {
  double white_amp = 1e-3;
  double pink_amp = 2e-2;
  double pink_fmin = 1.0;          // Hz
  double readout_sigma = 2e-3;
  double p_spike = 5e-3;           // per sample
  double spike_factor = 10.0;      // spike height in units of readout_sigma
  double telegraph_amp = 5e-4;
  double telegraph_tau = 1e-6;     // mean dwell time, s
  double drift_amp = 2e-4;
  double ac_amp = 1e-4;
  double ac_freq = 50.0;           // Hz
  double temperature = 300.0;      // K
  double resistance = 50.0;        // ohm
  double johnson_gain = 1e-6;      // signal units per volt
  std::uint64_t seed = 20251018;

  void validate() const;

  static NoiseConfig silent();  // every amplitude zero

  friend bool operator==(const NoiseConfig&, const NoiseConfig&) = default;
};

enum class NoiseChannel { white, pink, readout, telegraph, drift, ac, johnson };

inline constexpr NoiseChannel kAllChannels[] = {
    NoiseChannel::white, NoiseChannel::pink,  NoiseChannel::readout,
    NoiseChannel::telegraph, NoiseChannel::drift, NoiseChannel::ac,
    NoiseChannel::johnson};

const char* channel_name(NoiseChannel c);

/// Single two-level charge fluctuator. delta_eps is the qubit splitting
/// shift (Hz), tau the correlation time (s).
struct RtnSource {
  double delta_eps = 1.0;
  double tau = 1e-6;
};

struct RtnEnsemble {
  std::vector<RtnSource> sources;
  double tau_min = 1e-7;
  double tau_max = 1e-3;
  double alpha = 0.8;

  void validate() const;
  /// Mean of delta_eps^2 over the sources.
  double mean_square_shift() const;
};

/// One-sided power density delta_eps^2 tau / (1 + (2 pi f tau)^2).
double rtn_psd(const RtnSource& src, double f_hz);

/// alpha <delta_eps^2> / omega with omega = 2 pi f: the angular-frequency
/// density evaluated at the cyclic frequency f. Throws for f <= 0.
double one_over_f_psd(const RtnEnsemble& ens, double f_hz);

/// RTN ensemble with tau drawn log-uniformly on [tau_min, tau_max] and a
/// common shift delta_eps.
RtnEnsemble log_uniform_ensemble(std::size_t n_sources, double tau_min, double tau_max,
                                 double delta_eps, double alpha, std::mt19937_64& rng);

// Channel generators. Each draws from its own substream of cfg.seed, so a
// channel's output does not depend on which other channels are enabled.
Trace gen_white(const TimeGrid& grid, const NoiseConfig& cfg);
Trace gen_pink(const TimeGrid& grid, const NoiseConfig& cfg);
Trace gen_readout(const TimeGrid& grid, const NoiseConfig& cfg);
Trace gen_telegraph(const TimeGrid& grid, const NoiseConfig& cfg);
Trace gen_drift(const TimeGrid& grid, const NoiseConfig& cfg);
Trace gen_ac(const TimeGrid& grid, const NoiseConfig& cfg);
Trace gen_johnson(const TimeGrid& grid, const NoiseConfig& cfg);

Trace gen_channel(NoiseChannel c, const TimeGrid& grid, const NoiseConfig& cfg);

/// Symmetric telegraph process with levels +-amplitude and exponentially
/// distributed dwell times of mean `mean_dwell` seconds.
Trace telegraph_process(const TimeGrid& grid, double amplitude, double mean_dwell,
                        std::mt19937_64& rng);

/// Telegraph realization whose one-sided PSD is rtn_psd(src, f): levels
/// +-delta_eps/2, mean dwell 2 tau.
Trace simulate_rtn(const RtnSource& src, const TimeGrid& grid, std::mt19937_64& rng);

/// Sum of simulate_rtn over every source of the ensemble.
Trace simulate_rtn_ensemble(const RtnEnsemble& ens, const TimeGrid& grid,
                            std::mt19937_64& rng);

/// Sum of all seven channels in fixed order.
Trace compose_noise(const TimeGrid& grid, const NoiseConfig& cfg);

}  // namespace axsim
