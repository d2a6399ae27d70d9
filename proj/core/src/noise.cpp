#include "axsim/noise.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include "axsim/fft.hpp"
#include "axsim/rng.hpp"
#include "axsim/units.hpp"

namespace axsim {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

std::mt19937_64 channel_stream(const NoiseConfig& cfg, NoiseChannel c) {
  return substream(cfg.seed, std::string("noise/") + channel_name(c));
}

Trace prepare(const TimeGrid& grid, const NoiseConfig& cfg) {
  grid.validate();
  cfg.validate();
  return Trace(grid, cfg.seed);
}

}  // namespace

void NoiseConfig::validate() const {
  require(white_amp >= 0.0, "noise.white_amp must be >= 0");
  require(pink_amp >= 0.0, "noise.pink_amp must be >= 0");
  require(pink_fmin > 0.0, "noise.pink_fmin must be > 0");
  require(readout_sigma >= 0.0, "noise.readout_sigma must be >= 0");
  require(p_spike >= 0.0 && p_spike <= 1.0, "noise.p_spike must lie in [0, 1]");
  require(spike_factor >= 0.0, "noise.spike_factor must be >= 0");
  require(telegraph_amp >= 0.0, "noise.telegraph_amp must be >= 0");
  require(telegraph_tau > 0.0, "noise.telegraph_tau must be > 0");
  require(drift_amp >= 0.0, "noise.drift_amp must be >= 0");
  require(ac_amp >= 0.0, "noise.ac_amp must be >= 0");
  require(ac_freq >= 0.0, "noise.ac_freq must be >= 0");
  require(temperature >= 0.0, "noise.temperature must be >= 0");
  require(resistance >= 0.0, "noise.resistance must be >= 0");
  require(johnson_gain >= 0.0, "noise.johnson_gain must be >= 0");
}

NoiseConfig NoiseConfig::silent() {
  NoiseConfig c;
  c.white_amp = c.pink_amp = c.readout_sigma = c.telegraph_amp = 0.0;
  c.drift_amp = c.ac_amp = c.temperature = 0.0;
  c.p_spike = 0.0;
  return c;
}

const char* channel_name(NoiseChannel c) {
  switch (c) {
    case NoiseChannel::white: return "white";
    case NoiseChannel::pink: return "pink";
    case NoiseChannel::readout: return "readout";
    case NoiseChannel::telegraph: return "telegraph";
    case NoiseChannel::drift: return "drift";
    case NoiseChannel::ac: return "ac";
    case NoiseChannel::johnson: return "johnson";
  }
  return "unknown";
}

void RtnEnsemble::validate() const {
  require(tau_min > 0.0 && tau_min < tau_max, "rtn ensemble: need 0 < tau_min < tau_max");
  require(alpha > 0.0, "rtn ensemble: alpha must be > 0");
  for (const auto& s : sources) require(s.tau > 0.0, "rtn source: tau must be > 0");
}

double RtnEnsemble::mean_square_shift() const {
  if (sources.empty()) return 0.0;
  double acc = 0.0;
  for (const auto& s : sources) acc += s.delta_eps * s.delta_eps;
  return acc / static_cast<double>(sources.size());
}

double rtn_psd(const RtnSource& src, double f_hz) {
  require(src.tau > 0.0, "rtn_psd: tau must be > 0");
  require(f_hz >= 0.0, "rtn_psd: frequency must be >= 0");
  const double wt = kTwoPi * f_hz * src.tau;
  return src.delta_eps * src.delta_eps * src.tau / (1.0 + wt * wt);
}

double one_over_f_psd(const RtnEnsemble& ens, double f_hz) {
  if (!(f_hz > 0.0)) {
    throw std::invalid_argument("one_over_f_psd: frequency must be > 0 (1/f diverges)");
  }
  return ens.alpha * ens.mean_square_shift() / (kTwoPi * f_hz);
}

RtnEnsemble log_uniform_ensemble(std::size_t n_sources, double tau_min, double tau_max,
                                 double delta_eps, double alpha, std::mt19937_64& rng) {
  RtnEnsemble ens;
  ens.tau_min = tau_min;
  ens.tau_max = tau_max;
  ens.alpha = alpha;
  ens.validate();
  std::uniform_real_distribution<double> u(std::log(tau_min), std::log(tau_max));
  ens.sources.reserve(n_sources);
  for (std::size_t i = 0; i < n_sources; ++i) {
    ens.sources.push_back({delta_eps, std::exp(u(rng))});
  }
  return ens;
}

Trace telegraph_process(const TimeGrid& grid, double amplitude, double mean_dwell,
                        std::mt19937_64& rng) {
  grid.validate();
  require(mean_dwell > 0.0, "telegraph: mean dwell must be > 0");
  Trace out(grid);
  if (amplitude == 0.0) return out;
  std::exponential_distribution<double> dwell(1.0 / mean_dwell);
  std::bernoulli_distribution coin(0.5);
  double level = coin(rng) ? amplitude : -amplitude;
  double next_switch = grid.t0 + dwell(rng);
  for (std::size_t k = 0; k < grid.n_samples; ++k) {
    const double t = grid.time(k);
    while (t >= next_switch) {
      level = -level;
      next_switch += dwell(rng);
    }
    out.values[k] = level;
  }
  return out;
}

Trace simulate_rtn(const RtnSource& src, const TimeGrid& grid, std::mt19937_64& rng) {
  return telegraph_process(grid, 0.5 * src.delta_eps, 2.0 * src.tau, rng);
}

Trace simulate_rtn_ensemble(const RtnEnsemble& ens, const TimeGrid& grid,
                            std::mt19937_64& rng) {
  ens.validate();
  Trace out(grid);
  for (const auto& s : ens.sources) out += simulate_rtn(s, grid, rng);
  return out;
}

Trace gen_white(const TimeGrid& grid, const NoiseConfig& cfg) {
  Trace out = prepare(grid, cfg);
  if (cfg.white_amp == 0.0) return out;
  auto rng = channel_stream(cfg, NoiseChannel::white);
  std::normal_distribution<double> n(0.0, cfg.white_amp);
  for (auto& v : out.values) v = n(rng);
  return out;
}

// 1/f spectrum imposed on complex Gaussian bins, normalized so the expected
// variance over the grid equals pink_amp^2.
Trace gen_pink(const TimeGrid& grid, const NoiseConfig& cfg) {
  Trace out = prepare(grid, cfg);
  if (cfg.pink_amp == 0.0) return out;
  auto rng = channel_stream(cfg, NoiseChannel::pink);
  std::normal_distribution<double> n(0.0, 1.0);

  const std::size_t len = grid.n_samples;
  RealFft fft(len);
  std::vector<std::complex<double>> spectrum(fft.spectrum_size());
  const double df = grid.sample_rate() / static_cast<double>(len);
  double expected_var = 0.0;
  for (std::size_t k = 1; k < spectrum.size(); ++k) {
    const double f = df * static_cast<double>(k);
    const double re = n(rng);
    const double im = n(rng);
    if (f < cfg.pink_fmin) continue;
    const double w = 1.0 / std::sqrt(f);
    const bool nyquist_bin = (len % 2 == 0) && k == len / 2;
    if (nyquist_bin) {
      spectrum[k] = {w * re, 0.0};
      expected_var += w * w;
    } else {
      spectrum[k] = {w * re / std::numbers::sqrt2, w * im / std::numbers::sqrt2};
      expected_var += 2.0 * w * w;
    }
  }
  if (expected_var == 0.0) return out;
  std::vector<double> x;
  fft.inverse(spectrum, x);
  const double gain = cfg.pink_amp / std::sqrt(expected_var);
  for (std::size_t j = 0; j < len; ++j) out.values[j] = gain * x[j];
  return out;
}

Trace gen_readout(const TimeGrid& grid, const NoiseConfig& cfg) {
  Trace out = prepare(grid, cfg);
  if (cfg.readout_sigma == 0.0) return out;
  auto rng = channel_stream(cfg, NoiseChannel::readout);
  std::normal_distribution<double> n(0.0, cfg.readout_sigma);
  std::bernoulli_distribution spike(cfg.p_spike);
  std::bernoulli_distribution sign(0.5);
  const double height = cfg.spike_factor * cfg.readout_sigma;
  for (auto& v : out.values) {
    v = n(rng);
    if (spike(rng)) v += sign(rng) ? height : -height;
  }
  return out;
}

Trace gen_telegraph(const TimeGrid& grid, const NoiseConfig& cfg) {
  Trace out = prepare(grid, cfg);
  if (cfg.telegraph_amp == 0.0) return out;
  auto rng = channel_stream(cfg, NoiseChannel::telegraph);
  out.values = telegraph_process(grid, cfg.telegraph_amp, cfg.telegraph_tau, rng).values;
  return out;
}

// Gaussian random walk rescaled to RMS drift_amp over the grid.
Trace gen_drift(const TimeGrid& grid, const NoiseConfig& cfg) {
  Trace out = prepare(grid, cfg);
  if (cfg.drift_amp == 0.0) return out;
  auto rng = channel_stream(cfg, NoiseChannel::drift);
  std::normal_distribution<double> n(0.0, 1.0);
  double level = 0.0;
  double sum_sq = 0.0;
  for (auto& v : out.values) {
    level += n(rng);
    v = level;
    sum_sq += level * level;
  }
  const double rms = std::sqrt(sum_sq / static_cast<double>(out.size()));
  if (rms == 0.0) return out;
  for (auto& v : out.values) v *= cfg.drift_amp / rms;
  return out;
}

Trace gen_ac(const TimeGrid& grid, const NoiseConfig& cfg) {
  Trace out = prepare(grid, cfg);
  if (cfg.ac_amp == 0.0) return out;
  grid.require_below_nyquist(cfg.ac_freq, "noise.ac_freq");
  auto rng = channel_stream(cfg, NoiseChannel::ac);
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  const double phase = u(rng);
  for (std::size_t k = 0; k < out.size(); ++k) {
    out.values[k] = cfg.ac_amp * std::sin(kTwoPi * cfg.ac_freq * grid.time(k) + phase);
  }
  return out;
}

// White Gaussian voltage with variance 4 k_B T R * (fs/2), times johnson_gain.
Trace gen_johnson(const TimeGrid& grid, const NoiseConfig& cfg) {
  Trace out = prepare(grid, cfg);
  const double volts_rms = std::sqrt(
      units::johnson_voltage_psd(cfg.temperature, cfg.resistance) * grid.nyquist());
  const double sigma = cfg.johnson_gain * volts_rms;
  if (sigma == 0.0) return out;
  auto rng = channel_stream(cfg, NoiseChannel::johnson);
  std::normal_distribution<double> n(0.0, sigma);
  for (auto& v : out.values) v = n(rng);
  return out;
}

Trace gen_channel(NoiseChannel c, const TimeGrid& grid, const NoiseConfig& cfg) {
  switch (c) {
    case NoiseChannel::white: return gen_white(grid, cfg);
    case NoiseChannel::pink: return gen_pink(grid, cfg);
    case NoiseChannel::readout: return gen_readout(grid, cfg);
    case NoiseChannel::telegraph: return gen_telegraph(grid, cfg);
    case NoiseChannel::drift: return gen_drift(grid, cfg);
    case NoiseChannel::ac: return gen_ac(grid, cfg);
    case NoiseChannel::johnson: return gen_johnson(grid, cfg);
  }
  throw std::invalid_argument("unknown noise channel");
}

Trace compose_noise(const TimeGrid& grid, const NoiseConfig& cfg) {
  Trace out = prepare(grid, cfg);
  for (NoiseChannel c : kAllChannels) out += gen_channel(c, grid, cfg);
  return out;
}

}  // namespace axsim
