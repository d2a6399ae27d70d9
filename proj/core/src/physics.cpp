#include "axsim/physics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "axsim/units.hpp"

namespace axsim {
namespace {

constexpr long double kTwoPiL = 2.0L * std::numbers::pi_v<long double>;

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

// 2*pi*frac(f*t), reduced in extended precision so that the carrier phase
// keeps full double resolution over long grids.
double reduced_phase(double freq_hz, long double t) {
  const long double cycles = static_cast<long double>(freq_hz) * t;
  const long double frac = cycles - std::floor(cycles);
  return static_cast<double>(kTwoPiL * frac);
}

long double grid_time(const TimeGrid& g, std::size_t k) {
  return static_cast<long double>(g.t0) +
         static_cast<long double>(g.dt) * static_cast<long double>(k);
}

// Accumulated phase difference of the two spin components at sample k.
template <typename F>
Trace phase_trace(const AxionParams& a, const QubitConfig& q,
                  const TimeGrid& grid, double amplitude_scale, F&& projector) {
  a.validate();
  q.validate();
  grid.validate();
  const double f_main = larmor_frequency(q);
  const double f_axion = axion_frequency(a);
  grid.require_below_nyquist(f_main, "carrier (Larmor) frequency");
  grid.require_below_nyquist(f_axion, "axion frequency");
  require(amplitude_scale >= 0.0 && std::isfinite(amplitude_scale),
          "amplitude_scale must be finite and >= 0");

  const double depth = amplitude_scale * modulation_index(effective_signal(a, q));
  const double cos_phi = std::cos(a.phase_rad);
  Trace out(grid);
  for (std::size_t k = 0; k < grid.n_samples; ++k) {
    const long double t = grid_time(grid, k);
    const double carrier = reduced_phase(f_main, t);
    double phase = carrier;
    if (depth != 0.0) {
      const double axion = reduced_phase(f_axion, t) + a.phase_rad;
      phase += depth * (std::cos(axion) - cos_phi);
    }
    out.values[k] = projector(phase);
  }
  return out;
}

}  // namespace

void AxionParams::validate() const {
  require(mass_ev > 0.0, "axion.mass_ev must be > 0");
  require(density_gev_cm3 > 0.0, "axion.density_gev_cm3 must be > 0");
  require(coupling_gae >= 0.0, "axion.coupling_gae must be >= 0");
  require(velocity_c > 0.0 && velocity_c < 1.0, "axion.velocity_c must lie in (0, 1)");
  require(cos_theta0 >= -1.0 && cos_theta0 <= 1.0,
          "axion.cos_theta0 must lie in [-1, 1]");
  require(std::isfinite(phase_rad), "axion.phase_rad must be finite");
}

void QubitConfig::validate() const {
  require(field_t >= 0.0, "qubit.field_t must be >= 0");
  require(gyromagnetic_hz_per_t > 0.0, "qubit.gyromagnetic_hz_per_t must be > 0");
  require(t2_s > 0.0, "qubit.t2_s must be > 0");
  require(t1_s >= t2_s / 2.0, "qubit.t1_s must be >= t2_s / 2");
}

double larmor_frequency(const QubitConfig& q) {
  return q.gyromagnetic_hz_per_t * q.field_t;
}

double axion_frequency(const AxionParams& a) { return units::ev_to_hz(a.mass_ev); }

double effective_field(const AxionParams& a, const QubitConfig& q) {
  const double energy_ev = units::gradient_coupling_energy_ev(
      a.coupling_gae, a.velocity_c, a.density_gev_cm3, a.cos_theta0);
  return units::ev_to_hz(energy_ev) / q.gyromagnetic_hz_per_t;
}

EffectiveSignal effective_signal(const AxionParams& a, const QubitConfig& q) {
  return {larmor_frequency(q), axion_frequency(a), effective_field(a, q),
          q.gyromagnetic_hz_per_t};
}

double modulation_index(const EffectiveSignal& s) {
  if (!(s.f_axion_hz > 0.0)) {
    throw std::invalid_argument(
        "modulation_index: axion frequency must be > 0 (invalid axion mass)");
  }
  return s.gyromagnetic_hz_per_t * s.field_t / s.f_axion_hz;
}

Trace sigma_x_trace(const AxionParams& a, const QubitConfig& q, const TimeGrid& grid,
                    double amplitude_scale) {
  return phase_trace(a, q, grid, amplitude_scale,
                     [](double phase) { return std::cos(phase); });
}

Trace detail::sigma_y_trace(const AxionParams& a, const QubitConfig& q,
                            const TimeGrid& grid, double amplitude_scale) {
  return phase_trace(a, q, grid, amplitude_scale,
                     [](double phase) { return std::sin(phase); });
}

Trace sigma_z_trace(const SpinState& state, const TimeGrid& grid) {
  grid.validate();
  const double up = std::norm(state.c_plus);
  const double down = std::norm(state.c_minus);
  if (std::fabs(up + down - 1.0) > 1e-12) {
    throw std::invalid_argument("sigma_z_trace: spin state is not normalized");
  }
  Trace out(grid);
  std::fill(out.values.begin(), out.values.end(), up - down);
  return out;
}

Trace apply_decoherence(const Trace& trace, const QubitConfig& q,
                        Polarization component) {
  q.validate();
  const double lifetime =
      component == Polarization::transverse ? q.t2_s : q.t1_s;
  Trace out = trace;
  if (std::isinf(lifetime)) return out;
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double t = trace.grid.time(k);
    if (t < 0.0) throw std::invalid_argument("apply_decoherence: negative grid time");
    out.values[k] *= std::exp(-t / lifetime);
  }
  return out;
}

ModulationDiagnostics modulation_diagnostics(const AxionParams& a,
                                             const QubitConfig& q,
                                             const TimeGrid& grid,
                                             double amplitude_scale) {
  ModulationDiagnostics d;
  d.physical_beta = modulation_index(effective_signal(a, q));
  d.amplitude_scale = amplitude_scale;
  d.effective_beta = d.physical_beta * amplitude_scale;
  d.max_carrier_phase_rad =
      2.0 * std::numbers::pi * larmor_frequency(q) * grid.time(grid.n_samples - 1);
  const double two_pi = 2.0 * std::numbers::pi;
  d.phase_resolution_rad = std::nextafter(two_pi, 10.0) - two_pi;
  d.resolvable = d.effective_beta > d.phase_resolution_rad;
  return d;
}

void TimeGrid::validate() const {
  require(dt > 0.0 && std::isfinite(dt), "grid.dt must be > 0");
  require(n_samples >= 2, "grid.n_samples must be >= 2");
  require(std::isfinite(t0), "grid.t0 must be finite");
}

void TimeGrid::require_below_nyquist(double frequency_hz, const char* what) const {
  if (!(frequency_hz < nyquist())) {
    throw std::invalid_argument(std::string(what) + " (" + std::to_string(frequency_hz) +
                                " Hz) is not below the grid Nyquist frequency (" +
                                std::to_string(nyquist()) + " Hz)");
  }
}

Trace operator+(const Trace& a, const Trace& b) {
  Trace out = a;
  out += b;
  return out;
}

Trace& operator+=(Trace& a, const Trace& b) {
  if (a.size() != b.size()) throw std::invalid_argument("trace sizes differ");
  for (std::size_t k = 0; k < a.size(); ++k) a.values[k] += b.values[k];
  return a;
}

Trace operator*(double gain, const Trace& a) {
  Trace out = a;
  for (auto& v : out.values) v *= gain;
  return out;
}

}  // namespace axsim
