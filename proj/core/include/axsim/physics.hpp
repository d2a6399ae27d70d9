#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <vector>

#include "axsim/trace.hpp"

namespace axsim {

/// Galactic axion field as seen by the sensor. Defaults reproduce the
/// reference simulation (3 ueV, 0.3 GeV/cm^3, g_ae = 1e-13, v = 1e-3 c).
struct AxionParams {
  double mass_ev = 3e-6;
  double density_gev_cm3 = 0.3;
  double coupling_gae = 1e-13;
  double velocity_c = 1e-3;
  double phase_rad = 0.0;
  double cos_theta0 = 1.0;

  void validate() const;

  friend bool operator==(const AxionParams&, const AxionParams&) = default;
};

/// Single electron-spin qubit. gyromagnetic_hz_per_t is cyclic (28 GHz/T).
/// Infinite t1_s / t2_s disable the corresponding decoherence envelope.
struct QubitConfig {
  double field_t = 0.5;
  double gyromagnetic_hz_per_t = 28e9;
  double t1_s = 1e-3;
  double t2_s = 100e-6;

  void validate() const;

  friend bool operator==(const QubitConfig&, const QubitConfig&) = default;
};

struct EffectiveSignal {
  double f_main_hz = 0.0;
  double f_axion_hz = 0.0;
  double field_t = 0.0;  // B_eff
  double gyromagnetic_hz_per_t = 28e9;
};

double larmor_frequency(const QubitConfig& q);
double axion_frequency(const AxionParams& a);

/// Axion-gradient coupling recast as a field along the quantization axis, in
/// tesla. Zero when the coupling is zero.
double effective_field(const AxionParams& a, const QubitConfig& q);

EffectiveSignal effective_signal(const AxionParams& a, const QubitConfig& q);

/// beta = gamma * B_eff / f_axion. Throws std::invalid_argument when the
/// modulation frequency is not positive.
double modulation_index(const EffectiveSignal& s);

/// Closed-form transverse polarization
///   <sigma_x>(t) = cos(w0 t + s * beta * [cos(wa t + phi) - cos(phi)])
/// for the equal superposition at z = 0. `amplitude_scale` multiplies the
/// modulation depth; the physical depth (~1e-19) is below double resolution
/// of the carrier phase, see modulation_diagnostics().
Trace sigma_x_trace(const AxionParams& a, const QubitConfig& q,
                    const TimeGrid& grid, double amplitude_scale = 1.0);

/// Spin state c_plus |up> + c_minus |down>.
struct SpinState {
  std::complex<double> c_plus{1.0 / 1.4142135623730951, 0.0};
  std::complex<double> c_minus{1.0 / 1.4142135623730951, 0.0};

  static SpinState equal_superposition() { return {}; }
};

/// Longitudinal polarization |c+|^2 - |c-|^2, constant under the diagonal
/// Hamiltonian. Throws std::invalid_argument for unnormalized states
/// (tolerance 1e-12).
Trace sigma_z_trace(const SpinState& state, const TimeGrid& grid);

enum class Polarization { transverse, longitudinal };

/// Multiplies transverse traces by exp(-t/T2) and longitudinal ones by
/// exp(-t/T1).
Trace apply_decoherence(const Trace& trace, const QubitConfig& q,
                        Polarization component);

struct SidebandAmplitude {
  int order = 0;
  double amplitude = 0.0;  // J_order(beta)
};

/// J_n(beta) for n = 0..n_max.
std::vector<SidebandAmplitude> sideband_amplitudes(double beta, int n_max);

/// Bessel functions of the first kind J_0..J_n_max at x >= 0. Ascending
/// series below x = 15, normalized backward recurrence above.
std::vector<double> bessel_j_sequence(double x, int n_max);

struct ModulationDiagnostics {
  double physical_beta = 0.0;
  double amplitude_scale = 1.0;
  double effective_beta = 0.0;
  double max_carrier_phase_rad = 0.0;
  /// Smallest phase change representable next to the largest carrier phase
  /// on the grid.
  double phase_resolution_rad = 0.0;
  bool resolvable = false;
};

/// Whether scale * beta survives double rounding next to the carrier phase
/// accumulated over the grid. Sidebands are not observable when it does not.
ModulationDiagnostics modulation_diagnostics(const AxionParams& a,
                                             const QubitConfig& q,
                                             const TimeGrid& grid,
                                             double amplitude_scale);

namespace detail {
/// Companion of sigma_x_trace (sine of the same accumulated phase). Only used
/// to check <sigma_x>^2 + <sigma_y>^2 = 1.
Trace sigma_y_trace(const AxionParams& a, const QubitConfig& q,
                    const TimeGrid& grid, double amplitude_scale = 1.0);
}  // namespace detail

}  // namespace axsim
