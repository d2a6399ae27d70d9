#pragma once

// Conversion table between the natural-unit expressions of the axion
// coupling and the SI quantities used everywhere else. All public
// frequencies are cyclic (Hz).

namespace axsim::units {

// CODATA 2018 exact / recommended values.
inline constexpr double kElementaryCharge = 1.602176634e-19;    // C
inline constexpr double kPlanck = 6.62607015e-34;               // J s
inline constexpr double kBoltzmann = 1.380649e-23;              // J/K
inline constexpr double kSpeedOfLight = 299792458.0;            // m/s
inline constexpr double kElectronMassEv = 0.51099895000e6;      // eV
inline constexpr double kHbarCEvCm = 1.973269804e-5;            // eV cm
inline constexpr double kEvToHz = kElementaryCharge / kPlanck;  // 2.417989e14 Hz/eV

inline constexpr double kSecondsPerYear = 365.25 * 86400.0;

/// Energy in eV to cyclic frequency in Hz.
constexpr double ev_to_hz(double energy_ev) { return energy_ev * kEvToHz; }
constexpr double hz_to_ev(double freq_hz) { return freq_hz / kEvToHz; }

/// Mass density in GeV/cm^3 expressed in natural units (eV^4).
double gev_per_cm3_to_ev4(double density_gev_cm3);

/// Mass density in GeV/cm^3 expressed in J/m^3.
double gev_per_cm3_to_j_per_m3(double density_gev_cm3);

/// Energy scale of the axion-gradient coupling to an electron spin, in eV:
/// g * v * sqrt(2 rho) * cos(theta0) / (2 m_e), with rho in eV^4.
double gradient_coupling_energy_ev(double coupling, double velocity_c,
                                   double density_gev_cm3, double cos_theta0);

/// Johnson-Nyquist voltage noise density 4 k_B T R in V^2/Hz.
double johnson_voltage_psd(double temperature_k, double resistance_ohm);

}  // namespace axsim::units
