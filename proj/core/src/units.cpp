#include "axsim/units.hpp"

#include <cmath>

namespace axsim::units {

double gev_per_cm3_to_ev4(double density_gev_cm3) {
  // 1 cm^-3 = (hbar c / 1 cm)^3 in eV^3.
  const double per_cm3_in_ev3 = kHbarCEvCm * kHbarCEvCm * kHbarCEvCm;
  return density_gev_cm3 * 1e9 * per_cm3_in_ev3;
}

double gev_per_cm3_to_j_per_m3(double density_gev_cm3) {
  return density_gev_cm3 * 1e9 * kElementaryCharge * 1e6;
}

double gradient_coupling_energy_ev(double coupling, double velocity_c,
                                   double density_gev_cm3, double cos_theta0) {
  const double gradient_ev2 =
      velocity_c * std::sqrt(2.0 * gev_per_cm3_to_ev4(density_gev_cm3));
  return coupling * gradient_ev2 * cos_theta0 / (2.0 * kElectronMassEv);
}

double johnson_voltage_psd(double temperature_k, double resistance_ohm) {
  return 4.0 * kBoltzmann * temperature_k * resistance_ohm;
}

}  // namespace axsim::units
