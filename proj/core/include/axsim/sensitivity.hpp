#pragma once

#include <string>
#include <vector>

#include "axsim/physics.hpp"

namespace axsim {

/// Detector configuration entering the sensitivity estimates. t_s is the
/// total integration time; repetitions t/T2 are already folded into sqrt(t).
struct DeviceScenario {
  std::string name = "device";
  double q_factor = 1e5;
  double n_spins = 1e6;
  double t_s = 3.15576e7;       // one year
  double eta_b = 1e-7;          // T/sqrt(Hz)
  double t2_s = 100e-6;
  bool entangled = true;

  void validate() const;
  /// N when entangled (Heisenberg scaling), sqrt(N) otherwise.
  double effective_spins() const;

  friend bool operator==(const DeviceScenario&, const DeviceScenario&) = default;

  static DeviceScenario best_case();     // Q=1e5, N=1e6, entangled
  static DeviceScenario current();       // Q=1e4, N=16, T2=1 ms
  static DeviceScenario next_generation();  // Q=1e6, N=1e6, T2=100 ms
};

/// Amplitude SNR Q * B_eff * N_eff * sqrt(t) / eta_B.
double snr_amp(const DeviceScenario& s, const AxionParams& a, const QubitConfig& q);

/// gamma * eta_B / (Q * N_eff * sqrt(t) * f_axion), gamma in Hz/T.
double beta_min(const DeviceScenario& s, double f_axion_hz,
                double gyromagnetic_hz_per_t = 28e9);

/// Single-spin, single-coherence-window form gamma * eta_B / (f_axion * sqrt(T2)).
double beta_min_base(double eta_b, double t2_s, double f_axion_hz,
                     double gyromagnetic_hz_per_t = 28e9);

inline constexpr double kDetectionSigma = 5.0;

/// beta >= 5 beta_min (inclusive).
bool detection_threshold(double beta, double beta_min);

/// Smallest g_ae with modulation_index >= 5 beta_min at mass m_a; the
/// coupling in `env` is ignored.
double g_ae_limit(double mass_ev, const DeviceScenario& s, const AxionParams& env,
                  const QubitConfig& q);

enum class DfszVariant { I, II };

struct DfszModel {
  double tan_beta = 1.0;
  double f_a_gev = 1e9;
  DfszVariant variant = DfszVariant::I;

  /// tan_beta > 0 and f_a in [1e9, 1e12] GeV.
  void validate() const;
};

/// C_e = cos^2(beta)/3 (I) or sin^2(beta)/3 (II).
double dfsz_ce(double tan_beta, DfszVariant v);

/// g_ae = C_e * m_e / f_a. Validates the model.
double dfsz_coupling(const DfszModel& m);

/// Same formula without the f_a range check.
double dfsz_coupling_unchecked(double tan_beta, double f_a_gev, DfszVariant v);

inline constexpr double kTanBetaMin = 0.1;
inline constexpr double kTanBetaMax = 50.0;

struct DfszBand {
  double lower = 0.0;
  double upper = 0.0;
  double tan_beta_one = 0.0;
};

/// Couplings spanned by tan(beta) in [0.1, 50] at fixed f_a.
DfszBand dfsz_band(double f_a_gev, DfszVariant v);

/// QCD axion decay constant for a given mass: m_a = 5.70 ueV * (1e12 GeV / f_a).
double decay_constant_gev(double mass_ev);

struct ScanRow {
  double mass_ev = 0.0;
  double f_axion_hz = 0.0;
  std::vector<double> g_ae_limit;  // one per scenario
  double f_a_gev = 0.0;
  bool f_a_in_range = false;
  DfszBand dfsz;
};

struct ScanTable {
  std::vector<std::string> scenarios;
  DfszVariant variant = DfszVariant::I;
  std::vector<ScanRow> rows;

  std::string to_csv() const;
};

/// n log-spaced masses on [lo, hi] eV.
std::vector<double> log_mass_grid(double lo_ev, double hi_ev, std::size_t n);

/// Throws std::invalid_argument for an empty grid or no scenarios.
ScanTable scan(const std::vector<double>& masses_ev,
               const std::vector<DeviceScenario>& scenarios, const AxionParams& env,
               const QubitConfig& q, DfszVariant variant = DfszVariant::I);

struct ReferenceLine {
  std::string label;
  std::vector<double> mass_ev;
  std::vector<double> g_ae;
};

/// Two-column CSV (mass_ev, g_ae) with a header row; '#' lines are comments
/// and a "# label: ..." comment names the line.
ReferenceLine load_reference_line(const std::string& path);

}  // namespace axsim
