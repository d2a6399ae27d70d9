#include "axsim/sensitivity.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "axsim/error.hpp"
#include "axsim/units.hpp"

namespace axsim {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

constexpr double kElectronMassGev = units::kElectronMassEv * 1e-9;

}  // namespace

void DeviceScenario::validate() const {
  require(q_factor >= 1.0, "scenario.q_factor must be >= 1");
  require(n_spins >= 1.0, "scenario.n_spins must be >= 1");
  require(t_s > 0.0, "scenario.t_s must be > 0");
  require(eta_b > 0.0, "scenario.eta_b must be > 0");
  require(t2_s > 0.0, "scenario.t2_s must be > 0");
}

double DeviceScenario::effective_spins() const {
  return entangled ? n_spins : std::sqrt(n_spins);
}

DeviceScenario DeviceScenario::best_case() {
  DeviceScenario s;
  s.name = "best_case";
  return s;
}

DeviceScenario DeviceScenario::current() {
  DeviceScenario s;
  s.name = "current";
  s.q_factor = 1e4;
  s.n_spins = 16;
  s.t2_s = 1e-3;
  s.entangled = false;
  return s;
}

DeviceScenario DeviceScenario::next_generation() {
  DeviceScenario s;
  s.name = "next_generation";
  s.q_factor = 1e6;
  s.n_spins = 1e6;
  s.t2_s = 100e-3;
  s.entangled = false;
  return s;
}

double snr_amp(const DeviceScenario& s, const AxionParams& a, const QubitConfig& q) {
  s.validate();
  a.validate();
  q.validate();
  return s.q_factor * effective_field(a, q) * s.effective_spins() * std::sqrt(s.t_s) /
         s.eta_b;
}

double beta_min(const DeviceScenario& s, double f_axion_hz, double gyromagnetic_hz_per_t) {
  s.validate();
  require(f_axion_hz > 0.0, "beta_min: axion frequency must be > 0");
  return gyromagnetic_hz_per_t * s.eta_b /
         (s.q_factor * s.effective_spins() * std::sqrt(s.t_s) * f_axion_hz);
}

double beta_min_base(double eta_b, double t2_s, double f_axion_hz,
                     double gyromagnetic_hz_per_t) {
  require(eta_b >= 0.0 && t2_s > 0.0 && f_axion_hz > 0.0,
          "beta_min_base: need eta_b >= 0, t2_s > 0, f_axion > 0");
  return gyromagnetic_hz_per_t * eta_b / (f_axion_hz * std::sqrt(t2_s));
}

bool detection_threshold(double beta, double beta_min_value) {
  return beta >= kDetectionSigma * beta_min_value;
}

// beta is linear in g_ae and beta_min carries the same 1/f_axion, so the
// mass cancels.
double g_ae_limit(double mass_ev, const DeviceScenario& s, const AxionParams& env,
                  const QubitConfig& q) {
  AxionParams unit = env;
  unit.mass_ev = mass_ev;
  unit.coupling_gae = 1.0;
  unit.validate();
  q.validate();
  const EffectiveSignal sig = effective_signal(unit, q);
  const double beta_per_g = modulation_index(sig);
  if (beta_per_g == 0.0) {
    throw NumericError("g_ae_limit: coupling has no effect (cos_theta0 = 0)");
  }
  return kDetectionSigma * beta_min(s, sig.f_axion_hz, q.gyromagnetic_hz_per_t) /
         std::fabs(beta_per_g);
}

void DfszModel::validate() const {
  require(tan_beta > 0.0, "dfsz.tan_beta must be > 0");
  require(f_a_gev >= 1e9 && f_a_gev <= 1e12, "dfsz.f_a_gev must lie in [1e9, 1e12] GeV");
}

double dfsz_ce(double tan_beta, DfszVariant v) {
  require(tan_beta > 0.0, "dfsz: tan_beta must be > 0");
  const double b = std::atan(tan_beta);
  const double c = std::cos(b);
  const double s = std::sin(b);
  return (v == DfszVariant::I ? c * c : s * s) / 3.0;
}

double dfsz_coupling_unchecked(double tan_beta, double f_a_gev, DfszVariant v) {
  require(f_a_gev > 0.0, "dfsz: f_a must be > 0");
  return dfsz_ce(tan_beta, v) * kElectronMassGev / f_a_gev;
}

double dfsz_coupling(const DfszModel& m) {
  m.validate();
  return dfsz_coupling_unchecked(m.tan_beta, m.f_a_gev, m.variant);
}

DfszBand dfsz_band(double f_a_gev, DfszVariant v) {
  const double a = dfsz_coupling_unchecked(kTanBetaMin, f_a_gev, v);
  const double b = dfsz_coupling_unchecked(kTanBetaMax, f_a_gev, v);
  return {std::min(a, b), std::max(a, b), dfsz_coupling_unchecked(1.0, f_a_gev, v)};
}

double decay_constant_gev(double mass_ev) {
  require(mass_ev > 0.0, "decay_constant_gev: mass must be > 0");
  return 5.70e-6 * 1e12 / mass_ev;
}

std::vector<double> log_mass_grid(double lo_ev, double hi_ev, std::size_t n) {
  require(lo_ev > 0.0 && hi_ev >= lo_ev, "mass grid: need 0 < lo <= hi");
  require(n >= 1, "mass grid: need at least one point");
  if (n == 1) return {lo_ev};
  std::vector<double> m(n);
  const double a = std::log10(lo_ev);
  const double b = std::log10(hi_ev);
  for (std::size_t i = 0; i < n; ++i) {
    m[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  m.front() = lo_ev;
  m.back() = hi_ev;
  return m;
}

ScanTable scan(const std::vector<double>& masses_ev,
               const std::vector<DeviceScenario>& scenarios, const AxionParams& env,
               const QubitConfig& q, DfszVariant variant) {
  require(!masses_ev.empty(), "scan: mass grid is empty");
  require(!scenarios.empty(), "scan: no scenarios");
  ScanTable t;
  t.variant = variant;
  for (const auto& s : scenarios) t.scenarios.push_back(s.name);
  t.rows.reserve(masses_ev.size());
  for (double m : masses_ev) {
    ScanRow r;
    r.mass_ev = m;
    r.f_axion_hz = units::ev_to_hz(m);
    for (const auto& s : scenarios) r.g_ae_limit.push_back(g_ae_limit(m, s, env, q));
    r.f_a_gev = decay_constant_gev(m);
    r.f_a_in_range = r.f_a_gev >= 1e9 && r.f_a_gev <= 1e12;
    r.dfsz = dfsz_band(r.f_a_gev, variant);
    t.rows.push_back(std::move(r));
  }
  return t;
}

std::string ScanTable::to_csv() const {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "mass_ev,f_axion_hz";
  for (const auto& s : scenarios) os << ",g_ae_limit_" << s << "_dimensionless";
  os << ",f_a_gev,f_a_in_range,dfsz_lower_dimensionless,dfsz_upper_dimensionless,"
        "dfsz_tan1_dimensionless\n";
  for (const auto& r : rows) {
    os << r.mass_ev << ',' << r.f_axion_hz;
    for (double g : r.g_ae_limit) os << ',' << g;
    os << ',' << r.f_a_gev << ',' << (r.f_a_in_range ? 1 : 0) << ',' << r.dfsz.lower << ','
       << r.dfsz.upper << ',' << r.dfsz.tan_beta_one << '\n';
  }
  return os.str();
}

ReferenceLine load_reference_line(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open reference line '" + path + "'");
  ReferenceLine line;
  std::string text;
  bool header_seen = false;
  while (std::getline(in, text)) {
    if (text.empty()) continue;
    if (text[0] == '#') {
      const auto pos = text.find("label:");
      if (pos != std::string::npos) {
        line.label = text.substr(text.find_first_not_of(' ', pos + 6));
      }
      continue;
    }
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    std::istringstream row(text);
    double m = 0.0;
    double g = 0.0;
    char comma = 0;
    if (!(row >> m >> comma >> g) || comma != ',') {
      throw IoError("malformed row in '" + path + "': " + text);
    }
    line.mass_ev.push_back(m);
    line.g_ae.push_back(g);
  }
  return line;
}

}  // namespace axsim
