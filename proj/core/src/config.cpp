#include "axsim/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>
#include <json.hpp>

#include "axsim/error.hpp"
#include "axsim/rng.hpp"

namespace axsim {
namespace {

template <typename T>
const char* type_name() {
  if constexpr (std::is_same_v<T, bool>) return "a boolean";
  else if constexpr (std::is_same_v<T, std::string>) return "a string";
  else if constexpr (std::is_floating_point_v<T>) return "a number";
  else return "an integer";
}

class Reader {
 public:
  Reader(YAML::Node node, std::string path, std::vector<std::string>* defaulted)
      : node_(std::move(node)), path_(std::move(path)), defaulted_(defaulted) {
    if (node_ && !node_.IsNull() && !node_.IsMap()) {
      throw ConfigError(path_.empty() ? "<root>" : path_, "expected a mapping");
    }
  }

  bool present(const std::string& key) const {
    return node_ && node_.IsMap() && node_[key] && !node_[key].IsNull();
  }

  template <typename T>
  void get(const std::string& key, T& out) {
    seen_.insert(key);
    if (!present(key)) {
      if (defaulted_) defaulted_->push_back(join(key));
      return;
    }
    out = convert<T>(node_[key], join(key));
  }

  void get(const std::string& key, std::optional<double>& out) {
    seen_.insert(key);
    if (!present(key)) return;
    out = convert<double>(node_[key], join(key));
  }

  template <typename T, typename F>
  void get_named(const std::string& key, T& out, F&& parse) {
    std::string name;
    seen_.insert(key);
    if (!present(key)) {
      if (defaulted_) defaulted_->push_back(join(key));
      return;
    }
    name = convert<std::string>(node_[key], join(key));
    try {
      out = parse(name);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(join(key), e.what());
    }
  }

  Reader child(const std::string& key) {
    seen_.insert(key);
    YAML::Node sub = present(key) ? node_[key] : YAML::Node();
    return Reader(sub, join(key), defaulted_);
  }

  YAML::Node raw(const std::string& key) {
    seen_.insert(key);
    return present(key) ? node_[key] : YAML::Node();
  }

  void finish() const {
    if (!node_ || !node_.IsMap()) return;
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (!seen_.count(key)) throw ConfigError(join(key), "unknown key");
    }
  }

  std::string join(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

 private:
  template <typename T>
  static T convert(const YAML::Node& n, const std::string& where) {
    if (!n.IsScalar()) throw ConfigError(where, std::string("expected ") + type_name<T>());
    try {
      return n.as<T>();
    } catch (const YAML::Exception&) {
      throw ConfigError(where, std::string("expected ") + type_name<T>() + ", got '" +
                                   n.Scalar() + "'");
    }
  }

  YAML::Node node_;
  std::string path_;
  std::vector<std::string>* defaulted_;
  std::set<std::string> seen_;
};

// Maps the std::invalid_argument thrown by a section validator to a
// ConfigError carrying the dotted field path from the message.
void checked(const std::string& section, const std::function<void()>& fn) {
  try {
    fn();
  } catch (const std::invalid_argument& e) {
    std::string msg = e.what();
    std::string field = section;
    const auto space = msg.find(' ');
    const std::string head = msg.substr(0, space);
    if (head.rfind(section + ".", 0) == 0) {
      field = head;
      msg = space == std::string::npos ? msg : msg.substr(space + 1);
    }
    throw ConfigError(field, msg);
  }
}

DfszVariant variant_from_name(const std::string& s) {
  if (s == "I") return DfszVariant::I;
  if (s == "II") return DfszVariant::II;
  throw std::invalid_argument("expected 'I' or 'II', got '" + s + "'");
}

PhaseMode phase_mode_from_name(const std::string& s) {
  if (s == "fixed") return PhaseMode::fixed;
  if (s == "random") return PhaseMode::random;
  throw std::invalid_argument("expected 'fixed' or 'random', got '" + s + "'");
}

const char* phase_mode_name(PhaseMode m) { return m == PhaseMode::fixed ? "fixed" : "random"; }

DeviceScenario read_scenario(Reader r, DeviceScenario s) {
  r.get("name", s.name);
  r.get("q_factor", s.q_factor);
  r.get("n_spins", s.n_spins);
  r.get("t_s", s.t_s);
  r.get("eta_b", s.eta_b);
  r.get("t2_s", s.t2_s);
  r.get("entangled", s.entangled);
  r.finish();
  return s;
}

RunConfig parse(const YAML::Node& root, const std::string& base_dir) {
  RunConfig cfg;
  cfg.base_dir = base_dir;
  auto* d = &cfg.defaulted;
  Reader top(root, "", d);

  {
    Reader r = top.child("axion");
    auto& a = cfg.axion;
    r.get("mass_ev", a.mass_ev);
    r.get("density_gev_cm3", a.density_gev_cm3);
    r.get("coupling_gae", a.coupling_gae);
    r.get("velocity_c", a.velocity_c);
    r.get("phase_rad", a.phase_rad);
    r.get("cos_theta0", a.cos_theta0);
    r.get_named("phase_mode", cfg.phase_mode, phase_mode_from_name);
    r.finish();
  }
  {
    Reader r = top.child("qubit");
    auto& q = cfg.qubit;
    r.get("field_t", q.field_t);
    r.get("gyromagnetic_hz_per_t", q.gyromagnetic_hz_per_t);
    r.get("t1_s", q.t1_s);
    r.get("t2_s", q.t2_s);
    r.finish();
  }
  {
    Reader r = top.child("grid");
    r.get("dt", cfg.grid.dt);
    r.get("n_samples", cfg.grid.n_samples);
    r.get("t0", cfg.grid.t0);
    r.finish();
  }
  {
    Reader r = top.child("noise");
    auto& n = cfg.noise;
    r.get("white_amp", n.white_amp);
    r.get("pink_amp", n.pink_amp);
    r.get("pink_fmin", n.pink_fmin);
    r.get("readout_sigma", n.readout_sigma);
    r.get("p_spike", n.p_spike);
    r.get("spike_factor", n.spike_factor);
    r.get("telegraph_amp", n.telegraph_amp);
    r.get("telegraph_tau", n.telegraph_tau);
    r.get("drift_amp", n.drift_amp);
    r.get("ac_amp", n.ac_amp);
    r.get("ac_freq", n.ac_freq);
    r.get("temperature", n.temperature);
    r.get("resistance", n.resistance);
    r.get("johnson_gain", n.johnson_gain);
    const bool explicit_seed = r.present("seed");
    r.get("seed", n.seed);
    r.finish();
    Reader run = top.child("run");
    run.get("seed", cfg.run.seed);
    if (!explicit_seed) n.seed = cfg.run.seed;
    run.get("amplitude_scale", cfg.run.amplitude_scale);
    run.get("target_modulation_index", cfg.run.target_modulation_index);
    run.get("output_dir", cfg.run.output_dir);
    run.finish();
  }
  {
    Reader r = top.child("filter");
    auto& f = cfg.filter;
    r.get("f_low", f.f_low);
    r.get("f_high", f.f_high);
    r.get("low_factor", f.low_factor);
    r.get("high_factor", f.high_factor);
    r.get("order", f.order);
    r.get("sideband_max_loss_db", f.sideband_max_loss_db);
    r.finish();
  }
  cfg.scenario = read_scenario(top.child("scenario"), cfg.scenario);
  {
    Reader r = top.child("scan");
    auto& s = cfg.scan;
    r.get("mass_min_ev", s.mass_min_ev);
    r.get("mass_max_ev", s.mass_max_ev);
    r.get("points", s.points);
    r.get_named("dfsz_variant", s.variant, variant_from_name);
    r.get("reference_line", s.reference_line);
    const YAML::Node list = r.raw("scenarios");
    if (list && !list.IsNull()) {
      if (!list.IsSequence()) throw ConfigError("scan.scenarios", "expected a list");
      s.scenarios.clear();
      for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string path = "scan.scenarios[" + std::to_string(i) + "]";
        DeviceScenario base;
        base.name = "scenario" + std::to_string(i);
        s.scenarios.push_back(read_scenario(Reader(list[i], path, nullptr), base));
      }
    } else {
      d->push_back("scan.scenarios");
    }
    r.finish();
  }
  {
    Reader r = top.child("analysis");
    auto& a = cfg.analysis;
    r.get_named("psd_window", a.psd_window, window_from_name);
    r.get("psd_segment_len", a.psd_segment_len);
    r.get("psd_overlap", a.psd_overlap);
    r.get("sideband_orders", a.sideband_orders);
    r.get("prominence_db", a.prominence_db);
    r.get("snr_window", a.snr_window);
    r.get("snr_hop", a.snr_hop);
    r.get("snr_band_fraction", a.snr_band_fraction);
    r.get("decoherence", a.decoherence);
    r.finish();
  }
  top.finish();
  check_consistency(cfg);
  return cfg;
}

void require_field(bool ok, const std::string& field, const std::string& msg) {
  if (!ok) throw ConfigError(field, msg);
}

}  // namespace

const std::vector<std::string>& unconstrained_defaults() {
  static const std::vector<std::string> fields{
      "noise.telegraph_tau", "noise.spike_factor", "noise.johnson_gain", "scenario.t_s",
      "axion.phase_rad"};
  return fields;
}

bool RunConfig::same_settings(const RunConfig& o) const {
  return axion == o.axion && phase_mode == o.phase_mode && qubit == o.qubit &&
         grid == o.grid && noise == o.noise && filter == o.filter &&
         scenario == o.scenario && scan == o.scan && analysis == o.analysis && run == o.run;
}

void check_consistency(const RunConfig& cfg) {
  checked("axion", [&] { cfg.axion.validate(); });
  checked("qubit", [&] { cfg.qubit.validate(); });
  checked("grid", [&] { cfg.grid.validate(); });
  checked("noise", [&] { cfg.noise.validate(); });
  checked("scenario", [&] { cfg.scenario.validate(); });
  for (std::size_t i = 0; i < cfg.scan.scenarios.size(); ++i) {
    try {
      cfg.scan.scenarios[i].validate();
    } catch (const std::invalid_argument& e) {
      std::string msg = e.what();
      const auto space = msg.find(' ');
      const std::string head = msg.substr(0, space);
      const std::string key = head.substr(head.find('.') + 1);
      throw ConfigError("scan.scenarios[" + std::to_string(i) + "]." + key,
                        msg.substr(space + 1));
    }
  }

  const double nyq = cfg.grid.nyquist();
  const double f_main = larmor_frequency(cfg.qubit);
  const double f_axion = axion_frequency(cfg.axion);
  require_field(f_main < nyq, "qubit.field_t, grid.dt",
                "carrier " + std::to_string(f_main) + " Hz is not below Nyquist " +
                    std::to_string(nyq) + " Hz");
  require_field(f_axion < nyq, "axion.mass_ev, grid.dt",
                "axion frequency " + std::to_string(f_axion) +
                    " Hz is not below Nyquist " + std::to_string(nyq) + " Hz");
  require_field(cfg.noise.ac_amp == 0.0 || cfg.noise.ac_freq < nyq, "noise.ac_freq, grid.dt",
                "AC pickup frequency is not below Nyquist");

  const auto& f = cfg.filter;
  require_field(f.f_low.has_value() == f.f_high.has_value(), "filter.f_low, filter.f_high",
                "give both absolute edges or neither");
  require_field(f.order >= 1 && f.order <= 16, "filter.order", "must lie in [1, 16]");
  const BandpassSpec band = resolved_band(cfg);
  checked("filter", [&] { band.validate(cfg.grid.sample_rate()); });
  require_field(f.sideband_max_loss_db >= 0.0, "filter.sideband_max_loss_db", "must be >= 0");
  check_sideband_retention(design_bandpass(band, cfg.grid.sample_rate()), f_main, f_axion,
                           f.sideband_max_loss_db);

  const auto& a = cfg.analysis;
  require_field(a.psd_segment_len <= cfg.grid.n_samples && a.psd_segment_len != 1,
                "analysis.psd_segment_len, grid.n_samples",
                "segment must be 0 (full trace) or in [2, n_samples]");
  require_field(a.psd_overlap >= 0.0 && a.psd_overlap < 1.0, "analysis.psd_overlap",
                "must lie in [0, 1)");
  require_field(a.sideband_orders >= 0 && a.sideband_orders <= 64,
                "analysis.sideband_orders", "must lie in [0, 64]");
  require_field(a.snr_window >= 16 && a.snr_window <= cfg.grid.n_samples,
                "analysis.snr_window, grid.n_samples", "must lie in [16, n_samples]");
  require_field(a.snr_hop >= 1, "analysis.snr_hop", "must be >= 1");
  require_field(a.snr_band_fraction > 0.0 && a.snr_band_fraction < 0.5,
                "analysis.snr_band_fraction", "must lie in (0, 0.5)");
  require_field(f_main - (1.5 + 0.5 * a.snr_band_fraction) * f_axion > 0.0,
                "axion.mass_ev, qubit.field_t",
                "dynamic-SNR noise band falls below 0 Hz");

  const auto& s = cfg.scan;
  require_field(s.mass_min_ev > 0.0 && s.mass_min_ev <= s.mass_max_ev,
                "scan.mass_min_ev, scan.mass_max_ev", "need 0 < mass_min_ev <= mass_max_ev");
  require_field(s.points >= 1, "scan.points", "must be >= 1");
  require_field(!s.scenarios.empty(), "scan.scenarios", "must not be empty");

  const auto& r = cfg.run;
  require_field(!(r.amplitude_scale && r.target_modulation_index),
                "run.amplitude_scale, run.target_modulation_index", "set at most one");
  require_field(!r.amplitude_scale || (*r.amplitude_scale >= 0.0 &&
                                       std::isfinite(*r.amplitude_scale)),
                "run.amplitude_scale", "must be finite and >= 0");
  require_field(!r.target_modulation_index || (*r.target_modulation_index > 0.0 &&
                                               std::isfinite(*r.target_modulation_index)),
                "run.target_modulation_index", "must be finite and > 0");
}

RunConfig load_config_string(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError("", std::string("parse error: ") + e.what());
  }
  return parse(root, "");
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  YAML::Node root;
  try {
    root = YAML::Load(ss.str());
  } catch (const YAML::Exception& e) {
    throw ConfigError("", path + ": parse error: " + e.what());
  }
  return parse(root, std::filesystem::path(path).parent_path().string());
}

std::string config_to_yaml(const RunConfig& c) {
  YAML::Emitter e;
  e.SetDoublePrecision(17);
  e << YAML::BeginMap;
  e << YAML::Key << "axion" << YAML::Value << YAML::BeginMap
    << YAML::Key << "mass_ev" << YAML::Value << c.axion.mass_ev
    << YAML::Key << "density_gev_cm3" << YAML::Value << c.axion.density_gev_cm3
    << YAML::Key << "coupling_gae" << YAML::Value << c.axion.coupling_gae
    << YAML::Key << "velocity_c" << YAML::Value << c.axion.velocity_c
    << YAML::Key << "phase_rad" << YAML::Value << c.axion.phase_rad
    << YAML::Key << "cos_theta0" << YAML::Value << c.axion.cos_theta0
    << YAML::Key << "phase_mode" << YAML::Value << phase_mode_name(c.phase_mode)
    << YAML::EndMap;
  e << YAML::Key << "qubit" << YAML::Value << YAML::BeginMap
    << YAML::Key << "field_t" << YAML::Value << c.qubit.field_t
    << YAML::Key << "gyromagnetic_hz_per_t" << YAML::Value << c.qubit.gyromagnetic_hz_per_t
    << YAML::Key << "t1_s" << YAML::Value << c.qubit.t1_s
    << YAML::Key << "t2_s" << YAML::Value << c.qubit.t2_s << YAML::EndMap;
  e << YAML::Key << "grid" << YAML::Value << YAML::BeginMap
    << YAML::Key << "dt" << YAML::Value << c.grid.dt
    << YAML::Key << "n_samples" << YAML::Value << c.grid.n_samples
    << YAML::Key << "t0" << YAML::Value << c.grid.t0 << YAML::EndMap;
  const auto& n = c.noise;
  e << YAML::Key << "noise" << YAML::Value << YAML::BeginMap
    << YAML::Key << "white_amp" << YAML::Value << n.white_amp
    << YAML::Key << "pink_amp" << YAML::Value << n.pink_amp
    << YAML::Key << "pink_fmin" << YAML::Value << n.pink_fmin
    << YAML::Key << "readout_sigma" << YAML::Value << n.readout_sigma
    << YAML::Key << "p_spike" << YAML::Value << n.p_spike
    << YAML::Key << "spike_factor" << YAML::Value << n.spike_factor
    << YAML::Key << "telegraph_amp" << YAML::Value << n.telegraph_amp
    << YAML::Key << "telegraph_tau" << YAML::Value << n.telegraph_tau
    << YAML::Key << "drift_amp" << YAML::Value << n.drift_amp
    << YAML::Key << "ac_amp" << YAML::Value << n.ac_amp
    << YAML::Key << "ac_freq" << YAML::Value << n.ac_freq
    << YAML::Key << "temperature" << YAML::Value << n.temperature
    << YAML::Key << "resistance" << YAML::Value << n.resistance
    << YAML::Key << "johnson_gain" << YAML::Value << n.johnson_gain
    << YAML::Key << "seed" << YAML::Value << n.seed << YAML::EndMap;
  e << YAML::Key << "filter" << YAML::Value << YAML::BeginMap;
  if (c.filter.f_low) e << YAML::Key << "f_low" << YAML::Value << *c.filter.f_low;
  if (c.filter.f_high) e << YAML::Key << "f_high" << YAML::Value << *c.filter.f_high;
  e << YAML::Key << "low_factor" << YAML::Value << c.filter.low_factor
    << YAML::Key << "high_factor" << YAML::Value << c.filter.high_factor
    << YAML::Key << "order" << YAML::Value << c.filter.order
    << YAML::Key << "sideband_max_loss_db" << YAML::Value << c.filter.sideband_max_loss_db
    << YAML::EndMap;
  auto scenario = [&](const DeviceScenario& s) {
    e << YAML::BeginMap << YAML::Key << "name" << YAML::Value << s.name
      << YAML::Key << "q_factor" << YAML::Value << s.q_factor
      << YAML::Key << "n_spins" << YAML::Value << s.n_spins
      << YAML::Key << "t_s" << YAML::Value << s.t_s
      << YAML::Key << "eta_b" << YAML::Value << s.eta_b
      << YAML::Key << "t2_s" << YAML::Value << s.t2_s
      << YAML::Key << "entangled" << YAML::Value << s.entangled << YAML::EndMap;
  };
  e << YAML::Key << "scenario" << YAML::Value;
  scenario(c.scenario);
  e << YAML::Key << "scan" << YAML::Value << YAML::BeginMap
    << YAML::Key << "mass_min_ev" << YAML::Value << c.scan.mass_min_ev
    << YAML::Key << "mass_max_ev" << YAML::Value << c.scan.mass_max_ev
    << YAML::Key << "points" << YAML::Value << c.scan.points
    << YAML::Key << "dfsz_variant" << YAML::Value << dfsz_variant_name(c.scan.variant)
    << YAML::Key << "reference_line" << YAML::Value << c.scan.reference_line
    << YAML::Key << "scenarios" << YAML::Value << YAML::BeginSeq;
  for (const auto& s : c.scan.scenarios) scenario(s);
  e << YAML::EndSeq << YAML::EndMap;
  const auto& a = c.analysis;
  e << YAML::Key << "analysis" << YAML::Value << YAML::BeginMap
    << YAML::Key << "psd_window" << YAML::Value << window_name(a.psd_window)
    << YAML::Key << "psd_segment_len" << YAML::Value << a.psd_segment_len
    << YAML::Key << "psd_overlap" << YAML::Value << a.psd_overlap
    << YAML::Key << "sideband_orders" << YAML::Value << a.sideband_orders
    << YAML::Key << "prominence_db" << YAML::Value << a.prominence_db
    << YAML::Key << "snr_window" << YAML::Value << a.snr_window
    << YAML::Key << "snr_hop" << YAML::Value << a.snr_hop
    << YAML::Key << "snr_band_fraction" << YAML::Value << a.snr_band_fraction
    << YAML::Key << "decoherence" << YAML::Value << a.decoherence << YAML::EndMap;
  e << YAML::Key << "run" << YAML::Value << YAML::BeginMap;
  if (c.run.amplitude_scale) {
    e << YAML::Key << "amplitude_scale" << YAML::Value << *c.run.amplitude_scale;
  }
  if (c.run.target_modulation_index) {
    e << YAML::Key << "target_modulation_index" << YAML::Value
      << *c.run.target_modulation_index;
  }
  e << YAML::Key << "output_dir" << YAML::Value << c.run.output_dir
    << YAML::Key << "seed" << YAML::Value << c.run.seed << YAML::EndMap;
  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

std::string config_to_canonical_json(const RunConfig& c) {
  // Round-trip through YAML so the hash covers exactly the serialized settings.
  const YAML::Node root = YAML::Load(config_to_yaml(c));
  std::function<nlohmann::json(const YAML::Node&)> conv = [&](const YAML::Node& n) {
    if (n.IsMap()) {
      nlohmann::json j = nlohmann::json::object();
      for (const auto& kv : n) j[kv.first.as<std::string>()] = conv(kv.second);
      return j;
    }
    if (n.IsSequence()) {
      nlohmann::json j = nlohmann::json::array();
      for (const auto& v : n) j.push_back(conv(v));
      return j;
    }
    if (n.IsScalar()) return nlohmann::json(n.Scalar());
    return nlohmann::json();
  };
  return conv(root).dump();
}

void apply_seed(RunConfig& cfg, std::uint64_t seed) {
  cfg.run.seed = seed;
  cfg.noise.seed = seed;
}

BandpassSpec resolved_band(const RunConfig& cfg) {
  const auto& f = cfg.filter;
  if (f.f_low && f.f_high) {
    BandpassSpec s;
    s.f_low = *f.f_low;
    s.f_high = *f.f_high;
    s.order = f.order;
    return s;
  }
  return BandpassSpec::around(larmor_frequency(cfg.qubit), f.low_factor, f.high_factor,
                              f.order);
}

AxionParams resolved_axion(const RunConfig& cfg) {
  AxionParams a = cfg.axion;
  if (cfg.phase_mode == PhaseMode::random) {
    auto rng = substream(cfg.run.seed, "axion/phase");
    a.phase_rad = std::uniform_real_distribution<double>(0.0, 2.0 * std::numbers::pi)(rng);
  }
  return a;
}

double resolved_amplitude_scale(const RunConfig& cfg) {
  if (cfg.run.amplitude_scale) return *cfg.run.amplitude_scale;
  if (cfg.run.target_modulation_index) {
    const double beta = modulation_index(effective_signal(cfg.axion, cfg.qubit));
    return beta > 0.0 ? *cfg.run.target_modulation_index / beta : 0.0;
  }
  const auto& s = cfg.scenario;
  return s.q_factor * s.n_spins * std::sqrt(s.t_s / s.t2_s);
}

std::vector<std::string> config_warnings(const RunConfig& cfg) {
  std::vector<std::string> out;
  const BandpassSpec band = resolved_band(cfg);
  const double f_main = larmor_frequency(cfg.qubit);
  const double f_axion = axion_frequency(cfg.axion);
  const std::string issue = sideband_retention_issue(band, f_main, f_axion);
  if (!issue.empty()) {
    const double loss =
        second_sideband_loss_db(design_bandpass(band, cfg.grid.sample_rate()), f_main, f_axion);
    out.push_back(issue + "; filter loss there " + std::to_string(loss) + " dB");
  }
  return out;
}

const char* dfsz_variant_name(DfszVariant v) { return v == DfszVariant::I ? "I" : "II"; }

}  // namespace axsim
