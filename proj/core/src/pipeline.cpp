#include "axsim/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <set>

#include <json.hpp>

#include "axsim/error.hpp"
#include "axsim/noise.hpp"
#include "axsim/svg.hpp"
#include "axsim/units.hpp"

#ifndef AXSIM_VERSION
#define AXSIM_VERSION "0.0.0"
#endif

namespace axsim {
namespace fs = std::filesystem;
namespace {

using json = nlohmann::json;

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

class Emitter {
 public:
  Emitter(std::string dir, RunManifest& m) : dir_(std::move(dir)), manifest_(m) {}

  std::string path(const std::string& name) const { return (fs::path(dir_) / name).string(); }

  void text(const std::string& name, const std::string& content) {
    write_text(path(name), content);
    record(name);
  }

  void trace(const std::string& stem, const Trace& t, TraceFormat f) {
    write_trace(path(stem), t, f);
    record(stem + trace_format_extension(f));
  }

  template <typename F>
  void file(const std::string& name, F&& writer) {
    writer(path(name));
    record(name);
  }

 private:
  void record(const std::string& name) { manifest_.checksums[name] = sha256_file(path(name)); }

  std::string dir_;
  RunManifest& manifest_;
};

std::vector<double> head(const std::vector<double>& v, std::size_t n) {
  return {v.begin(), v.begin() + static_cast<std::ptrdiff_t>(std::min(n, v.size()))};
}

std::vector<double> times_of(const Trace& t, std::size_t n) {
  std::vector<double> out(std::min(n, t.size()));
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = t.grid.time(k) * 1e9;
  return out;
}

std::vector<double> scaled(const std::vector<double>& v, double k) {
  std::vector<double> out(v);
  for (double& x : out) x *= k;
  return out;
}

json modulation_json(const RunConfig& cfg, const Simulation& sim) {
  const auto sig = effective_signal(sim.axion, cfg.qubit);
  const auto& d = sim.modulation;
  return {{"f_main_hz", sig.f_main_hz},
          {"f_axion_hz", sig.f_axion_hz},
          {"b_eff_t", sig.field_t},
          {"physical_beta", d.physical_beta},
          {"amplitude_scale", d.amplitude_scale},
          {"effective_beta", d.effective_beta},
          {"phase_resolution_rad", d.phase_resolution_rad},
          {"sidebands_resolvable", d.resolvable},
          {"axion_phase_rad", sim.axion.phase_rad}};
}

PlotSpec plot(std::string title, std::string x_label, std::string y_label,
              bool log_x = false, bool log_y = false) {
  PlotSpec p;
  p.title = std::move(title);
  p.x_label = std::move(x_label);
  p.y_label = std::move(y_label);
  p.log_x = log_x;
  p.log_y = log_y;
  return p;
}

std::string line_json(const SidebandReport& r) { return sideband_report_to_json(r); }

json scan_json(const RunConfig& cfg, const ScanTable& t) {
  json j;
  j["dfsz_variant"] = dfsz_variant_name(t.variant);
  j["tan_beta_range"] = {kTanBetaMin, kTanBetaMax};
  j["scenarios"] = json::array();
  for (std::size_t i = 0; i < cfg.scan.scenarios.size(); ++i) {
    const auto& s = cfg.scan.scenarios[i];
    j["scenarios"].push_back({{"name", s.name},
                              {"q_factor", s.q_factor},
                              {"n_spins", s.n_spins},
                              {"t_s", s.t_s},
                              {"eta_b_t_per_sqrt_hz", s.eta_b},
                              {"t2_s", s.t2_s},
                              {"entangled", s.entangled},
                              {"g_ae_limit_first_row", t.rows.front().g_ae_limit[i]}});
  }
  j["mass_independent_limits"] = true;
  return j;
}

std::string reference_line_path(const RunConfig& cfg) {
  if (cfg.scan.reference_line.empty()) return {};
  fs::path p(cfg.scan.reference_line);
  if (p.is_relative() && !cfg.base_dir.empty()) p = fs::path(cfg.base_dir) / p;
  return p.string();
}

}  // namespace

const char* version_string() { return AXSIM_VERSION; }

Simulation simulate(const RunConfig& cfg) {
  Simulation s;
  s.axion = resolved_axion(cfg);
  s.amplitude_scale = resolved_amplitude_scale(cfg);
  s.modulation = modulation_diagnostics(s.axion, cfg.qubit, cfg.grid, s.amplitude_scale);
  s.clean = sigma_x_trace(s.axion, cfg.qubit, cfg.grid, s.amplitude_scale);
  s.sigma_z = sigma_z_trace(SpinState::equal_superposition(), cfg.grid);
  if (cfg.analysis.decoherence) {
    s.clean = apply_decoherence(s.clean, cfg.qubit, Polarization::transverse);
    s.sigma_z = apply_decoherence(s.sigma_z, cfg.qubit, Polarization::longitudinal);
  }
  s.noise = compose_noise(cfg.grid, cfg.noise);
  s.noisy = s.clean + s.noise;
  s.noisy.seed = cfg.noise.seed;
  return s;
}

Filtered filter_stage(const RunConfig& cfg, const Trace& noisy) {
  Filtered f;
  f.filter = design_bandpass(resolved_band(cfg), noisy.sample_rate());
  f.causal = filter_causal(noisy, f.filter);
  f.zero_phase = filter_zero_phase(noisy, f.filter);
  return f;
}

Spectra spectral_stage(const RunConfig& cfg, const Simulation& sim, const Filtered& f) {
  PsdOptions opt;
  opt.window = cfg.analysis.psd_window;
  opt.segment_len = cfg.analysis.psd_segment_len;
  opt.overlap = cfg.analysis.psd_overlap;
  Spectra s;
  s.noisy = estimate_psd(sim.noisy, opt);
  s.filtered = estimate_psd(f.zero_phase, opt);
  s.cumulative = cumulative_power(s.filtered);
  SidebandOptions so;
  so.prominence_db = cfg.analysis.prominence_db;
  s.sidebands = detect_sidebands(s.noisy, larmor_frequency(cfg.qubit),
                                 axion_frequency(sim.axion), cfg.analysis.sideband_orders, so);
  return s;
}

SnrResult snr_stage(const RunConfig& cfg, const Trace& noisy) {
  SnrResult r;
  r.bands = lower_sideband_bands(larmor_frequency(cfg.qubit), axion_frequency(cfg.axion),
                                 cfg.analysis.snr_band_fraction);
  r.bands.window = cfg.analysis.snr_window;
  r.bands.hop = cfg.analysis.snr_hop;
  r.bands.filter_order = cfg.filter.order;
  r.dynamic = dynamic_snr(noisy, r.bands);
  r.scenario_snr_amp = snr_amp(cfg.scenario, cfg.axion, cfg.qubit);
  r.scenario_snr_db = snr_db(r.scenario_snr_amp);
  return r;
}

ScanTable scan_stage(const RunConfig& cfg) {
  const auto masses =
      log_mass_grid(cfg.scan.mass_min_ev, cfg.scan.mass_max_ev, cfg.scan.points);
  return scan(masses, cfg.scan.scenarios, cfg.axion, cfg.qubit, cfg.scan.variant);
}

std::string RunManifest::to_json() const {
  json j;
  j["tool"] = "axsim";
  j["tool_version"] = tool_version;
  j["command"] = command;
  j["config_hash"] = config_hash;
  j["seed"] = seed;
  j["amplitude_scale"] = amplitude_scale;
  j["output_dir"] = out_dir;
  j["checksums"] = checksums;
  j["defaulted_fields"] = defaulted;
  j["unconstrained_defaults"] = unconstrained_defaulted;
  j["warnings"] = warnings;
  j["started_utc"] = started_utc;
  j["finished_utc"] = finished_utc;
  return j.dump(2) + "\n";
}

std::string config_hash(const RunConfig& cfg) {
  return sha256_hex(config_to_canonical_json(cfg));
}

std::string default_output_dir(const RunConfig& cfg) {
  const char* root = std::getenv("AXSIM_OUTPUT_ROOT");
  const std::string base = root && *root ? root : "axsim-runs";
  return (fs::path(base) / ("run-" + config_hash(cfg).substr(0, 12) + "-seed" +
                            std::to_string(cfg.run.seed)))
      .string();
}

RunManifest run_command(const RunConfig& cfg, const RunOptions& opt) {
  static const std::set<std::string> commands{"simulate", "filter", "psd",
                                              "snr",      "scan",   "demo"};
  if (!commands.count(opt.command)) {
    throw std::invalid_argument("unknown command '" + opt.command + "'");
  }
  RunManifest m;
  m.started_utc = utc_now();
  m.command = opt.command;
  m.tool_version = version_string();
  m.config_hash = config_hash(cfg);
  m.seed = cfg.run.seed;
  m.defaulted = cfg.defaulted;
  for (const auto& f : unconstrained_defaults()) {
    if (std::find(cfg.defaulted.begin(), cfg.defaulted.end(), f) != cfg.defaulted.end()) {
      m.unconstrained_defaulted.push_back(f);
    }
  }
  m.warnings = config_warnings(cfg);
  m.out_dir = !opt.out_dir.empty()          ? opt.out_dir
              : !cfg.run.output_dir.empty() ? cfg.run.output_dir
                                            : default_output_dir(cfg);
  std::error_code ec;
  fs::create_directories(m.out_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + m.out_dir + "': " + ec.message());

  Emitter out(m.out_dir, m);
  out.text("config.yaml", config_to_yaml(cfg));
  const std::string& c = opt.command;
  const bool demo = c == "demo";

  if (c == "scan" || demo) {
    const ScanTable table = scan_stage(cfg);
    out.text("scan.csv", table.to_csv());
    json summary = scan_json(cfg, table);
    const std::string ref_path = reference_line_path(cfg);
    ReferenceLine ref;
    if (!ref_path.empty()) {
      ref = load_reference_line(ref_path);
      summary["reference_line"] = {{"label", ref.label},
                                   {"source", "external"},
                                   {"mass_ev", ref.mass_ev},
                                   {"g_ae", ref.g_ae}};
    }
    out.text("scan_summary.json", summary.dump(2) + "\n");
    if (demo && opt.plots) {
      PlotSpec p = plot("Projected g_ae sensitivity", "axion mass (eV)", "g_ae", true, true);
      std::vector<double> m_ev, lo, hi, tan1;
      for (const auto& r : table.rows) {
        m_ev.push_back(r.mass_ev);
        lo.push_back(r.dfsz.lower);
        hi.push_back(r.dfsz.upper);
        tan1.push_back(r.dfsz.tan_beta_one);
      }
      for (std::size_t i = 0; i < table.scenarios.size(); ++i) {
        std::vector<double> g;
        for (const auto& r : table.rows) g.push_back(r.g_ae_limit[i]);
        p.series.push_back({table.scenarios[i], m_ev, g, "", true});
      }
      p.series.push_back({"DFSZ tan(beta)=1", m_ev, tan1, "#9467bd", false});
      p.series.push_back({"DFSZ band edge", m_ev, lo, "#c5b0d5", false});
      p.series.push_back({"DFSZ band edge", m_ev, hi, "#c5b0d5", false});
      if (!ref.mass_ev.empty()) {
        p.series.push_back({ref.label.empty() ? "reference" : ref.label, ref.mass_ev,
                            ref.g_ae, "#d62728", true});
      }
      out.text("scan.svg", line_plot_svg(p));
    }
  }

  if (c != "scan") {
    const Simulation sim = simulate(cfg);
    m.amplitude_scale = sim.amplitude_scale;
    if (!sim.modulation.resolvable && sim.modulation.physical_beta > 0.0) {
      m.warnings.push_back(
          "modulation depth " + std::to_string(sim.modulation.effective_beta) +
          " rad is below the carrier phase resolution; sidebands are not represented "
          "(raise run.amplitude_scale or set run.target_modulation_index)");
    }
    if (c == "simulate" || demo) {
      out.trace("clean_trace", sim.clean, opt.format);
      out.trace("noisy_trace", sim.noisy, opt.format);
      out.trace("sigma_z_trace", sim.sigma_z, opt.format);
      out.text("modulation.json", modulation_json(cfg, sim).dump(2) + "\n");
    }
    if (c == "filter" || c == "psd" || demo) {
      const Filtered f = filter_stage(cfg, sim.noisy);
      if (c == "filter" || demo) {
        out.text("filter.json", filter_to_json(f.filter) + "\n");
        out.trace("filtered_causal", f.causal, opt.format);
        out.trace("filtered_zero_phase", f.zero_phase, opt.format);
      }
      if (c == "psd" || demo) {
        const Spectra s = spectral_stage(cfg, sim, f);
        out.file("psd_noisy.csv", [&](const std::string& p) { write_psd_csv(p, s.noisy); });
        out.file("psd_filtered.csv",
                 [&](const std::string& p) { write_psd_csv(p, s.filtered); });
        out.file("cumulative_power.csv", [&](const std::string& p) {
          write_cumulative_csv(p, s.filtered, s.cumulative);
        });
        out.text("sidebands.json", line_json(s.sidebands) + "\n");
        if (demo && opt.plots) {
          const auto ghz = scaled(s.noisy.frequency, 1e-9);
          PlotSpec p = plot("Power spectral density", "frequency (GHz)", "PSD (1/Hz)", false, true);
          p.series.push_back({"received", ghz, s.noisy.power, "", false});
          p.series.push_back({"band-pass (zero phase)", ghz, s.filtered.power, "", false});
          out.text("psd.svg", line_plot_svg(p));
          PlotSpec cp = plot("Normalized cumulative power", "frequency (GHz)", "fraction");
          cp.series.push_back({"filtered", ghz, s.cumulative, "", false});
          out.text("cumulative_power.svg", line_plot_svg(cp));
          const std::size_t n = 2000;
          PlotSpec tp = plot("Transverse polarization", "time (ns)", "<sigma_x>");
          tp.series.push_back({"noisy", times_of(sim.noisy, n), head(sim.noisy.values, n),
                               "#bbbbbb", false});
          tp.series.push_back({"ideal", times_of(sim.clean, n), head(sim.clean.values, n),
                               "", false});
          tp.series.push_back({"zero-phase filtered", times_of(f.zero_phase, n),
                               head(f.zero_phase.values, n), "", false});
          out.text("trace.svg", line_plot_svg(tp));
        }
      }
    }
    if (c == "snr" || demo) {
      const SnrResult r = snr_stage(cfg, sim.noisy);
      out.file("dynamic_snr.csv",
               [&](const std::string& p) { write_dynamic_snr_csv(p, r.dynamic); });
      json j{{"signal_band_hz", {r.bands.signal_band.first, r.bands.signal_band.second}},
             {"noise_band_hz", {r.bands.noise_band.first, r.bands.noise_band.second}},
             {"window_samples", r.bands.window},
             {"hop_samples", r.bands.hop},
             {"mean_db", r.dynamic.mean_db()},
             {"min_db", r.dynamic.min_db()},
             {"max_db", r.dynamic.max_db()},
             {"scenario", cfg.scenario.name},
             {"scenario_snr_amp", r.scenario_snr_amp},
             {"scenario_snr_db", r.scenario_snr_db},
             {"threshold_db", snr_db(kDetectionSigma)}};
      out.text("snr_summary.json", j.dump(2) + "\n");
      if (demo && opt.plots) {
        PlotSpec p = plot("Dynamic SNR at the lower sideband", "time (ns)", "SNR (dB)");
        p.series.push_back({"dynamic SNR", scaled(r.dynamic.time, 1e9), r.dynamic.db, "",
                            false});
        out.text("dynamic_snr.svg", line_plot_svg(p));
      }
    }
  }

  m.finished_utc = utc_now();
  write_text((fs::path(m.out_dir) / "manifest.json").string(), m.to_json());
  return m;
}

}  // namespace axsim
