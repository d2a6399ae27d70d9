#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "axsim/filter.hpp"
#include "axsim/noise.hpp"
#include "axsim/physics.hpp"
#include "axsim/sensitivity.hpp"
#include "axsim/spectral.hpp"
#include "axsim/trace.hpp"

namespace axsim {

enum class PhaseMode { fixed, random };

/// Pass band either as absolute edges or as factors of the carrier.
struct FilterConfig {
  std::optional<double> f_low;
  std::optional<double> f_high;
  double low_factor = 0.9;
  double high_factor = 1.1;
  int order = 4;
  /// Largest attenuation of the second-order sidebands accepted at load.
  double sideband_max_loss_db = 6.0;

  friend bool operator==(const FilterConfig&, const FilterConfig&) = default;
};

struct ScanConfig {
  double mass_min_ev = 1e-6;
  double mass_max_ev = 1e-3;
  std::size_t points = 61;
  DfszVariant variant = DfszVariant::I;
  std::vector<DeviceScenario> scenarios{DeviceScenario::current(),
                                        DeviceScenario::next_generation()};
  std::string reference_line;  // optional CSV overlay, resolved against the config dir

  friend bool operator==(const ScanConfig&, const ScanConfig&) = default;
};

struct AnalysisConfig {
  Window psd_window = Window::hann;
  std::size_t psd_segment_len = 0;  // 0: full-length single segment
  double psd_overlap = 0.5;
  int sideband_orders = 2;
  double prominence_db = 3.0;
  std::size_t snr_window = 100;
  std::size_t snr_hop = 10;
  double snr_band_fraction = 0.3;
  bool decoherence = true;

  friend bool operator==(const AnalysisConfig&, const AnalysisConfig&) = default;
};

struct RunSection {
  std::optional<double> amplitude_scale;
  std::optional<double> target_modulation_index;
  std::string output_dir;
  std::uint64_t seed = 20251018;

  friend bool operator==(const RunSection&, const RunSection&) = default;
};

struct RunConfig {
  AxionParams axion;
  PhaseMode phase_mode = PhaseMode::fixed;
  QubitConfig qubit;
  TimeGrid grid;
  NoiseConfig noise;
  FilterConfig filter;
  DeviceScenario scenario = DeviceScenario::best_case();
  ScanConfig scan;
  AnalysisConfig analysis;
  RunSection run;

  /// Dotted paths of every field that was not given in the file.
  std::vector<std::string> defaulted;
  /// Directory of the loaded file ("" for in-memory configs).
  std::string base_dir;

  bool same_settings(const RunConfig& other) const;
};

/// Fields whose defaults are not pinned by the reference configuration;
/// reported separately in the manifest when defaulted.
const std::vector<std::string>& unconstrained_defaults();

/// Parses and validates a config file. Throws ConfigError (with the dotted
/// field path) on malformed YAML, unknown keys, wrong types, out-of-range
/// values and cross-field inconsistencies, IoError if the file is missing.
RunConfig load_config(const std::string& path);
RunConfig load_config_string(const std::string& text);

/// Cross-field checks (Nyquist, pass band, sideband retention, analysis
/// bands). Called by the loaders; exposed for configs built in code.
void check_consistency(const RunConfig& cfg);

/// YAML serialization that load_config_string reads back to the same settings.
std::string config_to_yaml(const RunConfig& cfg);

/// Canonical JSON of the settings (used for hashing).
std::string config_to_canonical_json(const RunConfig& cfg);

/// Sets run.seed and noise.seed.
void apply_seed(RunConfig& cfg, std::uint64_t seed);

BandpassSpec resolved_band(const RunConfig& cfg);

/// Axion parameters with the phase drawn from the run seed in random mode.
AxionParams resolved_axion(const RunConfig& cfg);

/// run.amplitude_scale if set, else target_modulation_index / beta, else
/// Q * N * sqrt(t / T2) of the scenario.
double resolved_amplitude_scale(const RunConfig& cfg);

const char* dfsz_variant_name(DfszVariant v);

/// Non-fatal findings of the consistency check (second-order sidebands
/// outside the nominal edges but within the loss limit).
std::vector<std::string> config_warnings(const RunConfig& cfg);

}  // namespace axsim
