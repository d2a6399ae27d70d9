#pragma once

#include <map>
#include <string>
#include <vector>

#include "axsim/config.hpp"
#include "axsim/filter.hpp"
#include "axsim/io.hpp"
#include "axsim/physics.hpp"
#include "axsim/sensitivity.hpp"
#include "axsim/spectral.hpp"

namespace axsim {

const char* version_string();

struct Simulation {
  AxionParams axion;  // with the resolved phase
  double amplitude_scale = 0.0;
  ModulationDiagnostics modulation;
  Trace clean;    // <sigma_x>, after the decoherence envelope when enabled
  Trace noise;
  Trace noisy;    // clean + noise
  Trace sigma_z;  // equal superposition
};

Simulation simulate(const RunConfig& cfg);

struct Filtered {
  FilterRealization filter;
  Trace causal;
  Trace zero_phase;
};

Filtered filter_stage(const RunConfig& cfg, const Trace& noisy);

struct Spectra {
  Psd noisy;
  Psd filtered;
  std::vector<double> cumulative;  // of the filtered PSD
  SidebandReport sidebands;        // on the noisy PSD
};

Spectra spectral_stage(const RunConfig& cfg, const Simulation& sim, const Filtered& f);

struct SnrResult {
  DynamicSnrOptions bands;
  DynamicSnr dynamic;
  double scenario_snr_amp = 0.0;
  double scenario_snr_db = 0.0;
};

SnrResult snr_stage(const RunConfig& cfg, const Trace& noisy);

ScanTable scan_stage(const RunConfig& cfg);

struct RunOptions {
  std::string command = "demo";  // simulate | filter | psd | snr | scan | demo
  std::string out_dir;            // empty: derived from the config hash
  TraceFormat format = TraceFormat::csv;
  bool plots = true;              // SVGs for demo
};

struct RunManifest {
  std::string command;
  std::string tool_version;
  std::string config_hash;
  std::uint64_t seed = 0;
  double amplitude_scale = 0.0;
  std::string out_dir;
  std::map<std::string, std::string> checksums;  // file name -> sha256
  std::vector<std::string> defaulted;
  std::vector<std::string> unconstrained_defaulted;
  std::vector<std::string> warnings;
  std::string started_utc;
  std::string finished_utc;

  std::string to_json() const;
};

std::string config_hash(const RunConfig& cfg);

/// $AXSIM_OUTPUT_ROOT (default "axsim-runs") / run-<hash12>-seed<seed>.
std::string default_output_dir(const RunConfig& cfg);

/// Runs one command, writes its files and manifest.json into the output
/// directory and returns the manifest.
RunManifest run_command(const RunConfig& cfg, const RunOptions& opt);

}  // namespace axsim
