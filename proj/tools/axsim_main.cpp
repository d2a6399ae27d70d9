#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "axsim/config.hpp"
#include "axsim/error.hpp"
#include "axsim/io.hpp"
#include "axsim/pipeline.hpp"

namespace {

enum ExitCode : int { kOk = 0, kConfig = 2, kNumeric = 3, kIo = 4 };

int report(const char* kind, int code, const std::string& message, const std::string& field,
           const std::string& out_dir) {
  nlohmann::json j;
  j["error"] = {{"kind", kind}, {"message", message}, {"exit_code", code}};
  if (!field.empty()) j["error"]["field"] = field;
  std::cerr << j.dump() << "\n";
  if (!out_dir.empty()) {
    try {
      std::filesystem::create_directories(out_dir);
      axsim::write_text((std::filesystem::path(out_dir) / "error.json").string(),
                        j.dump(2) + "\n");
    } catch (...) {
      // the record on stderr is enough
    }
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"axsim: axion-modulated spin-qubit signal simulator"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", std::string(axsim::version_string()));

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<double> scale;
  std::string out_dir;
  std::string format = "csv";
  bool no_plots = false;

  const char* commands[][2] = {
      {"simulate", "clean and noisy polarization traces"},
      {"filter", "causal and zero-phase band-pass filtered traces"},
      {"psd", "power spectra, cumulative power and sideband report"},
      {"snr", "dynamic SNR at the lower sideband"},
      {"scan", "g_ae sensitivity table over the mass grid"},
      {"demo", "every stage plus SVG plots"}};
  for (const auto& c : commands) {
    auto* sub = app.add_subcommand(c[0], c[1]);
    sub->add_option("--config", config_path, "YAML configuration file")
        ->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "master seed (overrides run.seed and noise.seed)");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--scale", scale, "modulation amplitude scale (overrides run.*)");
    sub->add_option("--format", format, "trace format")->check(CLI::IsMember({"csv", "bin"}));
    sub->add_flag("--no-plots", no_plots, "skip SVG output in demo");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report("usage", kConfig, e.what(), "", "");
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    axsim::RunConfig cfg =
        config_path.empty() ? axsim::load_config_string("") : axsim::load_config(config_path);
    if (seed) axsim::apply_seed(cfg, *seed);
    if (scale) {
      cfg.run.amplitude_scale = *scale;
      cfg.run.target_modulation_index.reset();
    }
    axsim::check_consistency(cfg);

    axsim::RunOptions opt;
    opt.command = command;
    opt.out_dir = out_dir;
    opt.format = axsim::trace_format_from_name(format);
    opt.plots = !no_plots;
    const auto manifest = axsim::run_command(cfg, opt);
    for (const auto& w : manifest.warnings) std::cerr << "warning: " << w << "\n";
    std::cout << (std::filesystem::path(manifest.out_dir) / "manifest.json").string() << "\n";
    return kOk;
  } catch (const axsim::ConfigError& e) {
    return report("config", kConfig, e.what(), e.field(), out_dir);
  } catch (const axsim::IoError& e) {
    return report("io", kIo, e.what(), "", out_dir);
  } catch (const axsim::NumericError& e) {
    return report("numeric", kNumeric, e.what(), "", out_dir);
  } catch (const std::exception& e) {
    return report("numeric", kNumeric, e.what(), "", out_dir);
  }
}
