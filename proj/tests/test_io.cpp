#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "axsim/config.hpp"
#include "axsim/error.hpp"
#include "axsim/io.hpp"
#include "axsim/pipeline.hpp"
#include "gen.hpp"

using namespace axsim;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("axsim-test-" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

Trace random_trace(std::uint64_t seed, std::size_t n) {
  gen::Source g(seed);
  Trace t(TimeGrid{g.log_uniform(1e-13, 1e-3), n, g.uniform(-1, 1)}, g.bits());
  for (auto& v : t.values) v = g.normal() * std::pow(10.0, g.integer(-300, 300));
  return t;
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string l;
  std::getline(in, l);
  return l;
}

}  // namespace

TEST(TraceIo, CsvRoundTripIsExact) {
  const auto dir = scratch("csv");
  for (int i = 0; i < 5; ++i) {
    const auto t = random_trace(70 + i, 500);
    const auto path = (dir / "t.csv").string();
    write_trace_csv(path, t);
    const auto back = read_trace_csv(path);
    ASSERT_EQ(back.values, t.values);
    EXPECT_EQ(first_line(path), "time_s,value");
  }
}

TEST(TraceIo, BinaryRoundTripAndLayout) {
  const auto dir = scratch("bin");
  const auto t = random_trace(80, 1000);
  const auto path = (dir / "t.bin").string();
  write_trace_bin(path, t);
  const auto back = read_trace_bin(path);
  EXPECT_EQ(back.values, t.values);
  EXPECT_EQ(back.seed, t.seed);
  EXPECT_EQ(back.grid.t0, t.grid.t0);
  EXPECT_NEAR(back.grid.sample_rate(), t.grid.sample_rate(), 1e-15 * t.grid.sample_rate());

  const std::string bytes = read_text(path);
  ASSERT_EQ(bytes.size(), 4u + 4 + 8 + 8 + 8 + 8 + 8 * t.size());
  EXPECT_EQ(bytes.substr(0, 4), "AXTR");
  std::uint32_t version;
  std::uint64_t seed, n;
  double rate, first;
  std::memcpy(&version, bytes.data() + 4, 4);
  std::memcpy(&seed, bytes.data() + 8, 8);
  std::memcpy(&n, bytes.data() + 16, 8);
  std::memcpy(&rate, bytes.data() + 24, 8);
  std::memcpy(&first, bytes.data() + 40, 8);
  EXPECT_EQ(version, kTraceBinVersion);
  EXPECT_EQ(seed, t.seed);
  EXPECT_EQ(n, t.size());
  EXPECT_EQ(rate, t.grid.sample_rate());
  EXPECT_EQ(first, t[0]);
}

TEST(TraceIo, RejectsCorruptFiles) {
  const auto dir = scratch("corrupt");
  write_text((dir / "bad.bin").string(), "NOPE0000");
  EXPECT_THROW(read_trace_bin((dir / "bad.bin").string()), IoError);
  EXPECT_THROW(read_trace_bin((dir / "missing.bin").string()), IoError);
  write_text((dir / "bad.csv").string(), "time_s,value\n0,1\nx,y\n");
  EXPECT_THROW(read_trace_csv((dir / "bad.csv").string()), IoError);
}

TEST(Sha256, KnownVector) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Pipeline, SilentDecoupledIsPureTone) {
  auto c = load_config_string("");
  c.axion.coupling_gae = 0.0;
  c.noise = NoiseConfig::silent();
  const auto sim = simulate(c);
  for (double v : sim.noise.values) ASSERT_EQ(v, 0.0);
  const auto f = filter_stage(c, sim.noisy);
  const auto s = spectral_stage(c, sim, f);
  EXPECT_TRUE(s.sidebands.carrier.found);
  EXPECT_LE(std::fabs(s.sidebands.carrier.frequency_hz - 14e9), s.sidebands.bin_width);
  EXPECT_EQ(s.sidebands.found_count(), 0);
}

TEST(Pipeline, RunsAreByteIdentical) {
  auto c = load_config(std::string(AXSIM_DATA_DIR) + "/reference.yaml");
  RunOptions o;
  o.command = "psd";
  o.out_dir = scratch("run-a").string();
  const auto a = run_command(c, o);
  o.out_dir = scratch("run-b").string();
  const auto b = run_command(c, o);
  EXPECT_EQ(a.checksums, b.checksums);
  EXPECT_EQ(a.config_hash, b.config_hash);
  for (const auto& [name, sum] : a.checksums) {
    EXPECT_EQ(sha256_file((fs::path(o.out_dir) / name).string()), sum) << name;
  }
  apply_seed(c, c.run.seed + 1);
  o.out_dir = scratch("run-c").string();
  const auto d = run_command(c, o);
  EXPECT_NE(a.checksums.at("psd_noisy.csv"), d.checksums.at("psd_noisy.csv"));
}

TEST(Pipeline, CsvHeadersNameUnits) {
  const auto c = load_config(std::string(AXSIM_DATA_DIR) + "/reference.yaml");
  RunOptions o;
  o.out_dir = scratch("headers").string();
  o.plots = false;
  const auto m = run_command(c, o);
  for (const auto& [name, _] : m.checksums) {
    if (fs::path(name).extension() != ".csv") continue;
    const auto header = first_line(fs::path(o.out_dir) / name);
    EXPECT_TRUE(header.find("_hz") != std::string::npos || header.find("_s") != std::string::npos ||
                header.find("_ev") != std::string::npos)
        << name << ": " << header;
  }
  EXPECT_FALSE(m.warnings.empty());
  EXPECT_TRUE(fs::exists(fs::path(o.out_dir) / "manifest.json"));
}

TEST(Pipeline, BinaryTraces) {
  const auto c = load_config_string("");
  RunOptions o;
  o.command = "simulate";
  o.format = TraceFormat::bin;
  o.out_dir = scratch("bin-run").string();
  const auto m = run_command(c, o);
  EXPECT_TRUE(m.checksums.count("noisy_trace.bin"));
  const auto t = read_trace_bin((fs::path(o.out_dir) / "noisy_trace.bin").string());
  EXPECT_EQ(t.size(), c.grid.n_samples);
  EXPECT_EQ(t.seed, c.run.seed);
}

TEST(Pipeline, DefaultOutputDirUsesRoot) {
  const auto c = load_config_string("");
  ::setenv("AXSIM_OUTPUT_ROOT", "/tmp/axsim-root", 1);
  const auto dir = default_output_dir(c);
  ::unsetenv("AXSIM_OUTPUT_ROOT");
  EXPECT_EQ(dir.rfind("/tmp/axsim-root/run-", 0), 0u) << dir;
  EXPECT_NE(dir.find(std::to_string(c.run.seed)), std::string::npos);
}
