#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "axsim/io.hpp"

namespace fs = std::filesystem;

#ifdef AXSIM_CLI

namespace {

const std::string kConfig = std::string(AXSIM_DATA_DIR) + "/reference.yaml";

int run(const std::string& args) {
  const std::string cmd = std::string(AXSIM_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("axsim-cli-" + name);
  fs::remove_all(p);
  return p;
}

fs::path write_config(const std::string& name, const std::string& text) {
  const fs::path p = fs::temp_directory_path() / ("axsim-cli-" + name + ".yaml");
  axsim::write_text(p.string(), text);
  return p;
}

}  // namespace

TEST(Cli, ScanSucceeds) {
  const auto out = scratch("scan");
  EXPECT_EQ(run("scan --config " + kConfig + " --out " + out.string()), 0);
  EXPECT_TRUE(fs::exists(out / "scan.csv"));
  EXPECT_TRUE(fs::exists(out / "manifest.json"));
}

TEST(Cli, ConfigErrorExitsTwo) {
  const auto cfg = write_config("bad", "noise:\n  p_spike: 3\n");
  const auto out = scratch("bad");
  EXPECT_EQ(run("simulate --config " + cfg.string() + " --out " + out.string()), 2);
  const auto record = axsim::read_text((out / "error.json").string());
  EXPECT_NE(record.find("noise.p_spike"), std::string::npos);
  EXPECT_NE(record.find("\"exit_code\": 2"), std::string::npos);
}

TEST(Cli, UsageErrorExitsTwo) {
  EXPECT_EQ(run("simulate --format xml"), 2);
  EXPECT_EQ(run("frobnicate"), 2);
}

TEST(Cli, NumericFailureExitsThree) {
  const auto cfg = write_config("short", "grid:\n  n_samples: 200\n");
  EXPECT_EQ(run("filter --config " + cfg.string() + " --out " + scratch("short").string()), 3);
}

TEST(Cli, IoErrorExitsFour) {
  const auto blocker = fs::temp_directory_path() / "axsim-cli-blocker";
  fs::remove_all(blocker);
  axsim::write_text(blocker.string(), "a file, not a directory");
  EXPECT_EQ(run("scan --config " + kConfig + " --out " + (blocker / "sub").string()), 4);
}

TEST(Cli, SeedAndScaleOverrides) {
  const auto a = scratch("seed-a"), b = scratch("seed-b");
  ASSERT_EQ(run("simulate --seed 5 --scale 1e18 --out " + a.string()), 0);
  ASSERT_EQ(run("simulate --seed 5 --scale 1e18 --out " + b.string()), 0);
  EXPECT_EQ(axsim::read_text((a / "noisy_trace.csv").string()),
            axsim::read_text((b / "noisy_trace.csv").string()));
  const auto manifest = axsim::read_text((a / "manifest.json").string());
  EXPECT_NE(manifest.find("\"seed\": 5"), std::string::npos);
}

#endif
