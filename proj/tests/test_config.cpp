#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "ringtoss/config.hpp"
#include "ringtoss/experiment_config.hpp"

using namespace ringtoss;
namespace fs = std::filesystem;

namespace {

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("ringtoss_config_" + name);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST(IniConfig, ReadsTypedValuesAndStripsComments) {
  const IniConfig cfg = IniConfig::parse(
      "[a]\n"
      "x = 1.5   ; trailing\n"
      "n = 42 # other style\n"
      "flag = true\n"
      "list = 1, 2.5, -3\n"
      "name = hello\n");
  EXPECT_DOUBLE_EQ(cfg.get_double("a.x"), 1.5);
  EXPECT_EQ(cfg.get_int("a.n"), 42);
  EXPECT_TRUE(cfg.get_bool("a.flag"));
  EXPECT_EQ(cfg.get_doubles("a.list"), (std::vector<double>{1.0, 2.5, -3.0}));
  EXPECT_EQ(cfg.get_string("a.name"), "hello");
  EXPECT_EQ(cfg.keys("a").size(), 5u);
}

TEST(IniConfig, FallbacksAndMissingKeys) {
  const IniConfig cfg = IniConfig::parse("[a]\nx = 1\n");
  EXPECT_DOUBLE_EQ(cfg.get_double("a.y", 7.0), 7.0);
  EXPECT_FALSE(cfg.has("a.y"));
  EXPECT_THROW(cfg.get_double("a.y"), ConfigError);
  EXPECT_THROW(cfg.get_string("b.x"), ConfigError);
}

TEST(IniConfig, RejectsMalformedValues) {
  const IniConfig cfg = IniConfig::parse("[a]\nx = abc\nn = 1.5\nb = maybe\npair = 1, 2\n");
  EXPECT_THROW(cfg.get_double("a.x"), ConfigError);
  EXPECT_THROW(cfg.get_int("a.n"), ConfigError);
  EXPECT_THROW(cfg.get_bool("a.b"), ConfigError);
  EXPECT_THROW(cfg.get_double("a.pair"), ConfigError);
  EXPECT_THROW(IniConfig::load("/nonexistent/file.ini"), ConfigError);
}

TEST(IniConfig, ParseDoublesRejectsJunk) {
  EXPECT_EQ(parse_doubles("1 2,3", "ctx"), (std::vector<double>{1.0, 2.0, 3.0}));
  EXPECT_THROW(parse_doubles("1, x", "ctx"), ConfigError);
}

TEST(ExperimentConfig, BundledDefaultsMatchDocumentedValues) {
  const ExperimentConfig cfg = load_experiment_config(default_experiment_config_path());
  EXPECT_EQ(cfg.world.planner.n_planning, 80);
  EXPECT_EQ(cfg.world.planner.n_smoothing, 100);
  EXPECT_NEAR(cfg.world.planner.dt_col, 1.0 / 30.0, 1e-12);
  EXPECT_DOUBLE_EQ(cfg.world.planner.f_ctrl, 240.0);
  EXPECT_DOUBLE_EQ(cfg.r_plan.min, 1.0);
  EXPECT_DOUBLE_EQ(cfg.r_plan.max, 2.5);
  EXPECT_DOUBLE_EQ(cfg.r_exec.min, 1.5);
  EXPECT_DOUBLE_EQ(cfg.r_exec.max, 2.0);
  EXPECT_DOUBLE_EQ(cfg.world.geometry.r_ring, 0.075);
  EXPECT_DOUBLE_EQ(cfg.world.geometry.r_cyl, 0.005);
  EXPECT_DOUBLE_EQ(cfg.world.geometry.z_cyl, 0.1);
  EXPECT_EQ(cfg.world.basis.size(), 30);
  EXPECT_EQ(cfg.ae.hidden, (std::vector<int>{256, 512, 256}));
  EXPECT_EQ(cfg.ae.latent, 64);
  EXPECT_EQ(cfg.ae.batch, 256);
  EXPECT_DOUBLE_EQ(cfg.ae.adam.lr, 1e-4);
  EXPECT_DOUBLE_EQ(cfg.ae.adam.weight_decay, 1e-5);
  EXPECT_EQ(cfg.cfm.hidden, (std::vector<int>{256, 512, 1024, 1024, 512, 256}));
  EXPECT_EQ(cfg.cfm.batch, 450);
  EXPECT_DOUBLE_EQ(cfg.cfm.adam.lr, 3e-4);
  EXPECT_DOUBLE_EQ(cfg.cfm.adam.weight_decay, 1e-6);
  EXPECT_EQ(cfg.cfm.n_steps, 1000);
  EXPECT_DOUBLE_EQ(cfg.gap.drag_coeff, 0.3);
  EXPECT_DOUBLE_EQ(cfg.gap.release_time_jitter_std, 0.002);
  EXPECT_EQ(cfg.n_flow_data, 60);
  EXPECT_FALSE(cfg.hash.empty());
}

TEST(ExperimentConfig, ExecRangeMustLieInsidePlanRange) {
  const fs::path dir = scratch_dir("range");
  std::string text = read_text(default_experiment_config_path());
  text.replace(text.find("r_exec = 1.5, 2.0"), 17, "r_exec = 0.5, 2.0");
  std::ofstream(dir / "bad.ini") << text;
  EXPECT_THROW(load_experiment_config((dir / "bad.ini").string(), bundled_config_dir() + "/default_arm.ini"),
               ConfigError);
}

TEST(ExperimentConfig, RelativeArmPathResolvesAgainstConfigDir) {
  const fs::path dir = scratch_dir("arm");
  fs::copy_file(bundled_config_dir() + "/default_arm.ini", dir / "my_arm.ini", fs::copy_options::overwrite_existing);
  std::string text = read_text(default_experiment_config_path());
  text.replace(text.find("arm = default_arm.ini"), 21, "arm = my_arm.ini");
  std::ofstream(dir / "exp.ini") << text;
  const ExperimentConfig cfg = load_experiment_config((dir / "exp.ini").string());
  EXPECT_EQ(fs::path(cfg.arm_path), dir / "my_arm.ini");
}

TEST(ExperimentConfig, HashTracksFileContents) {
  const fs::path dir = scratch_dir("hash");
  const std::string text = read_text(default_experiment_config_path());
  const std::string arm = bundled_config_dir() + "/default_arm.ini";
  std::ofstream(dir / "a.ini") << text;
  std::ofstream(dir / "b.ini") << text << "\n; edited\n";
  const auto a = load_experiment_config((dir / "a.ini").string(), arm);
  const auto a2 = load_experiment_config((dir / "a.ini").string(), arm);
  const auto b = load_experiment_config((dir / "b.ini").string(), arm);
  EXPECT_EQ(a.hash, a2.hash);
  EXPECT_NE(a.hash, b.hash);
}

TEST(ExperimentConfig, MissingArmFileIsAConfigError) {
  EXPECT_THROW(load_experiment_config(default_experiment_config_path(), "/nonexistent/arm.ini"), ConfigError);
}
