#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("ratchet_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run(const std::string& args, const fs::path& err = {}) {
  std::string cmd = std::string(RATCHET_CLI_PATH) + " " + args;
  cmd += err.empty() ? " 2>/dev/null" : " 2>" + err.string();
  const int status = std::system((cmd + " >/dev/null").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, ListsPresets) { EXPECT_EQ(run("list-presets"), 0); }

TEST(Cli, EquilibriumWritesManifest) {
  const auto out = scratch("eq");
  ASSERT_EQ(run("equilibrium --preset fig1 --out " + out.string()), 0);
  const auto manifest = nlohmann::json::parse(slurp(out / "manifest.json"));
  EXPECT_EQ(manifest["experiment"], "equilibrium");
  EXPECT_TRUE(manifest.contains("version"));
  EXPECT_TRUE(manifest.contains("config"));
  EXPECT_TRUE(fs::exists(out / "equilibrium.csv"));
  EXPECT_EQ(slurp(out / "equilibrium.csv").rfind("k,alpha,u_eq\n", 0), 0u);
}

TEST(Cli, InvalidConfigExitsOne) {
  const auto out = scratch("bad");
  const auto err = out / "err.txt";
  EXPECT_EQ(run("solve-pde --preset fig1 --set model.mu=2 --out " + out.string(), err), 1);
  const auto j = nlohmann::json::parse(slurp(err));
  EXPECT_EQ(j["error"], "ConfigInvalid");
  EXPECT_EQ(run("solve-pde --preset fig1 --set model.nothing=2 --out " + out.string()), 1);
  EXPECT_EQ(run("solve-pde --preset missing --out " + out.string()), 1);
}

TEST(Cli, RuntimeErrorExitsTwo) {
  const auto out = scratch("runtime");
  const auto err = out / "err.txt";
  EXPECT_EQ(run("solve-pde --preset fig1 --set solver.dt=1 --set solver.T=1 --out " + out.string(), err), 2);
  EXPECT_TRUE(nlohmann::json::parse(slurp(err)).contains("message"));
}

TEST(Cli, DeterministicIpsOutput) {
  const std::string args =
      "simulate-ips --preset converge --set solver.T=0.5 --set ips.N_values=25 --set ips.n_reps=2 --out ";
  const auto a = scratch("ips_a"), b = scratch("ips_b");
  ASSERT_EQ(run(args + a.string()), 0);
  ASSERT_EQ(run(args + b.string()), 0);
  EXPECT_EQ(slurp(a / "density.csv"), slurp(b / "density.csv"));
  EXPECT_FALSE(slurp(a / "density.csv").empty());
}

TEST(Cli, SimulateRequiresSeed) {
  const auto out = scratch("noseed");
  EXPECT_EQ(run("simulate-ips --preset fig1 --out " + out.string()), 1);
}

TEST(Cli, OracleCheckHeatOnly) {
  const auto out = scratch("oracle");
  ASSERT_EQ(run("oracle-check --preset fig1 --set model.q_plus= --set model.q_minus= --set model.class_cap=4 "
                "--set ips.seed=3 --out " + out.string()),
            0);
  EXPECT_TRUE(fs::exists(out / "oracle_check.csv"));
}

TEST(Cli, PoissonLimit) {
  const auto out = scratch("poisson");
  ASSERT_EQ(run("poisson-limit --preset fig1 --out " + out.string()), 0);
  EXPECT_TRUE(fs::exists(out / "poisson.csv"));
}
