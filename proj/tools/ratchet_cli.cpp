// Command-line front end: ratchet <experiment> --config <path> | --preset <name>
//                                      [--set key=value ...] [--out <dir>]

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "ratchet/config.hpp"
#include "ratchet/errors.hpp"
#include "ratchet/experiments.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

void error_record(const std::string& kind, const std::string& message) {
  std::cerr << nlohmann::json{{"error", kind}, {"message", message}}.dump() << "\n";
}

unsigned thread_count() {
  const char* env = std::getenv("RATCHET_THREADS");
  if (!env || !*env) return 0;
  try {
    return static_cast<unsigned>(std::stoul(env));
  } catch (const std::exception&) {
    return 0;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) ratchet::fail(ratchet::ErrorKind::ConfigInvalid, "config: cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spatial Muller's ratchet: particle simulator, PDE solver and analysis"};
  app.set_version_flag("--version", ratchet::version());
  app.require_subcommand(1);

  std::string config_path, preset, out_dir = "ratchet_out";
  std::vector<std::string> overrides;
  std::string experiment;

  for (const auto& name : ratchet::kExperiments) {
    auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
    auto* cfg = sub->add_option("--config", config_path, "config document");
    auto* pre = sub->add_option("--preset", preset, "built-in config (fig1, fig2, converge, speed-sweep)");
    cfg->excludes(pre);
    sub->add_option("--set", overrides, "override section.key=value")->allow_extra_args(false);
    sub->add_option("--out", out_dir, "output directory");
    sub->callback([&experiment, name] { experiment = name; });
  }
  std::string show_name;
  auto* show = app.add_subcommand("show-preset", "print a built-in config document");
  show->add_option("name", show_name, "preset name")->required();
  app.add_subcommand("list-presets", "list built-in presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    error_record("ConfigInvalid", e.what());
    return kConfigError;
  }

  try {
    if (app.got_subcommand("list-presets")) {
      for (const auto& p : ratchet::preset_names()) std::cout << p << "\n";
      return kOk;
    }
    if (app.got_subcommand("show-preset")) {
      std::cout << ratchet::preset_text(show_name);
      return kOk;
    }
    if (config_path.empty() && preset.empty()) {
      error_record("ConfigInvalid", "one of --config or --preset is required");
      return kConfigError;
    }
    const std::string text = preset.empty() ? read_file(config_path) : ratchet::preset_text(preset);
    overrides.insert(overrides.begin(), "experiment=" + experiment);
    const ratchet::RunConfig config = ratchet::parse_config(text, overrides);

    const auto start = std::chrono::steady_clock::now();
    const auto result = ratchet::run_experiment(config, out_dir, thread_count());
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    ratchet::write_manifest(out_dir, config, result, wall);

    for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
    for (const auto& f : result.files) std::cout << f.string() << "\n";
    std::cout << result.summary_json << "\n";
    return result.checks_failed ? kRuntimeError : kOk;
  } catch (const ratchet::Error& e) {
    error_record(std::string(ratchet::to_string(e.kind())), e.what());
    return e.kind() == ratchet::ErrorKind::ConfigInvalid ? kConfigError : kRuntimeError;
  } catch (const std::exception& e) {
    error_record("RuntimeError", e.what());
    return kRuntimeError;
  }
}
