#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ratchet/analysis.hpp"
#include "ratchet/config.hpp"
#include "ratchet/ips.hpp"

namespace ratchet {

std::string version();

std::vector<std::string> preset_names();
/// Config document for a built-in preset; throws ConfigInvalid for unknown names.
std::string preset_text(const std::string& name);

struct LlnPoint {
  std::int64_t N = 0;
  std::int64_t L = 0;
  double error = 0.0;
};

/// Mean over demes of sum_k |mean IPS density - PDE density| at time T.
double lln_error(const DensityField& ips_mean, const DensityField& pde);

/// For each N: replicate-mean IPS density against the PDE solved on the
/// deme grid from the same discretized initial condition.
std::vector<LlnPoint> lln_convergence(const ModelParams& base, const InitialProfile& profile,
                                      const LatticeWindow& window, double T,
                                      const std::vector<std::int64_t>& N_values, std::size_t n_reps,
                                      std::uint64_t seed, unsigned threads = 0);

struct SweepPoint {
  double B = 0.0;
  SpeedEstimate measured;
  double c_star = 0.0;
  double conjectured = 0.0;
  ReactionClass verdict = ReactionClass::NotMonostable;
};

/// Front speed of the r(BU + 1) family for every B in the sweep block.
std::vector<SweepPoint> speed_sweep(const RunConfig& config);

struct OracleCheck {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Cross-checks of the solver against the closed forms, the ODE reduction,
/// the Picard iteration and the Feynman-Kac estimator for the configured model.
std::vector<OracleCheck> oracle_checks(const RunConfig& config, unsigned threads = 0);

struct RunResult {
  std::vector<std::filesystem::path> files;
  std::vector<std::string> warnings;
  /// Set when a check-style experiment found a failing check.
  bool checks_failed = false;
  std::string summary_json = "{}";
};

/// Runs the configured experiment and writes its data files into out_dir.
RunResult run_experiment(const RunConfig& config, const std::filesystem::path& out_dir,
                         unsigned threads = 0);

void write_manifest(const std::filesystem::path& out_dir, const RunConfig& config,
                    const RunResult& result, double wall_seconds);

}  // namespace ratchet
