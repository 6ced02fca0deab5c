#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ratchet/model.hpp"
#include "ratchet/pde.hpp"
#include "ratchet/profile.hpp"

namespace ratchet {

struct ProfileSpec {
  enum class Kind { AlphaScaled, Explicit };
  Kind kind = Kind::AlphaScaled;
  /// Alpha-scaled: f_k = total_mass * alpha_k / sum(alpha) * shape.
  ClassProfile shape{{Shape::indicator(-10.0, 10.0, 1.0)}};
  double total_mass = 0.975;
  /// Explicit per-class shapes.
  std::vector<ClassProfile> classes;

  friend bool operator==(const ProfileSpec&, const ProfileSpec&) = default;
};

struct TracerSpec {
  enum class Mode { None, Full, ClassesFrom };
  Mode mode = Mode::None;
  std::size_t from_class = 1;

  friend bool operator==(const TracerSpec&, const TracerSpec&) = default;
};

struct GridSpec {
  double x_min = -50.0;
  double x_max = 350.0;
  double dx = 0.25;

  [[nodiscard]] Grid1D grid() const { return Grid1D::with_spacing(x_min, x_max, dx); }
  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct RunSpec {
  Scheme scheme = Scheme::RK4;
  double dt = 0.0;
  double safety = 0.4;
  bool clamp_negatives = true;
  double T = 60.0;
  double snapshot_every = 10.0;

  /// Snapshots at 0, every, 2 every, ..., T.
  [[nodiscard]] std::vector<double> snapshot_times() const;
  [[nodiscard]] SolverConfig solver() const;
  friend bool operator==(const RunSpec&, const RunSpec&) = default;
};

struct IpsSpec {
  std::int64_t half_width = 32;
  std::size_t class_cap = 8;
  std::int64_t boundary_guard = 5;
  std::size_t n_reps = 1;
  std::optional<std::uint64_t> seed;
  std::vector<std::int64_t> N_values{25, 100, 400};

  friend bool operator==(const IpsSpec&, const IpsSpec&) = default;
};

struct AnalysisSpec {
  double front_level = 0.1;
  /// Unset: last two thirds of [0, T].
  std::optional<double> fit_t_min;
  std::optional<double> fit_t_max;
  std::size_t bounds_points = 512;
  double ratio_floor = 1e-3;
  double poisson_mu = 0.5;
  double poisson_s = 0.5;
  std::vector<double> poisson_n{1e3, 1e4};
  std::size_t poisson_K = 30;

  friend bool operator==(const AnalysisSpec&, const AnalysisSpec&) = default;
};

struct SweepSpec {
  double r = 1.0;
  std::vector<double> B_values;

  friend bool operator==(const SweepSpec&, const SweepSpec&) = default;
};

struct OutputSpec {
  enum class Format { Csv, Json };
  Format format = Format::Csv;
  std::size_t max_class = 4;

  friend bool operator==(const OutputSpec&, const OutputSpec&) = default;
};

inline const std::vector<std::string> kExperiments = {
    "solve-pde", "simulate-ips", "tracer",        "speed",       "equilibrium",
    "bounds",    "converge",     "poisson-limit", "oracle-check"};

struct RunConfig {
  std::string experiment = "solve-pde";
  ModelParams model = fig1_params();
  ProfileSpec profile;
  TracerSpec tracer;
  GridSpec grid;
  RunSpec run;
  IpsSpec ips;
  AnalysisSpec analysis;
  SweepSpec sweep;
  OutputSpec output;

  [[nodiscard]] InitialProfile initial_profile() const;
  /// Tracer profile implied by the tracer block; nullopt when mode is none.
  [[nodiscard]] std::optional<InitialProfile> tracer_profile() const;
  /// Field-level checks; throws ConfigInvalid.
  void validate() const;
  [[nodiscard]] bool stochastic() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Flat `section.key -> value` view of a config document.
using ConfigMap = std::map<std::string, std::string>;

ConfigMap parse_document(const std::string& text);
/// Applies `key=value` overrides.
void apply_overrides(ConfigMap& map, const std::vector<std::string>& overrides);
RunConfig from_map(const ConfigMap& map);
RunConfig parse_config(const std::string& text, const std::vector<std::string>& overrides = {});
std::string emit_config(const RunConfig& config);

// Value grammar shared with the CLI.
std::string format_double(double v);
Shape parse_shape(const std::string& text);
ClassProfile parse_class_profile(const std::string& text);
std::string emit_class_profile(const ClassProfile& p);
FitnessSequence parse_fitness(const std::string& text);
std::string emit_fitness(const FitnessSequence& f);

}  // namespace ratchet
