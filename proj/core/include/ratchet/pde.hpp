#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ratchet/field.hpp"
#include "ratchet/model.hpp"
#include "ratchet/profile.hpp"

namespace ratchet {

enum class Scheme { Euler, RK4 };

struct SolverConfig {
  Scheme scheme = Scheme::RK4;
  /// 0 selects safety * dx^2 / m.
  double dt = 0.0;
  double safety = 0.4;
  bool clamp_negatives = true;
  /// Empty means a single snapshot at T.
  std::vector<double> snapshot_times;
  /// Mass within this distance of an edge above contact_level is reported.
  double boundary_margin = 20.0;
  double contact_level = 1e-3;

  [[nodiscard]] double resolve_dt(const Grid1D& grid, double m) const;

  friend bool operator==(const SolverConfig&, const SolverConfig&) = default;
};

struct SolveDiagnostics {
  double dt = 0.0;
  std::size_t steps = 0;
  /// Total negative mass removed by clamping (integrated over x).
  double clamped_mass = 0.0;
  double max_mass = 0.0;
  bool left_contact = false;
  bool right_contact = false;
  double tail_mass = 0.0;
  std::vector<std::string> warnings;
};

struct PdeSolution {
  std::vector<DensityField> u;
  /// Labelled densities; empty unless a tracer was evolved.
  std::vector<DensityField> u_star;
  SolveDiagnostics diagnostics;
};

/// Central second difference with mirrored ghost nodes.
DensityField laplacian(const DensityField& field);
void laplacian_row(std::span<const double> u, double dx, std::span<double> out);

/// Cell averages of f_k over [x_i - dx/2, x_i + dx/2]; classes above K are
/// pooled into the overflow row.
DensityField sample_profile(const InitialProfile& profile, const Grid1D& grid,
                            std::size_t class_cap);

PdeSolution solve(const ModelParams& params, const DensityField& initial, const SolverConfig& cfg,
                  double T);
PdeSolution solve(const ModelParams& params, const InitialProfile& profile, const Grid1D& grid,
                  const SolverConfig& cfg, double T);

PdeSolution solve_with_tracer(const ModelParams& params, const DensityField& initial,
                              const DensityField& tracer, const SolverConfig& cfg, double T);
/// Throws TracerExceedsTotal if the sampled tracer exceeds the total at any node.
PdeSolution solve_with_tracer(const ModelParams& params, const InitialProfile& profile,
                              const InitialProfile& tracer_profile, const Grid1D& grid,
                              const SolverConfig& cfg, double T);

}  // namespace ratchet
