#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ratchet/field.hpp"
#include "ratchet/model.hpp"
#include "ratchet/profile.hpp"

namespace ratchet {

/// Closed-form solution of u' = u (1 - u).
double logistic_exact(double u0, double t);

/// Exact heat-semigroup action (P_t f)(x) on the whole line for diffusivity m.
double heat_solution(const ClassProfile& f, double m, double t, double x);

struct OdeTrajectory {
  std::vector<double> t;
  std::vector<std::vector<double>> u;  // K+2 entries per time
};

/// Integrates du/dt = F(u) with an adaptive Dormand-Prince 5(4) pair
/// (absolute and relative tolerance 1e-10), reporting every dt_out and at T.
OdeTrajectory ode_reduce_solve(const ModelParams& params, const MassVector& u0, double T,
                               double dt_out);

/// Discrete heat kernels on a grid: normalized sampled Gaussians applied
/// with whole-sample mirror reflection at both ends.
class PicardWorkspace {
 public:
  PicardWorkspace(const Grid1D& grid, double m);

  /// Weights at offsets -L..L for time tau; tau = 0 is the identity.
  [[nodiscard]] const std::vector<double>& kernel(double tau);
  void apply(double tau, std::span<const double> in, std::span<double> out);

  [[nodiscard]] const Grid1D& grid() const noexcept { return grid_; }

 private:
  Grid1D grid_;
  double m_;
  std::vector<std::pair<double, std::vector<double>>> cache_;
};

struct PicardResult {
  DensityField u;
  /// Sup distance between successive iterates, one per sweep.
  std::vector<double> distances;
  /// Last ratio of successive distances.
  double contraction = 0.0;
};

/// Fixed-point iteration of the Duhamel map on n_time uniform steps of
/// [0, T] with trapezoidal time quadrature. Throws NoContraction if the
/// successive-iterate distance grows.
PicardResult duhamel_picard(const DensityField& initial, const ModelParams& params, double T,
                            std::size_t n_iter, std::size_t n_time = 25);
PicardResult duhamel_picard(const InitialProfile& profile, const ModelParams& params,
                            const Grid1D& grid, double T, std::size_t n_iter,
                            std::size_t n_time = 25);

/// Stored ||u(t, x)|| on a grid at increasing times.
class MassHistory {
 public:
  MassHistory() = default;
  explicit MassHistory(const std::vector<DensityField>& snapshots);

  /// Linear in space and time; x is clamped to the grid, t outside the
  /// stored range throws HistoryGap.
  [[nodiscard]] double at(double t, double x) const;
  [[nodiscard]] double t_min() const { return times_.front(); }
  [[nodiscard]] double t_max() const { return times_.back(); }

 private:
  Grid1D grid_;
  std::vector<double> times_;
  std::vector<std::vector<double>> mass_;
};

struct PathEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n_paths = 0;
};

/// Monte Carlo estimate of u_0(T, x) = E_x[f_0(W_T) exp(int_0^T g(||u(T - tau, W_tau)||) dtau)]
/// with g = (1 - mu) q+ - q- and W a Brownian motion of diffusivity m.
/// Left-endpoint quadrature over n_steps; paths run in blocks of 1024 with
/// seeds derived from `seed`, so the result does not depend on `threads`.
PathEstimate feynman_kac_u0(const ModelParams& params, const MassHistory& history,
                            const ClassProfile& f0, double T, double x, std::size_t n_paths,
                            std::size_t n_steps, std::uint64_t seed, unsigned threads = 0);

}  // namespace ratchet
