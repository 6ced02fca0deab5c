#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ratchet/field.hpp"
#include "ratchet/model.hpp"

namespace ratchet {

/// alpha_0 = 1, alpha_k = prod_{i<=k} mu s_{i-1} / ((1 - mu)(1 - s_i)).
std::vector<double> alpha_sequence(const ModelParams& params, std::size_t K);

struct QExtrema {
  double Q_min = 0.0;
  double Q_max = 0.0;
};

/// Extremes of q+ over [0, 1].
QExtrema q_extrema(const ModelParams& params);

/// T_j = j * T_max / (n - 1), j = 0..n-1.
std::vector<double> uniform_time_grid(double T_max, std::size_t n = 512);

/// Tabulated per-class sequences, indexed [k][j] with j over the time grid.
using ClassTable = std::vector<std::vector<double>>;

struct PiLower {
  std::vector<double> T;
  ClassTable values;
  /// T -> infinity limits alpha_k (Q_min / Q_max)^k.
  std::vector<double> limit;
};

/// Lower proportion envelope. The first class uses its closed form, higher
/// classes a trapezoid convolution on the (uniform, zero-based) time grid.
PiLower pi_lower(const ModelParams& params, const std::vector<double>& T_grid, std::size_t K);

struct PiUpper {
  std::vector<double> T;
  ClassTable phi;
  std::vector<double> Phi;
  ClassTable upper;
  std::vector<std::string> warnings;
};

/// Transient terms phi_k(T), their sum Phi(T) over k <= K, and the upper
/// envelope pi_hat_k e^{-T Q_min (1 - s_k)(1 - mu)} + phi_k + alpha_k (Q_max / Q_min)^k.
PiUpper phi_and_pi_upper(const ModelParams& params, const std::vector<double>& pi_hat,
                         const std::vector<double>& T_grid, std::size_t K);

/// sup_x ||u*(T, x)|| <= ||pi_hat||_{k>=1} e^{-T Q_min (1 - s_1)(1 - mu)} + Phi(T).
double tracer_bound(const ModelParams& params, const std::vector<double>& pi_hat, double Phi_T,
                    double T);

struct BoundSequences {
  std::vector<double> alpha;
  std::vector<double> pi_hat;
  std::vector<double> T;
  ClassTable pi_lower;
  ClassTable pi_upper;
  ClassTable phi;
  std::vector<double> Phi;
  std::vector<std::string> warnings;
};

BoundSequences bound_sequences(const ModelParams& params, const std::vector<double>& pi_hat,
                               const std::vector<double>& T_grid, std::size_t K);

/// sqrt(2 m ((1 - mu) q+(0) - q-(0))); throws NegativeArgument when the
/// growth rate at zero is negative.
double c_star(const ModelParams& params);

/// Speed conjectured for the r(BU + 1) family.
double conjectured_speed_FE(double r, double B, double m, double mu);

struct Equilibrium {
  double U_eq = 0.0;
  MassVector state;
};

/// Smallest positive root of (1 - mu) q+ - q- on [0, 1] and the
/// alpha-proportional state with that mass.
Equilibrium u_equilibrium(const ModelParams& params);

struct SpeedDiagnostics {
  double Q_min = 0.0;
  double Q_max = 0.0;
  double c_star = 0.0;  // NaN when the growth rate at zero is negative
  double U_eq = 0.0;    // NaN when there is no root in [0, 1]
  double H_min = 0.0;
  double H_max = 0.0;
  ReactionClass verdict = ReactionClass::NotMonostable;
};

SpeedDiagnostics speed_diagnostics(const ModelParams& params);

/// Rightmost point where the mass crosses `level` downward, interpolated
/// linearly between nodes; the right edge when the mass never drops below.
double front_position(const DensityField& field, double level);

struct SpeedEstimate {
  double speed = 0.0;
  double std_error = 0.0;
  std::size_t n_points = 0;
  std::vector<double> t;
  std::vector<double> front;
};

/// Least-squares slope of the front position over snapshots with t in
/// [t_lo, t_hi].
SpeedEstimate estimate_speed(const std::vector<DensityField>& snapshots, double level, double t_lo,
                             double t_hi);
SpeedEstimate fit_speed(const std::vector<double>& t, const std::vector<double>& x);

struct PoissonComparison {
  std::vector<double> alpha_n;
  std::vector<double> poisson;
  double distance = 0.0;
};

/// Normalized alpha with selection s/n and mutation mu/n against the
/// Poisson(mu / s) mass function, over k = 0..K (Poisson tail beyond K
/// counted in the distance).
PoissonComparison poisson_limit(double mu, double s, double n, std::size_t K);

struct RatioProfile {
  std::vector<std::size_t> nodes;
  /// ratios[k][j] = u_k / u_0 at nodes[j], k = 0..K.
  ClassTable ratios;
};

RatioProfile ratio_profile(const DensityField& field, double floor);

}  // namespace ratchet
