#include "ratchet/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ratchet/errors.hpp"

namespace ratchet {

std::vector<double> alpha_sequence(const ModelParams& params, std::size_t K) {
  const double mu = params.mu;
  require(mu >= 0.0 && mu < 1.0, ErrorKind::InvalidArgument, "alpha needs mu in [0, 1)");
  std::vector<double> alpha(K + 1, 0.0);
  alpha[0] = 1.0;
  for (std::size_t i = 1; i <= K; ++i) {
    const double s_i = params.fitness(i);
    require(s_i != 1.0, ErrorKind::DegenerateFitness,
            "s_" + std::to_string(i) + " = 1 makes alpha undefined");
    alpha[i] = alpha[i - 1] * mu * params.fitness(i - 1) / ((1.0 - mu) * (1.0 - s_i));
  }
  return alpha;
}

QExtrema q_extrema(const ModelParams& params) {
  const Extrema e = extrema_on(params.rates.q_plus, 0.0, 1.0);
  return {e.min, e.max};
}

std::vector<double> uniform_time_grid(double T_max, std::size_t n) {
  require(n >= 2 && T_max > 0.0, ErrorKind::InvalidArgument, "time grid needs n >= 2, T_max > 0");
  std::vector<double> T(n);
  for (std::size_t j = 0; j < n; ++j) T[j] = T_max * static_cast<double>(j) / static_cast<double>(n - 1);
  return T;
}

namespace {

void require_monostable(const ModelParams& params) {
  if (classify_reaction(params) == ReactionClass::NotMonostable)
    fail(ErrorKind::NotMonostable, "reaction term is not monostable");
}

double uniform_step(const std::vector<double>& T) {
  require(T.size() >= 2 && T.front() == 0.0, ErrorKind::InvalidArgument,
          "time grid must start at 0 with at least 2 points");
  const double h = T[1] - T[0];
  for (std::size_t j = 1; j < T.size(); ++j)
    require(std::abs(T[j] - T[j - 1] - h) <= 1e-9 * std::max(1.0, T.back()),
            ErrorKind::InvalidArgument, "time grid must be uniform");
  return h;
}

}  // namespace

PiLower pi_lower(const ModelParams& params, const std::vector<double>& T_grid, std::size_t K) {
  require_monostable(params);
  const double h = uniform_step(T_grid);
  const auto [Q_min, Q_max] = q_extrema(params);
  const double mu = params.mu;
  const std::size_t n = T_grid.size();

  PiLower out;
  out.T = T_grid;
  out.values.assign(K + 1, std::vector<double>(n, 0.0));
  std::fill(out.values[0].begin(), out.values[0].end(), 1.0);
  const auto alpha = alpha_sequence(params, K);
  out.limit.resize(K + 1);
  for (std::size_t k = 0; k <= K; ++k)
    out.limit[k] = alpha[k] * std::pow(Q_min / Q_max, static_cast<double>(k));
  if (K == 0) return out;

  const double a1 = Q_max * (1.0 - params.fitness(1)) * (1.0 - mu);
  for (std::size_t j = 0; j < n; ++j)
    out.values[1][j] = mu * Q_min * -std::expm1(-a1 * T_grid[j]) / a1;

  std::vector<double> decay(n);
  for (std::size_t k = 2; k <= K; ++k) {
    const double a = Q_max * (1.0 - params.fitness(k)) * (1.0 - mu);
    for (std::size_t i = 0; i < n; ++i) decay[i] = std::exp(-a * T_grid[i]);
    const double c = mu * params.fitness(k - 1) * Q_min;
    const auto& prev = out.values[k - 1];
    for (std::size_t j = 1; j < n; ++j) {
      double sum = 0.5 * (prev[j] * decay[0] + prev[0] * decay[j]);
      for (std::size_t i = 1; i < j; ++i) sum += prev[j - i] * decay[i];
      out.values[k][j] = c * h * sum;
    }
  }
  return out;
}

PiUpper phi_and_pi_upper(const ModelParams& params, const std::vector<double>& pi_hat,
                         const std::vector<double>& T_grid, std::size_t K) {
  require_monostable(params);
  require(pi_hat.size() >= K + 1, ErrorKind::InvalidArgument, "pi_hat needs K + 1 entries");
  const auto [Q_min, Q_max] = q_extrema(params);
  const double mu = params.mu;
  const auto alpha = alpha_sequence(params, K);
  const std::size_t n = T_grid.size();

  std::vector<double> s(K + 1), log_s(K + 1);
  for (std::size_t k = 0; k <= K; ++k) {
    s[k] = params.fitness(k);
    log_s[k] = std::log(s[k]);
  }

  PiUpper out;
  out.T = T_grid;
  out.phi.assign(K + 1, std::vector<double>(n, 0.0));
  out.upper.assign(K + 1, std::vector<double>(n, 0.0));
  out.Phi.assign(n, 0.0);

  for (std::size_t j = 0; j < n; ++j) {
    const double T = T_grid[j];
    const double log_rate = std::log(mu * Q_max * T);
    for (std::size_t k = 2; k <= K && T > 0.0; ++k) {
      double sum = 0.0;
      double log_prod = 0.0;  // sum of log s_l for l = i..k-1, built from i = k-1 down
      for (std::size_t i = k - 1; i >= 1; --i) {
        log_prod += log_s[i];
        if (pi_hat[i] > 0.0) {
          const double p = static_cast<double>(k - i);
          sum += std::exp(p * log_rate - std::lgamma(p + 1.0) + log_prod + std::log(pi_hat[i]) -
                          T * Q_min * (1.0 - s[i]) * (1.0 - mu));
        }
      }
      out.phi[k][j] = sum;
    }
    for (std::size_t k = 0; k <= K; ++k) {
      out.Phi[j] += out.phi[k][j];
      out.upper[k][j] = pi_hat[k] * std::exp(-T * Q_min * (1.0 - s[k]) * (1.0 - mu)) +
                        out.phi[k][j] +
                        alpha[k] * std::pow(Q_max / Q_min, static_cast<double>(k));
    }
    if (K >= 2 && out.phi[K][j] > 1e-10 * out.Phi[j] && out.Phi[j] > 0.0 &&
        out.warnings.empty())
      out.warnings.push_back("phi_K(T) at T = " + std::to_string(T) +
                             " exceeds 1e-10 Phi(T); raise K for an accurate Phi");
  }
  return out;
}

double tracer_bound(const ModelParams& params, const std::vector<double>& pi_hat, double Phi_T,
                    double T) {
  const auto [Q_min, Q_max] = q_extrema(params);
  double norm = 0.0;
  for (std::size_t k = 1; k < pi_hat.size(); ++k) norm += pi_hat[k];
  return norm * std::exp(-T * Q_min * (1.0 - params.fitness(1)) * (1.0 - params.mu)) + Phi_T;
}

BoundSequences bound_sequences(const ModelParams& params, const std::vector<double>& pi_hat,
                               const std::vector<double>& T_grid, std::size_t K) {
  auto lower = pi_lower(params, T_grid, K);
  auto upper = phi_and_pi_upper(params, pi_hat, T_grid, K);
  BoundSequences b;
  b.alpha = alpha_sequence(params, K);
  b.pi_hat.assign(pi_hat.begin(), pi_hat.begin() + static_cast<std::ptrdiff_t>(K + 1));
  b.T = T_grid;
  b.pi_lower = std::move(lower.values);
  b.pi_upper = std::move(upper.upper);
  b.phi = std::move(upper.phi);
  b.Phi = std::move(upper.Phi);
  b.warnings = std::move(upper.warnings);
  return b;
}

double c_star(const ModelParams& params) {
  const double H = (1.0 - params.mu) * params.rates.q_plus(0.0) - params.rates.q_minus(0.0);
  require(H >= 0.0, ErrorKind::NegativeArgument,
          "growth rate at zero density is negative (" + std::to_string(H) + ")");
  return std::sqrt(2.0 * params.m * H);
}

double conjectured_speed_FE(double r, double B, double m, double mu) {
  require(r > 0.0 && B >= 0.0 && m > 0.0 && mu >= 0.0 && mu < 1.0, ErrorKind::InvalidArgument,
          "conjectured speed needs r > 0, B >= 0, m > 0, mu in [0, 1)");
  if (B <= 2.0 / (1.0 - mu)) return std::sqrt(2.0 * m * r * (1.0 - mu));
  return 0.5 * (B * (1.0 - mu) + 2.0) * std::sqrt(m * r / B);
}

namespace {

double smallest_growth_root(const ModelParams& params) {
  const Polynomial g = (1.0 - params.mu) * params.rates.q_plus - params.rates.q_minus;
  if (g(0.0) == 0.0) return 0.0;
  const int n = 4097;
  double lo = 0.0;
  for (int i = 1; i < n; ++i) {
    const double hi = static_cast<double>(i) / (n - 1);
    const double v = g(hi);
    if (v == 0.0) return hi;
    if ((v < 0.0) != (g(lo) < 0.0)) return bisect(g, lo, hi, 1e-15);
    lo = hi;
  }
  fail(ErrorKind::NoRoot, "(1 - mu) q+ - q- has no sign change on [0, 1]");
}

}  // namespace

Equilibrium u_equilibrium(const ModelParams& params) {
  require_monostable(params);
  Equilibrium eq;
  eq.U_eq = smallest_growth_root(params);
  const auto alpha = alpha_sequence(params, params.class_cap);
  double sum = 0.0;
  for (double a : alpha) sum += a;
  std::vector<double> values(params.class_cap + 2, 0.0);
  for (std::size_t k = 0; k <= params.class_cap; ++k) values[k] = eq.U_eq * alpha[k] / sum;
  eq.state = MassVector(std::move(values));
  return eq;
}

SpeedDiagnostics speed_diagnostics(const ModelParams& params) {
  SpeedDiagnostics d;
  const auto q = q_extrema(params);
  d.Q_min = q.Q_min;
  d.Q_max = q.Q_max;
  const Polynomial g = (1.0 - params.mu) * params.rates.q_plus - params.rates.q_minus;
  d.H_max = g(0.0);
  d.H_min = extrema_on(g, 0.0, 1.0).min;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  d.c_star = d.H_max >= 0.0 ? std::sqrt(2.0 * params.m * d.H_max) : nan;
  try {
    d.U_eq = smallest_growth_root(params);
  } catch (const Error&) {
    d.U_eq = nan;
  }
  d.verdict = classify_reaction(params);
  return d;
}

double front_position(const DensityField& field, double level) {
  const auto mass = mass_norm(field);
  const Grid1D& g = field.grid();
  const std::size_t n = mass.size();
  if (mass[n - 1] >= level) return g.x_max();
  for (std::size_t i = n - 1; i-- > 0;) {
    if (mass[i] >= level) {
      const double frac = (mass[i] - level) / (mass[i] - mass[i + 1]);
      return g.x(i) + frac * g.dx();
    }
  }
  fail(ErrorKind::LevelNotCrossed, "mass never reaches level " + std::to_string(level) +
                                       " at t = " + std::to_string(field.time()));
}

SpeedEstimate fit_speed(const std::vector<double>& t, const std::vector<double>& x) {
  require(t.size() == x.size() && t.size() >= 2, ErrorKind::InvalidArgument,
          "speed fit needs at least two points");
  const double n = static_cast<double>(t.size());
  double mt = 0.0, mx = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    mt += t[i];
    mx += x[i];
  }
  mt /= n;
  mx /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    sxx += (t[i] - mt) * (t[i] - mt);
    sxy += (t[i] - mt) * (x[i] - mx);
  }
  require(sxx > 0.0, ErrorKind::InvalidArgument, "speed fit needs distinct times");
  SpeedEstimate est;
  est.speed = sxy / sxx;
  est.n_points = t.size();
  est.t = t;
  est.front = x;
  if (t.size() > 2) {
    double sse = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double r = x[i] - (mx + est.speed * (t[i] - mt));
      sse += r * r;
    }
    est.std_error = std::sqrt(sse / (n - 2.0) / sxx);
  }
  return est;
}

SpeedEstimate estimate_speed(const std::vector<DensityField>& snapshots, double level, double t_lo,
                             double t_hi) {
  std::vector<double> t, x;
  for (const auto& f : snapshots) {
    if (f.time() < t_lo - 1e-9 || f.time() > t_hi + 1e-9) continue;
    t.push_back(f.time());
    x.push_back(front_position(f, level));
  }
  return fit_speed(t, x);
}

PoissonComparison poisson_limit(double mu, double s, double n, std::size_t K) {
  require(n >= 1.0 && s > 0.0 && s / n < 1.0 && mu >= 0.0 && mu / n < 1.0,
          ErrorKind::InvalidArgument, "poisson limit needs s/n in (0, 1) and mu/n in [0, 1)");
  ModelParams p;
  p.mu = mu / n;
  p.fitness = FitnessSequence::geometric(s / n);
  p.class_cap = K;
  PoissonComparison out;
  out.alpha_n = alpha_sequence(p, K);
  double sum = 0.0;
  for (double a : out.alpha_n) sum += a;
  for (double& a : out.alpha_n) a /= sum;

  const double lambda = mu / s;
  out.poisson.resize(K + 1);
  double covered = 0.0;
  for (std::size_t k = 0; k <= K; ++k) {
    const double kk = static_cast<double>(k);
    out.poisson[k] = lambda == 0.0 ? (k == 0 ? 1.0 : 0.0)
                                   : std::exp(-lambda + kk * std::log(lambda) - std::lgamma(kk + 1.0));
    covered += out.poisson[k];
    out.distance += std::abs(out.alpha_n[k] - out.poisson[k]);
  }
  out.distance += std::max(0.0, 1.0 - covered);
  return out;
}

RatioProfile ratio_profile(const DensityField& field, double floor) {
  require(floor > 0.0, ErrorKind::InvalidArgument, "ratio floor must be positive");
  RatioProfile out;
  const std::size_t K = field.class_cap();
  out.ratios.assign(K + 1, {});
  for (std::size_t i = 0; i < field.grid().size(); ++i) {
    const double u0 = field.at(0, i);
    if (!(u0 > floor)) continue;
    out.nodes.push_back(i);
    for (std::size_t k = 0; k <= K; ++k) out.ratios[k].push_back(field.at(k, i) / u0);
  }
  if (out.nodes.empty())
    fail(ErrorKind::NoQualifyingNodes, "no node has u_0 above " + std::to_string(floor));
  return out;
}

}  // namespace ratchet
