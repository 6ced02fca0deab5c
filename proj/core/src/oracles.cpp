#include "ratchet/oracles.hpp"

#include <algorithm>
#include <atomic>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <exception>
#include <numbers>
#include <random>
#include <thread>

#include "ratchet/errors.hpp"
#include "ratchet/ips.hpp"
#include "ratchet/pde.hpp"

namespace ratchet {

double logistic_exact(double u0, double t) {
  require(u0 >= 0.0, ErrorKind::InvalidArgument, "logistic initial value must be >= 0");
  return u0 * std::exp(t) / (1.0 + u0 * std::expm1(t));
}

double heat_solution(const ClassProfile& f, double m, double t, double x) {
  if (t <= 0.0) return f(x);
  const double var = m * t;
  const double sd = std::sqrt(var);
  double sum = 0.0;
  for (const auto& s : f.terms) {
    switch (s.kind) {
      case Shape::Kind::Constant:
        sum += s.c;
        break;
      case Shape::Kind::Indicator:
        sum += 0.5 * s.c *
               (std::erf((x - s.a) / (sd * std::numbers::sqrt2)) -
                std::erf((x - s.b) / (sd * std::numbers::sqrt2)));
        break;
      case Shape::Kind::Gaussian: {
        const double v = s.b * s.b + var;
        sum += s.c * s.b / std::sqrt(v) * std::exp(-0.5 * (x - s.a) * (x - s.a) / v);
        break;
      }
    }
  }
  return sum;
}

OdeTrajectory ode_reduce_solve(const ModelParams& params, const MassVector& u0, double T,
                               double dt_out) {
  namespace odeint = boost::numeric::odeint;
  using State = std::vector<double>;
  require(T >= 0.0 && dt_out > 0.0, ErrorKind::InvalidArgument, "need T >= 0 and dt_out > 0");

  const ReactionKernel kernel(params, u0.class_cap());
  auto system = [&kernel](const State& u, State& du, double) {
    double norm = 0.0;
    for (double v : u) norm += v;
    kernel.apply(u, norm, du);
  };

  std::vector<double> times;
  for (std::size_t j = 0;; ++j) {
    const double t = dt_out * static_cast<double>(j);
    if (t >= T - 1e-12 * std::max(1.0, T)) break;
    times.push_back(t);
  }
  times.push_back(T);

  OdeTrajectory traj;
  State u(u0.values().begin(), u0.values().end());
  auto observer = [&traj](const State& x, double t) {
    for (double v : x)
      if (!std::isfinite(v) || std::abs(v) > 1e6)
        fail(ErrorKind::BlowUp, "ODE solution left [-1e6, 1e6]");
    traj.t.push_back(t);
    traj.u.push_back(x);
  };
  if (T == 0.0) {
    observer(u, 0.0);
    return traj;
  }
  auto stepper = odeint::make_dense_output(1e-10, 1e-10, odeint::runge_kutta_dopri5<State>());
  odeint::integrate_times(stepper, system, u, times.begin(), times.end(),
                          std::min(dt_out, T) * 1e-2, observer);
  return traj;
}

PicardWorkspace::PicardWorkspace(const Grid1D& grid, double m) : grid_(grid), m_(m) {
  require(m > 0.0, ErrorKind::InvalidArgument, "diffusivity must be positive");
}

const std::vector<double>& PicardWorkspace::kernel(double tau) {
  for (const auto& [t, w] : cache_)
    if (std::abs(t - tau) <= 1e-14 * std::max(1.0, tau)) return w;
  std::vector<double> w;
  if (tau <= 0.0) {
    w = {1.0};
  } else {
    const double var = m_ * tau;
    const double dx = grid_.dx();
    auto half = static_cast<std::size_t>(std::ceil(10.0 * std::sqrt(var) / dx));
    half = std::max<std::size_t>(half, 1);
    w.resize(2 * half + 1);
    double sum = 0.0;
    for (std::size_t l = 0; l < w.size(); ++l) {
      const double off = (static_cast<double>(l) - static_cast<double>(half)) * dx;
      w[l] = std::exp(-0.5 * off * off / var);
      sum += w[l];
    }
    for (double& v : w) v /= sum;
  }
  cache_.emplace_back(tau, std::move(w));
  return cache_.back().second;
}

void PicardWorkspace::apply(double tau, std::span<const double> in, std::span<double> out) {
  const auto& w = kernel(tau);
  const auto n = static_cast<std::int64_t>(in.size());
  const auto half = static_cast<std::int64_t>(w.size() / 2);
  auto reflect = [n](std::int64_t j) {
    const std::int64_t period = 2 * (n - 1);
    j %= period;
    if (j < 0) j += period;
    return j < n ? j : period - j;
  };
  for (std::int64_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::int64_t l = -half; l <= half; ++l) acc += w[static_cast<std::size_t>(l + half)] * in[static_cast<std::size_t>(reflect(i + l))];
    out[static_cast<std::size_t>(i)] = acc;
  }
}

PicardResult duhamel_picard(const DensityField& initial, const ModelParams& params, double T,
                            std::size_t n_iter, std::size_t n_time) {
  require(T > 0.0 && n_time >= 1 && n_iter >= 1, ErrorKind::InvalidArgument,
          "Picard iteration needs T > 0, n_time >= 1, n_iter >= 1");
  const Grid1D& grid = initial.grid();
  const std::size_t K = initial.class_cap();
  const std::size_t nc = K + 2;
  const std::size_t nx = grid.size();
  const double h = T / static_cast<double>(n_time);
  PicardWorkspace ws(grid, params.m);
  const ReactionKernel kernel(params, K);

  auto time_of = [h](std::size_t j) { return h * static_cast<double>(j); };
  // P_{t_j} f is shared by every sweep.
  std::vector<DensityField> free(n_time + 1, DensityField(grid, K));
  for (std::size_t j = 0; j <= n_time; ++j)
    for (std::size_t k = 0; k < nc; ++k) ws.apply(time_of(j), initial.row(k), free[j].row(k));

  std::vector<DensityField> v = free;
  std::vector<DensityField> reaction(n_time + 1, DensityField(grid, K));
  std::vector<double> uk(nc), fk(nc), tmp(nx);
  PicardResult res;

  for (std::size_t it = 0; it < n_iter; ++it) {
    for (std::size_t j = 0; j <= n_time; ++j)
      for (std::size_t i = 0; i < nx; ++i) {
        double norm = 0.0;
        for (std::size_t k = 0; k < nc; ++k) {
          uk[k] = v[j].at(k, i);
          norm += uk[k];
        }
        kernel.apply(uk, norm, fk);
        for (std::size_t k = 0; k < nc; ++k) reaction[j].at(k, i) = fk[k];
      }

    std::vector<DensityField> next = free;
    for (std::size_t j = 1; j <= n_time; ++j)
      for (std::size_t i = 0; i <= j; ++i) {
        const double weight = (i == 0 || i == j) ? 0.5 * h : h;
        for (std::size_t k = 0; k < nc; ++k) {
          ws.apply(time_of(j - i), reaction[i].row(k), tmp);
          auto dst = next[j].row(k);
          for (std::size_t p = 0; p < nx; ++p) dst[p] += weight * tmp[p];
        }
      }

    double dist = 0.0;
    for (std::size_t j = 0; j <= n_time; ++j) {
      auto a = next[j].data();
      auto b = v[j].data();
      for (std::size_t p = 0; p < a.size(); ++p) dist = std::max(dist, std::abs(a[p] - b[p]));
    }
    res.distances.push_back(dist);
    v = std::move(next);
    const std::size_t n = res.distances.size();
    if (n >= 2) {
      const double prev = res.distances[n - 2];
      res.contraction = prev > 0.0 ? dist / prev : 0.0;
      if (dist > prev && prev > 1e-13)
        fail(ErrorKind::NoContraction, "Picard iterates diverge (distance " + std::to_string(prev) +
                                           " -> " + std::to_string(dist) + "); shorten T");
    }
  }
  res.u = v.back();
  res.u.set_time(T);
  return res;
}

PicardResult duhamel_picard(const InitialProfile& profile, const ModelParams& params,
                            const Grid1D& grid, double T, std::size_t n_iter, std::size_t n_time) {
  return duhamel_picard(sample_profile(profile, grid, params.class_cap), params, T, n_iter, n_time);
}

MassHistory::MassHistory(const std::vector<DensityField>& snapshots) {
  require(!snapshots.empty(), ErrorKind::HistoryGap, "mass history needs at least one snapshot");
  grid_ = snapshots.front().grid();
  for (const auto& s : snapshots) {
    require(s.grid() == grid_, ErrorKind::InvalidArgument, "snapshots must share a grid");
    require(times_.empty() || s.time() > times_.back(), ErrorKind::InvalidArgument,
            "snapshot times must increase");
    times_.push_back(s.time());
    mass_.push_back(mass_norm(s));
  }
}

double MassHistory::at(double t, double x) const {
  const double tol = 1e-9 * std::max(1.0, std::abs(times_.back()));
  if (t < times_.front() - tol || t > times_.back() + tol)
    fail(ErrorKind::HistoryGap, "time " + std::to_string(t) + " outside stored history [" +
                                    std::to_string(times_.front()) + ", " +
                                    std::to_string(times_.back()) + "]");
  auto space = [&](const std::vector<double>& m) {
    const double r = (x - grid_.x_min()) / grid_.dx();
    if (r <= 0.0) return m.front();
    if (r >= static_cast<double>(grid_.size() - 1)) return m.back();
    const auto i = static_cast<std::size_t>(r);
    const double f = r - static_cast<double>(i);
    return (1.0 - f) * m[i] + f * m[i + 1];
  };
  if (times_.size() == 1) return space(mass_.front());
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  std::size_t j = it == times_.begin() ? 0 : static_cast<std::size_t>(it - times_.begin()) - 1;
  j = std::min(j, times_.size() - 2);
  const double f = std::clamp((t - times_[j]) / (times_[j + 1] - times_[j]), 0.0, 1.0);
  return (1.0 - f) * space(mass_[j]) + f * space(mass_[j + 1]);
}

PathEstimate feynman_kac_u0(const ModelParams& params, const MassHistory& history,
                            const ClassProfile& f0, double T, double x, std::size_t n_paths,
                            std::size_t n_steps, std::uint64_t seed, unsigned threads) {
  require(n_paths >= 2 && n_steps >= 1 && T > 0.0, ErrorKind::InvalidArgument,
          "Feynman-Kac needs n_paths >= 2, n_steps >= 1, T > 0");
  const double mu = params.mu;
  const Polynomial& qp = params.rates.q_plus;
  const Polynomial& qm = params.rates.q_minus;
  const double dt = T / static_cast<double>(n_steps);
  const double sd = std::sqrt(params.m * dt);
  const bool zero_f0 = f0.empty();

  constexpr std::size_t kBlock = 1024;
  const std::size_t n_blocks = (n_paths + kBlock - 1) / kBlock;
  struct Partial {
    double sum = 0.0;
    double sum_sq = 0.0;
  };
  std::vector<Partial> partial(n_blocks);
  std::atomic<std::size_t> cursor{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;

  auto worker = [&] {
    for (std::size_t b = cursor++; b < n_blocks && !failed; b = cursor++) {
      try {
        std::mt19937_64 rng(splitmix64(splitmix64(seed) + b));
        std::normal_distribution<double> normal(0.0, sd);
        const std::size_t begin = b * kBlock;
        const std::size_t end = std::min(n_paths, begin + kBlock);
        Partial p;
        for (std::size_t path = begin; path < end; ++path) {
          double w = x;
          double integral = 0.0;
          for (std::size_t j = 0; j < n_steps; ++j) {
            const double U = history.at(T - dt * static_cast<double>(j), w);
            integral += ((1.0 - mu) * qp(U) - qm(U)) * dt;
            w += normal(rng);
          }
          const double value = zero_f0 ? 0.0 : f0(w) * std::exp(integral);
          p.sum += value;
          p.sum_sq += value * value;
        }
        partial[b] = p;
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n_blocks));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);

  double sum = 0.0, sum_sq = 0.0;
  for (const auto& p : partial) {
    sum += p.sum;
    sum_sq += p.sum_sq;
  }
  const double n = static_cast<double>(n_paths);
  PathEstimate est;
  est.n_paths = n_paths;
  est.mean = sum / n;
  const double var = std::max(0.0, (sum_sq - n * est.mean * est.mean) / (n - 1.0));
  est.std_error = std::sqrt(var / n);
  return est;
}

}  // namespace ratchet
