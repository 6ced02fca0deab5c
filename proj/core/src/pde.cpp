#include "ratchet/pde.hpp"

#include <algorithm>
#include <cmath>

#include "ratchet/errors.hpp"

namespace ratchet {

double SolverConfig::resolve_dt(const Grid1D& grid, double m) const {
  const double limit = grid.dx() * grid.dx() / m;
  if (dt == 0.0) {
    require(safety > 0.0 && safety <= 1.0, ErrorKind::InvalidArgument,
            "dt safety factor must lie in (0, 1]");
    return safety * limit;
  }
  require(dt > 0.0, ErrorKind::InvalidArgument, "dt must be positive");
  require(dt <= limit * (1.0 + 1e-12), ErrorKind::InvalidArgument,
          "dt = " + std::to_string(dt) + " exceeds the diffusive limit dx^2/m = " +
              std::to_string(limit));
  return dt;
}

void laplacian_row(std::span<const double> u, double dx, std::span<double> out) {
  const std::size_t n = u.size();
  const double inv = 1.0 / (dx * dx);
  out[0] = 2.0 * (u[1] - u[0]) * inv;
  for (std::size_t i = 1; i + 1 < n; ++i) out[i] = (u[i - 1] - 2.0 * u[i] + u[i + 1]) * inv;
  out[n - 1] = 2.0 * (u[n - 2] - u[n - 1]) * inv;
}

DensityField laplacian(const DensityField& field) {
  DensityField out(field.grid(), field.class_cap(), field.time());
  for (std::size_t k = 0; k < field.num_classes(); ++k)
    laplacian_row(field.row(k), field.grid().dx(), out.row(k));
  return out;
}

DensityField sample_profile(const InitialProfile& profile, const Grid1D& grid,
                            std::size_t class_cap) {
  DensityField f(grid, class_cap, 0.0);
  const double h = 0.5 * grid.dx();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.x(i);
    for (std::size_t k = 0; k <= class_cap; ++k) f.at(k, i) = profile.cell_average(k, x - h, x + h);
    f.at(class_cap + 1, i) = profile.overflow_cell_average(class_cap, x - h, x + h);
  }
  return f;
}

namespace {

class Integrator {
 public:
  Integrator(const ModelParams& params, const Grid1D& grid, std::size_t class_cap, bool tracer)
      : kernel_(params, class_cap),
        half_m_(0.5 * params.m),
        dx_(grid.dx()),
        nx_(grid.size()),
        nc_(class_cap + 2),
        tracer_(tracer),
        width_((tracer ? 2 : 1) * nc_ * nx_),
        uk_(nc_),
        fk_(nc_),
        lap_(nx_) {}

  [[nodiscard]] std::size_t width() const noexcept { return width_; }

  // State layout: u rows (class-major), then u* rows when tracing.
  void rhs(std::span<const double> y, std::span<double> dy) {
    for (std::size_t c = 0; c < (tracer_ ? 2 : 1) * nc_; ++c) {
      laplacian_row(y.subspan(c * nx_, nx_), dx_, lap_);
      for (std::size_t i = 0; i < nx_; ++i) dy[c * nx_ + i] = half_m_ * lap_[i];
    }
    for (std::size_t i = 0; i < nx_; ++i) {
      double norm = 0.0;
      for (std::size_t k = 0; k < nc_; ++k) {
        uk_[k] = y[k * nx_ + i];
        norm += uk_[k];
      }
      kernel_.apply(uk_, norm, fk_);
      for (std::size_t k = 0; k < nc_; ++k) dy[k * nx_ + i] += fk_[k];
      if (!tracer_) continue;
      const std::size_t off = nc_ * nx_;
      for (std::size_t k = 0; k < nc_; ++k) uk_[k] = y[off + k * nx_ + i];
      kernel_.apply_star(uk_, norm, fk_);
      for (std::size_t k = 0; k < nc_; ++k) dy[off + k * nx_ + i] += fk_[k];
    }
  }

 private:
  ReactionKernel kernel_;
  double half_m_;
  double dx_;
  std::size_t nx_;
  std::size_t nc_;
  bool tracer_;
  std::size_t width_;
  std::vector<double> uk_;
  std::vector<double> fk_;
  std::vector<double> lap_;
};

void unpack(std::span<const double> y, DensityField& u, DensityField* u_star) {
  const std::size_t n = u.data().size();
  std::copy_n(y.begin(), n, u.data().begin());
  if (u_star) std::copy_n(y.begin() + static_cast<std::ptrdiff_t>(n), n, u_star->data().begin());
}

PdeSolution run(const ModelParams& params, const DensityField& initial, const DensityField* tracer,
                const SolverConfig& cfg, double T) {
  params.validate();
  require(T >= 0.0, ErrorKind::InvalidArgument, "horizon T must be >= 0");
  const Grid1D& grid = initial.grid();
  const std::size_t K = initial.class_cap();
  if (tracer)
    require(tracer->grid() == grid && tracer->class_cap() == K, ErrorKind::InvalidArgument,
            "tracer field must share the grid and class cap");

  std::vector<double> times = cfg.snapshot_times;
  if (times.empty()) times.push_back(T);
  require(std::is_sorted(times.begin(), times.end()), ErrorKind::InvalidArgument,
          "snapshot times must be sorted");
  for (double t : times)
    require(t >= 0.0 && t <= T, ErrorKind::InvalidArgument, "snapshot times must lie in [0, T]");

  const double dt = cfg.resolve_dt(grid, params.m);
  Integrator f(params, grid, K, tracer != nullptr);
  const std::size_t n = initial.data().size();
  std::vector<double> y(f.width());
  std::copy(initial.data().begin(), initial.data().end(), y.begin());
  if (tracer) std::copy(tracer->data().begin(), tracer->data().end(), y.begin() + static_cast<std::ptrdiff_t>(n));

  std::vector<double> k1(y.size()), k2(y.size()), k3(y.size()), k4(y.size()), tmp(y.size());
  PdeSolution sol;
  auto& diag = sol.diagnostics;
  diag.dt = dt;

  auto record = [&](double t) {
    DensityField u(grid, K, t);
    DensityField us(grid, K, t);
    unpack(y, u, tracer ? &us : nullptr);
    const auto mass = mass_norm(u);
    for (std::size_t i = 0; i < mass.size(); ++i) {
      diag.max_mass = std::max(diag.max_mass, mass[i]);
      const double x = grid.x(i);
      if (mass[i] > cfg.contact_level) {
        if (x < grid.x_min() + cfg.boundary_margin) diag.left_contact = true;
        if (x > grid.x_max() - cfg.boundary_margin) diag.right_contact = true;
      }
    }
    diag.tail_mass = std::max(diag.tail_mass, tail_mass(u, K));
    sol.u.push_back(std::move(u));
    if (tracer) sol.u_star.push_back(std::move(us));
  };

  auto advance = [&](double h) {
    f.rhs(y, k1);
    if (cfg.scheme == Scheme::Euler) {
      for (std::size_t j = 0; j < y.size(); ++j) y[j] += h * k1[j];
    } else {
      for (std::size_t j = 0; j < y.size(); ++j) tmp[j] = y[j] + 0.5 * h * k1[j];
      f.rhs(tmp, k2);
      for (std::size_t j = 0; j < y.size(); ++j) tmp[j] = y[j] + 0.5 * h * k2[j];
      f.rhs(tmp, k3);
      for (std::size_t j = 0; j < y.size(); ++j) tmp[j] = y[j] + h * k3[j];
      f.rhs(tmp, k4);
      for (std::size_t j = 0; j < y.size(); ++j)
        y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    }
    for (double& v : y) {
      if (!std::isfinite(v) || std::abs(v) > 1e6)
        fail(ErrorKind::BlowUp, "solution left [-1e6, 1e6]; check the rate scaling");
      if (v < 0.0 && cfg.clamp_negatives) {
        diag.clamped_mass -= v * grid.dx();
        v = 0.0;
      }
    }
    ++diag.steps;
  };

  double t = 0.0;
  for (double target : times) {
    if (target > t) {
      const auto steps = static_cast<std::size_t>(std::ceil((target - t) / dt - 1e-9));
      const double h = (target - t) / static_cast<double>(steps);
      for (std::size_t s = 0; s < steps; ++s) advance(h);
      t = target;
    }
    record(t);
  }

  if (diag.right_contact || diag.left_contact)
    diag.warnings.push_back("mass above " + std::to_string(cfg.contact_level) + " within " +
                            std::to_string(cfg.boundary_margin) + " of the " +
                            (diag.right_contact ? "right" : "left") + " domain edge");
  if (diag.tail_mass > 1e-8)
    diag.warnings.push_back("overflow class mass " + std::to_string(diag.tail_mass) +
                            " exceeds 1e-8; raise the class cap");
  if (T > 0.0 && diag.clamped_mass / T > 1e-8)
    diag.warnings.push_back("clamped negative mass " + std::to_string(diag.clamped_mass) +
                            " exceeds 1e-8 per unit time");
  return sol;
}

}  // namespace

PdeSolution solve(const ModelParams& params, const DensityField& initial, const SolverConfig& cfg,
                  double T) {
  return run(params, initial, nullptr, cfg, T);
}

PdeSolution solve(const ModelParams& params, const InitialProfile& profile, const Grid1D& grid,
                  const SolverConfig& cfg, double T) {
  return run(params, sample_profile(profile, grid, params.class_cap), nullptr, cfg, T);
}

PdeSolution solve_with_tracer(const ModelParams& params, const DensityField& initial,
                              const DensityField& tracer, const SolverConfig& cfg, double T) {
  return run(params, initial, &tracer, cfg, T);
}

PdeSolution solve_with_tracer(const ModelParams& params, const InitialProfile& profile,
                              const InitialProfile& tracer_profile, const Grid1D& grid,
                              const SolverConfig& cfg, double T) {
  const auto u0 = sample_profile(profile, grid, params.class_cap);
  const auto us0 = sample_profile(tracer_profile, grid, params.class_cap);
  for (std::size_t j = 0; j < u0.data().size(); ++j) {
    const double f = u0.data()[j];
    if (us0.data()[j] > f + 1e-14 * (1.0 + f))
      fail(ErrorKind::TracerExceedsTotal,
           "tracer profile exceeds the total density at x = " +
               std::to_string(grid.x(j % grid.size())) + ", class " +
               std::to_string(j / grid.size()));
  }
  return run(params, u0, &us0, cfg, T);
}

}  // namespace ratchet
