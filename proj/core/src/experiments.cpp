#include "ratchet/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <map>

#include "ratchet/errors.hpp"
#include "ratchet/oracles.hpp"
#include "ratchet/pde.hpp"
#include "ratchet/table.hpp"

namespace ratchet {

using nlohmann::json;

std::string version() { return RATCHET_VERSION; }

namespace {

const char* const kFig1 = R"(experiment = solve-pde

[model]
m = 3
mu = 0.025
fitness = geometric(0.05)
q_plus = 1
q_minus = 0, 1
class_cap = 32

[profile]
kind = alpha_scaled
shape = indicator(-10, 10, 1)
total_mass = 0.975

[grid]
x_min = -50
x_max = 350
dx = 0.25

[solver]
scheme = rk4
T = 60
snapshot_every = 10

[analysis]
front_level = 0.1
fit_t_min = 20
fit_t_max = 60

[output]
max_class = 4
)";

const char* const kFig2Extra = R"(
[tracer]
mode = classes_from
from_class = 1
)";

const char* const kConverge = R"(experiment = converge

[model]
m = 3
mu = 0.025
fitness = geometric(0.05)
q_plus = 1
q_minus = 0, 1
L_ratio = 0.01
class_cap = 8

[profile]
kind = explicit
class.0 = constant(0.2)

[solver]
T = 5
snapshot_every = 5

[ips]
half_width = 32
class_cap = 8
boundary_guard = 0
n_reps = 32
seed = 1
N_values = 25, 100, 400

[output]
max_class = 8
)";

const char* const kSweepExtra = R"(
[sweep]
r = 1
B_values = 0.5, 1.5, 3, 5
)";

std::string replace_line(std::string text, const std::string& from, const std::string& to) {
  const auto pos = text.find(from);
  if (pos != std::string::npos) text.replace(pos, from.size(), to);
  return text;
}

}  // namespace

std::vector<std::string> preset_names() { return {"fig1", "fig2", "converge", "speed-sweep"}; }

std::string preset_text(const std::string& name) {
  if (name == "fig1") return kFig1;
  if (name == "fig2") return replace_line(kFig1, "experiment = solve-pde", "experiment = tracer") + kFig2Extra;
  if (name == "converge") return kConverge;
  if (name == "speed-sweep") {
    std::string t = replace_line(kFig1, "experiment = solve-pde", "experiment = speed");
    t = replace_line(t, "snapshot_every = 10", "snapshot_every = 1");
    return t + kSweepExtra;
  }
  fail(ErrorKind::ConfigInvalid, "preset: unknown preset '" + name + "'");
}

double lln_error(const DensityField& ips_mean, const DensityField& pde) {
  require(ips_mean.grid().size() == pde.grid().size() &&
              ips_mean.num_classes() == pde.num_classes(),
          ErrorKind::InvalidArgument, "fields must share the grid and class cap");
  double sum = 0.0;
  for (std::size_t j = 0; j < ips_mean.data().size(); ++j)
    sum += std::abs(ips_mean.data()[j] - pde.data()[j]);
  return sum / static_cast<double>(ips_mean.grid().size());
}

std::vector<LlnPoint> lln_convergence(const ModelParams& base, const InitialProfile& profile,
                                      const LatticeWindow& window, double T,
                                      const std::vector<std::int64_t>& N_values, std::size_t n_reps,
                                      std::uint64_t seed, unsigned threads) {
  std::vector<LlnPoint> out;
  for (const auto N : N_values) {
    ModelParams params = base;
    params.scaling.N = N;
    params.class_cap = window.class_cap;
    const ParticleState init = init_from_profile(profile, params, window);
    const DensityField mean = replicate_mean_density(params, profile, window, T, n_reps, seed, threads);
    SolverConfig cfg;
    cfg.snapshot_times = {T};
    const auto pde = solve(params, init.density(0.0), cfg, T);
    out.push_back({N, params.scaling.lattice_scale(), lln_error(mean, pde.u.back())});
  }
  return out;
}

namespace {

std::pair<double, double> fit_window(const RunConfig& c) {
  const double lo = c.analysis.fit_t_min.value_or(c.run.T / 3.0);
  const double hi = c.analysis.fit_t_max.value_or(c.run.T);
  return {lo, hi};
}

}  // namespace

std::vector<SweepPoint> speed_sweep(const RunConfig& config) {
  std::vector<SweepPoint> out;
  const auto [lo, hi] = fit_window(config);
  for (double B : config.sweep.B_values) {
    RunConfig c = config;
    c.model.rates = RatePolynomials::cooperative(config.sweep.r, B);
    const auto sol = solve(c.model, c.initial_profile(), c.grid.grid(), c.run.solver(), c.run.T);
    SweepPoint p;
    p.B = B;
    p.measured = estimate_speed(sol.u, c.analysis.front_level, lo, hi);
    p.c_star = c_star(c.model);
    p.conjectured = conjectured_speed_FE(config.sweep.r, B, c.model.m, c.model.mu);
    p.verdict = classify_reaction(c.model);
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<OracleCheck> oracle_checks(const RunConfig& config, unsigned threads) {
  std::vector<OracleCheck> checks;
  auto add = [&checks](std::string name, double value, double tol) {
    checks.push_back({std::move(name), value, tol, value <= tol});
  };
  const ModelParams& model = config.model;

  // Logistic reduction through both the ODE oracle and the PDE stepper.
  {
    ModelParams p;
    p.mu = 0.0;
    p.class_cap = 0;
    const double T = std::log(9.0);
    const auto ode = ode_reduce_solve(p, MassVector(std::vector<double>{0.1, 0.0}), T, T);
    add("logistic_vs_ode", std::abs(ode.u.back()[0] - logistic_exact(0.1, T)), 1e-8);

    DensityField f(Grid1D(0.0, 4.0, 5), 0);
    for (std::size_t i = 0; i < 5; ++i) f.at(0, i) = 0.1;
    SolverConfig cfg;
    cfg.dt = 1e-4;
    const auto sol = solve(p, f, cfg, T);
    double err = 0.0;
    for (std::size_t i = 0; i < 5; ++i)
      err = std::max(err, std::abs(sol.u.back().at(0, i) - logistic_exact(0.1, T)));
    add("logistic_vs_pde", err, 1e-8);
  }

  // Homogeneous multi-class data: ODE oracle against the PDE stepper.
  {
    const InitialProfile profile = config.initial_profile();
    const Grid1D grid = config.grid.grid();
    std::size_t best = 0;
    for (std::size_t i = 0; i < grid.size(); ++i)
      if (profile.total(grid.x(i)) > profile.total(grid.x(best))) best = i;
    std::vector<double> u0(model.class_cap + 2, 0.0);
    for (std::size_t k = 0; k <= model.class_cap; ++k) u0[k] = 0.5 * profile.value(k, grid.x(best));
    u0[model.class_cap + 1] = 0.5 * profile.overflow_value(model.class_cap, grid.x(best));
    const double T = std::min(config.run.T > 0.0 ? config.run.T : 5.0, 5.0);
    const auto ode = ode_reduce_solve(model, MassVector(u0), T, T);
    DensityField f(Grid1D(0.0, 4.0, 5), model.class_cap);
    for (std::size_t k = 0; k < u0.size(); ++k)
      for (std::size_t i = 0; i < 5; ++i) f.at(k, i) = u0[k];
    SolverConfig cfg;
    cfg.dt = 1e-3;
    const auto sol = solve(model, f, cfg, T);
    double err = 0.0;
    for (std::size_t k = 0; k < u0.size(); ++k)
      err = std::max(err, std::abs(sol.u.back().at(k, 2) - ode.u.back()[k]));
    add("ode_vs_pde_homogeneous", err, 1e-6);
  }

  // Smooth bump on a local grid: exact heat solution and the Picard iteration.
  const double dx = config.grid.dx;
  const Grid1D local = Grid1D::with_spacing(-25.0, 25.0, dx);
  ClassProfile bump{{Shape::gaussian(0.0, 3.0, 0.8)}};
  {
    ModelParams heat = model;
    heat.rates = {Polynomial{}, Polynomial{}};
    heat.class_cap = 0;
    const double T = 2.0;
    const auto sol = solve(heat, InitialProfile({bump}), local, SolverConfig{}, T);
    double err = 0.0;
    for (std::size_t i = 0; i < local.size(); ++i)
      err = std::max(err, std::abs(sol.u.back().at(0, i) - heat_solution(bump, model.m, T, local.x(i))));
    add("heat_vs_pde", err, 1e-3);
  }
  {
    ModelParams p = model;
    p.class_cap = std::min<std::size_t>(model.class_cap, 8);
    const InitialProfile profile({bump});
    const double T = 0.5;
    const auto picard = duhamel_picard(profile, p, local, T, 8);
    const auto sol = solve(p, profile, local, SolverConfig{}, T);
    double err = 0.0;
    for (std::size_t j = 0; j < sol.u.back().data().size(); ++j)
      err = std::max(err, std::abs(sol.u.back().data()[j] - picard.u.data()[j]));
    add("picard_vs_pde", err, 1e-3);
    add("picard_contraction", picard.contraction, 1.0);
  }

  // Feynman-Kac estimate of u_0 at three points around the profile centre.
  {
    const InitialProfile profile = config.initial_profile();
    const Grid1D grid = config.grid.grid();
    double mass = 0.0, moment = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double f = profile.total(grid.x(i));
      mass += f;
      moment += f * grid.x(i);
    }
    const double centre = mass > 0.0 ? moment / mass : 0.5 * (grid.x_min() + grid.x_max());
    const double T = 5.0;
    SolverConfig cfg;
    for (int j = 0; j <= 100; ++j) cfg.snapshot_times.push_back(T * j / 100.0);
    const auto sol = solve(model, profile, grid, cfg, T);
    const MassHistory history(sol.u);
    const std::uint64_t seed = config.ips.seed.value_or(1);
    int idx = 0;
    for (double dxp : {-5.0, 0.0, 5.0}) {
      const std::size_t node = grid.nearest(centre + dxp);
      const double x = grid.x(node);
      const auto est = feynman_kac_u0(model, history, profile.cls(0), T, x, 10000, 500,
                                      seed + static_cast<std::uint64_t>(idx++), threads);
      const double pde = sol.u.back().at(0, node);
      const double z = est.std_error > 0.0 ? std::abs(est.mean - pde) / est.std_error
                                           : (std::abs(est.mean - pde) <= 1e-12 ? 0.0 : INFINITY);
      char label[64];
      std::snprintf(label, sizeof label, "feynman_kac_z(x=%g)", std::abs(x) < 1e-12 ? 0.0 : x);
      add(label, z, 3.0);
    }
  }
  return checks;
}

namespace {

struct Writer {
  const std::filesystem::path& dir;
  OutputSpec::Format format;
  RunResult& result;

  void operator()(const std::string& stem, const Table& t) {
    const auto path = dir / (stem + (format == OutputSpec::Format::Csv ? ".csv" : ".json"));
    if (format == OutputSpec::Format::Csv) emit_csv(t, path);
    else emit_json(t, path);
    result.files.push_back(path);
  }
};

json speed_json(const SpeedEstimate& e) {
  return {{"speed", e.speed}, {"stderr", e.std_error}, {"n_points", e.n_points}};
}

void append_warnings(RunResult& r, const std::vector<std::string>& w) {
  r.warnings.insert(r.warnings.end(), w.begin(), w.end());
}

}  // namespace

RunResult run_experiment(const RunConfig& config, const std::filesystem::path& out_dir,
                         unsigned threads) {
  config.validate();
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) fail(ErrorKind::IoFailure, "cannot create " + out_dir.string() + ": " + ec.message());

  RunResult result;
  Writer write{out_dir, config.output.format, result};
  json summary = json::object();
  const std::string& exp = config.experiment;
  const ModelParams& model = config.model;
  const std::size_t max_class = config.output.max_class;

  if (exp == "solve-pde") {
    const auto sol = solve(model, config.initial_profile(), config.grid.grid(), config.run.solver(), config.run.T);
    write("density", density_table(sol.u, {}, max_class));
    append_warnings(result, sol.diagnostics.warnings);
    summary = {{"snapshots", sol.u.size()}, {"dt", sol.diagnostics.dt},
               {"max_mass", sol.diagnostics.max_mass}, {"clamped_mass", sol.diagnostics.clamped_mass}};
  } else if (exp == "tracer") {
    const InitialProfile profile = config.initial_profile();
    const Grid1D grid = config.grid.grid();
    const auto sol = solve_with_tracer(model, profile, *config.tracer_profile(), grid,
                                       config.run.solver(), config.run.T);
    write("density", density_table(sol.u, sol.u_star, max_class));
    append_warnings(result, sol.diagnostics.warnings);

    std::vector<double> times;
    for (const auto& f : sol.u) times.push_back(f.time());
    std::vector<double> Phi(times.size(), std::nan(""));
    const auto pi_hat = derive_pi_hat(profile, model.class_cap, grid.nodes());
    const bool monostable = classify_reaction(model) != ReactionClass::NotMonostable;
    if (monostable) {
      auto up = phi_and_pi_upper(model, pi_hat, times, model.class_cap);
      Phi = up.Phi;
      append_warnings(result, up.warnings);
    } else {
      result.warnings.push_back("reaction term is not monostable; tracer bound not evaluated");
    }
    Table t;
    t.columns = {"t", "sup_labelled", "bound"};
    for (std::size_t s = 0; s < sol.u_star.size(); ++s) {
      const auto mass = mass_norm(sol.u_star[s]);
      const double sup = *std::max_element(mass.begin(), mass.end());
      const double bound = monostable ? tracer_bound(model, pi_hat, Phi[s], times[s]) : std::nan("");
      t.add({times[s], sup, bound});
    }
    write("tracer", t);
    summary = {{"snapshots", sol.u.size()}, {"dt", sol.diagnostics.dt}};
  } else if (exp == "speed") {
    const auto [lo, hi] = fit_window(config);
    if (!config.sweep.B_values.empty()) {
      const auto pts = speed_sweep(config);
      Table t;
      t.columns = {"B", "speed", "stderr", "c_star", "conjectured", "verdict"};
      for (const auto& p : pts)
        t.add({p.B, p.measured.speed, p.measured.std_error, p.c_star, p.conjectured, to_string(p.verdict)});
      write("speed_sweep", t);
      summary["points"] = pts.size();
    } else {
      const auto sol = solve(model, config.initial_profile(), config.grid.grid(), config.run.solver(), config.run.T);
      append_warnings(result, sol.diagnostics.warnings);
      Table fronts;
      fronts.columns = {"t", "front_x"};
      for (const auto& f : sol.u) fronts.add({f.time(), front_position(f, config.analysis.front_level)});
      write("speed", fronts);
      const auto est = estimate_speed(sol.u, config.analysis.front_level, lo, hi);
      const double cs = speed_diagnostics(model).c_star;
      Table s;
      s.columns = {"speed", "stderr", "c_star"};
      s.add({est.speed, est.std_error, cs});
      write("speed_summary", s);
      summary = speed_json(est);
      summary["c_star"] = cs;
    }
  } else if (exp == "equilibrium") {
    const auto diag = speed_diagnostics(model);
    const auto eq = u_equilibrium(model);
    const auto alpha = alpha_sequence(model, model.class_cap);
    Table t;
    t.columns = {"k", "alpha", "u_eq"};
    for (std::size_t k = 0; k <= model.class_cap; ++k)
      t.add({static_cast<std::int64_t>(k), alpha[k], eq.state[k]});
    write("equilibrium", t);
    summary = {{"U_eq", eq.U_eq}, {"Q_min", diag.Q_min}, {"Q_max", diag.Q_max},
               {"c_star", diag.c_star}, {"H_min", diag.H_min}, {"H_max", diag.H_max},
               {"verdict", to_string(diag.verdict)}};
  } else if (exp == "bounds") {
    const std::size_t K = model.class_cap;
    const auto pi_hat = derive_pi_hat(config.initial_profile(), K, config.grid.grid().nodes());
    const auto T = uniform_time_grid(config.run.T, config.analysis.bounds_points);
    const auto b = bound_sequences(model, pi_hat, T, K);
    append_warnings(result, b.warnings);
    Table t;
    t.columns = {"T", "k", "pi_lower", "pi_upper", "phi", "alpha"};
    for (std::size_t j = 0; j < T.size(); ++j)
      for (std::size_t k = 0; k <= std::min(K, max_class); ++k)
        t.add({T[j], static_cast<std::int64_t>(k), b.pi_lower[k][j], b.pi_upper[k][j], b.phi[k][j], b.alpha[k]});
    write("bounds", t);
    Table phi;
    phi.columns = {"T", "Phi", "tracer_bound"};
    for (std::size_t j = 0; j < T.size(); ++j)
      phi.add({T[j], b.Phi[j], tracer_bound(model, pi_hat, b.Phi[j], T[j])});
    write("phi", phi);
    summary = {{"points", T.size()}, {"K", K}};
  } else if (exp == "simulate-ips") {
    ModelParams p = model;
    p.class_cap = config.ips.class_cap;
    const LatticeWindow w{config.ips.half_width, config.ips.class_cap, config.ips.boundary_guard};
    const InitialProfile profile = config.initial_profile();
    std::vector<DensityField> fields;
    if (config.ips.n_reps == 1) {
      fields = simulate(p, profile, w, config.run.T, config.run.snapshot_times(), *config.ips.seed);
    } else {
      fields.push_back(replicate_mean_density(p, profile, w, config.run.T, config.ips.n_reps,
                                              *config.ips.seed, threads));
    }
    write("density", density_table(fields, {}, max_class));
    summary = {{"snapshots", fields.size()}, {"n_reps", config.ips.n_reps},
               {"L", p.scaling.lattice_scale()}, {"m_N", p.migration_rate()}};
  } else if (exp == "converge") {
    const LatticeWindow w{config.ips.half_width, config.ips.class_cap, config.ips.boundary_guard};
    const auto pts = lln_convergence(model, config.initial_profile(), w, config.run.T,
                                     config.ips.N_values, config.ips.n_reps, *config.ips.seed, threads);
    Table t;
    t.columns = {"N", "L", "error"};
    bool decreasing = true;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      t.add({pts[i].N, pts[i].L, pts[i].error});
      if (i > 0 && !(pts[i].error < pts[i - 1].error)) decreasing = false;
    }
    write("converge", t);
    summary = {{"decreasing", decreasing}};
  } else if (exp == "poisson-limit") {
    const auto& a = config.analysis;
    Table dist, prof;
    dist.columns = {"n", "distance"};
    prof.columns = {"n", "k", "alpha_n", "poisson"};
    for (double n : a.poisson_n) {
      const auto pl = poisson_limit(a.poisson_mu, a.poisson_s, n, a.poisson_K);
      dist.add({n, pl.distance});
      for (std::size_t k = 0; k <= a.poisson_K; ++k)
        prof.add({n, static_cast<std::int64_t>(k), pl.alpha_n[k], pl.poisson[k]});
    }
    write("poisson", dist);
    write("poisson_profile", prof);
    summary = {{"points", a.poisson_n.size()}};
  } else if (exp == "oracle-check") {
    const auto checks = oracle_checks(config, threads);
    Table t;
    t.columns = {"check", "value", "tolerance", "pass"};
    json arr = json::array();
    for (const auto& c : checks) {
      t.add({c.name, c.value, c.tolerance, std::string(c.pass ? "true" : "false")});
      arr.push_back({{"check", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"pass", c.pass}});
      if (!c.pass) result.checks_failed = true;
    }
    write("oracle_check", t);
    summary = {{"checks", std::move(arr)}, {"all_pass", !result.checks_failed}};
  }
  result.summary_json = summary.dump();
  return result;
}

void write_manifest(const std::filesystem::path& out_dir, const RunConfig& config,
                    const RunResult& result, double wall_seconds) {
  json files = json::array();
  for (const auto& f : result.files) files.push_back(f.filename().string());
  json m = {{"experiment", config.experiment},
            {"version", version()},
            {"config", emit_config(config)},
            {"seed", config.ips.seed ? json(*config.ips.seed) : json(nullptr)},
            {"wall_time_seconds", wall_seconds},
            {"files", std::move(files)},
            {"warnings", result.warnings},
            {"summary", json::parse(result.summary_json)}};
  write_text(out_dir / "manifest.json", m.dump(2) + "\n");
}

}  // namespace ratchet
