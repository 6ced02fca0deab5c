#include <gtest/gtest.h>

#include <cmath>

#include "ratchet/analysis.hpp"
#include "ratchet/errors.hpp"
#include "ratchet/oracles.hpp"
#include "ratchet/pde.hpp"

using namespace ratchet;

namespace {

ModelParams fig1(std::size_t K = 8) {
  ModelParams p = fig1_params();
  p.class_cap = K;
  return p;
}

ModelParams logistic_params() {
  ModelParams p = fig1(0);
  p.mu = 0.0;
  return p;
}

MassVector single(double u0, std::size_t K) {
  std::vector<double> v(K + 2, 0.0);
  v[0] = u0;
  return MassVector(v);
}

}  // namespace

TEST(Logistic, ClosedForm) {
  EXPECT_EQ(logistic_exact(0.0, 3.0), 0.0);
  EXPECT_EQ(logistic_exact(1.0, 3.0), 1.0);
  EXPECT_NEAR(logistic_exact(0.1, std::log(9.0)), 0.5, 1e-15);
}

TEST(HeatSolution, ShapesAndLimits) {
  const ClassProfile c{{Shape::constant(0.3)}};
  EXPECT_NEAR(heat_solution(c, 3.0, 2.0, 1.7), 0.3, 1e-15);
  const ClassProfile g{{Shape::gaussian(1.0, 0.5, 2.0)}};
  // Gaussian stays Gaussian with variance w^2 + m t and conserved mass.
  const double var = 0.25 + 3.0 * 0.5;
  EXPECT_NEAR(heat_solution(g, 3.0, 0.5, 1.0), 2.0 * 0.5 / std::sqrt(var), 1e-14);
  const ClassProfile ind{{Shape::indicator(-1, 1, 1.0)}};
  EXPECT_NEAR(heat_solution(ind, 3.0, 0.0, 0.5), 1.0, 1e-15);
  EXPECT_NEAR(heat_solution(ind, 2.0, 0.5, 0.0), std::erf(1.0 / std::sqrt(2.0)), 1e-14);
}

TEST(Ode, ZeroAndLogistic) {
  const auto z = ode_reduce_solve(fig1(), MassVector(8), 2.0, 0.5);
  for (double v : z.u.back()) EXPECT_EQ(v, 0.0);
  const double T = std::log(9.0);
  const auto traj = ode_reduce_solve(logistic_params(), single(0.1, 0), T, 0.1);
  EXPECT_DOUBLE_EQ(traj.t.back(), T);
  EXPECT_NEAR(traj.u.back()[0], 0.5, 1e-8);
  for (std::size_t j = 0; j < traj.t.size(); ++j)
    EXPECT_NEAR(traj.u[j][0], logistic_exact(0.1, traj.t[j]), 1e-8);
}

TEST(Ode, EquilibriumIsStationary) {
  const auto p = fig1(32);
  const auto eq = u_equilibrium(p);
  for (double v : reaction_F(eq.state, p)) EXPECT_LT(std::abs(v), 1e-10);
  const auto traj = ode_reduce_solve(p, eq.state, 10.0, 5.0);
  for (std::size_t k = 0; k < eq.state.size(); ++k) EXPECT_NEAR(traj.u.back()[k], eq.state[k], 1e-9);
}

TEST(Ode, MatchesHomogeneousPde) {
  const auto p = fig1(6);
  const auto u0 = single(0.2, 6);
  const auto traj = ode_reduce_solve(p, u0, 2.0, 2.0);
  SolverConfig cfg;
  cfg.dt = 1e-3;
  const auto sol = solve(p, InitialProfile({{{Shape::constant(0.2)}}}), Grid1D(-1, 1, 5), cfg, 2.0);
  for (std::size_t k = 0; k < u0.size(); ++k) EXPECT_NEAR(sol.u.back().at(k, 2), traj.u.back()[k], 1e-6);
}

TEST(Picard, HeatOnlyIsOneConvolution) {
  ModelParams p = fig1(2);
  p.rates = {Polynomial{}, Polynomial{}};
  const Grid1D g = Grid1D::with_spacing(-20, 20, 0.1);
  const InitialProfile prof({{{Shape::gaussian(0, 1, 1)}}});
  const auto res = duhamel_picard(prof, p, g, 1.0, 1);
  const auto init = sample_profile(prof, g, 2);
  PicardWorkspace ws(g, p.m);
  std::vector<double> expected(g.size());
  ws.apply(1.0, init.row(0), expected);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(res.u.at(0, i), expected[i], 1e-15);
}

TEST(Picard, KernelsAreNormalized) {
  PicardWorkspace ws(Grid1D::with_spacing(-10, 10, 0.1), 3.0);
  for (double tau : {0.0, 0.01, 0.5, 2.0}) {
    double sum = 0.0;
    for (double w : ws.kernel(tau)) sum += w;
    EXPECT_NEAR(sum, 1.0, 1e-14);
  }
  std::vector<double> in(201, 0.6), out(201);
  ws.apply(0.7, in, out);
  for (double v : out) EXPECT_NEAR(v, 0.6, 1e-14);
}

TEST(Picard, ZeroStaysZero) {
  const auto res = duhamel_picard(InitialProfile{}, fig1(4), Grid1D(-10, 10, 81), 0.5, 3);
  for (double v : res.u.data()) EXPECT_EQ(v, 0.0);
}

TEST(Picard, MatchesPdeWithContraction) {
  const auto p = fig1(4);
  const auto g = Grid1D::with_spacing(-20, 20, 0.1);
  const auto prof = InitialProfile::scaled_by_alpha({{Shape::gaussian(0, 2, 0.9)}}, 0.9,
                                                    alpha_sequence(p, 4));
  const auto res = duhamel_picard(prof, p, g, 0.5, 8);
  SolverConfig cfg;
  cfg.dt = 1e-3;
  const auto sol = solve(p, prof, g, cfg, 0.5);
  double d = 0.0;
  for (std::size_t i = 0; i < res.u.data().size(); ++i)
    d = std::max(d, std::abs(res.u.data()[i] - sol.u.back().data()[i]));
  EXPECT_LT(d, 1e-3);
  ASSERT_GE(res.distances.size(), 3u);
  EXPECT_LT(res.contraction, 1.0);
  EXPECT_LT(res.distances.back(), res.distances.front());
}

TEST(MassHistory, InterpolatesAndRejectsGaps) {
  const Grid1D g(0, 1, 3);
  DensityField a(g, 0, 0.0), b(g, 0, 1.0);
  for (std::size_t i = 0; i < 3; ++i) {
    a.at(0, i) = 0.2;
    b.at(0, i) = 0.4 + 0.2 * static_cast<double>(i);
  }
  const MassHistory h({a, b});
  EXPECT_NEAR(h.at(0.5, 0.0), 0.3, 1e-15);
  EXPECT_NEAR(h.at(1.0, 0.25), 0.5, 1e-15);
  EXPECT_NEAR(h.at(0.5, 0.75), 0.45, 1e-15);
  EXPECT_NEAR(h.at(1.0, 7.0), 0.8, 1e-15);
  try {
    (void)h.at(1.5, 0.0);
    FAIL() << "expected HistoryGap";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::HistoryGap);
  }
}

TEST(FeynmanKac, HeatOnlyMatchesConvolution) {
  ModelParams p = fig1(2);
  p.rates = {Polynomial{}, Polynomial{}};
  const Grid1D g(-20, 20, 41);
  const MassHistory h({DensityField(g, 2, 0.0), DensityField(g, 2, 2.0)});
  const ClassProfile f0{{Shape::indicator(-1, 2, 0.8)}};
  for (double x : {-1.0, 0.5, 3.0}) {
    const auto est = feynman_kac_u0(p, h, f0, 2.0, x, 4000, 50, 17);
    EXPECT_NEAR(est.mean, heat_solution(f0, p.m, 2.0, x), 3.0 * est.std_error) << "x = " << x;
  }
}

TEST(FeynmanKac, ZeroInitialDataIsExact) {
  const Grid1D g(-5, 5, 11);
  const MassHistory h({DensityField(g, 2, 0.0), DensityField(g, 2, 1.0)});
  const auto est = feynman_kac_u0(fig1(2), h, ClassProfile{}, 1.0, 0.0, 500, 20, 1);
  EXPECT_EQ(est.mean, 0.0);
  EXPECT_EQ(est.std_error, 0.0);
}

TEST(FeynmanKac, ThreadCountDoesNotMatter) {
  ModelParams p = fig1(2);
  p.rates = {Polynomial{}, Polynomial{}};
  const Grid1D g(-5, 5, 11);
  const MassHistory h({DensityField(g, 2, 0.0), DensityField(g, 2, 1.0)});
  const ClassProfile f0{{Shape::gaussian(0, 1, 1)}};
  const auto a = feynman_kac_u0(p, h, f0, 1.0, 0.3, 3000, 10, 5, 1);
  const auto b = feynman_kac_u0(p, h, f0, 1.0, 0.3, 3000, 10, 5, 3);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.std_error, b.std_error);
}

TEST(FeynmanKac, MatchesPdeInBulk) {
  const auto p = fig1(8);
  const auto g = Grid1D::with_spacing(-40, 40, 0.25);
  const auto prof = InitialProfile::scaled_by_alpha({{Shape::indicator(-10, 10, 1)}}, 0.975,
                                                    alpha_sequence(p, 8));
  SolverConfig cfg;
  for (int j = 0; j <= 20; ++j) cfg.snapshot_times.push_back(0.1 * j);
  const auto sol = solve(p, prof, g, cfg, 2.0);
  const MassHistory h(sol.u);
  const auto est = feynman_kac_u0(p, h, prof.cls(0), 2.0, 8.0, 4000, 200, 23);
  const double pde = sol.u.back().at(0, g.nearest(8.0));
  EXPECT_NEAR(est.mean, pde, 3.0 * est.std_error);
}
