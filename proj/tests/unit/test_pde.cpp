#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

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

ModelParams heat_only(std::size_t K = 2) {
  ModelParams p = fig1(K);
  p.rates = {Polynomial{}, Polynomial{}};
  return p;
}

InitialProfile bump(const ModelParams& p, const Shape& shape = Shape::indicator(-5, 5, 1)) {
  return InitialProfile::scaled_by_alpha({{shape}}, 0.975, alpha_sequence(p, p.class_cap));
}

double sup_diff(const DensityField& a, const DensityField& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) d = std::max(d, std::abs(a.data()[i] - b.data()[i]));
  return d;
}

}  // namespace

TEST(Laplacian, ConstantAndQuadratic) {
  const Grid1D g(-2.0, 3.0, 51);
  DensityField f(g, 1);
  for (std::size_t i = 0; i < g.size(); ++i) {
    f.at(0, i) = 0.7;
    f.at(1, i) = g.x(i) * g.x(i);
  }
  const auto L = laplacian(f);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(L.at(0, i), 0.0);
  for (std::size_t i = 1; i + 1 < g.size(); ++i) EXPECT_NEAR(L.at(1, i), 2.0, 1e-9);
}

TEST(Laplacian, SecondOrderOnSine) {
  const double Lx = 4.0;
  auto error = [&](std::size_t nx) {
    const Grid1D g(0.0, Lx, nx);
    std::vector<double> u(nx), out(nx);
    for (std::size_t i = 0; i < nx; ++i) u[i] = std::sin(std::numbers::pi * g.x(i) / Lx);
    laplacian_row(u, g.dx(), out);
    double e = 0.0;
    const double k2 = std::pow(std::numbers::pi / Lx, 2);
    for (std::size_t i = 1; i + 1 < nx; ++i) e = std::max(e, std::abs(out[i] + k2 * u[i]));
    return e;
  };
  const double ratio = error(41) / error(81);
  EXPECT_NEAR(ratio, 4.0, 0.1);
}

TEST(Grid, SpacingAndNearest) {
  const auto g = Grid1D::with_spacing(-50, 350, 0.25);
  EXPECT_EQ(g.size(), 1601u);
  EXPECT_DOUBLE_EQ(g.dx(), 0.25);
  EXPECT_EQ(g.nearest(0.0), 200u);
  EXPECT_EQ(g.nearest(-1e9), 0u);
  EXPECT_EQ(g.nearest(1e9), 1600u);
  EXPECT_THROW(Grid1D(0, 1, 2), Error);
}

TEST(Field, MassNormAndTail) {
  const Grid1D g(0, 1, 11);
  DensityField f(g, 3);
  for (double v : mass_norm(f)) EXPECT_EQ(v, 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) f.at(0, i) = 0.4;
  for (double v : mass_norm(f)) EXPECT_EQ(v, 0.4);
  f.at(4, 3) = 0.01;
  f.at(2, 5) = 0.02;
  EXPECT_DOUBLE_EQ(tail_mass(f, 1), 0.02);
  EXPECT_DOUBLE_EQ(tail_mass(f, 3), 0.01);
}

TEST(Solve, ZeroStaysZero) {
  const auto p = fig1();
  const auto sol = solve(p, InitialProfile{}, Grid1D(-10, 10, 81), SolverConfig{}, 2.0);
  for (double v : sol.u.back().data()) EXPECT_EQ(v, 0.0);
}

TEST(Solve, CellAverageSampling) {
  const Grid1D g(-2, 2, 17);
  const auto f = sample_profile(InitialProfile({{{Shape::indicator(-0.1, 0.6, 1.0)}}}), g, 2);
  EXPECT_DOUBLE_EQ(f.at(0, g.nearest(0.25)), 1.0);
  EXPECT_NEAR(f.at(0, g.nearest(0.0)), 0.9, 1e-15);
  EXPECT_NEAR(f.at(0, g.nearest(0.5)), 0.9, 1e-15);
  EXPECT_EQ(f.at(0, g.nearest(1.0)), 0.0);
}

TEST(Solve, HeatKernelAgreement) {
  const auto p = heat_only();
  const ClassProfile f0{{Shape::gaussian(0.0, 0.5, 1.0)}};
  const InitialProfile prof({f0});
  const auto run = [&](double dx) {
    const auto g = Grid1D::with_spacing(-30, 30, dx);
    const auto sol = solve(p, prof, g, SolverConfig{}, 1.0);
    double e = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
      e = std::max(e, std::abs(sol.u.back().at(0, i) - heat_solution(f0, p.m, 1.0, g.x(i))));
    return e;
  };
  const double coarse = run(0.2), fine = run(0.1);
  EXPECT_LT(fine, 1e-3);
  EXPECT_GT(coarse / fine, 3.0);
}

TEST(Solve, EulerAndRk4Agree) {
  const auto p = fig1(4);
  const auto g = Grid1D::with_spacing(-20, 20, 0.25);
  SolverConfig euler;
  euler.scheme = Scheme::Euler;
  euler.dt = 1e-3;
  SolverConfig rk4;
  rk4.dt = 1e-3;
  const auto a = solve(p, bump(p), g, euler, 1.0);
  const auto b = solve(p, bump(p), g, rk4, 1.0);
  EXPECT_LT(sup_diff(a.u.back(), b.u.back()), 1e-3);
}

TEST(Solve, HomogeneousStaysFlat) {
  const auto p = fig1(4);
  const auto g = Grid1D(-5, 5, 41);
  const auto sol = solve(p, InitialProfile({{{Shape::constant(0.3)}}}), g, SolverConfig{}, 3.0);
  const auto& u = sol.u.back();
  for (std::size_t k = 0; k < u.num_classes(); ++k)
    for (std::size_t i = 1; i < g.size(); ++i) EXPECT_NEAR(u.at(k, i), u.at(k, 0), 1e-14);
}

TEST(Solve, SnapshotsAtRequestedTimes) {
  const auto p = fig1(2);
  SolverConfig cfg;
  cfg.snapshot_times = {0.0, 0.3, 0.75, 1.0};
  const auto sol = solve(p, bump(p), Grid1D(-20, 20, 161), cfg, 1.0);
  ASSERT_EQ(sol.u.size(), 4u);
  for (std::size_t j = 0; j < 4; ++j) EXPECT_DOUBLE_EQ(sol.u[j].time(), cfg.snapshot_times[j]);
  EXPECT_EQ(sol.u[0], sample_profile(bump(p), Grid1D(-20, 20, 161), 2));
}

TEST(Solve, RatchetHoldsForPde) {
  const auto p = fig1(4);
  std::vector<ClassProfile> cls(3);
  cls[2].terms = {Shape::indicator(-3, 3, 0.5)};
  const auto sol = solve(p, InitialProfile(cls), Grid1D(-20, 20, 161), SolverConfig{}, 2.0);
  for (std::size_t k = 0; k < 2; ++k)
    for (double v : sol.u.back().row(k)) EXPECT_EQ(v, 0.0);
}

TEST(Solve, MassStaysBelowOne) {
  const auto p = fig1(8);
  const auto sol = solve(p, bump(p), Grid1D::with_spacing(-40, 40, 0.25), SolverConfig{}, 5.0);
  EXPECT_LE(sol.diagnostics.max_mass, 1.0 + 1e-6);
  for (double v : mass_norm(sol.u.back())) EXPECT_LE(v, 1.0 + 1e-6);
}

TEST(Solve, RejectsUnstableDt) {
  SolverConfig cfg;
  cfg.dt = 0.1;
  const auto p = fig1(2);
  EXPECT_THROW((void)solve(p, bump(p), Grid1D::with_spacing(-5, 5, 0.25), cfg, 1.0), Error);
}

TEST(Solve, BlowUpDetected) {
  ModelParams p = fig1(0);
  p.mu = 0.0;
  p.rates = {Polynomial{10.0}, Polynomial{0.0, 0.0, 1e-12}};
  try {
    (void)solve(p, InitialProfile({{{Shape::constant(1.0)}}}), Grid1D(-2, 2, 9), SolverConfig{}, 5.0);
    FAIL() << "expected BlowUp";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BlowUp);
  }
}

TEST(Tracer, FullLabelReproducesSolution) {
  const auto p = fig1(4);
  const auto g = Grid1D(-20, 20, 161);
  const auto sol = solve_with_tracer(p, bump(p), bump(p), g, SolverConfig{}, 1.0);
  EXPECT_LT(sup_diff(sol.u.back(), sol.u_star.back()), 1e-14);
}

TEST(Tracer, EmptyLabelStaysEmpty) {
  const auto p = fig1(4);
  const auto sol = solve_with_tracer(p, bump(p), InitialProfile{}, Grid1D(-20, 20, 161),
                                     SolverConfig{}, 1.0);
  for (double v : sol.u_star.back().data()) EXPECT_EQ(v, 0.0);
}

TEST(Tracer, DominatedByTotal) {
  const auto p = fig1(4);
  const auto g = Grid1D(-20, 20, 161);
  const auto prof = bump(p);
  const auto sol = solve_with_tracer(p, prof, prof.classes_from(1), g, SolverConfig{}, 2.0);
  const double dt = sol.diagnostics.dt;
  for (std::size_t i = 0; i < sol.u.back().data().size(); ++i) {
    EXPECT_GE(sol.u_star.back().data()[i], 0.0);
    EXPECT_LE(sol.u_star.back().data()[i], sol.u.back().data()[i] + 5.0 * dt);
  }
}

TEST(Tracer, ExceedingTracerRejected) {
  const auto p = fig1(4);
  try {
    (void)solve_with_tracer(p, bump(p), InitialProfile({{{Shape::constant(2.0)}}}),
                            Grid1D(-20, 20, 161), SolverConfig{}, 1.0);
    FAIL() << "expected TracerExceedsTotal";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::TracerExceedsTotal);
  }
}
