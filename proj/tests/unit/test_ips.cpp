#include <gtest/gtest.h>

#include <cmath>

#include "ratchet/errors.hpp"
#include "ratchet/ips.hpp"
#include "ratchet/oracles.hpp"

using namespace ratchet;

namespace {

ModelParams params_with(std::int64_t N, double L_ratio, std::size_t K = 8) {
  ModelParams p = fig1_params();
  p.scaling = {N, L_ratio};
  p.class_cap = K;
  return p;
}

LatticeWindow window(std::int64_t W, std::size_t K = 8, std::int64_t guard = 0) {
  return {W, K, guard};
}

InitialProfile constant_class(std::size_t k, double c) {
  std::vector<ClassProfile> cls(k + 1);
  cls[k].terms = {Shape::constant(c)};
  return InitialProfile(cls);
}

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST(Fenwick, FindsPrefixIndex) {
  FenwickTree t(5);
  t.rebuild({1.0, 0.0, 2.0, 0.5, 1.5});
  EXPECT_EQ(t.find(0.5), 0u);
  EXPECT_EQ(t.find(1.0), 2u);
  EXPECT_EQ(t.find(2.9), 2u);
  EXPECT_EQ(t.find(3.2), 3u);
  EXPECT_EQ(t.find(4.9), 4u);
  t.add(1, 3.0);
  EXPECT_EQ(t.find(1.5), 1u);
}

TEST(Init, ZeroProfileIsEmpty) {
  const auto s = init_from_profile(InitialProfile{}, params_with(100, 1.0), window(5));
  EXPECT_EQ(s.total_particles(), 0);
  EXPECT_EQ(s.total_rate(), 0.0);
}

TEST(Init, FloorOfCellMass) {
  const auto p = params_with(100, 1.0);
  for (double c : {0.5, 0.5049}) {
    const auto s = init_from_profile(constant_class(0, c), p, window(5));
    for (std::size_t d = 0; d < s.num_demes(); ++d) EXPECT_EQ(s.count(0, d), 50);
  }
}

TEST(Init, ClassesAboveCapArePooled) {
  const auto p = params_with(100, 0.01, 2);
  std::vector<ClassProfile> cls(5);
  cls[3].terms = {Shape::constant(0.007)};
  cls[4].terms = {Shape::constant(0.007)};
  // floor(0.7) + floor(0.7) would be 0; the pooled floor(1.4) is 1.
  const auto s = init_from_profile(InitialProfile(cls), p, window(3, 2));
  for (std::size_t d = 0; d < s.num_demes(); ++d) EXPECT_EQ(s.count(3, d), 1);
}

TEST(Init, UnboundedProfileRejected) {
  EXPECT_EQ(kind_of([] { (void)init_from_profile(constant_class(0, 50.0), params_with(10, 1.0), window(3)); }),
            ErrorKind::ProfileUnbounded);
}

TEST(Init, GuardRejectsMassNearEdge) {
  EXPECT_EQ(kind_of([] {
              (void)init_from_profile(constant_class(0, 0.5), params_with(10, 1.0), window(10, 8, 5));
            }),
            ErrorKind::BoundaryReached);
}

TEST(State, RatesForSingleClassDeme) {
  const auto p = params_with(100, 0.01);
  ParticleState s(p, window(1));
  s.add(0, 1, 37);
  EXPECT_DOUBLE_EQ(s.birth_rate(1), 37.0);
  EXPECT_DOUBLE_EQ(s.death_rate(1), 37.0 * 37.0 / 100.0);
  EXPECT_DOUBLE_EQ(s.deme_rate(1), p.migration_rate() * 37.0 + 37.0 + 37.0 * 37.0 / 100.0);
  EXPECT_DOUBLE_EQ(s.total_rate(), s.deme_rate(1));
  EXPECT_EQ(s.deme_total(1), 37);
  EXPECT_THROW(s.add(0, 1, -38), Error);
}

TEST(Step, EmptySystemThrows) {
  ParticleState s(params_with(10, 1.0), window(2));
  SimClock clock(1);
  EXPECT_EQ(kind_of([&] { (void)step(s, clock); }), ErrorKind::EmptySystem);
}

TEST(Step, CachesStayConsistent) {
  auto s = init_from_profile(constant_class(0, 0.8), params_with(50, 0.1), window(10));
  SimClock clock(7);
  for (int i = 0; i < 200000 && s.total_rate() > 0.0; ++i) (void)step(s, clock);
  EXPECT_LT(s.verify(), 1e-9);
}

TEST(Step, NoMutationKeepsClasses) {
  auto p = params_with(50, 0.1);
  p.mu = 0.0;
  auto s = init_from_profile(constant_class(0, 0.5), p, window(5));
  SimClock clock(3);
  for (int i = 0; i < 50000; ++i) {
    const auto ev = step(s, clock);
    if (ev.type == EventType::Birth) {
      EXPECT_EQ(ev.target, ev.cls);
    }
  }
  for (std::size_t d = 0; d < s.num_demes(); ++d)
    for (std::size_t k = 1; k < s.num_classes(); ++k) EXPECT_EQ(s.count(k, d), 0);
}

TEST(Step, PureMigrationConserves) {
  auto p = params_with(50, 0.1);
  p.rates = {Polynomial{}, Polynomial{}};
  auto s = init_from_profile(constant_class(2, 0.5), p, window(5));
  const auto total = s.total_particles();
  SimClock clock(5);
  for (int i = 0; i < 50000; ++i) {
    EXPECT_EQ(step(s, clock).type, EventType::Migration);
    ASSERT_EQ(s.total_particles(), total);
  }
  EXPECT_LT(s.verify(), 1e-9);
}

TEST(Step, RatchetNeverClicksBack) {
  auto s = init_from_profile(constant_class(1, 0.5), params_with(50, 0.1), window(5));
  SimClock clock(9);
  for (int i = 0; i < 100000 && s.total_rate() > 0.0; ++i) {
    const auto ev = step(s, clock);
    if (ev.type == EventType::Birth) EXPECT_GE(ev.target, ev.cls);
    for (std::size_t d = 0; d < s.num_demes(); ++d) ASSERT_EQ(s.count(0, d), 0);
  }
}

TEST(Step, ClockIsMonotone) {
  auto s = init_from_profile(constant_class(0, 0.5), params_with(20, 0.1), window(3));
  SimClock clock(11);
  double last = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const auto ev = step(s, clock);
    EXPECT_GE(ev.time, last);
    last = ev.time;
  }
  EXPECT_EQ(clock.events, 10000u);
}

TEST(Simulate, ZeroHorizonReturnsInitialState) {
  const auto p = params_with(100, 0.05);
  const auto prof = constant_class(0, 0.37);
  const auto init = init_from_profile(prof, p, window(4));
  const auto snaps = simulate(p, prof, window(4), 0.0, {0.0}, 1);
  ASSERT_EQ(snaps.size(), 1u);
  EXPECT_EQ(snaps[0], init.density(0.0));
}

TEST(Simulate, DeterministicForSeed) {
  const auto p = params_with(30, 0.1);
  const auto prof = constant_class(0, 0.5);
  const auto a = simulate(p, prof, window(5), 2.0, {0.0, 1.0, 2.0}, 42);
  const auto b = simulate(p, prof, window(5), 2.0, {0.0, 1.0, 2.0}, 42);
  const auto c = simulate(p, prof, window(5), 2.0, {0.0, 1.0, 2.0}, 43);
  EXPECT_EQ(a, b);
  EXPECT_NE(a.back(), c.back());
}

TEST(Simulate, ExtinctionRepeatsFinalState) {
  auto p = params_with(5, 0.2);
  p.rates = {Polynomial{}, Polynomial{1.0}};
  const auto snaps = simulate(p, constant_class(0, 0.2), window(2), 50.0, {0.0, 25.0, 50.0}, 4);
  ASSERT_EQ(snaps.size(), 3u);
  for (double v : snaps[2].data()) EXPECT_EQ(v, 0.0);
}

TEST(Simulate, FreeParticleMeanSquare) {
  ModelParams p = params_with(10, 1.0, 0);
  p.rates = {Polynomial{}, Polynomial{}};
  std::vector<ClassProfile> cls{{{Shape::indicator(-0.05, 0.05, 0.1)}}};
  const InitialProfile one(cls);
  const LatticeWindow w{100, 0, 0};
  ASSERT_EQ(init_from_profile(one, p, w).total_particles(), 1);
  const std::size_t reps = 2000;
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t r = 0; r < reps; ++r) {
    const auto snap = simulate(p, one, w, 1.0, {1.0}, 1000 + r).back();
    double x2 = 0.0;
    for (std::size_t i = 0; i < snap.grid().size(); ++i)
      if (snap.at(0, i) > 0.0) x2 = snap.grid().x(i) * snap.grid().x(i);
    sum += x2;
    sum2 += x2 * x2;
  }
  const double mean = sum / reps;
  const double se = std::sqrt((sum2 / reps - mean * mean) / (reps - 1));
  const double L = static_cast<double>(p.scaling.lattice_scale());
  EXPECT_NEAR(mean, p.migration_rate() / (L * L), 3.0 * se);
}

TEST(Simulate, HomogeneousLogisticMean) {
  ModelParams p = params_with(200, 0.005, 0);
  p.mu = 0.0;
  const auto prof = constant_class(0, 0.2);
  const auto mean = replicate_mean_density(p, prof, window(8, 0), 2.0, 16, 5);
  double avg = 0.0;
  for (std::size_t i = 0; i < mean.grid().size(); ++i) avg += mean.at(0, i);
  avg /= static_cast<double>(mean.grid().size());
  EXPECT_NEAR(avg, logistic_exact(0.2, 2.0), 0.02);
}

TEST(Replicates, SingleReplicateMatchesSimulate) {
  const auto p = params_with(30, 0.1);
  const auto prof = constant_class(0, 0.5);
  const auto one = replicate_mean_density(p, prof, window(5), 1.5, 1, 77, 1);
  const auto sim = simulate(p, prof, window(5), 1.5, {1.5}, 77).back();
  EXPECT_EQ(one.data().size(), sim.data().size());
  for (std::size_t i = 0; i < sim.data().size(); ++i) EXPECT_EQ(one.data()[i], sim.data()[i]);
}

TEST(Replicates, IndependentOfThreadCount) {
  const auto p = params_with(30, 0.1);
  const auto prof = constant_class(0, 0.5);
  const auto a = replicate_mean_density(p, prof, window(5), 1.0, 6, 3, 1);
  const auto b = replicate_mean_density(p, prof, window(5), 1.0, 6, 3, 4);
  const auto c = replicate_mean_density(p, prof, window(5), 1.0, 6, 3, 4);
  EXPECT_EQ(a, b);
  EXPECT_EQ(b, c);
}
