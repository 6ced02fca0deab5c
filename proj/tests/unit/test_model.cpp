#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ratchet/errors.hpp"
#include "ratchet/model.hpp"

using namespace ratchet;

namespace {

ModelParams fig1(std::size_t K = 8) {
  ModelParams p = fig1_params();
  p.class_cap = K;
  return p;
}

MassVector vec(std::vector<double> v, std::size_t K) {
  v.resize(K + 2, 0.0);
  return MassVector(std::move(v));
}

ModelParams cooperative(double B, double mu = 0.025) {
  ModelParams p = fig1_params();
  p.mu = mu;
  p.rates = RatePolynomials::cooperative(1.0, B);
  return p;
}

}  // namespace

TEST(Fitness, GeometricHarmonicAndTable) {
  const auto g = FitnessSequence::geometric(0.05);
  EXPECT_EQ(g(0), 1.0);
  EXPECT_NEAR(g(3), std::pow(0.95, 3), 1e-15);
  const auto h = FitnessSequence::harmonic();
  EXPECT_EQ(h(0), 1.0);
  EXPECT_DOUBLE_EQ(h(3), 0.25);
  for (std::size_t k = 0; k < 50; ++k) {
    EXPECT_GE(g(k), g(k + 1));
    EXPECT_GE(h(k), h(k + 1));
  }
  const auto t0 = FitnessSequence::table({1.0, 0.5, 0.0});
  EXPECT_EQ(t0(10), 0.0);
  const auto t1 = FitnessSequence::table({1.0, 0.5});
  EXPECT_THROW((void)t1(2), Error);
  EXPECT_THROW(FitnessSequence::table({0.9, 0.5}), Error);
  EXPECT_THROW(FitnessSequence::table({1.0, 0.5, 0.7}), Error);
  EXPECT_THROW(FitnessSequence::geometric(1.5), Error);
}

TEST(Scaling, MigrationRateKeepsDiffusivity) {
  ModelParams p;
  for (double ratio : {0.01, 0.37, 1.0, 2.5}) {
    p.scaling = {123, ratio};
    const double L = static_cast<double>(p.scaling.lattice_scale());
    EXPECT_EQ(p.migration_rate() / (L * L), p.m);
  }
  p.scaling = {10, 0.01};
  EXPECT_EQ(p.scaling.lattice_scale(), 1);
}

TEST(Rates, Validation) {
  EXPECT_NO_THROW(RatePolynomials::fisher_kpp().validate());
  EXPECT_NO_THROW(RatePolynomials::cooperative(1.0, 3.0).validate());
  EXPECT_NO_THROW((RatePolynomials{Polynomial{}, Polynomial{}}.validate()));
  EXPECT_THROW((RatePolynomials{Polynomial{0.0, 1.0}, Polynomial{1.0}}.validate()), Error);
  EXPECT_THROW((RatePolynomials{Polynomial{1.0}, Polynomial{0.0, -1.0, 0.0}}.validate()), Error);
  EXPECT_THROW((RatePolynomials{Polynomial{1.0}, Polynomial{2.0, -1.0}}.validate()), Error);
}

TEST(MassVector, NormTracksEntries) {
  MassVector u(4);
  u.set(0, 0.5);
  u.add(1, 0.25);
  u.add(1, -0.125);
  EXPECT_DOUBLE_EQ(u.norm(), 0.625);
  EXPECT_THROW(u.add(2, -1.0), Error);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (std::uint32_t i = 0; i < 3 * MassVector::kRecomputeEvery; ++i) u.set(i % 6, U(rng));
  double sum = 0.0;
  for (double v : u.values()) sum += v;
  EXPECT_NEAR(u.norm(), sum, 1e-9);
}

TEST(Reaction, ZeroIsFixedPoint) {
  const auto p = fig1();
  for (double v : reaction_F(MassVector(8), p)) EXPECT_EQ(v, 0.0);
  for (double v : reaction_F_plus(MassVector(8), p)) EXPECT_EQ(v, 0.0);
}

TEST(Reaction, HandEvaluation) {
  const auto p = fig1();
  const auto F = reaction_F(vec({0.5, 0.25}, 8), p);
  EXPECT_NEAR(F[0], 0.1125, 1e-15);
  EXPECT_NEAR(F[1], 0.0565625, 1e-15);
  const auto Fp = reaction_F_plus(vec({0.5, 0.25}, 8), p);
  EXPECT_NEAR(Fp[0], 0.8625, 1e-15);
}

TEST(Reaction, LogisticReduction) {
  ModelParams p = fig1(0);
  p.mu = 0.0;
  const auto F = reaction_F(vec({0.3}, 0), p);
  EXPECT_NEAR(F[0], 0.21, 1e-15);
}

TEST(Reaction, StarExamples) {
  const auto p = fig1();
  const auto u = vec({0.5, 0.25}, 8);
  const auto Fs = reaction_F_star(u, vec({0.0, 0.25}, 8), p);
  EXPECT_EQ(Fs[0], 0.0);
  EXPECT_NEAR(Fs[1], 0.0440625, 1e-15);
  for (double v : reaction_F_star(u, MassVector(8), p)) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(reaction_F_star(u, u, p), reaction_F(u, p));
}

TEST(Reaction, RandomProperties) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0.0, 0.3);
  for (const auto& p : {fig1(), cooperative(3.0)}) {
    ModelParams q = p;
    q.class_cap = 8;
    for (int trial = 0; trial < 1000; ++trial) {
      std::vector<double> v(10);
      for (double& x : v) x = U(rng);
      const MassVector u(v);
      const auto F = reaction_F(u, q);
      const auto Fp = reaction_F_plus(u, q);
      double total = 0.0, weighted = 0.0;
      for (std::size_t k = 0; k < F.size(); ++k) {
        EXPECT_LE(std::abs(F[k]), Fp[k] + 1e-15);
        total += F[k];
      }
      for (std::size_t k = 0; k <= 8; ++k) weighted += q.fitness(k) * v[k];
      const double expected = q.rates.q_plus(u.norm()) * weighted - q.rates.q_minus(u.norm()) * u.norm();
      EXPECT_NEAR(total, expected, 1e-13);
      const auto Fs = reaction_F_star(u, u, q);
      for (std::size_t k = 0; k < F.size(); ++k) EXPECT_EQ(Fs[k], F[k]);
    }
  }
}

TEST(Classify, ReferenceFamilies) {
  EXPECT_EQ(classify_reaction(cooperative(0.5)), ReactionClass::FisherKPP);
  EXPECT_EQ(classify_reaction(cooperative(3.0)), ReactionClass::MonostableOnly);
  ModelParams allee = fig1_params();
  allee.rates = RatePolynomials::strong_allee(0.3);
  EXPECT_EQ(classify_reaction(allee), ReactionClass::NotMonostable);
  EXPECT_EQ(classify_reaction(fig1_params()), ReactionClass::FisherKPP);
}

TEST(Classify, BoundarySweep) {
  const double mu = 0.025;
  const double edge = 1.0 / (1.0 - mu);
  for (int i = 0; i <= 60; ++i) {
    const double B = 0.05 * i;
    const auto expected = B <= edge ? ReactionClass::FisherKPP : ReactionClass::MonostableOnly;
    EXPECT_EQ(classify_reaction(cooperative(B, mu)), expected) << "B = " << B;
  }
  EXPECT_EQ(classify_reaction(cooperative(edge, mu)), ReactionClass::FisherKPP);
  EXPECT_EQ(classify_reaction(cooperative(edge + 1e-3, mu)), ReactionClass::MonostableOnly);
}

TEST(Classify, MutationAndFitnessPreconditions) {
  ModelParams p = fig1_params();
  p.mu = 0.0;
  EXPECT_EQ(classify_reaction(p), ReactionClass::NotMonostable);
  p.mu = 0.025;
  p.fitness = FitnessSequence::table({1.0, 0.5, 0.5, 0.0});
  p.class_cap = 3;
  EXPECT_THROW(
      {
        try {
          (void)classify_reaction(p);
        } catch (const Error& e) {
          EXPECT_EQ(e.kind(), ErrorKind::InvalidFitness);
          throw;
        }
      },
      Error);
}
