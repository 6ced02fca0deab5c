#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ratchet/polynomial.hpp"

namespace ratchet {

/// Fitness s_k of a particle carrying k mutations.
class FitnessSequence {
 public:
  enum class Kind { Geometric, Harmonic, Table };

  /// s_k = (1 - s)^k, s in (0, 1).
  static FitnessSequence geometric(double s);
  /// s_k = 1 / (k + 1).
  static FitnessSequence harmonic();
  /// Explicit values; values[0] must be 1 and the table non-increasing.
  /// Queries past the end return 0 when the last entry is 0 and throw
  /// otherwise.
  static FitnessSequence table(std::vector<double> values);

  [[nodiscard]] double operator()(std::size_t k) const;
  [[nodiscard]] Kind kind() const noexcept { return kind_; }
  [[nodiscard]] double selection() const noexcept { return s_; }
  [[nodiscard]] const std::vector<double>& values() const noexcept { return table_; }
  [[nodiscard]] bool strictly_decreasing_through(std::size_t k_max) const;

  friend bool operator==(const FitnessSequence&, const FitnessSequence&) = default;

 private:
  FitnessSequence(Kind kind, double s, std::vector<double> table)
      : kind_(kind), s_(s), table_(std::move(table)) {}

  Kind kind_ = Kind::Geometric;
  double s_ = 0.0;
  std::vector<double> table_;
};

/// Per-capita birth and death rates q+(U), q-(U) as polynomials in the
/// local density U.
struct RatePolynomials {
  Polynomial q_plus;
  Polynomial q_minus;

  /// Checks deg q+ < deg q-, a positive leading coefficient of q-, and
  /// nonnegativity of both on a grid over [0, u_cap]. Two zero polynomials
  /// (no births or deaths) are accepted.
  void validate(double u_cap = 10.0, int grid_n = 4097) const;

  static RatePolynomials fisher_kpp();
  /// q+ = r(BU + 1), q- = r(BU + 1)U.
  static RatePolynomials cooperative(double r, double B);
  /// q+ = U(B + 1), q- = U^2 + B.
  static RatePolynomials strong_allee(double B);

  friend bool operator==(const RatePolynomials&, const RatePolynomials&) = default;
};

struct Scaling {
  std::int64_t N = 100;
  double L_ratio = 1.0;

  /// L_N = round(L_ratio * N), floored at 1 deme per unit length.
  [[nodiscard]] std::int64_t lattice_scale() const;

  friend bool operator==(const Scaling&, const Scaling&) = default;
};

struct ModelParams {
  double m = 3.0;
  double mu = 0.025;
  FitnessSequence fitness = FitnessSequence::geometric(0.05);
  RatePolynomials rates = RatePolynomials::fisher_kpp();
  Scaling scaling{};
  std::size_t class_cap = 32;

  /// m_N = m * L_N^2, so that m_N / L_N^2 == m.
  [[nodiscard]] double migration_rate() const;
  void validate() const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// m = 3, q+ = 1, q- = U, mu = 0.025, s_k = 0.95^k.
ModelParams fig1_params();

/// Densities for classes 0..K plus the overflow class K+1, with a cached
/// l1 norm.
class MassVector {
 public:
  explicit MassVector(std::size_t class_cap = 0);
  explicit MassVector(std::vector<double> values);

  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] std::size_t class_cap() const noexcept { return values_.size() - 2; }
  [[nodiscard]] double operator[](std::size_t k) const { return values_[k]; }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] double norm() const noexcept { return norm_; }

  void set(std::size_t k, double value);
  void add(std::size_t k, double delta);

  static constexpr std::uint32_t kRecomputeEvery = 1u << 16;

 private:
  void recompute();

  std::vector<double> values_;
  double norm_ = 0.0;
  std::uint32_t updates_ = 0;
};

/// Precomputed reaction terms over a fixed class cap. The argument spans
/// hold K+2 entries; index K+1 is the overflow class, which receives
/// mutation inflow from class K, never reproduces, and dies at rate q-.
class ReactionKernel {
 public:
  ReactionKernel(const ModelParams& params, std::size_t class_cap);

  [[nodiscard]] std::size_t size() const noexcept { return fitness_.size() + 1; }
  [[nodiscard]] std::span<const double> fitness() const noexcept { return fitness_; }

  /// F_k(u) with the density argument ||u|| = `norm`.
  void apply(std::span<const double> u, double norm, std::span<double> out) const;
  /// F+_k(u): death term with a plus sign.
  void apply_plus(std::span<const double> u, double norm, std::span<double> out) const;
  /// F*_k(u, u*): rates evaluated at ||u||, linear factors in u*.
  void apply_star(std::span<const double> u_star, double norm, std::span<double> out) const;

  [[nodiscard]] double growth_class0(double norm) const;
  [[nodiscard]] const ModelParams& params() const noexcept { return params_; }

 private:
  void apply_signed(std::span<const double> u, double norm, double death_sign,
                    std::span<double> out) const;

  ModelParams params_;
  std::vector<double> fitness_;  // s_0..s_K
};

std::vector<double> reaction_F(const MassVector& u, const ModelParams& params);
std::vector<double> reaction_F_plus(const MassVector& u, const ModelParams& params);
std::vector<double> reaction_F_star(const MassVector& u, const MassVector& u_star,
                                    const ModelParams& params);

enum class ReactionClass { FisherKPP, MonostableOnly, NotMonostable };

std::string to_string(ReactionClass c);

/// Monostable conditions (i)-(v) on [0, 1] plus the Fisher-KPP growth
/// comparison. Throws InvalidFitness when the rates would qualify but s_k
/// is not strictly decreasing on 0..K.
ReactionClass classify_reaction(const ModelParams& params, int u_grid_n = 4097);

}  // namespace ratchet
