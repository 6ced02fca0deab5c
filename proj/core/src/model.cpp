#include "ratchet/model.hpp"

#include <algorithm>
#include <cmath>

#include "ratchet/errors.hpp"

namespace ratchet {

FitnessSequence FitnessSequence::geometric(double s) {
  require(s > 0.0 && s < 1.0, ErrorKind::InvalidFitness, "geometric selection s must lie in (0, 1)");
  return FitnessSequence(Kind::Geometric, s, {});
}

FitnessSequence FitnessSequence::harmonic() { return FitnessSequence(Kind::Harmonic, 0.0, {}); }

FitnessSequence FitnessSequence::table(std::vector<double> values) {
  require(!values.empty() && values.front() == 1.0, ErrorKind::InvalidFitness,
          "fitness table must start with s_0 = 1");
  for (std::size_t k = 0; k < values.size(); ++k) {
    require(values[k] >= 0.0, ErrorKind::InvalidFitness, "fitness values must be nonnegative");
    if (k > 0)
      require(values[k] <= values[k - 1], ErrorKind::InvalidFitness,
              "fitness table must be non-increasing");
  }
  return FitnessSequence(Kind::Table, 0.0, std::move(values));
}

double FitnessSequence::operator()(std::size_t k) const {
  switch (kind_) {
    case Kind::Geometric:
      return std::pow(1.0 - s_, static_cast<double>(k));
    case Kind::Harmonic:
      return 1.0 / static_cast<double>(k + 1);
    case Kind::Table:
      if (k < table_.size()) return table_[k];
      if (table_.back() == 0.0) return 0.0;
      fail(ErrorKind::InvalidFitness,
           "fitness table has " + std::to_string(table_.size()) +
               " entries and a nonzero last value; class " + std::to_string(k) +
               " is undefined");
  }
  return 0.0;
}

bool FitnessSequence::strictly_decreasing_through(std::size_t k_max) const {
  for (std::size_t k = 0; k < k_max; ++k)
    if (!((*this)(k) > (*this)(k + 1))) return false;
  return true;
}

void RatePolynomials::validate(double u_cap, int grid_n) const {
  // Both rates identically zero is the pure-migration special case.
  if (q_plus.degree() < 0 && q_minus.degree() < 0) return;
  require(q_minus.degree() >= 0 && q_plus.degree() < q_minus.degree(), ErrorKind::InvalidArgument,
          "rates need deg(q_plus) < deg(q_minus)");
  require(q_minus.leading() > 0.0, ErrorKind::InvalidArgument,
          "leading coefficient of q_minus must be positive");
  const double tol = 1e-12 * (1.0 + std::max(q_plus.max_abs_coefficient(),
                                             q_minus.max_abs_coefficient()));
  require(extrema_on(q_plus, 0.0, u_cap, grid_n).min >= -tol, ErrorKind::InvalidArgument,
          "q_plus takes negative values on [0, U_cap]");
  require(extrema_on(q_minus, 0.0, u_cap, grid_n).min >= -tol, ErrorKind::InvalidArgument,
          "q_minus takes negative values on [0, U_cap]");
}

RatePolynomials RatePolynomials::fisher_kpp() { return {Polynomial{1.0}, Polynomial{0.0, 1.0}}; }

RatePolynomials RatePolynomials::cooperative(double r, double B) {
  return {Polynomial{r, r * B}, Polynomial{0.0, r, r * B}};
}

RatePolynomials RatePolynomials::strong_allee(double B) {
  return {Polynomial{0.0, B + 1.0}, Polynomial{B, 0.0, 1.0}};
}

std::int64_t Scaling::lattice_scale() const {
  return std::max<std::int64_t>(1, std::llround(L_ratio * static_cast<double>(N)));
}

double ModelParams::migration_rate() const {
  const double L = static_cast<double>(scaling.lattice_scale());
  return m * L * L;
}

void ModelParams::validate() const {
  require(m > 0.0 && std::isfinite(m), ErrorKind::InvalidArgument, "diffusivity m must be positive");
  require(mu >= 0.0 && mu <= 1.0, ErrorKind::InvalidArgument, "mutation probability must lie in [0, 1]");
  require(scaling.N >= 1, ErrorKind::InvalidArgument, "carrying capacity N must be >= 1");
  require(scaling.L_ratio > 0.0, ErrorKind::InvalidArgument, "L_ratio must be positive");
  rates.validate();
  for (std::size_t k = 0; k <= class_cap; ++k) (void)fitness(k);
}

ModelParams fig1_params() {
  ModelParams p;
  p.m = 3.0;
  p.mu = 0.025;
  p.fitness = FitnessSequence::geometric(0.05);
  p.rates = RatePolynomials::fisher_kpp();
  p.class_cap = 32;
  return p;
}

MassVector::MassVector(std::size_t class_cap) : values_(class_cap + 2, 0.0) {}

MassVector::MassVector(std::vector<double> values) : values_(std::move(values)) {
  require(values_.size() >= 2, ErrorKind::InvalidArgument,
          "mass vector needs at least class 0 and the overflow class");
  for (double v : values_)
    require(v >= 0.0 && std::isfinite(v), ErrorKind::InvalidArgument,
            "mass vector entries must be finite and nonnegative");
  recompute();
}

void MassVector::set(std::size_t k, double value) {
  require(value >= 0.0 && std::isfinite(value), ErrorKind::InvalidArgument,
          "mass vector entries must be finite and nonnegative");
  add(k, value - values_.at(k));
  values_[k] = value;
}

void MassVector::add(std::size_t k, double delta) {
  const double next = values_.at(k) + delta;
  require(next >= 0.0, ErrorKind::InvalidArgument, "mass vector entry would become negative");
  values_[k] = next;
  norm_ += delta;
  if (++updates_ >= kRecomputeEvery) recompute();
}

void MassVector::recompute() {
  norm_ = 0.0;
  for (double v : values_) norm_ += v;
  updates_ = 0;
}

ReactionKernel::ReactionKernel(const ModelParams& params, std::size_t class_cap)
    : params_(params), fitness_(class_cap + 1) {
  for (std::size_t k = 0; k <= class_cap; ++k) fitness_[k] = params.fitness(k);
}

void ReactionKernel::apply_signed(std::span<const double> u, double norm, double death_sign,
                                  std::span<double> out) const {
  const std::size_t K = fitness_.size() - 1;
  const double qp = params_.rates.q_plus(norm);
  const double qm = params_.rates.q_minus(norm);
  const double mu = params_.mu;
  double inflow = 0.0;  // s_{k-1} mu u_{k-1}
  for (std::size_t k = 0; k <= K; ++k) {
    const double sk_uk = fitness_[k] * u[k];
    out[k] = qp * ((1.0 - mu) * sk_uk + inflow) + death_sign * qm * u[k];
    inflow = mu * sk_uk;
  }
  out[K + 1] = qp * inflow + death_sign * qm * u[K + 1];
}

void ReactionKernel::apply(std::span<const double> u, double norm, std::span<double> out) const {
  apply_signed(u, norm, -1.0, out);
}

void ReactionKernel::apply_plus(std::span<const double> u, double norm,
                                std::span<double> out) const {
  apply_signed(u, norm, 1.0, out);
}

void ReactionKernel::apply_star(std::span<const double> u_star, double norm,
                                std::span<double> out) const {
  apply_signed(u_star, norm, -1.0, out);
}

double ReactionKernel::growth_class0(double norm) const {
  return (1.0 - params_.mu) * params_.rates.q_plus(norm) - params_.rates.q_minus(norm);
}

std::vector<double> reaction_F(const MassVector& u, const ModelParams& params) {
  std::vector<double> out(u.size());
  ReactionKernel(params, u.class_cap()).apply(u.values(), u.norm(), out);
  return out;
}

std::vector<double> reaction_F_plus(const MassVector& u, const ModelParams& params) {
  std::vector<double> out(u.size());
  ReactionKernel(params, u.class_cap()).apply_plus(u.values(), u.norm(), out);
  return out;
}

std::vector<double> reaction_F_star(const MassVector& u, const MassVector& u_star,
                                    const ModelParams& params) {
  require(u.size() == u_star.size(), ErrorKind::InvalidArgument,
          "labelled and total densities need the same class cap");
  std::vector<double> out(u.size());
  ReactionKernel(params, u.class_cap()).apply_star(u_star.values(), u.norm(), out);
  return out;
}

std::string to_string(ReactionClass c) {
  switch (c) {
    case ReactionClass::FisherKPP: return "FisherKPP";
    case ReactionClass::MonostableOnly: return "MonostableOnly";
    case ReactionClass::NotMonostable: return "NotMonostable";
  }
  return "Unknown";
}

ReactionClass classify_reaction(const ModelParams& params, int u_grid_n) {
  const double mu = params.mu;
  const Polynomial& qp = params.rates.q_plus;
  const Polynomial& qm = params.rates.q_minus;
  if (!(mu > 0.0 && mu < 1.0)) return ReactionClass::NotMonostable;
  if (qm.degree() < 0 || qp.degree() >= qm.degree() || qm.leading() <= 0.0)
    return ReactionClass::NotMonostable;

  // Absorbs round-off from coefficients such as B = 1/(1 - mu).
  const double tol = 1e-12 * (1.0 + std::max(qp.max_abs_coefficient(), qm.max_abs_coefficient()));
  const Polynomial net = qp - qm;

  const bool births_dominate = extrema_on(net, 0.0, 1.0, u_grid_n).min >= -tol;  // (i)
  const bool births_positive = extrema_on(qp, 0.0, 1.0, u_grid_n).min > 0.0;     // (ii)
  const bool balanced_at_one = std::abs(net(1.0)) <= tol;                         // (iii)
  const bool stable_at_one = qp.derivative()(1.0) < qm.derivative()(1.0);         // (iv)
  const double growth0 = (1.0 - mu) * qp(0.0) - qm(0.0);
  const bool unstable_at_zero = growth0 > 0.0;                                    // (v)
  if (!(births_dominate && births_positive && balanced_at_one && stable_at_one &&
        unstable_at_zero))
    return ReactionClass::NotMonostable;

  require(params.fitness.strictly_decreasing_through(params.class_cap), ErrorKind::InvalidFitness,
          "monostability needs s_k strictly decreasing on classes 0..K");

  const Polynomial excess = (1.0 - mu) * qp - qm - Polynomial{growth0};
  if (extrema_on(excess, 0.0, 1.0, u_grid_n).max <= tol) return ReactionClass::FisherKPP;
  return ReactionClass::MonostableOnly;
}

}  // namespace ratchet
