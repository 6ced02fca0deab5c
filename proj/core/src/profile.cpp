#include "ratchet/profile.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ratchet/errors.hpp"

namespace ratchet {

Shape Shape::constant(double c) {
  require(c >= 0.0 && std::isfinite(c), ErrorKind::InvalidArgument, "shape height must be >= 0");
  return {Kind::Constant, 0.0, 0.0, c};
}

Shape Shape::indicator(double a, double b, double c) {
  require(c >= 0.0 && std::isfinite(c), ErrorKind::InvalidArgument, "shape height must be >= 0");
  require(a < b, ErrorKind::InvalidArgument, "indicator needs a < b");
  return {Kind::Indicator, a, b, c};
}

Shape Shape::gaussian(double center, double width, double height) {
  require(height >= 0.0 && std::isfinite(height), ErrorKind::InvalidArgument,
          "shape height must be >= 0");
  require(width > 0.0, ErrorKind::InvalidArgument, "gaussian width must be positive");
  return {Kind::Gaussian, center, width, height};
}

double Shape::operator()(double x) const {
  switch (kind) {
    case Kind::Constant: return c;
    case Kind::Indicator: return (x >= a && x <= b) ? c : 0.0;
    case Kind::Gaussian: {
      const double z = (x - a) / b;
      return c * std::exp(-0.5 * z * z);
    }
  }
  return 0.0;
}

double Shape::integral(double lo, double hi) const {
  if (hi <= lo) return 0.0;
  switch (kind) {
    case Kind::Constant: return c * (hi - lo);
    case Kind::Indicator: {
      const double overlap = std::min(hi, b) - std::max(lo, a);
      return overlap > 0.0 ? c * overlap : 0.0;
    }
    case Kind::Gaussian: {
      const double s = b * std::numbers::sqrt2;
      return c * b * std::sqrt(std::numbers::pi / 2.0) *
             (std::erf((hi - a) / s) - std::erf((lo - a) / s));
    }
  }
  return 0.0;
}

Shape Shape::scaled(double factor) const {
  Shape out = *this;
  out.c *= factor;
  return out;
}

double ClassProfile::operator()(double x) const {
  double sum = 0.0;
  for (const auto& t : terms) sum += t(x);
  return sum;
}

double ClassProfile::integral(double lo, double hi) const {
  double sum = 0.0;
  for (const auto& t : terms) sum += t.integral(lo, hi);
  return sum;
}

InitialProfile::InitialProfile(std::vector<ClassProfile> classes) : classes_(std::move(classes)) {}

InitialProfile InitialProfile::scaled_by_alpha(const ClassProfile& shape, double total_mass,
                                               const std::vector<double>& alpha) {
  require(total_mass >= 0.0, ErrorKind::InvalidArgument, "total mass must be >= 0");
  double sum = 0.0;
  for (double a : alpha) sum += a;
  require(sum > 0.0, ErrorKind::InvalidArgument, "alpha sequence sums to zero");
  std::vector<ClassProfile> classes(alpha.size());
  for (std::size_t k = 0; k < alpha.size(); ++k)
    for (const auto& t : shape.terms)
      classes[k].terms.push_back(t.scaled(total_mass * alpha[k] / sum));
  return InitialProfile(std::move(classes));
}

const ClassProfile& InitialProfile::cls(std::size_t k) const {
  static const ClassProfile kZero{};
  return k < classes_.size() ? classes_[k] : kZero;
}

double InitialProfile::value(std::size_t k, double x) const { return cls(k)(x); }

double InitialProfile::overflow_value(std::size_t class_cap, double x) const {
  double sum = 0.0;
  for (std::size_t k = class_cap + 1; k < classes_.size(); ++k) sum += classes_[k](x);
  return sum;
}

double InitialProfile::total(double x) const {
  double sum = 0.0;
  for (const auto& c : classes_) sum += c(x);
  return sum;
}

double InitialProfile::cell_average(std::size_t k, double lo, double hi) const {
  require(hi > lo, ErrorKind::InvalidArgument, "cell needs hi > lo");
  const ClassProfile& p = cls(k);
  // Constants and fully covering indicators return the height itself so that
  // N * average stays an exact integer when it should be one.
  bool flat = true;
  double height = 0.0;
  for (const auto& t : p.terms) {
    if (t.kind == Shape::Kind::Constant ||
        (t.kind == Shape::Kind::Indicator && t.a <= lo && t.b >= hi)) {
      height += t.c;
    } else if (t.kind == Shape::Kind::Indicator && (t.b <= lo || t.a >= hi)) {
      continue;
    } else {
      flat = false;
      break;
    }
  }
  if (flat) return height;
  return p.integral(lo, hi) / (hi - lo);
}

double InitialProfile::overflow_cell_average(std::size_t class_cap, double lo, double hi) const {
  double sum = 0.0;
  for (std::size_t k = class_cap + 1; k < classes_.size(); ++k) sum += cell_average(k, lo, hi);
  return sum;
}

double InitialProfile::sup_norm(double x_min, double x_max, int n) const {
  std::vector<double> xs;
  for (int i = 0; i < n; ++i)
    xs.push_back(x_min + (x_max - x_min) * i / std::max(1, n - 1));
  for (const auto& c : classes_)
    for (const auto& t : c.terms) {
      if (t.kind == Shape::Kind::Indicator) {
        xs.push_back(t.a);
        xs.push_back(t.b);
        xs.push_back(0.5 * (t.a + t.b));
      } else if (t.kind == Shape::Kind::Gaussian) {
        xs.push_back(t.a);
      }
    }
  double sup = 0.0;
  for (double x : xs)
    if (x >= x_min && x <= x_max) sup = std::max(sup, total(x));
  return sup;
}

InitialProfile InitialProfile::classes_from(std::size_t from_class) const {
  auto classes = classes_;
  for (std::size_t k = 0; k < std::min(from_class, classes.size()); ++k) classes[k].terms.clear();
  return InitialProfile(std::move(classes));
}

void InitialProfile::check_dominates(const InitialProfile& tracer,
                                     const std::vector<double>& xs) const {
  const std::size_t n = std::max(num_classes(), tracer.num_classes());
  for (double x : xs)
    for (std::size_t k = 0; k < n; ++k) {
      const double f = value(k, x);
      const double fs = tracer.value(k, x);
      if (fs > f + 1e-14 * (1.0 + f))
        fail(ErrorKind::TracerExceedsTotal,
             "tracer profile exceeds total in class " + std::to_string(k) + " at x = " +
                 std::to_string(x));
    }
}

std::vector<double> derive_pi_hat(const InitialProfile& profile, std::size_t class_cap,
                                  const std::vector<double>& xs) {
  std::vector<double> pi_hat(class_cap + 1, 0.0);
  pi_hat[0] = 1.0;
  for (double x : xs) {
    const double f0 = profile.value(0, x);
    if (!(f0 > 0.0)) continue;
    for (std::size_t k = 1; k <= class_cap; ++k)
      pi_hat[k] = std::max(pi_hat[k], profile.value(k, x) / f0);
  }
  return pi_hat;
}

}  // namespace ratchet
