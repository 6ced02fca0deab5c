#pragma once

#include <cstddef>
#include <vector>

namespace ratchet {

/// One additive term of a class profile.
struct Shape {
  enum class Kind { Constant, Indicator, Gaussian };

  Kind kind = Kind::Constant;
  double a = 0.0;  // indicator left end, gaussian center
  double b = 0.0;  // indicator right end, gaussian width
  double c = 0.0;  // height

  static Shape constant(double c);
  static Shape indicator(double a, double b, double c);
  static Shape gaussian(double center, double width, double height);

  [[nodiscard]] double operator()(double x) const;
  /// Exact integral over [lo, hi].
  [[nodiscard]] double integral(double lo, double hi) const;
  [[nodiscard]] Shape scaled(double factor) const;

  friend bool operator==(const Shape&, const Shape&) = default;
};

/// f_k as a sum of shapes; an empty list is the zero function.
struct ClassProfile {
  std::vector<Shape> terms;

  [[nodiscard]] double operator()(double x) const;
  [[nodiscard]] double integral(double lo, double hi) const;
  [[nodiscard]] bool empty() const noexcept { return terms.empty(); }

  friend bool operator==(const ClassProfile&, const ClassProfile&) = default;
};

/// f = (f_k); classes past the stored list are identically zero.
class InitialProfile {
 public:
  InitialProfile() = default;
  explicit InitialProfile(std::vector<ClassProfile> classes);

  /// f_k = total_mass * alpha_k / sum(alpha) * shape, k = 0..alpha.size()-1.
  static InitialProfile scaled_by_alpha(const ClassProfile& shape, double total_mass,
                                        const std::vector<double>& alpha);

  [[nodiscard]] std::size_t num_classes() const noexcept { return classes_.size(); }
  [[nodiscard]] const std::vector<ClassProfile>& classes() const noexcept { return classes_; }
  [[nodiscard]] const ClassProfile& cls(std::size_t k) const;

  [[nodiscard]] double value(std::size_t k, double x) const;
  /// Sum of f_k over k > class_cap, the mass that lands in the overflow class.
  [[nodiscard]] double overflow_value(std::size_t class_cap, double x) const;
  [[nodiscard]] double total(double x) const;

  /// Exact average of f_k over [lo, hi].
  [[nodiscard]] double cell_average(std::size_t k, double lo, double hi) const;
  [[nodiscard]] double overflow_cell_average(std::size_t class_cap, double lo, double hi) const;

  /// Sup of sum_k f_k sampled on [x_min, x_max] at n points plus every
  /// shape breakpoint and center in range.
  [[nodiscard]] double sup_norm(double x_min, double x_max, int n = 4001) const;

  /// Copy with classes below `from_class` zeroed.
  [[nodiscard]] InitialProfile classes_from(std::size_t from_class) const;

  /// Throws TracerExceedsTotal if tracer(x) > this(x) at a sample point.
  void check_dominates(const InitialProfile& tracer, const std::vector<double>& xs) const;

  friend bool operator==(const InitialProfile&, const InitialProfile&) = default;

 private:
  std::vector<ClassProfile> classes_;
};

/// pi_hat_k = max over sample points with f_0 > 0 of f_k / f_0.
std::vector<double> derive_pi_hat(const InitialProfile& profile, std::size_t class_cap,
                                  const std::vector<double>& xs);

}  // namespace ratchet
