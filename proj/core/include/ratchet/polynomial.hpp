#pragma once

#include <initializer_list>
#include <vector>

namespace ratchet {

/// Real polynomial with coefficients in ascending degree. Trailing zero
/// coefficients are dropped, so the zero polynomial has degree -1.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coefficients);
  Polynomial(std::initializer_list<double> coefficients);

  [[nodiscard]] double operator()(double x) const noexcept;
  [[nodiscard]] Polynomial derivative() const;
  [[nodiscard]] int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  [[nodiscard]] double leading() const noexcept { return coeffs_.empty() ? 0.0 : coeffs_.back(); }
  [[nodiscard]] const std::vector<double>& coefficients() const noexcept { return coeffs_; }
  [[nodiscard]] double max_abs_coefficient() const noexcept;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(double s, const Polynomial& p);
  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  void trim();
  std::vector<double> coeffs_;
};

struct Extrema {
  double min = 0.0;
  double argmin = 0.0;
  double max = 0.0;
  double argmax = 0.0;
};

/// Extrema of `p` on [a, b]: endpoints, a uniform grid of `grid_n` points,
/// and every critical point bracketed by a sign change of p' between grid
/// nodes (refined by bisection to `tol`).
[[nodiscard]] Extrema extrema_on(const Polynomial& p, double a, double b, int grid_n = 4097,
                                 double tol = 1e-12);

/// Bisection on a bracket with f(lo) and f(hi) of opposite sign.
template <class F>
double bisect(F&& f, double lo, double hi, double tol = 1e-12) {
  double flo = f(lo);
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    if (fmid == 0.0) return mid;
    if ((fmid < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace ratchet
