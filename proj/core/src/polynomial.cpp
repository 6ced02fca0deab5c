#include "ratchet/polynomial.hpp"

#include <algorithm>
#include <cmath>

namespace ratchet {

Polynomial::Polynomial(std::vector<double> coefficients) : coeffs_(std::move(coefficients)) {
  trim();
}

Polynomial::Polynomial(std::initializer_list<double> coefficients) : coeffs_(coefficients) {
  trim();
}

void Polynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
}

double Polynomial::operator()(double x) const noexcept {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<double> d(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = static_cast<double>(i) * coeffs_[i];
  return Polynomial(std::move(d));
}

double Polynomial::max_abs_coefficient() const noexcept {
  double m = 0.0;
  for (double c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<double> c(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
  for (std::size_t i = 0; i < b.coeffs_.size(); ++i) c[i] += b.coeffs_[i];
  return Polynomial(std::move(c));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-1.0) * b; }

Polynomial operator*(double s, const Polynomial& p) {
  std::vector<double> c = p.coeffs_;
  for (double& v : c) v *= s;
  return Polynomial(std::move(c));
}

Extrema extrema_on(const Polynomial& p, double a, double b, int grid_n, double tol) {
  Extrema e;
  e.min = e.max = p(a);
  e.argmin = e.argmax = a;
  auto consider = [&](double x) {
    const double v = p(x);
    if (v < e.min) {
      e.min = v;
      e.argmin = x;
    }
    if (v > e.max) {
      e.max = v;
      e.argmax = x;
    }
  };
  consider(b);
  if (p.degree() <= 1 || grid_n < 2) return e;

  const Polynomial dp = p.derivative();
  const double h = (b - a) / (grid_n - 1);
  double x_prev = a;
  double d_prev = dp(a);
  for (int i = 1; i < grid_n; ++i) {
    const double x = (i == grid_n - 1) ? b : a + h * i;
    const double d = dp(x);
    consider(x);
    if (d == 0.0) {
      consider(x);
    } else if ((d < 0.0) != (d_prev < 0.0) && d_prev != 0.0) {
      consider(bisect(dp, x_prev, x, tol));
    }
    x_prev = x;
    d_prev = d;
  }
  return e;
}

}  // namespace ratchet
