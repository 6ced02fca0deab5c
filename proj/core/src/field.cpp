#include "ratchet/field.hpp"

#include <algorithm>
#include <cmath>

#include "ratchet/errors.hpp"

namespace ratchet {

Grid1D::Grid1D(double x_min, double x_max, std::size_t nx) : x_min_(x_min), x_max_(x_max), nx_(nx) {
  require(nx >= 3, ErrorKind::InvalidArgument, "grid needs at least 3 nodes");
  require(x_max > x_min, ErrorKind::InvalidArgument, "grid needs x_max > x_min");
  dx_ = (x_max - x_min) / static_cast<double>(nx - 1);
}

Grid1D Grid1D::with_spacing(double x_min, double x_max, double dx) {
  require(dx > 0.0, ErrorKind::InvalidArgument, "grid spacing must be positive");
  const auto cells = static_cast<std::size_t>(std::llround((x_max - x_min) / dx));
  return Grid1D(x_min, x_min + dx * static_cast<double>(cells), cells + 1);
}

std::vector<double> Grid1D::nodes() const {
  std::vector<double> xs(nx_);
  for (std::size_t i = 0; i < nx_; ++i) xs[i] = x(i);
  return xs;
}

std::size_t Grid1D::nearest(double x) const noexcept {
  const double r = std::round((x - x_min_) / dx_);
  if (!(r > 0.0)) return 0;
  return std::min(nx_ - 1, static_cast<std::size_t>(r));
}

DensityField::DensityField(Grid1D grid, std::size_t class_cap, double time)
    : grid_(grid), n_classes_(class_cap + 2), time_(time), data_(n_classes_ * grid.size(), 0.0) {}

std::vector<double> mass_norm(const DensityField& field) {
  std::vector<double> out(field.grid().size(), 0.0);
  for (std::size_t k = 0; k < field.num_classes(); ++k) {
    auto row = field.row(k);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += row[i];
  }
  return out;
}

double tail_mass(const DensityField& field, std::size_t k_check) {
  double worst = 0.0;
  for (std::size_t i = 0; i < field.grid().size(); ++i) {
    double sum = 0.0;
    for (std::size_t k = k_check + 1; k < field.num_classes(); ++k) sum += field.at(k, i);
    worst = std::max(worst, sum);
  }
  return worst;
}

}  // namespace ratchet
