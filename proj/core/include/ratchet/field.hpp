#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ratchet {

/// Uniform nodes x_i = x_min + i dx, i = 0..nx-1, zero-flux ends.
class Grid1D {
 public:
  Grid1D() = default;
  Grid1D(double x_min, double x_max, std::size_t nx);
  /// nx chosen so that the spacing is `dx` (x_max is moved onto the last node).
  static Grid1D with_spacing(double x_min, double x_max, double dx);

  [[nodiscard]] double x_min() const noexcept { return x_min_; }
  [[nodiscard]] double x_max() const noexcept { return x_max_; }
  [[nodiscard]] std::size_t size() const noexcept { return nx_; }
  [[nodiscard]] double dx() const noexcept { return dx_; }
  [[nodiscard]] double x(std::size_t i) const noexcept { return x_min_ + dx_ * static_cast<double>(i); }
  [[nodiscard]] std::vector<double> nodes() const;
  /// Nearest node index, clamped to the grid.
  [[nodiscard]] std::size_t nearest(double x) const noexcept;

  friend bool operator==(const Grid1D&, const Grid1D&) = default;

 private:
  double x_min_ = 0.0;
  double x_max_ = 1.0;
  std::size_t nx_ = 3;
  double dx_ = 0.5;
};

/// u_k(x_i) for k = 0..K+1 (K+1 is the overflow class), stored class-major.
class DensityField {
 public:
  DensityField() = default;
  DensityField(Grid1D grid, std::size_t class_cap, double time = 0.0);

  [[nodiscard]] const Grid1D& grid() const noexcept { return grid_; }
  [[nodiscard]] std::size_t class_cap() const noexcept { return n_classes_ - 2; }
  [[nodiscard]] std::size_t num_classes() const noexcept { return n_classes_; }
  [[nodiscard]] double time() const noexcept { return time_; }
  void set_time(double t) noexcept { time_ = t; }

  [[nodiscard]] double& at(std::size_t k, std::size_t i) { return data_[k * grid_.size() + i]; }
  [[nodiscard]] double at(std::size_t k, std::size_t i) const { return data_[k * grid_.size() + i]; }
  [[nodiscard]] std::span<double> row(std::size_t k) {
    return {data_.data() + k * grid_.size(), grid_.size()};
  }
  [[nodiscard]] std::span<const double> row(std::size_t k) const {
    return {data_.data() + k * grid_.size(), grid_.size()};
  }
  [[nodiscard]] std::span<double> data() noexcept { return data_; }
  [[nodiscard]] std::span<const double> data() const noexcept { return data_; }

  friend bool operator==(const DensityField&, const DensityField&) = default;

 private:
  Grid1D grid_;
  std::size_t n_classes_ = 2;
  double time_ = 0.0;
  std::vector<double> data_ = std::vector<double>(6, 0.0);
};

/// sum_k u_k(x_i) per node.
std::vector<double> mass_norm(const DensityField& field);

/// max over nodes of sum_{k > k_check} u_k, overflow included.
double tail_mass(const DensityField& field, std::size_t k_check);

}  // namespace ratchet
