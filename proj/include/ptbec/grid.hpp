#pragma once

#include <cstddef>

#include <Eigen/Core>

namespace ptbec {

inline constexpr double kDefaultHalfWidth = 12.0;
inline constexpr std::size_t kDefaultPoints = 256;

/// Uniform grid on [x_min, x_max] with x_max = -x_min and both end points
/// included. The point count is even, so the origin lies midway between
/// the two central samples and x -> -x maps sample i onto sample n-1-i.
class GridSpec {
 public:
  GridSpec(double x_min, double x_max, std::size_t n_points);

  static GridSpec symmetric(double half_width = kDefaultHalfWidth,
                            std::size_t n_points = kDefaultPoints);

  double x_min() const noexcept { return x_min_; }
  double x_max() const noexcept { return x_max_; }
  double dx() const noexcept { return dx_; }
  std::size_t size() const noexcept { return n_; }

  /// Mirror-exact coordinate: x(mirror(i)) == -x(i) bit for bit.
  double x(std::size_t i) const noexcept {
    return i < n_ / 2 ? x_min_ + static_cast<double>(i) * dx_
                      : -(x_min_ + static_cast<double>(n_ - 1 - i) * dx_);
  }
  std::size_t mirror(std::size_t i) const noexcept { return n_ - 1 - i; }

  Eigen::VectorXd coordinates() const;

  /// Trapezoid weights; dx in the interior, dx/2 at both ends.
  Eigen::VectorXd quadrature_weights() const;

  /// Period of the implicit periodic extension used by spectral operators.
  double period() const noexcept { return static_cast<double>(n_) * dx_; }

  bool operator==(const GridSpec&) const = default;

 private:
  double x_min_;
  double x_max_;
  std::size_t n_;
  double dx_;
};

}  // namespace ptbec
