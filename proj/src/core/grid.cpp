#include "ptbec/grid.hpp"

#include <cmath>
#include <string>

#include "ptbec/errors.hpp"

namespace ptbec {

GridSpec::GridSpec(double x_min, double x_max, std::size_t n_points)
    : x_min_(x_min), x_max_(x_max), n_(n_points), dx_(0.0) {
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || x_max <= 0.0 || x_max != -x_min)
    throw UsageError("grid must be symmetric about the origin with x_max > 0");
  if (n_points < 4 || n_points % 2 != 0)
    throw UsageError("grid point count must be even and at least 4, got " +
                     std::to_string(n_points));
  dx_ = (x_max - x_min) / static_cast<double>(n_points - 1);
}

GridSpec GridSpec::symmetric(double half_width, std::size_t n_points) {
  return GridSpec(-half_width, half_width, n_points);
}

Eigen::VectorXd GridSpec::coordinates() const {
  Eigen::VectorXd xs(static_cast<Eigen::Index>(n_));
  for (std::size_t i = 0; i < n_; ++i) xs[static_cast<Eigen::Index>(i)] = x(i);
  return xs;
}

Eigen::VectorXd GridSpec::quadrature_weights() const {
  Eigen::VectorXd w = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n_), dx_);
  w[0] *= 0.5;
  w[w.size() - 1] *= 0.5;
  return w;
}

}  // namespace ptbec
