#include "ptbec/kinetic.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

namespace ptbec {

Eigen::VectorXd kinetic_symbol(const GridSpec& grid) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  const double dk = 2.0 * std::numbers::pi / grid.period();
  Eigen::VectorXd k2(n);
  for (Eigen::Index m = 0; m < n; ++m) {
    const Eigen::Index s = m <= n / 2 ? m : m - n;
    const double k = dk * static_cast<double>(s);
    k2[m] = k * k;
  }
  return k2;
}

Eigen::MatrixXd kinetic_matrix(const GridSpec& grid) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  const Eigen::VectorXd k2 = kinetic_symbol(grid);
  // First row of the circulant: inverse DFT of the symbol, real because the
  // symbol is even in m.
  Eigen::VectorXd c(n);
  for (Eigen::Index d = 0; d < n; ++d) {
    double sum = 0.0;
    for (Eigen::Index m = 0; m < n; ++m)
      sum += k2[m] * std::cos(2.0 * std::numbers::pi * static_cast<double>((m * d) % n) /
                              static_cast<double>(n));
    c[d] = sum / static_cast<double>(n);
  }
  Eigen::MatrixXd t(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) t(i, j) = c[(i - j + n) % n];
  // Symmetrize away rounding so reflection symmetry is exact.
  return 0.5 * (t + t.transpose());
}

std::shared_ptr<const Eigen::MatrixXd> shared_kinetic_matrix(const GridSpec& grid) {
  using Key = std::tuple<double, double, std::size_t>;
  static std::mutex mutex;
  static std::map<Key, std::shared_ptr<const Eigen::MatrixXd>> cache;
  const Key key{grid.x_min(), grid.x_max(), grid.size()};
  std::lock_guard lock(mutex);
  auto& slot = cache[key];
  if (!slot) slot = std::make_shared<const Eigen::MatrixXd>(kinetic_matrix(grid));
  return slot;
}

}  // namespace ptbec
