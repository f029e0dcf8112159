#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Core>

#include "ptbec/grid.hpp"

namespace ptbec {

using complex = std::complex<double>;

/// Complex amplitudes sampled on a GridSpec.
class ComplexField {
 public:
  explicit ComplexField(GridSpec grid);
  ComplexField(GridSpec grid, Eigen::VectorXcd values);

  const GridSpec& grid() const noexcept { return grid_; }
  const Eigen::VectorXcd& values() const noexcept { return values_; }
  Eigen::VectorXcd& values() noexcept { return values_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(values_.size()); }

  complex operator[](std::size_t i) const { return values_[static_cast<Eigen::Index>(i)]; }
  complex& operator[](std::size_t i) { return values_[static_cast<Eigen::Index>(i)]; }

  bool all_finite() const;

  ComplexField& operator+=(const ComplexField& other);
  ComplexField& operator-=(const ComplexField& other);
  ComplexField& operator*=(complex s);

 private:
  GridSpec grid_;
  Eigen::VectorXcd values_;
};

ComplexField operator+(ComplexField a, const ComplexField& b);
ComplexField operator-(ComplexField a, const ComplexField& b);
ComplexField operator*(complex s, ComplexField a);

/// <f|g> with trapezoid weights; conjugate-linear in f.
complex inner_product(const ComplexField& f, const ComplexField& g);
double norm_squared(const ComplexField& f);
double norm(const ComplexField& f);
ComplexField normalized(const ComplexField& f);

/// N = n0 ||psi||^2.
double particle_number(double n0, const ComplexField& psi);

/// <x> = int x |psi|^2 / ||psi||^2.
double position_mean(const ComplexField& psi);

/// (PT psi)(x) = conj(psi(-x)).
ComplexField pt_transform(const ComplexField& psi);

/// min over alpha of ||psi - e^{i alpha} PT psi|| / ||psi||, in [0, 2].
double pt_defect(const ComplexField& psi);

/// min over alpha of ||a - e^{i alpha} b||.
double phase_aligned_distance(const ComplexField& a, const ComplexField& b);

/// Value at x = 0, the mean of the two central samples.
complex origin_value(const ComplexField& psi);

/// Returns e^{i alpha} psi with the phase chosen so that PT psi = psi
/// whenever psi is PT-symmetric; the remaining sign makes the origin value
/// positive, or, when the origin value vanishes, makes the imaginary part
/// on x > 0 integrate to a positive number.
ComplexField pt_gauge(const ComplexField& psi);

}  // namespace ptbec
