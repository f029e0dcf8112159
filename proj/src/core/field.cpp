#include "ptbec/field.hpp"

#include <cmath>

#include "ptbec/errors.hpp"

namespace ptbec {

namespace {

void require_same_grid(const ComplexField& a, const ComplexField& b) {
  if (!(a.grid() == b.grid())) throw UsageError("fields live on different grids");
}

}  // namespace

ComplexField::ComplexField(GridSpec grid)
    : grid_(grid), values_(Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(grid.size()))) {}

ComplexField::ComplexField(GridSpec grid, Eigen::VectorXcd values)
    : grid_(grid), values_(std::move(values)) {
  if (static_cast<std::size_t>(values_.size()) != grid_.size())
    throw UsageError("field length does not match grid size");
}

bool ComplexField::all_finite() const { return values_.allFinite(); }

ComplexField& ComplexField::operator+=(const ComplexField& other) {
  require_same_grid(*this, other);
  values_ += other.values_;
  return *this;
}

ComplexField& ComplexField::operator-=(const ComplexField& other) {
  require_same_grid(*this, other);
  values_ -= other.values_;
  return *this;
}

ComplexField& ComplexField::operator*=(complex s) {
  values_ *= s;
  return *this;
}

ComplexField operator+(ComplexField a, const ComplexField& b) { return a += b; }
ComplexField operator-(ComplexField a, const ComplexField& b) { return a -= b; }
ComplexField operator*(complex s, ComplexField a) { return a *= s; }

complex inner_product(const ComplexField& f, const ComplexField& g) {
  require_same_grid(f, g);
  const Eigen::VectorXd w = f.grid().quadrature_weights();
  complex sum = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i)
    sum += w[i] * std::conj(f.values()[i]) * g.values()[i];
  return sum;
}

double norm_squared(const ComplexField& f) {
  const Eigen::VectorXd w = f.grid().quadrature_weights();
  return (w.array() * f.values().array().abs2()).sum();
}

double norm(const ComplexField& f) { return std::sqrt(norm_squared(f)); }

ComplexField normalized(const ComplexField& f) {
  const double n = norm(f);
  if (!(n > 0.0)) throw UsageError("cannot normalize a zero field");
  return complex(1.0 / n) * f;
}

double particle_number(double n0, const ComplexField& psi) {
  if (!(n0 > 0.0)) throw UsageError("n0 must be positive");
  return n0 * norm_squared(psi);
}

double position_mean(const ComplexField& psi) {
  const Eigen::VectorXd w = psi.grid().quadrature_weights();
  const Eigen::VectorXd x = psi.grid().coordinates();
  const Eigen::ArrayXd rho = w.array() * psi.values().array().abs2();
  return (rho * x.array()).sum() / rho.sum();
}

ComplexField pt_transform(const ComplexField& psi) {
  const std::size_t n = psi.size();
  ComplexField out(psi.grid());
  for (std::size_t i = 0; i < n; ++i) out[i] = std::conj(psi[n - 1 - i]);
  return out;
}

double phase_aligned_distance(const ComplexField& a, const ComplexField& b) {
  const complex ov = inner_product(b, a);
  const complex phase = std::abs(ov) > 0.0 ? ov / std::abs(ov) : complex(1.0);
  return norm(a - phase * b);
}

double pt_defect(const ComplexField& psi) {
  const double n = norm(psi);
  if (!(n > 0.0)) return 0.0;
  return phase_aligned_distance(psi, pt_transform(psi)) / n;
}

complex origin_value(const ComplexField& psi) {
  const std::size_t h = psi.size() / 2;
  return 0.5 * (psi[h - 1] + psi[h]);
}

ComplexField pt_gauge(const ComplexField& psi) {
  // For psi' = e^{i b} psi, PT psi' = e^{-i b} PT psi, so psi' is PT-fixed
  // when e^{2ib} = <psi|PT psi> / |<psi|PT psi>|.
  const complex ov = inner_product(psi, pt_transform(psi));
  const double beta = std::abs(ov) > 0.0 ? 0.5 * std::arg(ov) : 0.0;
  ComplexField out = std::polar(1.0, beta) * psi;

  const complex c = origin_value(out);
  double sign_ref = c.real();
  if (std::abs(c) < 1e-6 * norm(out)) {
    sign_ref = 0.0;
    for (std::size_t i = out.size() / 2; i < out.size(); ++i) sign_ref += out[i].imag();
  }
  if (sign_ref < 0.0) out *= -1.0;
  return out;
}

}  // namespace ptbec
