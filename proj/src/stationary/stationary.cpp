#include "ptbec/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/LU>

#include "ptbec/dense_eigen.hpp"
#include "ptbec/errors.hpp"
#include "ptbec/kinetic.hpp"

namespace ptbec {

std::string_view to_string(SymmetryClass c) {
  switch (c) {
    case SymmetryClass::PTSymmetricGround: return "pt_symmetric_ground";
    case SymmetryClass::PTSymmetricExcited: return "pt_symmetric_excited";
    case SymmetryClass::PTBrokenPlus: return "pt_broken_plus";
    case SymmetryClass::PTBrokenMinus: return "pt_broken_minus";
  }
  return "unknown";
}

bool is_pt_symmetric(SymmetryClass c) noexcept {
  return c == SymmetryClass::PTSymmetricGround || c == SymmetryClass::PTSymmetricExcited;
}

std::vector<LinearEigenpair> linear_spectrum(const GridSpec& grid, const PotentialParams& p,
                                             std::size_t k) {
  if (k > grid.size()) throw UsageError("linear_spectrum: k exceeds the number of grid points");
  const ComplexField v = potential_1d(grid, p);
  Eigen::MatrixXcd h = shared_kinetic_matrix(grid)->cast<complex>();
  h.diagonal() += v.values();
  const EigenDecomposition eig = eig_general(std::move(h));

  std::vector<Eigen::Index> order(static_cast<std::size_t>(eig.values.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    const complex ma = eig.values[a];
    const complex mb = eig.values[b];
    // Conjugate pairs differ in Re mu only by rounding.
    if (std::abs(ma.real() - mb.real()) > 1e-10 * (1.0 + std::abs(ma.real())))
      return ma.real() < mb.real();
    return ma.imag() < mb.imag();
  });

  std::vector<LinearEigenpair> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    const Eigen::Index j = order[i];
    out.push_back({eig.values[j], pt_gauge(normalized(ComplexField(grid, eig.vectors.col(j))))});
  }
  return out;
}

ComplexField apply_hamiltonian(const ComplexField& psi, const SystemParams& params) {
  const ComplexField v = potential_1d(psi.grid(), params.potential);
  double g = params.coupling();
  if (params.nonlinearity == Nonlinearity::NormIndependent) g /= norm_squared(psi);
  const Eigen::VectorXcd& y = psi.values();
  Eigen::VectorXcd out = *shared_kinetic_matrix(psi.grid()) * y;
  out.array() += (v.values().array() + g * y.array().abs2()) * y.array();
  return ComplexField(psi.grid(), std::move(out));
}

double stationary_residual(const ComplexField& psi, complex mu, const SystemParams& params) {
  return norm(apply_hamiltonian(psi, params) - mu * psi);
}

complex rayleigh_quotient(const ComplexField& psi, const SystemParams& params) {
  return inner_product(psi, apply_hamiltonian(psi, params)) / norm_squared(psi);
}

SymmetryClass classify_symmetry(const ComplexField& psi, complex mu) {
  if (pt_defect(psi) < kSymmetricDefect && std::abs(mu.imag()) < kSymmetricImagMu) {
    const ComplexField g = pt_gauge(psi);
    const double re = g.values().real().squaredNorm();
    const double im = g.values().imag().squaredNorm();
    return re >= im ? SymmetryClass::PTSymmetricGround : SymmetryClass::PTSymmetricExcited;
  }
  if (mu.imag() > kSymmetricImagMu) return SymmetryClass::PTBrokenPlus;
  if (mu.imag() < -kSymmetricImagMu) return SymmetryClass::PTBrokenMinus;
  return position_mean(psi) > 0.0 ? SymmetryClass::PTBrokenPlus : SymmetryClass::PTBrokenMinus;
}

StationaryState solve_stationary(const ComplexField& guess_psi, complex guess_mu,
                                 const SystemParams& params, const NewtonOptions& options) {
  params.potential.validate();
  const GridSpec& grid = guess_psi.grid();
  const auto n = static_cast<Eigen::Index>(grid.size());
  const Eigen::VectorXd w = grid.quadrature_weights();
  const Eigen::MatrixXd& kin = *shared_kinetic_matrix(grid);
  const Eigen::VectorXcd v = potential_1d(grid, params.potential).values();
  const double g = params.coupling();

  const ComplexField seed = normalized(guess_psi);
  Eigen::VectorXcd psi = seed.values();
  complex mu = guess_mu;

  // Unknowns: Re psi (n), Im psi (n), Re mu, Im mu. The equation is solved in
  // its standard form; with ||psi|| = 1 enforced the norm-independent
  // nonlinearity has the same roots.
  const Eigen::Index m = 2 * n + 2;
  Eigen::MatrixXd jac(m, m);
  Eigen::VectorXd rhs(m);

  auto residual_vector = [&](const Eigen::VectorXcd& y, complex mu_) {
    Eigen::VectorXcd f = kin * y;
    f.array() += (v.array() - mu_ + g * y.array().abs2()) * y.array();
    return f;
  };

  double res = std::numeric_limits<double>::infinity();
  for (int it = 0; it <= options.max_iterations; ++it) {
    const Eigen::VectorXcd f = residual_vector(psi, mu);
    const double nrm = (w.array() * psi.array().abs2()).sum();
    res = std::sqrt((w.array() * f.array().abs2()).sum());
    if (!std::isfinite(res) || res > 1e8) break;
    if (res < options.tolerance && std::abs(nrm - 1.0) < options.tolerance) {
      ComplexField out(grid, psi);
      out = normalized(out);
      StationaryState state{out, mu, params, classify_symmetry(out, mu),
                            stationary_residual(out, mu, params), it};
      if (state.residual < options.tolerance) return state;
    }
    if (it == options.max_iterations) break;

    const Eigen::ArrayXd a = psi.real().array();
    const Eigen::ArrayXd b = psi.imag().array();
    const Eigen::ArrayXcd diag_a = v.array() - mu + 2.0 * g * psi.array().abs2();
    const Eigen::ArrayXcd diag_b = g * psi.array().square();

    jac.setZero();
    jac.block(0, 0, n, n) = kin;
    jac.block(n, n, n, n) = kin;
    for (Eigen::Index i = 0; i < n; ++i) {
      const complex apb = diag_a[i] + diag_b[i];
      const complex amb = diag_a[i] - diag_b[i];
      jac(i, i) += apb.real();
      jac(i, n + i) = -amb.imag();
      jac(n + i, i) = apb.imag();
      jac(n + i, n + i) += amb.real();
      jac(i, 2 * n) = -a[i];
      jac(i, 2 * n + 1) = b[i];
      jac(n + i, 2 * n) = -b[i];
      jac(n + i, 2 * n + 1) = -a[i];
      jac(2 * n, i) = 2.0 * w[i] * a[i];
      jac(2 * n, n + i) = 2.0 * w[i] * b[i];
      jac(2 * n + 1, i) = -w[i] * seed[static_cast<std::size_t>(i)].imag();
      jac(2 * n + 1, n + i) = w[i] * seed[static_cast<std::size_t>(i)].real();
    }
    rhs.head(n) = f.real();
    rhs.segment(n, n) = f.imag();
    rhs[2 * n] = nrm - 1.0;
    rhs[2 * n + 1] = (w.array() * (seed.values().conjugate().array() * psi.array())).sum().imag();

    const Eigen::VectorXd step = jac.partialPivLu().solve(rhs);
    if (!step.allFinite()) break;
    psi.real() -= step.head(n);
    psi.imag() -= step.segment(n, n);
    mu -= complex(step[2 * n], step[2 * n + 1]);
  }
  throw NonConvergence("stationary Newton iteration did not converge (residual " +
                           std::to_string(res) + ")",
                       res, options.max_iterations);
}

}  // namespace ptbec
