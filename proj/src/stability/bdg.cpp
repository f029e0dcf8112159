#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ptbec/dense_eigen.hpp"
#include "ptbec/errors.hpp"
#include "ptbec/kinetic.hpp"
#include "ptbec/stability.hpp"

namespace ptbec {

namespace {

constexpr double kTrivialOverlap = 0.99;
constexpr double kTrivialFrequency = 1e-5;
constexpr double kBoundaryFraction = 0.8;

using Eigen::Index;

double weighted_norm2(const Eigen::VectorXcd& z, const Eigen::VectorXd& w2) {
  return (w2.array() * z.array().abs2()).sum();
}

complex weighted_dot(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b,
                     const Eigen::VectorXd& w2) {
  return (w2.array() * a.conjugate().array() * b.array()).sum();
}

// Fraction of z lying in span(generators), with the doubled trapezoid weights.
double span_overlap(const Eigen::VectorXcd& z, std::vector<Eigen::VectorXcd> gens,
                    const Eigen::VectorXd& w2) {
  // Gram-Schmidt on the generators.
  std::vector<Eigen::VectorXcd> basis;
  for (auto& g : gens) {
    for (const auto& q : basis) g -= weighted_dot(q, g, w2) * q;
    const double n2 = weighted_norm2(g, w2);
    if (n2 > 1e-20) basis.push_back(g / std::sqrt(n2));
  }
  double proj = 0.0;
  for (const auto& q : basis) proj += std::norm(weighted_dot(q, z, w2));
  const double total = weighted_norm2(z, w2);
  return total > 0.0 ? std::sqrt(proj / total) : 0.0;
}

}  // namespace

Eigen::MatrixXcd bdg_matrix(const StationaryState& state, Nonlinearity kind) {
  const GridSpec& grid = state.psi.grid();
  const auto n = static_cast<Index>(grid.size());
  const Eigen::VectorXcd& psi = state.psi.values();
  const Eigen::VectorXcd v = potential_1d(grid, state.params.potential).values();
  const double g = state.params.coupling();
  const Eigen::MatrixXd& kin = *shared_kinetic_matrix(grid);

  Eigen::MatrixXcd l = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  l.topLeftCorner(n, n) = kin.cast<complex>();
  l.bottomRightCorner(n, n) = -kin.cast<complex>();
  for (Index i = 0; i < n; ++i) {
    const complex a = v[i] - state.mu + 2.0 * g * std::norm(psi[i]);
    const complex b = g * psi[i] * psi[i];
    l(i, i) += a;
    l(i, n + i) = b;
    l(n + i, i) = -std::conj(b);
    l(n + i, n + i) -= std::conj(a);
  }

  if (kind == Nonlinearity::NormIndependent) {
    // Variation of the norm in the denominator couples every point to the
    // overlap integral of (u, v) with (psi, conj psi).
    const Eigen::VectorXd w = grid.quadrature_weights();
    Eigen::RowVectorXcd row(2 * n);
    row.head(n) = (psi.conjugate().array() * w.array()).matrix().transpose();
    row.tail(n) = (psi.array() * w.array()).matrix().transpose();
    const Eigen::VectorXcd c = -g * (psi.array().abs2() * psi.array()).matrix();
    l.topRows(n) += c * row;
    l.bottomRows(n) -= c.conjugate() * row;
  }
  return l;
}

double bdg_residual(const StationaryState& state, Nonlinearity kind, complex omega,
                    const ComplexField& u, const ComplexField& v) {
  const auto n = static_cast<Index>(u.size());
  Eigen::VectorXcd z(2 * n);
  z << u.values(), v.values();
  const Eigen::VectorXcd r = bdg_matrix(state, kind) * z - omega * z;
  return r.norm() / z.norm();
}

BdGSpectrum solve_bdg(const StationaryState& state, Nonlinearity kind, std::size_t k) {
  const GridSpec& grid = state.psi.grid();
  const auto n = static_cast<Index>(grid.size());
  const EigenDecomposition eig = eig_general(bdg_matrix(state, kind));

  const Eigen::VectorXd w = grid.quadrature_weights();
  Eigen::VectorXd w2(2 * n);
  w2 << w, w;
  const Eigen::VectorXcd& psi = state.psi.values();
  Eigen::VectorXcd phase_mode(2 * n), scale_mode(2 * n);
  phase_mode << psi, -psi.conjugate();
  scale_mode << psi, psi.conjugate();
  std::vector<Eigen::VectorXcd> trivial_span{phase_mode};
  if (kind == Nonlinearity::NormIndependent) trivial_span.push_back(scale_mode);

  Eigen::VectorXd outer(2 * n);
  for (Index i = 0; i < n; ++i)
    outer[i] = outer[n + i] =
        std::abs(grid.x(static_cast<std::size_t>(i))) > kBoundaryFraction * grid.x_max() ? 1.0 : 0.0;

  BdGSpectrum out;
  std::vector<BdGMode> nontrivial, trivial;
  for (Index j = 0; j < eig.values.size(); ++j) {
    Eigen::VectorXcd z = eig.vectors.col(j);
    Index imax = 0;
    z.cwiseAbs().maxCoeff(&imax);
    z /= z[imax];

    const double total = weighted_norm2(z, w2);
    const double edge = (w2.array() * outer.array() * z.array().abs2()).sum();
    if (edge > 0.5 * total) {
      ++out.boundary_filtered;
      continue;
    }
    BdGMode m{eig.values[j], ComplexField(grid, z.head(n)), ComplexField(grid, z.tail(n))};
    m.is_trivial = std::abs(m.omega) < kTrivialFrequency &&
                   span_overlap(z, trivial_span, w2) > kTrivialOverlap;
    (m.is_trivial ? trivial : nontrivial).push_back(std::move(m));
  }

  auto by_order = [](const BdGMode& a, const BdGMode& b) {
    const double ra = std::abs(a.omega.real());
    const double rb = std::abs(b.omega.real());
    if (std::abs(ra - rb) > 1e-9 * (1.0 + ra)) return ra < rb;
    if (a.omega.imag() != b.omega.imag()) return a.omega.imag() > b.omega.imag();
    return a.omega.real() > b.omega.real();
  };
  std::stable_sort(nontrivial.begin(), nontrivial.end(), by_order);

  if (k > 0 && k < nontrivial.size()) {
    // Keep the first k and whichever partners they need.
    std::vector<bool> keep(nontrivial.size(), false);
    for (std::size_t i = 0; i < k; ++i) {
      keep[i] = true;
      std::size_t best = i;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < nontrivial.size(); ++j) {
        const double d = std::abs(nontrivial[j].omega + std::conj(nontrivial[i].omega));
        if (d < best_d) {
          best_d = d;
          best = j;
        }
      }
      keep[best] = true;
    }
    std::vector<BdGMode> kept;
    for (std::size_t i = 0; i < nontrivial.size(); ++i)
      if (keep[i]) kept.push_back(std::move(nontrivial[i]));
    nontrivial = std::move(kept);
  }

  out.modes = std::move(nontrivial);
  for (auto& m : trivial) out.modes.push_back(std::move(m));

  for (std::size_t i = 0; i < out.modes.size(); ++i) {
    std::size_t best = i;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < out.modes.size(); ++j) {
      const double d = std::abs(out.modes[j].omega + std::conj(out.modes[i].omega));
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    out.modes[i].partner_index = best;
  }
  return out;
}

StabilityVerdict classify_stability(std::span<const BdGMode> modes) {
  if (modes.empty()) throw UsageError("classify_stability: empty mode list");
  StabilityVerdict verdict;
  double best = -std::numeric_limits<double>::infinity();
  for (const BdGMode& m : modes) {
    if (m.is_trivial) continue;
    if (m.omega.imag() > best) {
      best = m.omega.imag();
      verdict.leading_mode = m;
    }
  }
  verdict.max_growth_rate = verdict.leading_mode ? best : 0.0;
  verdict.stable = !(best > kGrowthTolerance);
  return verdict;
}

}  // namespace ptbec
