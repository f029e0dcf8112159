#include "ptbec/bloch.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ptbec/errors.hpp"

namespace ptbec {

namespace {

constexpr double kTiny = 1e-12;

double wrap_angle(double a) {
  double r = std::remainder(a, 2.0 * std::numbers::pi);
  if (r <= -std::numbers::pi) r += 2.0 * std::numbers::pi;
  return r;
}

}  // namespace

BlochBasis basis_from_states(const StationaryState& ground, const StationaryState& excited) {
  if (!(ground.psi.grid() == excited.psi.grid()))
    throw UsageError("basis states live on different grids");
  // pt_gauge leaves e1 with a positive real origin value. The excited state
  // is odd at gamma = 0, so its sign is fixed by the odd part instead.
  ComplexField e1 = pt_gauge(normalized(ground.psi));
  ComplexField rest = excited.psi - inner_product(e1, excited.psi) * e1;
  ComplexField e2 = pt_gauge(normalized(rest));
  double odd = 0.0;
  for (std::size_t i = e2.size() / 2; i < e2.size(); ++i) odd += e2[i].imag();
  if (odd < 0.0) e2 *= -1.0;
  return {std::move(e1), std::move(e2), ground.params, ground.mu, excited.mu};
}

BlochBasis build_basis(const GridSpec& grid, const SystemParams& params,
                       const SeedOptions& options) {
  const StationaryState g = symmetric_state(grid, params, SymmetryClass::PTSymmetricGround, options);
  const StationaryState e =
      symmetric_state(grid, params, SymmetryClass::PTSymmetricExcited, options);
  if (phase_aligned_distance(g.psi, e.psi) < 1e-3)
    throw NotAvailable("ground and excited states coincide");
  return basis_from_states(g, e);
}

BlochPoint project(const ComplexField& psi, const BlochBasis& basis) {
  const complex c1 = inner_product(basis.e1, psi);
  const complex c2 = inner_product(basis.e2, psi);
  BlochPoint p;
  p.R = std::hypot(std::abs(c1), std::abs(c2));
  p.err = norm_squared(psi - c1 * basis.e1 - c2 * basis.e2);
  if (p.R == 0.0) return p;
  p.theta = 2.0 * std::atan2(std::abs(c2), std::abs(c1));
  if (std::abs(c2) > kTiny) {
    p.chi = std::arg(c2);
    p.phi = std::abs(c1) > kTiny ? wrap_angle(std::arg(c1) - std::arg(c2)) : 0.0;
  } else {
    p.chi = std::arg(c1);
    p.phi = 0.0;
  }
  return p;
}

std::vector<ComplexField> great_circle_states(const BlochBasis& basis,
                                              std::span<const double> thetas, double phi) {
  std::vector<ComplexField> out;
  out.reserve(thetas.size());
  for (double theta : thetas) {
    const complex c1 = std::polar(std::cos(0.5 * theta), phi);
    const complex c2 = std::sin(0.5 * theta);
    out.push_back(c1 * basis.e1 + c2 * basis.e2);
  }
  return out;
}

std::vector<BlochSample> trajectory_to_bloch(const Trajectory& traj, const BlochBasis& basis) {
  std::vector<BlochSample> out;
  out.reserve(traj.fields.size());
  for (std::size_t i = 0; i < traj.fields.size(); ++i)
    out.push_back({traj.snapshot_times[i], project(traj.fields[i], basis)});
  return out;
}

double max_error(std::span<const BlochSample> samples) {
  double m = 0.0;
  for (const auto& s : samples) m = std::max(m, s.point.err);
  return m;
}

std::vector<BlochPoint> project_branch(const Branch& branch, const BlochBasis& basis) {
  std::vector<BlochPoint> out;
  const double base = basis.base_params.n0a;
  for (const StationaryState& s : branch.states) {
    const double ratio = s.params.n0a / base;
    if (!(ratio > 0.0) || !std::isfinite(ratio)) continue;
    out.push_back(project(complex(std::sqrt(ratio)) * s.psi, basis));
  }
  return out;
}

}  // namespace ptbec
