#include <algorithm>
#include <cmath>
#include <string>

#include "ptbec/dynamics.hpp"
#include "ptbec/errors.hpp"
#include "ptbec/fft.hpp"
#include "ptbec/kinetic.hpp"

namespace ptbec {

Trajectory propagate(const ComplexField& psi0, const SystemParams& params, double t_final,
                     double dt, std::size_t sample_every, const PropagateOptions& options) {
  if (!(dt > 0.0)) throw UsageError("time step must be positive");
  if (!std::isfinite(t_final)) throw UsageError("final time must be finite");
  if (sample_every == 0) throw UsageError("sample_every must be at least 1");
  if (!psi0.all_finite()) throw UsageError("initial field is not finite");

  const GridSpec& grid = psi0.grid();
  const auto n = static_cast<Eigen::Index>(grid.size());
  const auto steps = static_cast<long long>(std::llround(std::abs(t_final) / dt));
  const double h = t_final < 0.0 ? -dt : dt;

  const Eigen::VectorXd k2 = kinetic_symbol(grid);
  Eigen::VectorXcd half_kinetic(n);
  for (Eigen::Index m = 0; m < n; ++m)
    half_kinetic[m] = std::polar(1.0 / static_cast<double>(n), -0.5 * k2[m] * h);
  const Eigen::VectorXcd v = potential_1d(grid, params.potential).values();
  const double g = params.coupling();
  const bool norm_independent = params.nonlinearity == Nonlinearity::NormIndependent;
  const Eigen::VectorXd w = grid.quadrature_weights();

  Fft fft(grid.size());
  const auto buf = fft.buffer();
  Eigen::VectorXcd y = psi0.values();

  auto kinetic = [&] {
    for (Eigen::Index i = 0; i < n; ++i) buf[static_cast<std::size_t>(i)] = y[i];
    fft.forward();
    for (Eigen::Index m = 0; m < n; ++m) buf[static_cast<std::size_t>(m)] *= half_kinetic[m];
    fft.backward();
    for (Eigen::Index i = 0; i < n; ++i) y[i] = buf[static_cast<std::size_t>(i)];
  };

  // Exact flow of i psi_t = (V + g |psi|^2) psi over one step: the density
  // changes as e^{2 Im V t}, so the nonlinear phase integrates that growth.
  // The norm-independent coupling uses the norm at the middle of the step.
  Eigen::ArrayXd growth(n), phase_weight(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double s = v[i].imag() * h;
    growth[i] = std::exp(s);
    phase_weight[i] = std::abs(s) < 1e-8 ? h * (1.0 + s) : std::expm1(2.0 * s) / (2.0 * v[i].imag());
  }
  const Eigen::ArrayXcd linear_phase = (complex(0.0, -h) * v.real().array()).exp() * growth;
  auto potential_step = [&] {
    const Eigen::ArrayXd rho = y.array().abs2();
    double scale = g;
    if (norm_independent) scale /= (w.array() * rho * growth).sum();
    const Eigen::ArrayXd theta = scale * rho * phase_weight;
    y.array() *= linear_phase * (complex(0.0, -1.0) * theta.cast<complex>()).exp();
  };

  Trajectory traj;
  std::size_t samples = 0;
  auto record = [&](double t, double norm2) {
    const ComplexField f(grid, y);
    traj.times.push_back(t);
    traj.observables.push_back({std::sqrt(norm2), options.n0 * norm2, position_mean(f)});
    if (options.snapshot_every > 0 && samples % options.snapshot_every == 0) {
      traj.snapshot_times.push_back(t);
      traj.fields.push_back(f);
    }
    ++samples;
  };

  double norm2 = (w.array() * y.array().abs2()).sum();
  record(0.0, norm2);
  double last_valid = 0.0;
  const double bound2 = options.divergence_norm * options.divergence_norm;

  for (long long s = 1; s <= steps; ++s) {
    kinetic();
    potential_step();
    kinetic();

    const double t = static_cast<double>(s) * h;
    norm2 = (w.array() * y.array().abs2()).sum();
    if (!std::isfinite(norm2) || !y.allFinite())
      throw NumericalFailure("non-finite field at t = " + std::to_string(t), last_valid);
    if (norm2 > bound2) {
      traj.diverged = true;
      traj.divergence_time = t;
      break;
    }
    last_valid = t;
    if (s % static_cast<long long>(sample_every) == 0) record(t, norm2);
  }
  if (h < 0.0) {
    // Backward runs are reported in increasing time like forward ones.
    std::reverse(traj.times.begin(), traj.times.end());
    std::reverse(traj.observables.begin(), traj.observables.end());
    std::reverse(traj.snapshot_times.begin(), traj.snapshot_times.end());
    std::reverse(traj.fields.begin(), traj.fields.end());
  }
  return traj;
}

ComplexField perturb_along_mode(const StationaryState& state, const BdGMode& mode, double epsilon) {
  ComplexField out = state.psi;
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] += epsilon * (mode.u[i] + std::conj(mode.v[i]));
  return out;
}

}  // namespace ptbec
