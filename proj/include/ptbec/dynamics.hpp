#pragma once

#include <optional>
#include <vector>

#include "ptbec/field.hpp"
#include "ptbec/potential.hpp"
#include "ptbec/stability.hpp"

namespace ptbec {

struct Observables {
  double norm;
  double n_particles;
  double x_mean;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Observables> observables;
  /// Field snapshots; snapshot_times[i] belongs to fields[i].
  std::vector<double> snapshot_times;
  std::vector<ComplexField> fields;
  bool diverged = false;
  std::optional<double> divergence_time;
};

struct PropagateOptions {
  double n0 = 1.0;
  double divergence_norm = 1e3;
  /// Store a field every this many samples (0 keeps none).
  std::size_t snapshot_every = 1;
};

/// Strang split-step integration of
///   i psi_t = -psi'' + V psi + g |psi|^2 psi
/// (|psi|^2 / ||psi||^2 for the norm-independent nonlinearity). A negative
/// t_final integrates backward in time. Samples are taken at t = 0 and then
/// every sample_every steps; the run halts with diverged set once the norm
/// exceeds divergence_norm. Samples are returned in increasing time, so a
/// backward run ends at t = 0. Throws NumericalFailure on NaN or Inf.
Trajectory propagate(const ComplexField& psi0, const SystemParams& params, double t_final,
                     double dt, std::size_t sample_every, const PropagateOptions& options = {});

/// psi_0 + epsilon (u + conj(v)), not renormalized.
ComplexField perturb_along_mode(const StationaryState& state, const BdGMode& mode, double epsilon);

}  // namespace ptbec
