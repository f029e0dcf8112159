#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ptbec/continuation.hpp"
#include "ptbec/stationary.hpp"

namespace ptbec {

/// One linearization eigenpair. Perturbations take the form
/// u e^{-i omega t} + conj(v) e^{i conj(omega) t}.
struct BdGMode {
  complex omega;
  ComplexField u;
  ComplexField v;
  /// Index of the mode closest to -conj(omega) in the same spectrum.
  std::size_t partner_index = 0;
  /// Global-phase zero mode (and, for the norm-independent problem, the
  /// norm-scaling mode); excluded from classification.
  bool is_trivial = false;
  /// Most of the weight sits near the grid edge.
  bool is_boundary = false;
};

struct BdGSpectrum {
  /// Ordered by |Re omega|, then by Im omega descending.
  std::vector<BdGMode> modes;
  std::size_t boundary_filtered = 0;
};

/// Discretized linearization operator L acting on (u, v); omega (u, v) = L (u, v).
Eigen::MatrixXcd bdg_matrix(const StationaryState& state, Nonlinearity kind);

/// Relative residual ||L (u, v) - omega (u, v)|| / ||(u, v)||.
double bdg_residual(const StationaryState& state, Nonlinearity kind, complex omega,
                    const ComplexField& u, const ComplexField& v);

/// Dense solve of the BdG problem. Keeps the k nontrivial modes of smallest
/// |Re omega| together with their partners (k = 0 keeps all), followed by
/// the trivial modes. Boundary-artifact modes are dropped and counted.
BdGSpectrum solve_bdg(const StationaryState& state, Nonlinearity kind, std::size_t k = 0);

inline constexpr double kGrowthTolerance = 1e-8;

struct StabilityVerdict {
  bool stable = true;
  double max_growth_rate = 0.0;
  std::optional<BdGMode> leading_mode;
};

/// stable iff every nontrivial mode has Im omega <= 1e-8.
/// Throws UsageError on an empty mode list.
StabilityVerdict classify_stability(std::span<const BdGMode> modes);

struct Onset {
  double location;
  double lower;
  double upper;
};

struct OnsetOptions {
  double window = 1e-4;
  NewtonOptions newton;
};

/// Brackets the first change of stability along the branch (scanning from
/// its first state) and refines it by bisection, re-solving the stationary
/// state at each midpoint. Throws NotFound if the stability never changes.
Onset instability_onset(const Branch& branch, Nonlinearity kind, const OnsetOptions& options = {});

}  // namespace ptbec
