#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "ptbec/stationary.hpp"

namespace ptbec {

enum class SweepParameter { N0a, Gamma };

std::string_view to_string(SweepParameter p);
double swept_value(const SystemParams& params, SweepParameter which) noexcept;
void set_swept_value(SystemParams& params, SweepParameter which, double value) noexcept;

/// States of one symmetry class ordered along a parameter sweep.
struct Branch {
  std::vector<StationaryState> states;
  SweepParameter swept = SweepParameter::N0a;
  SymmetryClass label = SymmetryClass::PTSymmetricGround;
  /// Set when the sweep stopped before its target (fold, merger or failure).
  bool truncated = false;
  /// (last converged parameter, nearest failed parameter) when truncated.
  std::optional<std::pair<double, double>> terminal_bracket;

  double parameter(std::size_t i) const { return swept_value(states.at(i).params, swept); }
  double first_parameter() const { return parameter(0); }
  double last_parameter() const { return parameter(states.size() - 1); }
  /// Value of the parameter held fixed during the sweep.
  double fixed_parameter() const;
};

struct SweepOptions {
  double min_step = 1e-5;
  /// Largest accepted phase-aligned field distance between neighbours.
  double max_jump = 0.25;
  NewtonOptions newton;
};

/// Natural-parameter continuation from a converged seed toward target.
/// Steps are halved on rejection (no convergence, class change or jump) and
/// regrown after consecutive successes; the sweep ends at target or once the
/// step falls below min_step, in which case the branch is flagged truncated.
Branch sweep_branch(const StationaryState& seed, SweepParameter which, double target, double step,
                    const SweepOptions& options = {});

enum class BifurcationKind { Tangent, Pitchfork };

std::string_view to_string(BifurcationKind k);

struct Bifurcation {
  BifurcationKind kind;
  SweepParameter parameter;
  double fixed_value;  // the parameter held constant (gamma for N0a sweeps)
  double location;
  double lower;
  double upper;
  std::vector<SymmetryClass> participants;
};

struct BifurcationOptions {
  /// Bisection window in the swept parameter.
  double window = 1e-4;
  /// Two fold brackets closer than this belong to the same tangent point.
  double merge_distance = 2e-3;
  NewtonOptions newton;
};

/// Locates tangent points (folds of PT-symmetric branches) and pitchfork
/// points (ends of PT-broken branches on a PT-symmetric branch). Terminal
/// brackets wider than the window are refined by bisection on existence.
std::vector<Bifurcation> detect_bifurcations(std::span<const Branch> branches,
                                             const BifurcationOptions& options = {});

}  // namespace ptbec
