#include <cmath>

#include "ptbec/errors.hpp"
#include "ptbec/stability.hpp"

namespace ptbec {

namespace {

bool is_stable(const StationaryState& s, Nonlinearity kind) {
  const BdGSpectrum spec = solve_bdg(s, kind);
  return spec.modes.empty() || classify_stability(spec.modes).stable;
}

}  // namespace

Onset instability_onset(const Branch& branch, Nonlinearity kind, const OnsetOptions& options) {
  if (branch.states.size() < 2) throw NotFound("branch too short to bracket a stability change");
  const bool first = is_stable(branch.states.front(), kind);
  std::size_t hit = 0;
  for (std::size_t i = 1; i < branch.states.size(); ++i) {
    if (is_stable(branch.states[i], kind) != first) {
      hit = i;
      break;
    }
  }
  if (hit == 0) throw NotFound("stability does not change along the branch");

  // `near` keeps the verdict of the first state.
  StationaryState near = branch.states[hit - 1];
  double a = branch.parameter(hit - 1);
  double b = branch.parameter(hit);
  while (std::abs(b - a) > options.window) {
    const double mid = 0.5 * (a + b);
    SystemParams params = near.params;
    set_swept_value(params, branch.swept, mid);
    StationaryState s = solve_stationary(near.psi, near.mu, params, options.newton);
    if (s.symmetry != branch.label)
      throw NotFound("branch changes symmetry class inside the onset bracket");
    if (is_stable(s, kind) == first) {
      a = mid;
      near = std::move(s);
    } else {
      b = mid;
    }
  }
  return {0.5 * (a + b), std::min(a, b), std::max(a, b)};
}

}  // namespace ptbec
