#include "ptbec/continuation.hpp"

#include <algorithm>
#include <cmath>

#include "ptbec/errors.hpp"

namespace ptbec {

std::string_view to_string(SweepParameter p) { return p == SweepParameter::N0a ? "n0a" : "gamma"; }

double swept_value(const SystemParams& params, SweepParameter which) noexcept {
  return which == SweepParameter::N0a ? params.n0a : params.potential.gamma;
}

void set_swept_value(SystemParams& params, SweepParameter which, double value) noexcept {
  if (which == SweepParameter::N0a)
    params.n0a = value;
  else
    params.potential.gamma = value;
}

double Branch::fixed_parameter() const {
  const SystemParams& p = states.at(0).params;
  return swept == SweepParameter::N0a ? p.potential.gamma : p.n0a;
}

namespace {

// Linear extrapolation through the last two states.
std::pair<ComplexField, complex> predict(const std::vector<StationaryState>& states,
                                         SweepParameter which, double next) {
  const StationaryState& last = states.back();
  if (states.size() < 2) return {last.psi, last.mu};
  const StationaryState& prev = states[states.size() - 2];
  const double p1 = swept_value(last.params, which);
  const double p0 = swept_value(prev.params, which);
  const double s = (next - p1) / (p1 - p0);
  // Both fields are pinned to nearby phases, but align explicitly anyway.
  const complex ov = inner_product(prev.psi, last.psi);
  const complex phase = std::abs(ov) > 0.0 ? ov / std::abs(ov) : complex(1.0);
  ComplexField psi = last.psi + complex(s) * (last.psi - phase * prev.psi);
  return {psi, last.mu + s * (last.mu - prev.mu)};
}

}  // namespace

Branch sweep_branch(const StationaryState& seed, SweepParameter which, double target, double step,
                    const SweepOptions& options) {
  if (!(step > 0.0)) throw UsageError("continuation step must be positive");
  if (!(options.min_step > 0.0)) throw UsageError("minimum continuation step must be positive");

  Branch branch;
  branch.swept = which;
  branch.label = seed.symmetry;
  branch.states.push_back(seed);

  const double start = swept_value(seed.params, which);
  const double dir = target >= start ? 1.0 : -1.0;
  double h = step;
  int successes = 0;

  while (true) {
    const double current = branch.last_parameter();
    if (dir * (target - current) <= 0.0) break;
    double next = current + dir * h;
    if (dir * (next - target) > 0.0) next = target;

    SystemParams params = branch.states.back().params;
    set_swept_value(params, which, next);
    auto [guess, mu] = predict(branch.states, which, next);

    bool accepted = false;
    try {
      StationaryState s = solve_stationary(guess, mu, params, options.newton);
      accepted = s.symmetry == branch.label &&
                 phase_aligned_distance(s.psi, branch.states.back().psi) <= options.max_jump;
      if (accepted) branch.states.push_back(std::move(s));
    } catch (const NonConvergence&) {
    }

    if (accepted) {
      if (++successes >= 2) {
        h = std::min(1.5 * h, step);
        successes = 0;
      }
      continue;
    }
    successes = 0;
    if (h * 0.5 < options.min_step) {
      branch.truncated = true;
      branch.terminal_bracket = std::make_pair(current, next);
      break;
    }
    h *= 0.5;
  }
  return branch;
}

}  // namespace ptbec
