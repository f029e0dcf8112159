#include "ptbec/seeding.hpp"

#include <algorithm>
#include <cmath>

#include "ptbec/errors.hpp"

namespace ptbec {

namespace {

SystemParams with(const SystemParams& base, double gamma, double n0a) {
  SystemParams p = base;
  p.potential.gamma = gamma;
  p.n0a = n0a;
  return p;
}

StationaryState follow(const StationaryState& from, SweepParameter which, double target,
                       double step, const SeedOptions& options) {
  if (swept_value(from.params, which) == target) return from;
  const Branch b = sweep_branch(from, which, target, step, options.sweep);
  if (b.last_parameter() != target)
    throw NotAvailable(std::string(to_string(from.symmetry)) + " branch ends at " +
                       std::string(to_string(which)) + " = " + std::to_string(b.last_parameter()) +
                       " before reaching " + std::to_string(target));
  return b.states.back();
}

// Flips a broken state onto its PT image when it came out on the wrong side.
StationaryState orient(StationaryState s, SymmetryClass which, const NewtonOptions& newton) {
  if (s.symmetry == which) return s;
  StationaryState t = solve_stationary(pt_transform(s.psi), std::conj(s.mu), s.params, newton);
  if (t.symmetry != which) throw NotAvailable("could not reach the requested PT-broken class");
  return t;
}

// Sum or difference of the two lowest linear gamma = 0 states, localized in
// the right well for Plus and in the left well for Minus.
ComplexField localized_seed(const GridSpec& grid, const SystemParams& target, SymmetryClass which) {
  PotentialParams p0 = target.potential;
  p0.gamma = 0.0;
  const auto lin = linear_spectrum(grid, p0, 2);
  // In PT gauge the excited state is i times an odd real function.
  ComplexField a = lin[0].field + complex(0.0, 1.0) * lin[1].field;
  ComplexField b = lin[0].field - complex(0.0, 1.0) * lin[1].field;
  const bool a_right = position_mean(a) > 0.0;
  const bool want_right = which == SymmetryClass::PTBrokenPlus;
  return normalized(a_right == want_right ? a : b);
}

}  // namespace

StationaryState symmetric_state(const GridSpec& grid, const SystemParams& target,
                                SymmetryClass which, const SeedOptions& options) {
  if (!is_pt_symmetric(which)) throw UsageError("symmetric_state needs a PT-symmetric class");
  PotentialParams p0 = target.potential;
  p0.gamma = 0.0;
  const auto lin = linear_spectrum(grid, p0, 2);
  const auto& pair = lin[which == SymmetryClass::PTSymmetricGround ? 0 : 1];
  StationaryState s =
      solve_stationary(pair.field, pair.mu, with(target, 0.0, 0.0), options.sweep.newton);
  s = follow(s, SweepParameter::N0a, target.n0a, options.n0a_step, options);
  return follow(s, SweepParameter::Gamma, target.potential.gamma, options.gamma_step, options);
}

StationaryState broken_state(const GridSpec& grid, const SystemParams& target, SymmetryClass which,
                             const SeedOptions& options) {
  if (is_pt_symmetric(which)) throw UsageError("broken_state needs a PT-broken class");
  const ComplexField seed = localized_seed(grid, target, which);

  // A localized guess usually lands directly on the self-trapped state.
  try {
    StationaryState s =
        solve_stationary(seed, rayleigh_quotient(seed, target), target, options.sweep.newton);
    if (!is_pt_symmetric(s.symmetry)) return orient(std::move(s), which, options.sweep.newton);
  } catch (const NonConvergence&) {
  }

  // Otherwise start deep in the self-trapping regime at gamma = 0, raise
  // gamma there and come back in N0a.
  constexpr double kDeep = 0.08;
  const double deep = target.n0a >= 0.0 ? std::max(target.n0a, kDeep) : std::min(target.n0a, -kDeep);
  const SystemParams start = with(target, 0.0, deep);
  auto seeded = [&] {
    try {
      return solve_stationary(seed, rayleigh_quotient(seed, start), start, options.sweep.newton);
    } catch (const NonConvergence&) {
      throw NotAvailable("no self-trapped state found at gamma = 0");
    }
  };
  StationaryState s = seeded();
  if (is_pt_symmetric(s.symmetry)) throw NotAvailable("no self-trapped state found at gamma = 0");
  s = orient(std::move(s), which, options.sweep.newton);
  s = follow(s, SweepParameter::Gamma, target.potential.gamma, options.gamma_step, options);
  return follow(s, SweepParameter::N0a, target.n0a, options.n0a_step, options);
}

StationaryState broken_from_mode(const StationaryState& symmetric, const ComplexField& u,
                                 const ComplexField& v, double amplitude,
                                 const NewtonOptions& newton) {
  if (!(amplitude > 0.0)) throw UsageError("displacement amplitude must be positive");
  ComplexField dir = u;
  for (std::size_t i = 0; i < dir.size(); ++i) dir[i] += std::conj(v[i]);
  dir = normalized(dir);
  // Newton falls back onto the symmetric root unless the displacement is
  // comparable to the distance of the broken pair, so escalate.
  for (double a = amplitude; a <= kMaxDisplacement; a *= 2.0) {
    const ComplexField guess = normalized(symmetric.psi + complex(a) * dir);
    try {
      StationaryState s =
          solve_stationary(guess, rayleigh_quotient(guess, symmetric.params), symmetric.params, newton);
      if (!is_pt_symmetric(s.symmetry)) return s;
    } catch (const NonConvergence&) {
    }
  }
  throw NotAvailable("displacement along the mode does not reach a PT-broken state");
}

}  // namespace ptbec
