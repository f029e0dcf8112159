#include <algorithm>
#include <cmath>
#include <limits>

#include "ptbec/continuation.hpp"
#include "ptbec/errors.hpp"

namespace ptbec {

std::string_view to_string(BifurcationKind k) {
  return k == BifurcationKind::Tangent ? "tangent" : "pitchfork";
}

namespace {

SymmetryClass pt_partner(SymmetryClass c) {
  switch (c) {
    case SymmetryClass::PTBrokenPlus: return SymmetryClass::PTBrokenMinus;
    case SymmetryClass::PTBrokenMinus: return SymmetryClass::PTBrokenPlus;
    default: return c;
  }
}

// Shrinks the terminal bracket of a truncated branch: the branch class still
// exists at `lower` and has been lost at `upper`.
std::pair<double, double> refine_end(const Branch& b, const BifurcationOptions& options) {
  auto [lower, upper] = *b.terminal_bracket;
  StationaryState last = b.states.back();
  while (std::abs(upper - lower) > options.window) {
    const double mid = 0.5 * (lower + upper);
    SystemParams params = last.params;
    set_swept_value(params, b.swept, mid);
    bool exists = false;
    try {
      StationaryState s = solve_stationary(last.psi, last.mu, params, options.newton);
      exists = s.symmetry == b.label;
      if (exists) last = std::move(s);
    } catch (const NonConvergence&) {
    }
    (exists ? lower : upper) = mid;
  }
  return {lower, upper};
}

// Symmetric branch whose state closest to `at` lies nearest to `psi`.
const Branch* nearest_symmetric(std::span<const Branch> branches, const Branch& broken, double at) {
  const Branch* best = nullptr;
  double best_dist = std::numeric_limits<double>::infinity();
  const ComplexField& psi = broken.states.back().psi;
  for (const Branch& b : branches) {
    if (!is_pt_symmetric(b.label) || b.swept != broken.swept || b.states.empty()) continue;
    if (b.fixed_parameter() != broken.fixed_parameter()) continue;
    std::size_t k = 0;
    for (std::size_t i = 1; i < b.states.size(); ++i)
      if (std::abs(b.parameter(i) - at) < std::abs(b.parameter(k) - at)) k = i;
    if (!(b.states[k].psi.grid() == psi.grid())) continue;
    const double d = phase_aligned_distance(b.states[k].psi, psi);
    if (d < best_dist) {
      best_dist = d;
      best = &b;
    }
  }
  return best;
}

void add_participant(Bifurcation& f, SymmetryClass c) {
  if (std::find(f.participants.begin(), f.participants.end(), c) == f.participants.end())
    f.participants.push_back(c);
}

}  // namespace

std::vector<Bifurcation> detect_bifurcations(std::span<const Branch> branches,
                                             const BifurcationOptions& options) {
  std::vector<Bifurcation> found;
  for (const Branch& b : branches) {
    if (!b.truncated || !b.terminal_bracket || b.states.empty()) continue;
    const bool symmetric = is_pt_symmetric(b.label);
    const BifurcationKind kind = symmetric ? BifurcationKind::Tangent : BifurcationKind::Pitchfork;
    const auto [lo, hi] = refine_end(b, options);
    const double location = 0.5 * (lo + hi);
    const double fixed = b.fixed_parameter();

    auto same = std::find_if(found.begin(), found.end(), [&](const Bifurcation& f) {
      return f.kind == kind && f.parameter == b.swept && f.fixed_value == fixed &&
             std::abs(f.location - location) < options.merge_distance;
    });
    if (same == found.end()) {
      found.push_back({kind, b.swept, fixed, location, std::min(lo, hi), std::max(lo, hi), {}});
      same = found.end() - 1;
    } else {
      // Keep the tighter of two brackets for the same point.
      if (std::abs(hi - lo) < same->upper - same->lower) {
        same->lower = std::min(lo, hi);
        same->upper = std::max(lo, hi);
        same->location = location;
      }
    }
    add_participant(*same, b.label);
    if (symmetric) {
      // A fold of PT-symmetric states always joins the ground and the excited state.
      add_participant(*same, SymmetryClass::PTSymmetricGround);
      add_participant(*same, SymmetryClass::PTSymmetricExcited);
    } else {
      add_participant(*same, pt_partner(b.label));
      if (const Branch* s = nearest_symmetric(branches, b, location)) add_participant(*same, s->label);
    }
  }
  std::sort(found.begin(), found.end(), [](const Bifurcation& a, const Bifurcation& b) {
    if (a.fixed_value != b.fixed_value) return a.fixed_value < b.fixed_value;
    return a.location < b.location;
  });
  return found;
}

}  // namespace ptbec
