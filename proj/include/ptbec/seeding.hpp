#pragma once

#include "ptbec/continuation.hpp"
#include "ptbec/stationary.hpp"

namespace ptbec {

struct SeedOptions {
  double n0a_step = 5e-3;
  double gamma_step = 2.5e-3;
  SweepOptions sweep;
};

/// PT-symmetric ground or excited state at `target`, reached from the linear
/// gamma = 0 eigenstate by continuation in N_0 a and then in gamma.
/// Throws NotAvailable if the path runs into a fold before the target.
StationaryState symmetric_state(const GridSpec& grid, const SystemParams& target,
                                SymmetryClass which, const SeedOptions& options = {});

/// PT-broken state at `target`, reached from a one-well localized state at
/// gamma = 0 (same N_0 a) by continuation in gamma. Throws NotAvailable if
/// no self-trapped state exists at the target interaction strength.
StationaryState broken_state(const GridSpec& grid, const SystemParams& target, SymmetryClass which,
                             const SeedOptions& options = {});

inline constexpr double kMaxDisplacement = 0.64;

/// Seeds a broken state past a pitchfork: displaces the symmetric state
/// along the normalized perturbation u + conj(v) of its near-zero BdG mode
/// and converges at the symmetric state's parameters. The amplitude doubles
/// from `amplitude` up to kMaxDisplacement until Newton leaves the symmetric
/// root. Throws NotAvailable if it never does.
StationaryState broken_from_mode(const StationaryState& symmetric, const ComplexField& u,
                                 const ComplexField& v, double amplitude,
                                 const NewtonOptions& newton = {});

}  // namespace ptbec
