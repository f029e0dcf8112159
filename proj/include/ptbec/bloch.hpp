#pragma once

#include <span>
#include <vector>

#include "ptbec/continuation.hpp"
#include "ptbec/dynamics.hpp"
#include "ptbec/seeding.hpp"

namespace ptbec {

struct BlochBasis {
  ComplexField e1;  // ground state
  ComplexField e2;  // orthonormalized excited state
  SystemParams base_params;
  complex mu_ground;
  complex mu_excited;
};

/// Ground and excited PT-symmetric states at params, orthonormalized and
/// phase-fixed to positive real origin values. Throws NotAvailable when the
/// pair does not exist (past the tangent point or the linear threshold).
BlochBasis build_basis(const GridSpec& grid, const SystemParams& params,
                       const SeedOptions& options = {});

/// Basis from already converged ground and excited states.
BlochBasis basis_from_states(const StationaryState& ground, const StationaryState& excited);

struct BlochPoint {
  double R = 0.0;
  double theta = 0.0;
  double phi = 0.0;
  double chi = 0.0;
  double err = 0.0;
};

BlochPoint project(const ComplexField& psi, const BlochBasis& basis);

/// R = 1, chi = 0 wave packets cos(theta/2) e^{i phi} e1 + sin(theta/2) e2.
std::vector<ComplexField> great_circle_states(const BlochBasis& basis,
                                              std::span<const double> thetas, double phi);

struct BlochSample {
  double t;
  BlochPoint point;
};

std::vector<BlochSample> trajectory_to_bloch(const Trajectory& traj, const BlochBasis& basis);

double max_error(std::span<const BlochSample> samples);

/// Eigenstate curve on the sphere: each branch state scaled to the norm
/// R = sqrt(N0a / basis N0a), so that N0a R^2 equals the basis interaction.
/// States with N0a of the wrong sign (or zero) are skipped.
std::vector<BlochPoint> project_branch(const Branch& branch, const BlochBasis& basis);

}  // namespace ptbec
