#pragma once

#include <complex>
#include <string_view>
#include <vector>

#include "ptbec/field.hpp"
#include "ptbec/potential.hpp"

namespace ptbec {

enum class SymmetryClass {
  PTSymmetricGround,
  PTSymmetricExcited,
  PTBrokenPlus,   // Im mu > 0 (gain side); <x> > 0 when gamma = 0
  PTBrokenMinus,  // Im mu < 0 (loss side); <x> < 0 when gamma = 0
};

std::string_view to_string(SymmetryClass c);
bool is_pt_symmetric(SymmetryClass c) noexcept;

struct StationaryState {
  ComplexField psi;  // ||psi|| = 1
  complex mu;
  SystemParams params;
  SymmetryClass symmetry;
  double residual;  // ||H[psi] psi - mu psi||
  int iterations = 0;
};

struct LinearEigenpair {
  complex mu;
  ComplexField field;  // normalized, PT gauge
};

/// Dense diagonalization of the linear (N_0 a = 0) Hamiltonian. Returns the
/// k eigenpairs with smallest Re mu, ties ordered by Im mu.
std::vector<LinearEigenpair> linear_spectrum(const GridSpec& grid, const PotentialParams& p,
                                             std::size_t k);

/// H[psi] psi = -psi'' + V psi + g |psi|^2 psi (g |psi|^2/||psi||^2 for the
/// norm-independent nonlinearity).
ComplexField apply_hamiltonian(const ComplexField& psi, const SystemParams& params);

double stationary_residual(const ComplexField& psi, complex mu, const SystemParams& params);

struct NewtonOptions {
  double tolerance = 1e-9;
  int max_iterations = 40;
};

/// Thresholds separating PT-symmetric from PT-broken states.
inline constexpr double kSymmetricDefect = 1e-6;
inline constexpr double kSymmetricImagMu = 1e-8;

SymmetryClass classify_symmetry(const ComplexField& psi, complex mu);

/// Newton iteration on the discretized stationary equation with unknowns
/// (psi, mu), closed by ||psi|| = 1 and the phase pin Im<guess|psi> = 0.
/// The result is normalized; for normalized states both nonlinearities share
/// the same stationary solutions.
/// Throws NonConvergence when the residual stays above tolerance.
StationaryState solve_stationary(const ComplexField& guess_psi, complex guess_mu,
                                 const SystemParams& params, const NewtonOptions& options = {});

/// <psi|H[psi]|psi> / <psi|psi>, a chemical-potential guess for a trial field.
complex rayleigh_quotient(const ComplexField& psi, const SystemParams& params);

}  // namespace ptbec
