#pragma once

#include <memory>

#include <Eigen/Core>

#include "ptbec/grid.hpp"

namespace ptbec {

/// Squared wavenumbers k_m^2 in FFT bin order for the periodic extension of
/// the grid (period n dx). The Nyquist bin carries (pi/dx)^2.
Eigen::VectorXd kinetic_symbol(const GridSpec& grid);

/// Dense matrix of -d^2/dx^2 acting through the same Fourier symbol. Real,
/// symmetric and circulant, so it commutes with the grid reflection.
Eigen::MatrixXd kinetic_matrix(const GridSpec& grid);

/// Memoized kinetic_matrix; safe to call from several threads.
std::shared_ptr<const Eigen::MatrixXd> shared_kinetic_matrix(const GridSpec& grid);

}  // namespace ptbec
