#pragma once

#include <Eigen/Core>

namespace ptbec {

struct EigenDecomposition {
  Eigen::VectorXcd values;
  /// Right eigenvectors as columns; empty when not requested.
  Eigen::MatrixXcd vectors;
};

/// Dense eigendecomposition of a general complex matrix (LAPACK zgeev).
/// Throws EigenSolverError on failure.
EigenDecomposition eig_general(Eigen::MatrixXcd a, bool want_vectors = true);

}  // namespace ptbec
