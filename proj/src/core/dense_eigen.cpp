#include "ptbec/dense_eigen.hpp"

#include <complex>
#include <string>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "ptbec/errors.hpp"

namespace ptbec {

EigenDecomposition eig_general(Eigen::MatrixXcd a, bool want_vectors) {
  const auto n = static_cast<lapack_int>(a.rows());
  if (a.rows() != a.cols()) throw UsageError("eig_general needs a square matrix");
  EigenDecomposition out;
  out.values.resize(n);
  if (want_vectors) out.vectors.resize(n, n);
  lapack_complex_double dummy{};
  const lapack_int info = LAPACKE_zgeev(
      LAPACK_COL_MAJOR, 'N', want_vectors ? 'V' : 'N', n,
      (a.data()), n,
      (out.values.data()), &dummy, 1,
      want_vectors ? (out.vectors.data()) : &dummy,
      want_vectors ? n : 1);
  if (info != 0)
    throw EigenSolverError("zgeev failed with info = " + std::to_string(info), info);
  return out;
}

}  // namespace ptbec
