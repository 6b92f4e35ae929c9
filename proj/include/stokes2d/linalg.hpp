#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <complex>
#include <sstream>
#include <string>

#define LAPACK_COMPLEX_CPP
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "types.hpp"

namespace stokes2d {

using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

// Right singular vector belonging to the smallest singular value of A.
// LAPACK orders singular values descending, so this is the last row of V^H;
// that convention doubles as the deterministic tie-break.
inline CVec smallest_singular_vector(CMat A) {
  const lapack_int m = static_cast<lapack_int>(A.rows());
  const lapack_int n = static_cast<lapack_int>(A.cols());
  if (m == 0 || n == 0) throw SolverError("SVD of an empty matrix");
  RVec s(std::min(m, n));
  CMat vt(n, n);
  lapack_int info;
  if (m >= n) {
    CMat u(m, n);
    info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'S', m, n, A.data(), m, s.data(),
                          u.data(), m, vt.data(), n);
  } else {
    // fewer rows than columns: the null directions only come out of a full SVD
    CMat u(m, m);
    info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'A', m, n, A.data(), m, s.data(),
                          u.data(), m, vt.data(), n);
  }
  if (info != 0)
    throw SolverError("SVD did not converge (zgesdd info=" + std::to_string(info) + ")");
  return vt.row(n - 1).adjoint();
}

struct GeneralizedEigs {
  CVec alpha, beta;  // eigenvalues alpha/beta; |beta| ~ 0 marks infinite ones
};

// All eigenvalues of the pencil (A, B) via complex QZ.
inline GeneralizedEigs generalized_eigenvalues(CMat A, CMat B) {
  const lapack_int n = static_cast<lapack_int>(A.rows());
  if (A.cols() != n || B.rows() != n || B.cols() != n)
    throw SolverError("pencil matrices must be square and of equal size");
  GeneralizedEigs out;
  out.alpha.resize(n);
  out.beta.resize(n);
  CMat Acopy = A, Bcopy = B;
  const lapack_int info =
      LAPACKE_zggev(LAPACK_COL_MAJOR, 'N', 'N', n, Acopy.data(), n, Bcopy.data(), n,
                    out.alpha.data(), out.beta.data(), nullptr, 1, nullptr, 1);
  if (info != 0) {
    std::ostringstream msg;
    msg << "generalized eigenvalue solver failed (zggev info=" << info
        << ", n=" << n << ", |A|=" << A.norm() << ", |B|=" << B.norm() << ")";
    if (n <= 8) msg << "\nA =\n" << A << "\nB =\n" << B;
    throw SolverError(msg.str());
  }
  return out;
}

struct LsqResult {
  RVec x;
  lapack_int rank = 0;
};

// min |Ax - b| by column-pivoted QR with rcond-style truncation of the
// trailing triangle (dgelsy). Handles rank deficiency by solving the
// truncated problem, which is exactly the "drop the gauge directions"
// behaviour the assembly relies on.
inline LsqResult solve_least_squares(RMat A, RVec b, double rcond) {
  const lapack_int m = static_cast<lapack_int>(A.rows());
  const lapack_int n = static_cast<lapack_int>(A.cols());
  if (b.size() != m) throw SolverError("least-squares rhs length mismatch");
  const lapack_int ldb = std::max(m, n);
  RVec bx = RVec::Zero(ldb);
  bx.head(m) = b;
  std::vector<lapack_int> jpvt(n, 0);
  LsqResult out;
  const lapack_int info =
      LAPACKE_dgelsy(LAPACK_COL_MAJOR, m, n, 1, A.data(), m, bx.data(), ldb,
                     jpvt.data(), rcond, &out.rank);
  if (info != 0)
    throw SolverError("least-squares solve failed (dgelsy info=" + std::to_string(info) + ")");
  out.x = bx.head(n);
  return out;
}

}  // namespace stokes2d
