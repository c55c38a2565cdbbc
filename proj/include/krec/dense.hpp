#pragma once

#include "krec/types.hpp"

namespace krec {

/// Thin QR factorization M = Q R with R(j,j) real and nonnegative.
struct EconQR {
  DenseMatrix Q;  ///< nrows x ncols, orthonormal columns
  DenseMatrix R;  ///< ncols x ncols, upper triangular
};

/// Economic SVD M = L diag(sigma) J^*.
struct EconSVD {
  DenseMatrix L;
  RealVector sigma;  ///< non-increasing, nonnegative
  DenseMatrix J;
};

struct EigenDecomposition {
  Vector values;
  DenseMatrix vectors;  ///< unit-norm columns
  /// 1-norm condition estimate of the eigenvector matrix (infinity when singular).
  double vector_condition = 1.0;
};

/// M X = X T with orthonormal X and upper triangular T.
struct PartialSchur {
  DenseMatrix X;
  DenseMatrix T;
};

/// Householder QR; requires rows >= cols. Rank deficient input is allowed.
EconQR qr_econ(const DenseMatrix& M);

EconSVD svd_econ(const DenseMatrix& M);

/// Eigendecomposition of a square matrix. Throws ConvergenceError if the
/// QR iteration does not converge.
EigenDecomposition eig_dense(const DenseMatrix& M);

/// Partial Schur form for the k eigenvalues of smallest modulus (ties broken
/// by ascending argument), with diag(T) ordered by ascending modulus.
///
/// The selected eigenvectors are orthonormalized in order; because their
/// leading spans are nested invariant subspaces, X^* M X is upper triangular
/// for diagonalizable M. Throws DefectiveError when the selected
/// eigenvector block is numerically rank deficient (relative 1e-10).
PartialSchur partial_schur_closest_to_origin(const DenseMatrix& M, Index k);

/// Ordering used by partial_schur_closest_to_origin.
bool closer_to_origin(Complex a, Complex b);

/// Solves M X = B by LU with partial pivoting. Throws SingularMatrixError
/// carrying the pivot index when an exactly zero pivot is met.
DenseMatrix lu_solve(const DenseMatrix& M, const DenseMatrix& B);

/// Ratio of smallest to largest |R(j,j)|; the cheap conditioning surrogate
/// used for whitened bases.
double r_diagonal_ratio(const DenseMatrix& R);

}  // namespace krec
