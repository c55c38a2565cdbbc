#include "krec/oracle.hpp"

#include <complex>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "krec/dense.hpp"
#include "krec/error.hpp"

namespace krec {

namespace {

// A^{-1/2} = Q sqrt(T)^{-1} Q^* from the complex Schur form A = Q T Q^*.
DenseMatrix inv_sqrt_schur(const DenseMatrix& A) {
  const Index n = A.rows();
  DenseMatrix T = A, Q(n, n);
  Vector w(n);
  lapack_int sdim = 0;
  const lapack_int info = LAPACKE_zgees(LAPACK_COL_MAJOR, 'V', 'N', nullptr, static_cast<lapack_int>(n), T.data(),
                                        static_cast<lapack_int>(n), &sdim, w.data(), Q.data(), static_cast<lapack_int>(n));
  if (info != 0) throw ConvergenceError("oracle: Schur decomposition failed (info " + std::to_string(info) + ")");
  for (Index i = 0; i < n; ++i)
    if (w[i].imag() == 0.0 && w[i].real() <= 0.0)
      throw DomainError("oracle: inverse square root needs no eigenvalues on the closed negative real axis");
  DenseMatrix R(n, n);
  Eigen::matrix_sqrt_triangular(T, R);
  const DenseMatrix Rinv = R.triangularView<Eigen::Upper>().solve(DenseMatrix::Identity(n, n));
  return Q * Rinv * Q.adjoint();
}

}  // namespace

DenseMatrix dense_matrix_function(const DenseMatrix& A, const ScalarFunction& f) {
  const Index n = A.rows();
  if (n != A.cols()) throw DimensionError("dense_matrix_function requires a square matrix");
  const DenseMatrix I = DenseMatrix::Identity(n, n);
  switch (f.kind) {
    case ScalarFunction::Kind::Inv:
      return lu_solve(A, I);
    case ScalarFunction::Kind::InvSqrt:
      return inv_sqrt_schur(A);
    case ScalarFunction::Kind::Exp:
      return expm_pade(f.tau * A);
  }
  throw DomainError("unknown function kind");
}

std::optional<Vector> oracle_exact(const SparseMatrix& A, const Vector& b, const ScalarFunction& f, Index cap) {
  if (A.rows() != A.cols() || b.size() != A.rows()) throw DimensionError("oracle: dimension mismatch");
  if (A.rows() > cap) return std::nullopt;
  if (f.kind == ScalarFunction::Kind::Inv) return Vector(lu_solve(A.to_dense(), b));
  return Vector(dense_matrix_function(A.to_dense(), f) * b);
}

std::optional<Vector> OracleCache::apply(const SparseMatrix& A, const Vector& b, const ScalarFunction& f) {
  if (A.rows() != A.cols() || b.size() != A.rows()) throw DimensionError("oracle: dimension mismatch");
  if (A.rows() > cap_) return std::nullopt;
  const std::uint64_t fp = A.fingerprint();
  const std::string name = f.name();
  for (auto it = entries_.begin(); it != entries_.end(); ++it) {
    if (it->fingerprint == fp && it->function == name) {
      entries_.splice(entries_.begin(), entries_, it);
      return Vector(entries_.front().fA * b);
    }
  }
  entries_.push_front({fp, name, dense_matrix_function(A.to_dense(), f)});
  while (entries_.size() > max_entries_) entries_.pop_back();
  return Vector(entries_.front().fA * b);
}

}  // namespace krec
