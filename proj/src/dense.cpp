#include "krec/dense.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "krec/error.hpp"

namespace krec {

EconQR qr_econ(const DenseMatrix& M) {
  const Index n = M.rows();
  const Index k = M.cols();
  if (n < k) throw DimensionError("qr_econ requires rows >= cols");
  Eigen::HouseholderQR<DenseMatrix> qr(M);
  EconQR out;
  out.Q = qr.householderQ() * DenseMatrix::Identity(n, k);
  out.R = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  // Fix the phases so that diag(R) is real and nonnegative.
  for (Index j = 0; j < k; ++j) {
    const Complex d = out.R(j, j);
    const double a = std::abs(d);
    if (a == 0.0) continue;
    const Complex phase = std::conj(d) / a;
    out.R.row(j) *= phase;
    out.Q.col(j) *= std::conj(phase);
    out.R(j, j) = Complex(a, 0.0);
  }
  return out;
}

EconSVD svd_econ(const DenseMatrix& M) {
  EconSVD out;
  if (M.rows() == 0 || M.cols() == 0) {
    out.L = DenseMatrix(M.rows(), 0);
    out.J = DenseMatrix(M.cols(), 0);
    out.sigma = RealVector(0);
    return out;
  }
  Eigen::BDCSVD<DenseMatrix> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  out.L = svd.matrixU();
  out.sigma = svd.singularValues();
  out.J = svd.matrixV();
  return out;
}

EigenDecomposition eig_dense(const DenseMatrix& M) {
  if (M.rows() != M.cols()) throw DimensionError("eig_dense requires a square matrix");
  EigenDecomposition out;
  if (M.rows() == 0) return out;
  Eigen::ComplexEigenSolver<DenseMatrix> es(M, /*computeEigenvectors=*/true);
  if (es.info() != Eigen::Success) throw ConvergenceError("eig_dense: QR iteration did not converge");
  out.values = es.eigenvalues();
  out.vectors = es.eigenvectors();
  for (Index j = 0; j < out.vectors.cols(); ++j) {
    const double nrm = out.vectors.col(j).norm();
    if (nrm > 0.0) out.vectors.col(j) /= nrm;
  }
  Eigen::PartialPivLU<DenseMatrix> lu(out.vectors);
  const double rc = lu.rcond();
  out.vector_condition = rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
  return out;
}

bool closer_to_origin(Complex a, Complex b) {
  const double ma = std::abs(a);
  const double mb = std::abs(b);
  if (ma != mb) return ma < mb;
  return std::arg(a) < std::arg(b);
}

PartialSchur partial_schur_closest_to_origin(const DenseMatrix& M, Index k) {
  const Index n = M.rows();
  if (n != M.cols()) throw DimensionError("partial Schur requires a square matrix");
  if (k < 0 || k > n) throw DimensionError("partial Schur: k out of range");
  PartialSchur out;
  if (k == 0) {
    out.X = DenseMatrix(n, 0);
    out.T = DenseMatrix(0, 0);
    return out;
  }
  const EigenDecomposition eig = eig_dense(M);
  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return closer_to_origin(eig.values[a], eig.values[b]); });
  DenseMatrix W(n, k);
  for (Index j = 0; j < k; ++j) W.col(j) = eig.vectors.col(order[j]);
  EconQR qr = qr_econ(W);
  const double ratio = r_diagonal_ratio(qr.R);
  if (!(ratio > 1e-10))
    throw DefectiveError("partial Schur: selected eigenvector block is numerically rank deficient (ratio " +
                         std::to_string(ratio) + ")");
  out.X = std::move(qr.Q);
  DenseMatrix T = out.X.adjoint() * M * out.X;
  out.T = T.triangularView<Eigen::Upper>();
  return out;
}

DenseMatrix lu_solve(const DenseMatrix& M, const DenseMatrix& B) {
  const Index n = M.rows();
  if (n != M.cols()) throw DimensionError("lu_solve requires a square matrix");
  if (B.rows() != n) throw DimensionError("lu_solve: right-hand side has wrong number of rows");
  DenseMatrix LU = M;
  DenseMatrix X = B;
  for (Index j = 0; j < n; ++j) {
    Index p;
    LU.col(j).tail(n - j).cwiseAbs().maxCoeff(&p);
    p += j;
    if (LU(p, j) == Complex(0.0)) throw SingularMatrixError("lu_solve: exactly singular matrix", j);
    if (p != j) {
      LU.row(p).swap(LU.row(j));
      X.row(p).swap(X.row(j));
    }
    const Index rest = n - j - 1;
    if (rest == 0) continue;
    LU.col(j).tail(rest) /= LU(j, j);
    LU.bottomRightCorner(rest, rest).noalias() -= LU.col(j).tail(rest) * LU.row(j).tail(rest);
    X.bottomRows(rest).noalias() -= LU.col(j).tail(rest) * X.row(j);
  }
  LU.triangularView<Eigen::Upper>().solveInPlace(X);
  return X;
}

double r_diagonal_ratio(const DenseMatrix& R) {
  const Index k = std::min(R.rows(), R.cols());
  if (k == 0) return 1.0;
  const RealVector d = R.diagonal().head(k).cwiseAbs();
  const double mx = d.maxCoeff();
  if (mx == 0.0) return 0.0;
  return d.minCoeff() / mx;
}

}  // namespace krec
