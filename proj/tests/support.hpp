#pragma once

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "krec/random.hpp"
#include "krec/sparse.hpp"
#include "krec/types.hpp"

namespace krec::fixtures {

inline DenseMatrix random_dense(Index rows, Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return gaussian_matrix(rows, cols, rng);
}

inline Vector random_vector(Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return gaussian_vector(n, rng);
}

inline DenseMatrix random_unitary(Index n, std::uint64_t seed) {
  Eigen::HouseholderQR<DenseMatrix> qr(random_dense(n, n, seed));
  return qr.householderQ() * DenseMatrix::Identity(n, n);
}

/// Q diag(lambda) Q^* with lambda log-spaced in [lo, hi] (linearly spaced
/// when lo <= 0).
inline DenseMatrix random_hpd(Index n, std::uint64_t seed, double lo = 1.0, double hi = 100.0) {
  const DenseMatrix Q = random_unitary(n, seed);
  Vector lambda(n);
  for (Index i = 0; i < n; ++i) {
    const double t = n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.0;
    lambda[i] = lo > 0.0 ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t;
  }
  DenseMatrix A = Q * lambda.asDiagonal() * Q.adjoint();
  return 0.5 * (A + A.adjoint());
}

/// Non-Hermitian matrix with spectrum in the right half plane: shift*I + G/sqrt(n).
inline DenseMatrix random_shifted_nonhermitian(Index n, std::uint64_t seed, double shift = 3.0) {
  return DenseMatrix::Identity(n, n) * shift + random_dense(n, n, seed) / std::sqrt(static_cast<double>(n));
}

inline SparseMatrix to_sparse(const DenseMatrix& M) {
  std::vector<SparseMatrix::Triplet> t;
  for (Index j = 0; j < M.cols(); ++j)
    for (Index i = 0; i < M.rows(); ++i)
      if (M(i, j) != Complex(0.0)) t.push_back({i, j, M(i, j)});
  return SparseMatrix::from_triplets(M.rows(), M.cols(), std::move(t));
}

/// Random sparse matrix with about `per_row` off-diagonal entries per row
/// and diagonal `diag`.
inline SparseMatrix random_sparse(Index n, Index per_row, std::uint64_t seed, Complex diag = 0.0) {
  std::mt19937_64 rng(seed);
  std::vector<SparseMatrix::Triplet> t;
  for (Index i = 0; i < n; ++i) {
    if (diag != Complex(0.0)) t.push_back({i, i, diag});
    for (Index p = 0; p < per_row; ++p)
      t.push_back({i, static_cast<Index>(uniform_below(rng, static_cast<std::uint64_t>(n))),
                   complex_gaussian(rng) / std::sqrt(static_cast<double>(per_row))});
  }
  return SparseMatrix::from_triplets(n, n, std::move(t));
}

inline double rel_diff(const DenseMatrix& a, const DenseMatrix& b) {
  const double nb = b.norm();
  return nb > 0.0 ? (a - b).norm() / nb : (a - b).norm();
}

/// Sine of the largest principal angle between the column spans.
inline double subspace_sine(const DenseMatrix& U, const DenseMatrix& V) {
  Eigen::HouseholderQR<DenseMatrix> qu(U), qv(V);
  const DenseMatrix Qu = qu.householderQ() * DenseMatrix::Identity(U.rows(), U.cols());
  const DenseMatrix Qv = qv.householderQ() * DenseMatrix::Identity(V.rows(), V.cols());
  const DenseMatrix R = Qu - Qv * (Qv.adjoint() * Qu);
  Eigen::JacobiSVD<DenseMatrix> svd(R);
  return svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
}

}  // namespace krec::fixtures
