#include "krec/arnoldi.hpp"

#include <algorithm>
#include <cmath>

#include "krec/error.hpp"

namespace krec {

namespace {
constexpr double kBreakdownTol = 1e-14;
}

ArnoldiFactorization arnoldi_build(const SparseMatrix& A, const Vector& b, Index m, ArnoldiMode mode,
                                   Counters* counters) {
  if (A.rows() != A.cols()) throw DimensionError("arnoldi: matrix must be square");
  if (b.size() != A.rows()) throw DimensionError("arnoldi: rhs length mismatch");
  if (m < 1) throw DimensionError("arnoldi: m must be positive");
  if (mode.kind == ArnoldiMode::Kind::Truncated && mode.t < 1)
    throw DimensionError("arnoldi: truncation length must be positive");
  ArnoldiFactorization fac;
  fac.mode_ = mode;
  fac.beta_ = b.norm();
  count_inner_products(counters);
  if (fac.beta_ == 0.0) throw DimensionError("arnoldi: zero starting vector");
  fac.basis_ = DenseMatrix::Zero(b.size(), 1);
  fac.basis_.col(0) = b / fac.beta_;
  fac.hessenberg_ = DenseMatrix::Zero(1, 0);
  fac.extend(A, m, counters);
  return fac;
}

ArnoldiFactorization arnoldi_extend(ArnoldiFactorization fac, const SparseMatrix& A, Index m_new,
                                    Counters* counters) {
  fac.extend(A, m_new, counters);
  return fac;
}

void ArnoldiFactorization::extend(const SparseMatrix& A, Index m_new, Counters* counters) {
  if (breakdown_ || m_new <= m_) return;
  if (A.rows() != dim()) throw DimensionError("arnoldi: matrix dimension changed");
  basis_.conservativeResize(Eigen::NoChange, m_new + 1);
  basis_.rightCols(m_new - m_).setZero();
  const Index old_rows = hessenberg_.rows();
  const Index old_cols = hessenberg_.cols();
  hessenberg_.conservativeResize(m_new + 1, m_new);
  hessenberg_.bottomRows(m_new + 1 - old_rows).setZero();
  hessenberg_.rightCols(m_new - old_cols).setZero();
  while (m_ < m_new && !breakdown_) step(A, counters);
  if (breakdown_) {
    basis_.conservativeResize(Eigen::NoChange, m_ + 1);
    hessenberg_.conservativeResize(m_ + 1, m_);
  }
}

void ArnoldiFactorization::step(const SparseMatrix& A, Counters* counters) {
  const Index j = m_;  // column of the vector being expanded
  Vector w = csr_matvec(A, basis_.col(j), counters);
  const Index first = mode_.is_full() ? 0 : std::max<Index>(0, j + 1 - mode_.t);
  const int passes = mode_.is_full() ? 2 : 1;
  for (int pass = 0; pass < passes; ++pass) {
    for (Index i = first; i <= j; ++i) {
      const Complex h = basis_.col(i).dot(w);
      w -= h * basis_.col(i);
      hessenberg_(i, j) += h;
    }
    count_inner_products(counters, static_cast<std::uint64_t>(j + 1 - first));
  }
  const double hn = w.norm();
  count_inner_products(counters);
  // ||w||^2 = ||h||^2 + ||w_hat||^2 for an orthonormal basis; a scale
  // reference without another inner product.
  const double wn = std::sqrt(hessenberg_.col(j).segment(first, j + 1 - first).squaredNorm() + hn * hn);
  ++m_;
  if (hn <= kBreakdownTol * wn) {
    hessenberg_(j + 1, j) = 0.0;
    basis_.col(j + 1).setZero();
    breakdown_ = m_;
    return;
  }
  hessenberg_(j + 1, j) = hn;
  basis_.col(j + 1) = w / hn;
}

std::uint64_t arnoldi_inner_product_count(Index m, ArnoldiMode mode) {
  std::uint64_t total = 1;  // ||b||
  for (Index j = 1; j <= m; ++j) {
    if (mode.is_full())
      total += 2 * static_cast<std::uint64_t>(j) + 1;
    else
      total += static_cast<std::uint64_t>(std::min<Index>(j, mode.t)) + 1;
  }
  return total;
}

}  // namespace krec
