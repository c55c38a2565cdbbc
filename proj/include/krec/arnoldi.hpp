#pragma once

#include <optional>

#include "krec/counters.hpp"
#include "krec/sparse.hpp"
#include "krec/types.hpp"

namespace krec {

/// Orthogonalization strategy of the Arnoldi process.
struct ArnoldiMode {
  enum class Kind { FullOrtho, Truncated };
  Kind kind = Kind::FullOrtho;
  int t = 2;  ///< truncation length, Truncated only

  static ArnoldiMode full() { return {Kind::FullOrtho, 0}; }
  static ArnoldiMode truncated(int t = 2) { return {Kind::Truncated, t}; }
  bool is_full() const noexcept { return kind == Kind::FullOrtho; }
};

/// A V_m = V_m H_m + h_{m+1,m} v_{m+1} e_m^T.
///
/// FullOrtho runs modified Gram-Schmidt with one unconditional
/// reorthogonalization pass; Truncated(t) projects each new vector only
/// against the t most recent basis vectors, giving a unit-norm but
/// non-orthogonal basis. On lucky breakdown m is truncated to the step at
/// which it occurred, v_{m+1} is zero and h_{m+1,m} = 0.
class ArnoldiFactorization {
 public:
  ArnoldiFactorization() = default;

  Index m() const noexcept { return m_; }
  Index dim() const noexcept { return basis_.rows(); }
  ArnoldiMode mode() const noexcept { return mode_; }
  /// ||b||, the scale of the first basis vector.
  double beta() const noexcept { return beta_; }
  std::optional<Index> breakdown() const noexcept { return breakdown_; }

  /// N x m basis V_m.
  auto V() const { return basis_.leftCols(m_); }
  /// N x (m+1) basis [V_m, v_{m+1}].
  auto V_ext() const { return basis_.leftCols(m_ + 1); }
  auto v_next() const { return basis_.col(m_); }
  /// (m+1) x m Hessenberg matrix including the h_{m+1,m} row.
  auto H_ext() const { return hessenberg_.topLeftCorner(m_ + 1, m_); }
  /// Square m x m part H_m.
  auto H() const { return hessenberg_.topLeftCorner(m_, m_); }
  Complex h_next() const { return m_ > 0 ? hessenberg_(m_, m_ - 1) : Complex(0.0); }

  /// Continue the process on the same matrix until dimension m_new (no-op
  /// when m_new <= m or after breakdown).
  void extend(const SparseMatrix& A, Index m_new, Counters* counters = nullptr);

  friend ArnoldiFactorization arnoldi_build(const SparseMatrix& A, const Vector& b, Index m, ArnoldiMode mode,
                                            Counters* counters);

 private:
  void step(const SparseMatrix& A, Counters* counters);

  DenseMatrix basis_;       // N x (m+1)
  DenseMatrix hessenberg_;  // (m+1) x m
  Index m_ = 0;
  double beta_ = 0.0;
  ArnoldiMode mode_;
  std::optional<Index> breakdown_;
};

/// Build an m-step factorization of K_m(A, b). Each step performs exactly
/// one matvec; inner products are counted per projection coefficient and
/// norm (the initial ||b|| included).
ArnoldiFactorization arnoldi_build(const SparseMatrix& A, const Vector& b, Index m, ArnoldiMode mode,
                                   Counters* counters = nullptr);

/// Functional form of ArnoldiFactorization::extend.
ArnoldiFactorization arnoldi_extend(ArnoldiFactorization fac, const SparseMatrix& A, Index m_new,
                                    Counters* counters = nullptr);

/// Inner products spent by arnoldi_build(.., m, mode) without breakdown.
std::uint64_t arnoldi_inner_product_count(Index m, ArnoldiMode mode);

}  // namespace krec
