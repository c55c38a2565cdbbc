#pragma once

#include <cstdint>
#include <vector>

#include "krec/counters.hpp"
#include "krec/types.hpp"

namespace krec {

/// Compressed sparse row matrix over complex scalars.
///
/// Invariants (checked on construction): row_offsets has nrows+1
/// non-decreasing entries starting at 0 and ending at nnz; column indices
/// within a row are strictly increasing and lie in [0, ncols).
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(Index nrows, Index ncols, std::vector<Index> row_offsets, std::vector<Index> col_indices,
               std::vector<Complex> values);

  /// Assemble from unordered (row, col, value) triplets; duplicates are summed.
  struct Triplet {
    Index row;
    Index col;
    Complex value;
  };
  static SparseMatrix from_triplets(Index nrows, Index ncols, std::vector<Triplet> triplets);
  static SparseMatrix identity(Index n);

  Index rows() const noexcept { return nrows_; }
  Index cols() const noexcept { return ncols_; }
  Index nonzeros() const noexcept { return static_cast<Index>(values_.size()); }

  const std::vector<Index>& row_offsets() const noexcept { return row_offsets_; }
  const std::vector<Index>& col_indices() const noexcept { return col_indices_; }
  const std::vector<Complex>& values() const noexcept { return values_; }

  /// Same sparsity pattern, new values.
  SparseMatrix with_values(std::vector<Complex> values) const;
  /// A + sigma*I; structurally adds missing diagonal entries.
  SparseMatrix shifted(Complex sigma) const;
  DenseMatrix to_dense() const;
  double norm1() const;
  double frobenius_norm() const;

  /// 64-bit fingerprint of the pattern and values; identifies a matrix
  /// instance across runs (used to key dense oracles).
  std::uint64_t fingerprint() const;

 private:
  Index nrows_ = 0;
  Index ncols_ = 0;
  std::vector<Index> row_offsets_{0};
  std::vector<Index> col_indices_;
  std::vector<Complex> values_;
};

/// y = A v. Increments the matvec counter by one.
Vector csr_matvec(const SparseMatrix& A, const Eigen::Ref<const Vector>& v, Counters* counters = nullptr);

}  // namespace krec
