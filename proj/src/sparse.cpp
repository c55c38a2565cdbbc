#include "krec/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include "krec/error.hpp"

namespace krec {

SparseMatrix::SparseMatrix(Index nrows, Index ncols, std::vector<Index> row_offsets, std::vector<Index> col_indices,
                           std::vector<Complex> values)
    : nrows_(nrows),
      ncols_(ncols),
      row_offsets_(std::move(row_offsets)),
      col_indices_(std::move(col_indices)),
      values_(std::move(values)) {
  if (nrows_ <= 0 || ncols_ <= 0) throw DimensionError("sparse matrix dimensions must be positive");
  if (static_cast<Index>(row_offsets_.size()) != nrows_ + 1)
    throw DimensionError("row_offsets must have nrows+1 entries");
  if (col_indices_.size() != values_.size()) throw DimensionError("col_indices and values differ in length");
  if (row_offsets_.front() != 0 || row_offsets_.back() != static_cast<Index>(values_.size()))
    throw DimensionError("row_offsets must start at 0 and end at nnz");
  for (Index i = 0; i < nrows_; ++i) {
    if (row_offsets_[i + 1] < row_offsets_[i]) throw DimensionError("row_offsets must be non-decreasing");
    for (Index p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) {
      const Index c = col_indices_[p];
      if (c < 0 || c >= ncols_)
        throw DimensionError("column index " + std::to_string(c) + " out of range in row " + std::to_string(i));
      if (p > row_offsets_[i] && col_indices_[p - 1] >= c)
        throw DimensionError("column indices must be strictly increasing in row " + std::to_string(i));
    }
  }
}

SparseMatrix SparseMatrix::from_triplets(Index nrows, Index ncols, std::vector<Triplet> triplets) {
  for (const auto& t : triplets)
    if (t.row < 0 || t.row >= nrows || t.col < 0 || t.col >= ncols)
      throw DimensionError("triplet index out of range");
  std::sort(triplets.begin(), triplets.end(),
            [](const Triplet& a, const Triplet& b) { return a.row != b.row ? a.row < b.row : a.col < b.col; });
  std::vector<Index> offsets(nrows + 1, 0);
  std::vector<Index> cols;
  std::vector<Complex> vals;
  cols.reserve(triplets.size());
  vals.reserve(triplets.size());
  for (std::size_t p = 0; p < triplets.size(); ++p) {
    const auto& t = triplets[p];
    if (!cols.empty() && p > 0 && triplets[p - 1].row == t.row && triplets[p - 1].col == t.col) {
      vals.back() += t.value;
      continue;
    }
    cols.push_back(t.col);
    vals.push_back(t.value);
    ++offsets[t.row + 1];
  }
  for (Index i = 0; i < nrows; ++i) offsets[i + 1] += offsets[i];
  return SparseMatrix(nrows, ncols, std::move(offsets), std::move(cols), std::move(vals));
}

SparseMatrix SparseMatrix::identity(Index n) {
  std::vector<Index> offsets(n + 1);
  std::vector<Index> cols(n);
  for (Index i = 0; i <= n; ++i) offsets[i] = i;
  for (Index i = 0; i < n; ++i) cols[i] = i;
  return SparseMatrix(n, n, std::move(offsets), std::move(cols), std::vector<Complex>(n, Complex(1.0)));
}

SparseMatrix SparseMatrix::with_values(std::vector<Complex> values) const {
  if (values.size() != values_.size()) throw DimensionError("with_values: nnz mismatch");
  return SparseMatrix(nrows_, ncols_, row_offsets_, col_indices_, std::move(values));
}

SparseMatrix SparseMatrix::shifted(Complex sigma) const {
  if (nrows_ != ncols_) throw DimensionError("shift requires a square matrix");
  std::vector<Triplet> t;
  t.reserve(values_.size() + nrows_);
  for (Index i = 0; i < nrows_; ++i) {
    for (Index p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) t.push_back({i, col_indices_[p], values_[p]});
    t.push_back({i, i, sigma});
  }
  return from_triplets(nrows_, ncols_, std::move(t));
}

DenseMatrix SparseMatrix::to_dense() const {
  DenseMatrix d = DenseMatrix::Zero(nrows_, ncols_);
  for (Index i = 0; i < nrows_; ++i)
    for (Index p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) d(i, col_indices_[p]) += values_[p];
  return d;
}

double SparseMatrix::norm1() const {
  std::vector<double> colsum(ncols_, 0.0);
  for (std::size_t p = 0; p < values_.size(); ++p) colsum[col_indices_[p]] += std::abs(values_[p]);
  return colsum.empty() ? 0.0 : *std::max_element(colsum.begin(), colsum.end());
}

double SparseMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& v : values_) s += std::norm(v);
  return std::sqrt(s);
}

std::uint64_t SparseMatrix::fingerprint() const {
  // FNV-1a over the raw bytes.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](const void* data, std::size_t bytes) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < bytes; ++i) {
      h ^= p[i];
      h *= 0x100000001b3ULL;
    }
  };
  feed(&nrows_, sizeof nrows_);
  feed(&ncols_, sizeof ncols_);
  feed(row_offsets_.data(), row_offsets_.size() * sizeof(Index));
  feed(col_indices_.data(), col_indices_.size() * sizeof(Index));
  feed(values_.data(), values_.size() * sizeof(Complex));
  return h;
}

Vector csr_matvec(const SparseMatrix& A, const Eigen::Ref<const Vector>& v, Counters* counters) {
  if (v.size() != A.cols())
    throw DimensionError("csr_matvec: vector length " + std::to_string(v.size()) + " != ncols " +
                         std::to_string(A.cols()));
  const auto& off = A.row_offsets();
  const auto& col = A.col_indices();
  const auto& val = A.values();
  Vector y(A.rows());
  for (Index i = 0; i < A.rows(); ++i) {
    Complex acc(0.0);
    for (Index p = off[i]; p < off[i + 1]; ++p) acc += val[p] * v[col[p]];
    y[i] = acc;
  }
  count_matvecs(counters);
  return y;
}

}  // namespace krec
