#pragma once

#include <cstdint>
#include <vector>

#include "krec/arnoldi.hpp"
#include "krec/counters.hpp"
#include "krec/types.hpp"

namespace krec {

/// Subsampled randomized discrete cosine transform
///
///   S v = sqrt(N'/s) * P * C * D * pad(v)
///
/// where pad zero-extends to the next power of two N', D flips signs
/// (Rademacher), C is the orthonormal DCT-II of length N' and P keeps s
/// distinct rows drawn uniformly without replacement. The operator is fully
/// determined by (N, s, seed).
class SketchOperator {
 public:
  SketchOperator(Index N, Index s, std::uint64_t seed);

  Index dim() const noexcept { return n_; }
  Index sketch_dim() const noexcept { return s_; }
  Index padded_dim() const noexcept { return pad_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const std::vector<double>& signs() const noexcept { return signs_; }
  const std::vector<Index>& rows() const noexcept { return rows_; }

  /// O(N' log N') application through a length-N' complex FFT. Counts
  /// one sketch.
  Vector apply(const Eigen::Ref<const Vector>& v, Counters* counters = nullptr) const;
  /// Column-wise application; counts one sketch per column.
  DenseMatrix apply_columns(const DenseMatrix& M, Counters* counters = nullptr) const;

  /// Explicit s x N matrix assembled from the definition (cosine sums).
  /// Intended for N <= 4096; used as an oracle and for small problems.
  DenseMatrix dense() const;

  /// Direct O(N s) application through the explicit cosine sums.
  Vector apply_direct(const Eigen::Ref<const Vector>& v) const;

 private:
  void fft(std::vector<Complex>& a) const;

  Index n_;
  Index s_;
  Index pad_;
  std::uint64_t seed_;
  std::vector<double> signs_;
  std::vector<Index> rows_;
  std::vector<Index> bitrev_;
  std::vector<Complex> roots_;    // e^{-2 pi i k / N'}, k < N'/2
  std::vector<Complex> twiddle_;  // e^{-i pi k / (2N')}
};

/// Functional aliases.
SketchOperator sketch_new(Index N, Index s, std::uint64_t seed);
Vector sketch_apply(const SketchOperator& S, const Eigen::Ref<const Vector>& v, Counters* counters = nullptr);

/// S A V_m = (S V_m) H_m + h_{m+1,m} (S v_{m+1}) e_m^T from cached
/// sketches of the basis vectors. SV_ext holds S v_1, ..., S v_{m+1} (the
/// last column may be omitted after a breakdown). No sketches are applied.
DenseMatrix sketch_av_from_arnoldi(const ArnoldiFactorization& fac, const DenseMatrix& SV_ext);

/// max_j | ||S v_j||^2 / ||v_j||^2 - 1 |, clamped to [0, 0.99].
double estimate_epsilon(const SketchOperator& S, const std::vector<Vector>& vectors);

/// Same quantity from sketches of unit-norm columns.
double estimate_epsilon_unit_columns(const DenseMatrix& S_unit_columns);

}  // namespace krec
