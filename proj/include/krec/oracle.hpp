#pragma once

#include <cstddef>
#include <cstdint>
#include <list>
#include <optional>
#include <string>

#include "krec/matfun.hpp"
#include "krec/sparse.hpp"
#include "krec/types.hpp"

namespace krec {

inline constexpr Index kDefaultOracleCap = 1500;

/// Dense f(A). Inv goes through lu_solve, InvSqrt through a Schur-based
/// square root followed by lu_solve, Exp through Pade scaling and squaring.
DenseMatrix dense_matrix_function(const DenseMatrix& A, const ScalarFunction& f);

/// Exact f(A) b from a dense evaluation, or nullopt when N exceeds cap.
/// Inv solves with lu_solve directly.
std::optional<Vector> oracle_exact(const SparseMatrix& A, const Vector& b, const ScalarFunction& f,
                                   Index cap = kDefaultOracleCap);

/// Keeps the dense f(A) of the most recently used matrices so that a fixed
/// matrix is factored once per sequence (or once per sweep when shared).
class OracleCache {
 public:
  explicit OracleCache(Index cap = kDefaultOracleCap, std::size_t max_entries = 2)
      : cap_(cap), max_entries_(max_entries) {}

  Index cap() const noexcept { return cap_; }
  std::optional<Vector> apply(const SparseMatrix& A, const Vector& b, const ScalarFunction& f);

 private:
  struct Entry {
    std::uint64_t fingerprint;
    std::string function;
    DenseMatrix fA;
  };
  Index cap_;
  std::size_t max_entries_;
  std::list<Entry> entries_;
};

}  // namespace krec
