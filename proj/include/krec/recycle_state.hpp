#pragma once

#include <cstdint>
#include <optional>

#include "krec/types.hpp"

namespace krec {

/// Augmentation basis carried from one problem to the next, plus the
/// cached products that make the next step cheap.
struct RecycleState {
  DenseMatrix U;                  ///< N x k
  DenseMatrix SU;                 ///< s x k, sketched methods only
  DenseMatrix SAU;                ///< s x k, S A_epoch U
  std::optional<DenseMatrix> AU;  ///< N x k, A_epoch U
  std::uint64_t epoch = 0;        ///< identifies the matrix the caches refer to
  Index k_target = 0;

  Index k() const noexcept { return U.cols(); }
  bool empty() const noexcept { return U.cols() == 0; }
};

}  // namespace krec
