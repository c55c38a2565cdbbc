#pragma once

#include <cstdint>
#include <random>

#include "krec/types.hpp"

namespace krec {

/// SplitMix64 finalizer; used to derive independent stream seeds from a
/// user seed and a stream tag.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) noexcept {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (tag + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Uniform integer in [0, bound) by rejection; independent of the
/// standard library's distribution implementation.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

/// Complex Gaussian with independent standard normal real and imaginary
/// parts (E|z|^2 = 2).
inline Complex complex_gaussian(std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  const double re = normal(rng);
  const double im = normal(rng);
  return {re, im};
}

inline Vector gaussian_vector(Index n, std::mt19937_64& rng) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = complex_gaussian(rng);
  return v;
}

inline DenseMatrix gaussian_matrix(Index rows, Index cols, std::mt19937_64& rng) {
  DenseMatrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = complex_gaussian(rng);
  return m;
}

}  // namespace krec
