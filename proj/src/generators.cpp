#include "krec/generators.hpp"

#include <cmath>
#include <random>

#include "krec/error.hpp"
#include "krec/random.hpp"

namespace krec {

SparseMatrix gen_neumann2d(Index n) {
  if (n < 2) throw DimensionError("neumann2d: n must be at least 2");
  const Index N = n * n;
  std::vector<SparseMatrix::Triplet> t;
  t.reserve(static_cast<std::size_t>(5 * N));
  // Off-diagonal entry (i, j) of the 1D operator.
  auto off = [n](Index i, Index j) {
    if ((i == 0 && j == 1) || (i == n - 1 && j == n - 2)) return -2.0;
    return -1.0;
  };
  for (Index iy = 0; iy < n; ++iy) {
    for (Index ix = 0; ix < n; ++ix) {
      const Index row = iy * n + ix;
      t.push_back({row, row, 4.0});
      if (ix > 0) t.push_back({row, row - 1, off(ix, ix - 1)});
      if (ix < n - 1) t.push_back({row, row + 1, off(ix, ix + 1)});
      if (iy > 0) t.push_back({row, row - n, off(iy, iy - 1)});
      if (iy < n - 1) t.push_back({row, row + n, off(iy, iy + 1)});
    }
  }
  return SparseMatrix::from_triplets(N, N, std::move(t));
}

namespace {

SparseMatrix five_point(Index n, double diag, double west, double east, double south, double north) {
  const Index N = n * n;
  std::vector<SparseMatrix::Triplet> t;
  t.reserve(static_cast<std::size_t>(5 * N));
  for (Index iy = 0; iy < n; ++iy) {
    for (Index ix = 0; ix < n; ++ix) {
      const Index row = iy * n + ix;
      t.push_back({row, row, diag});
      if (ix > 0) t.push_back({row, row - 1, west});
      if (ix < n - 1) t.push_back({row, row + 1, east});
      if (iy > 0) t.push_back({row, row - n, south});
      if (iy < n - 1) t.push_back({row, row + n, north});
    }
  }
  return SparseMatrix::from_triplets(N, N, std::move(t));
}

}  // namespace

SparseMatrix gen_advdiff2d(Index n, double peclet) {
  if (n < 2) throw DimensionError("advdiff2d: n must be at least 2");
  const double h = 1.0 / static_cast<double>(n + 1);
  const double d = 1.0 / (h * h);
  const double c = peclet / (2.0 * h);
  return five_point(n, -4.0 * d, d + c, d - c, d + c, d - c);
}

SparseMatrix gen_convdiff2d(Index n, double peclet) {
  if (n < 2) throw DimensionError("convdiff2d: n must be at least 2");
  const double h = 1.0 / static_cast<double>(n + 1);
  const double c = peclet * h / 2.0;
  return five_point(n, 4.0, -1.0 - c, -1.0 + c, -1.0 - c, -1.0 + c);
}

SparseMatrix generate(const std::string& name, const std::vector<double>& params) {
  auto param = [&](std::size_t i, double fallback) { return i < params.size() ? params[i] : fallback; };
  auto grid = [&]() {
    if (params.empty()) throw DimensionError("generator " + name + " needs a grid size");
    const double v = params[0];
    if (v < 2 || v != std::floor(v)) throw DimensionError("generator " + name + ": grid size must be an integer >= 2");
    return static_cast<Index>(v);
  };
  if (name == "neumann2d") return gen_neumann2d(grid());
  if (name == "advdiff2d") return gen_advdiff2d(grid(), param(1, 0.0));
  if (name == "convdiff2d") return gen_convdiff2d(grid(), param(1, 0.0));
  throw DimensionError("unknown generator '" + name + "'");
}

SparseMatrix perturb_sparsity_gaussian(const SparseMatrix& A, double scale, std::uint64_t seed) {
  if (!(scale >= 0.0)) throw DomainError("perturbation scale must be nonnegative");
  if (scale == 0.0) return A;
  std::mt19937_64 rng(mix_seed(seed, 0x9e27));
  std::vector<Complex> values = A.values();
  for (auto& v : values) v += scale * complex_gaussian(rng);
  return A.with_values(std::move(values));
}

}  // namespace krec
