#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "krec/sparse.hpp"

namespace krec {

/// Gallery-style Neumann matrix of order n^2: kron(T, I) + kron(I, T) with
/// T = tridiag(-1, 2, -1) and T(1,2) = T(n,n-1) = -2. Every row sums to
/// zero.
SparseMatrix gen_neumann2d(Index n);

/// Centered-difference discretization of  Lap(u) - peclet (u_x + u_y)  on
/// the unit square with homogeneous Dirichlet boundary, h = 1/(n+1). The
/// symmetric part is negative definite.
SparseMatrix gen_advdiff2d(Index n, double peclet);

/// -h^2 gen_advdiff2d(n, peclet): diagonal 4, spectrum in the right half
/// plane. Eigenvalues are complex once the cell Peclet number
/// peclet*h/2 exceeds one.
SparseMatrix gen_convdiff2d(Index n, double peclet);

/// Build a generator from its name and numeric parameters, e.g.
/// ("neumann2d", {31}) or ("advdiff2d", {32, 10}).
SparseMatrix generate(const std::string& name, const std::vector<double>& params);

/// A + scale*M with M complex standard Gaussian on the pattern of A.
SparseMatrix perturb_sparsity_gaussian(const SparseMatrix& A, double scale, std::uint64_t seed);

}  // namespace krec
