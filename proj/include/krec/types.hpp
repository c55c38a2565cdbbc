#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

namespace krec {

using Complex = std::complex<double>;
using Index = Eigen::Index;

/// Column-major complex dense matrix. Houses Krylov bases, Hessenberg
/// matrices, sketches and all small projected matrices.
using DenseMatrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

}  // namespace krec
