#include "krec/matfun.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/LU>

#include "krec/dense.hpp"
#include "krec/error.hpp"

namespace krec {

namespace {

constexpr double kDomainTol = 1e-12;
constexpr double kExpFallbackCond = 1e8;
constexpr double kMaxCond = 1e12;

bool is_diagonal(const DenseMatrix& H) {
  for (Index j = 0; j < H.cols(); ++j)
    for (Index i = 0; i < H.rows(); ++i)
      if (i != j && H(i, j) != Complex(0.0)) return false;
  return true;
}

void check_domain(const ScalarFunction& f, const Vector& lambda) {
  if (f.kind == ScalarFunction::Kind::Exp || lambda.size() == 0) return;
  const double scale = std::max(1.0, lambda.cwiseAbs().maxCoeff());
  const double tol = kDomainTol * scale;
  for (Index i = 0; i < lambda.size(); ++i) {
    const Complex z = lambda[i];
    bool bad = std::abs(z) <= tol;
    // Closed negative real axis is the branch cut of z^{-1/2}.
    if (f.kind == ScalarFunction::Kind::InvSqrt && z.real() <= 0.0 && std::abs(z.imag()) <= tol) bad = true;
    if (bad)
      throw DomainError("eigenvalue (" + std::to_string(z.real()) + "," + std::to_string(z.imag()) +
                        ") outside the domain of " + f.name());
  }
}

Vector apply_scalar(const ScalarFunction& f, const Vector& lambda) {
  Vector out(lambda.size());
  for (Index i = 0; i < lambda.size(); ++i) out[i] = f(lambda[i]);
  return out;
}

}  // namespace

Complex ScalarFunction::operator()(Complex z) const {
  switch (kind) {
    case Kind::InvSqrt:
      return 1.0 / std::sqrt(z);
    case Kind::Inv:
      return 1.0 / z;
    case Kind::Exp:
      return std::exp(tau * z);
  }
  throw std::logic_error("unknown scalar function");
}

std::string ScalarFunction::name() const {
  switch (kind) {
    case Kind::InvSqrt:
      return "invsqrt";
    case Kind::Inv:
      return "inv";
    case Kind::Exp:
      return tau == 1.0 ? "exp" : "exp:" + std::to_string(tau);
  }
  return "?";
}

ScalarFunction ScalarFunction::parse(const std::string& text) {
  if (text == "invsqrt") return inv_sqrt();
  if (text == "inv") return inv();
  if (text == "exp") return exp();
  if (text.rfind("exp:", 0) == 0) {
    std::size_t used = 0;
    const double tau = std::stod(text.substr(4), &used);
    if (used != text.size() - 4) throw std::invalid_argument("bad time scale in '" + text + "'");
    return exp_scaled(tau);
  }
  throw std::invalid_argument("unknown function '" + text + "' (expected invsqrt, inv, exp or exp:<tau>)");
}

DenseMatrix expm_pade(const DenseMatrix& H) {
  static constexpr double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                 1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                 670442572800.0,      33522128640.0,       1323241920.0,
                                 40840800.0,          960960.0,            16380.0,
                                 182.0,               1.0};
  constexpr double theta13 = 5.371920351148152;
  const Index n = H.rows();
  if (n != H.cols()) throw DimensionError("expm requires a square matrix");
  if (n == 0) return H;
  const double norm1 = H.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > theta13) squarings = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
  const DenseMatrix A = H / std::ldexp(1.0, squarings);
  const DenseMatrix I = DenseMatrix::Identity(n, n);
  const DenseMatrix A2 = A * A;
  const DenseMatrix A4 = A2 * A2;
  const DenseMatrix A6 = A4 * A2;
  const DenseMatrix U =
      A * (A6 * (b[13] * A6 + b[11] * A4 + b[9] * A2) + b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * I);
  const DenseMatrix V = A6 * (b[12] * A6 + b[10] * A4 + b[8] * A2) + b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * I;
  DenseMatrix R = Eigen::PartialPivLU<DenseMatrix>(V - U).solve(V + U);
  for (int s = 0; s < squarings; ++s) R = R * R;
  return R;
}

DenseMatrix matfun(const ScalarFunction& f, const DenseMatrix& H) {
  const Index n = H.rows();
  if (n != H.cols()) throw DimensionError("matfun requires a square matrix");
  if (n == 0) return H;
  if (is_diagonal(H)) {
    const Vector d = H.diagonal();
    check_domain(f, d);
    return apply_scalar(f, d).asDiagonal();
  }
  if (f.kind == ScalarFunction::Kind::Inv) {
    try {
      return lu_solve(H, DenseMatrix::Identity(n, n));
    } catch (const SingularMatrixError& e) {
      throw DomainError(std::string("singular argument of inv: ") + e.what());
    }
  }
  const EigenDecomposition eig = eig_dense(H);
  if (f.kind == ScalarFunction::Kind::Exp && eig.vector_condition > kExpFallbackCond)
    return expm_pade(f.tau * H);
  check_domain(f, eig.values);
  if (eig.vector_condition > kMaxCond)
    throw IllConditionedError("eigenvector condition estimate " + std::to_string(eig.vector_condition) +
                              " too large for " + f.name());
  const DenseMatrix scaled = eig.vectors * apply_scalar(f, eig.values).asDiagonal();
  // f(H) = (W f(L)) W^{-1}, i.e. solve W^T X^T = (W f(L))^T.
  Eigen::PartialPivLU<DenseMatrix> lu(eig.vectors.transpose());
  return lu.solve(scaled.transpose()).transpose();
}

Vector matfun_apply(const ScalarFunction& f, const DenseMatrix& H, const Vector& c) {
  const Index n = H.rows();
  if (n != H.cols()) throw DimensionError("matfun_apply requires a square matrix");
  if (c.size() != n) throw DimensionError("matfun_apply: vector length mismatch");
  if (n == 0) return c;
  if (is_diagonal(H)) {
    const Vector d = H.diagonal();
    check_domain(f, d);
    return apply_scalar(f, d).cwiseProduct(c);
  }
  if (f.kind == ScalarFunction::Kind::Inv) {
    try {
      return lu_solve(H, c);
    } catch (const SingularMatrixError& e) {
      throw DomainError(std::string("singular argument of inv: ") + e.what());
    }
  }
  const EigenDecomposition eig = eig_dense(H);
  if (f.kind == ScalarFunction::Kind::Exp && eig.vector_condition > kExpFallbackCond)
    return expm_pade(f.tau * H) * c;
  check_domain(f, eig.values);
  if (eig.vector_condition > kMaxCond)
    throw IllConditionedError("eigenvector condition estimate " + std::to_string(eig.vector_condition) +
                              " too large for " + f.name());
  const Vector coeffs = Eigen::PartialPivLU<DenseMatrix>(eig.vectors).solve(c);
  return eig.vectors * apply_scalar(f, eig.values).cwiseProduct(coeffs);
}

}  // namespace krec
