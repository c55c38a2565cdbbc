#pragma once

#include <string>

#include "krec/types.hpp"

namespace krec {

/// The scalar functions supported on projected matrices: z^{-1/2}
/// (principal branch), z^{-1}, and exp(tau*z).
struct ScalarFunction {
  enum class Kind { InvSqrt, Inv, Exp };

  Kind kind = Kind::Inv;
  double tau = 1.0;  ///< time scale, Exp only

  static ScalarFunction inv_sqrt() { return {Kind::InvSqrt, 1.0}; }
  static ScalarFunction inv() { return {Kind::Inv, 1.0}; }
  static ScalarFunction exp() { return {Kind::Exp, 1.0}; }
  static ScalarFunction exp_scaled(double tau) { return {Kind::Exp, tau}; }

  Complex operator()(Complex z) const;
  std::string name() const;

  /// Parses "invsqrt", "inv", "exp" and "exp:<tau>".
  static ScalarFunction parse(const std::string& text);
};

/// f(H) for a small square matrix.
///
/// Primary path is diagonalization H = W diag(lambda) W^{-1}. For Exp a
/// degree-13 Pade scaling-and-squaring path takes over when the eigenvector
/// condition estimate exceeds 1e8; Inv is evaluated by LU. Throws
/// DomainError when an eigenvalue sits within 1e-12 (relative to the
/// spectral radius, at least absolute) of the forbidden set and
/// IllConditionedError when the eigenvectors of an InvSqrt argument have
/// condition estimate above 1e12.
DenseMatrix matfun(const ScalarFunction& f, const DenseMatrix& H);

/// f(H) c without forming f(H) on the diagonalization path.
Vector matfun_apply(const ScalarFunction& f, const DenseMatrix& H, const Vector& c);

/// exp(H) by degree-13 diagonal Pade approximation with scaling and
/// squaring; the squaring count is chosen from the 1-norm.
DenseMatrix expm_pade(const DenseMatrix& H);

}  // namespace krec
