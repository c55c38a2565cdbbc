#pragma once

#include "krec/approximants.hpp"
#include "krec/types.hpp"

namespace krec {

/// Sketched bound on ||f_{m+d} - f_m||.
struct ErrorEstimate {
  double value = 0.0;
  double epsilon_used = 0.0;
  Index d = 0;
  Index m_low = 0;
  Index m_high = 0;
};

/// Embed the coefficients of the smaller iterate into the coordinates of
/// the larger basis. Zeros go where the d new Krylov coefficients sit: at
/// the end for Krylov and RecycleFirst, between the Krylov and recycle
/// blocks for KrylovFirst.
Vector pad_coefficients(const Vector& y_small, Index m_small, Index m_big, Index k, BasisLayout layout);

/// (1-eps)^{-1/2} ||SV_big (y_big - y_small_padded)||. Only s- and
/// (m+d)-sized arithmetic.
ErrorEstimate estimate_diff(const DenseMatrix& SV_big, const Vector& y_big, const Vector& y_small_padded,
                            double epsilon);

/// The same quantity for an orthonormal basis: ||y_big - y_small_padded||.
ErrorEstimate estimate_diff_orthonormal(const Vector& y_big, const Vector& y_small_padded);

/// (1-eps)^{-1/2} ||SV y||, the norm surrogate used for relative estimates.
double sketched_norm(const DenseMatrix& SV, const Vector& y, double epsilon);

struct EpsilonPolicy {
  enum class Kind { Fixed, Tracked };
  Kind kind = Kind::Fixed;
  double value = 0.99;  ///< Fixed only

  static EpsilonPolicy fixed(double c) { return {Kind::Fixed, c}; }
  static EpsilonPolicy tracked() { return {Kind::Tracked, 0.0}; }
};

/// Fixed returns its constant; Tracked evaluates the distortion of the
/// recorded sketches of unit-norm basis vectors, clamped to [0, 0.99].
double epsilon_policy(const EpsilonPolicy& policy, const DenseMatrix& S_unit_columns = DenseMatrix());

}  // namespace krec
