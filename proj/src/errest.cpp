#include "krec/errest.hpp"

#include <cmath>

#include "krec/error.hpp"
#include "krec/sketch.hpp"

namespace krec {

Vector pad_coefficients(const Vector& y_small, Index m_small, Index m_big, Index k, BasisLayout layout) {
  if (m_big < m_small) throw DimensionError("pad_coefficients: larger iterate has fewer Krylov vectors");
  if (y_small.size() != m_small + k) throw DimensionError("pad_coefficients: coefficient length mismatch");
  Vector out = Vector::Zero(m_big + k);
  if (layout == BasisLayout::KrylovFirst) {
    out.head(m_small) = y_small.head(m_small);
    out.tail(k) = y_small.tail(k);
  } else {
    out.head(m_small + k) = y_small;
  }
  return out;
}

double sketched_norm(const DenseMatrix& SV, const Vector& y, double epsilon) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw DomainError("error estimate: epsilon must lie in [0, 1)");
  if (SV.cols() != y.size()) throw DimensionError("error estimate: sketch and coefficients differ in size");
  return (SV * y).norm() / std::sqrt(1.0 - epsilon);
}

ErrorEstimate estimate_diff(const DenseMatrix& SV_big, const Vector& y_big, const Vector& y_small_padded,
                            double epsilon) {
  if (y_big.size() != y_small_padded.size()) throw DimensionError("estimate_diff: coefficient lengths differ");
  ErrorEstimate out;
  out.value = sketched_norm(SV_big, y_big - y_small_padded, epsilon);
  out.epsilon_used = epsilon;
  return out;
}

ErrorEstimate estimate_diff_orthonormal(const Vector& y_big, const Vector& y_small_padded) {
  if (y_big.size() != y_small_padded.size()) throw DimensionError("estimate_diff: coefficient lengths differ");
  ErrorEstimate out;
  out.value = (y_big - y_small_padded).norm();
  return out;
}

double epsilon_policy(const EpsilonPolicy& policy, const DenseMatrix& S_unit_columns) {
  if (policy.kind == EpsilonPolicy::Kind::Fixed) return policy.value;
  if (S_unit_columns.cols() == 0) throw DimensionError("epsilon_policy: tracked mode needs recorded sketches");
  return estimate_epsilon_unit_columns(S_unit_columns);
}

}  // namespace krec
