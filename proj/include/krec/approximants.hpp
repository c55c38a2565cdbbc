#pragma once

#include <optional>
#include <vector>

#include "krec/arnoldi.hpp"
#include "krec/counters.hpp"
#include "krec/dense.hpp"
#include "krec/matfun.hpp"
#include "krec/recycle_state.hpp"
#include "krec/sketch.hpp"
#include "krec/sparse.hpp"
#include "krec/types.hpp"

namespace krec {

/// How the coefficient vector of an approximant is laid out.
enum class BasisLayout {
  Krylov,        ///< V_m only
  RecycleFirst,  ///< orthonormalized [U, V_m]
  KrylovFirst,   ///< [V_m, U], not orthonormal
};

/// f_hat = basis * coeffs. The N-length vector is only formed on demand.
struct Approximant {
  Vector coeffs;
  std::optional<Vector> full_vector;
  BasisLayout layout = BasisLayout::Krylov;
  Index krylov_dim = 0;
  Index recycle_dim = 0;
  std::optional<Index> ell;  ///< effective rank of a stabilized extraction

  /// basis * coeffs, cached in full_vector.
  const Vector& materialize(const Eigen::Ref<const DenseMatrix>& basis);
};

inline constexpr double kDefaultSvdTol = 1e-14;
/// Relative R-diagonal threshold below which a whitened basis counts as
/// rank deficient.
inline constexpr double kWhitenRankTol = 1e-13;

/// V f(V^* A V) V^* b for orthonormal V, with G = V^* A V supplied.
/// V^* b costs V.cols() inner products.
Approximant fom_closed(const DenseMatrix& V, const DenseMatrix& G, const Vector& b, const ScalarFunction& f,
                       Counters* counters = nullptr);

/// Plain FOM from an Arnoldi factorization: coeffs = f(H_m) ||b|| e_1.
Approximant fom_from_arnoldi(const ArnoldiFactorization& fac, const ScalarFunction& f);

/// Orthonormal basis of [U, V_m] with everything needed to evaluate the
/// recycled FOM approximant and to propagate A*U without matvecs.
struct RecycledFom {
  Approximant approx;
  DenseMatrix Q;  ///< N x r orthonormal basis of span([U, V_m])
  DenseMatrix G;  ///< Q^* A Q
  /// (k+m) x r: Q = [U, V_m] * to_block. Rows of dropped columns are zero.
  DenseMatrix to_block;
  Index dropped = 0;  ///< columns removed as numerically dependent
  /// Smallest ||residual|| / ||column|| among kept columns. R^{-1} (and so
  /// to_block) amplifies rounding by about its inverse.
  double min_residual_ratio = 1.0;
};

/// Below this min_residual_ratio, A*U is not propagated through to_block
/// but recomputed with matvecs.
inline constexpr double kPropagateTol = 1e-6;

/// Recycled FOM on an existing factorization of K_m(A, b).
///
/// [U, V_m] is orthonormalized column by column (Gram-Schmidt with one
/// reorthogonalization pass, U first); columns whose residual falls below
/// 1e-12 of their norm are dropped. The projected matrix is assembled from
/// the Arnoldi relation and AU, so no matvecs happen here. With U empty
/// this is exactly fom_from_arnoldi.
RecycledFom rfom_from_factorization(const ArnoldiFactorization& fac, const DenseMatrix& U, const DenseMatrix& AU,
                                    const ScalarFunction& f, Counters* counters = nullptr);

struct RfomStep {
  RecycledFom result;
  ArnoldiFactorization fac;
  DenseMatrix AU;  ///< A*U used for the Gram matrix
};

/// Full recycled FOM step: builds the FullOrtho factorization, computes
/// A*U unless a cached product is supplied, and evaluates the closed form.
RfomStep rfom_step(const SparseMatrix& A, const Vector& b, const DenseMatrix& U, Index m, const ScalarFunction& f,
                   const DenseMatrix* cached_AU = nullptr, Counters* counters = nullptr);

/// Whitened sketched FOM, coeffs = R^{-1} f(Q^* [SAV] R^{-1}) Q^* Sb with
/// S V = Q R. Throws RankDeficientError when the R diagonal ratio falls
/// below kWhitenRankTol.
struct WhitenedFom {
  Approximant approx;
  EconQR qr;
};
WhitenedFom sfom_whitened(const DenseMatrix& SV, const DenseMatrix& SAV, const Vector& Sb, const ScalarFunction& f);

/// Truncated-SVD stabilized sketched FOM. Keeps the singular values with
/// sigma_l >= svdtol * sigma_1 (and sigma_l > 0).
struct StabilizedFom {
  Approximant approx;
  EconSVD svd;
  Index ell = 0;
};
StabilizedFom srfom_stab(const DenseMatrix& SV, const DenseMatrix& SAV, const Vector& Sb, const ScalarFunction& f,
                         double svdtol = kDefaultSvdTol);

/// Number of singular values kept by the svdtol rule.
Index truncation_rank(const RealVector& sigma, double svdtol);

/// GMRES-type closed form V_m f(H_m + |h|^2 H_m^{-*} e_m e_m^T) ||b|| e_1.
Approximant gmres_type_closed(const ArnoldiFactorization& fac, const ScalarFunction& f);

/// Sketched GMRES-type approximant with SW = S A V.
Approximant sgmres_type(const DenseMatrix& SV, const DenseMatrix& SW, const Vector& Sb, const ScalarFunction& f);

/// Stabilized sketched GMRES-type approximant (truncated SVD of SW).
Approximant sgmres_type_stab(const DenseMatrix& SV, const DenseMatrix& SW, const Vector& Sb, const ScalarFunction& f,
                             double svdtol = kDefaultSvdTol);

/// Krylov factorization together with the sketches of its basis vectors.
struct SketchedKrylov {
  ArnoldiFactorization fac;
  DenseMatrix SV_ext;  ///< s x (m+1): S v_1, ..., S v_{m+1}

  /// Sketch basis vectors that have no cached sketch yet.
  void sync(const SketchOperator& S, Counters* counters = nullptr);
  /// S b = ||b|| S v_1.
  Vector Sb() const { return fac.beta() * SV_ext.col(0); }
};

SketchedKrylov sketched_arnoldi(const SparseMatrix& A, const Vector& b, Index m, const SketchOperator& S, int t,
                                Counters* counters = nullptr);

/// Working set [V_m, U] of a sketch-and-recycle step.
struct SketchedBundle {
  DenseMatrix Vhat;    ///< N x (m+k)
  DenseMatrix SVhat;   ///< s x (m+k)
  DenseMatrix SAVhat;  ///< s x (m+k)
  Vector Sb;
  Index m = 0;
  Index k = 0;
  std::uint64_t epoch = 0;
};

/// Assemble [V_m, U] and its sketches from cached quantities only: S A V_m
/// comes from the Arnoldi relation and SU, SAU from the recycle state.
SketchedBundle assemble_sketched(const SketchedKrylov& krylov, const RecycleState& recycle, std::uint64_t epoch);

struct SrfomStep {
  Approximant approx;
  SketchedBundle bundle;
  std::optional<EconQR> qr;    ///< whitening factors (unstabilized path)
  std::optional<EconSVD> svd;  ///< SVD of SVhat (stabilized path)
  SketchedKrylov krylov;
};

/// Sketch-and-recycle FOM step on a t-truncated Arnoldi basis. The recycle
/// state must be current for A (see refresh_recycle_state). With
/// stabilized = true the truncated-SVD extraction is used.
SrfomStep srfom_step(const SparseMatrix& A, const Vector& b, const SketchOperator& S, const RecycleState& recycle,
                     Index m, const ScalarFunction& f, int t, std::uint64_t epoch, bool stabilized = false,
                     double svdtol = kDefaultSvdTol, Counters* counters = nullptr);

/// Evaluate the sketched extraction on an assembled bundle.
SrfomStep srfom_evaluate(SketchedBundle bundle, const ScalarFunction& f, bool stabilized, double svdtol);

}  // namespace krec
