#pragma once

#include <cstdint>

#include "krec/approximants.hpp"
#include "krec/arnoldi.hpp"
#include "krec/counters.hpp"
#include "krec/dense.hpp"
#include "krec/recycle_state.hpp"
#include "krec/sketch.hpp"
#include "krec/sparse.hpp"
#include "krec/types.hpp"

namespace krec {

/// Result of a recycling update. coeffs maps the working basis of the step
/// to the new U (U = basis * coeffs), schur.T carries the selected Ritz
/// values.
struct RecycleUpdate {
  RecycleState state;
  PartialSchur schur;
  DenseMatrix coeffs;
  Index k_requested = 0;  ///< larger than state.k() when the update had to reduce k
};

/// Rayleigh-Ritz update for rFOM: X from the partial Schur form of G,
/// U = Q X. Only U is filled; AU is left to the caller.
RecycleUpdate update_orthonormal(const DenseMatrix& Q, const DenseMatrix& G, Index k);

/// rFOM update from a step: U = Q X, coeffs = to_block X.
RecycleUpdate update_orthonormal(const RecycledFom& step, Index k);

/// M = R^{-1} Q^* SAV, the minimum-norm solution of min ||SAV - SV M||_F.
/// Throws RankDeficientError when R is singular to kWhitenRankTol.
DenseMatrix srr_matrix(const EconQR& qr, const DenseMatrix& SAV);

/// Sketched Rayleigh-Ritz update on the bundle of a srFOM step. U = Vhat X
/// with columns scaled to unit sketched norm; SU and SAU follow by the same
/// right multiplication and refer to bundle.epoch.
RecycleUpdate update_sketched(const SketchedBundle& bundle, const EconQR& qr, Index k);
/// Same, computing the QR of SVhat.
RecycleUpdate update_sketched(const SketchedBundle& bundle, Index k);

/// Stabilized update: the pencil (L_l^* SAVhat J_l, Sigma_l) is reduced to
/// Sigma_l^{-1} L_l^* SAVhat J_l and U = Vhat J_l Z. If fewer than k
/// singular values survive, k is reduced to l.
RecycleUpdate update_sketched_stab(const SketchedBundle& bundle, const EconSVD& svd, Index k,
                                   double svdtol = kDefaultSvdTol);
RecycleUpdate update_sketched_stab(const SketchedBundle& bundle, Index k, double svdtol = kDefaultSvdTol);

/// Update used with the inexact option: SAU in the bundle may refer to an
/// older matrix; the result is marked as belonging to bundle.epoch anyway.
RecycleUpdate update_inexact(const SketchedBundle& bundle, Index k, bool stabilized, double svdtol = kDefaultSvdTol);

/// A * (B C) for B = [U, V_m] (RecycleFirst) or [V_m, U] (KrylovFirst),
/// from the Arnoldi relation and the previous AU. No matvecs.
DenseMatrix propagate_AU(const ArnoldiFactorization& fac, const DenseMatrix& AU_prev, const DenseMatrix& C,
                         BasisLayout layout);

/// Bring the caches of a state in line with the matrix of `epoch`. For a
/// stale state AU = A U costs k matvecs and, when sketch is given,
/// SAU = S (AU) costs k sketches. A current state is left untouched.
void refresh_recycle_state(RecycleState& state, const SparseMatrix& A, std::uint64_t epoch,
                           const SketchOperator* sketch = nullptr, Counters* counters = nullptr);

}  // namespace krec
