#include "krec/recycle.hpp"

#include <algorithm>
#include <utility>

#include "krec/error.hpp"

namespace krec {

namespace {

// Scale columns of U (and its sketches) to unit sketched norm.
void normalize_sketched(RecycleState& st, DenseMatrix& coeffs) {
  for (Index j = 0; j < st.U.cols(); ++j) {
    const double n = st.SU.col(j).norm();
    if (n == 0.0) throw RankDeficientError("recycle: augmentation column collapsed to zero");
    st.U.col(j) /= n;
    st.SU.col(j) /= n;
    st.SAU.col(j) /= n;
    coeffs.col(j) /= n;
  }
}

RecycleUpdate finish_sketched(const SketchedBundle& bundle, PartialSchur schur, DenseMatrix coeffs, Index k) {
  RecycleUpdate out;
  out.k_requested = k;
  out.state.U = bundle.Vhat * coeffs;
  out.state.SU = bundle.SVhat * coeffs;
  out.state.SAU = bundle.SAVhat * coeffs;
  out.state.epoch = bundle.epoch;
  out.state.k_target = k;
  normalize_sketched(out.state, coeffs);
  out.schur = std::move(schur);
  out.coeffs = std::move(coeffs);
  return out;
}

}  // namespace

RecycleUpdate update_orthonormal(const DenseMatrix& Q, const DenseMatrix& G, Index k) {
  if (G.rows() != Q.cols() || G.cols() != Q.cols()) throw DimensionError("update_orthonormal: G must match Q");
  if (k < 0) throw DimensionError("update_orthonormal: negative k");
  RecycleUpdate out;
  out.k_requested = k;
  const Index kk = std::min(k, Q.cols());
  out.schur = partial_schur_closest_to_origin(G, kk);
  out.coeffs = out.schur.X;
  out.state.U = Q * out.schur.X;
  out.state.k_target = k;
  return out;
}

RecycleUpdate update_orthonormal(const RecycledFom& step, Index k) {
  RecycleUpdate out = update_orthonormal(step.Q, step.G, k);
  out.coeffs = step.to_block * out.schur.X;
  return out;
}

DenseMatrix srr_matrix(const EconQR& qr, const DenseMatrix& SAV) {
  if (qr.Q.rows() != SAV.rows() || qr.R.cols() != SAV.cols()) throw DimensionError("srr_matrix: shape mismatch");
  if (!(r_diagonal_ratio(qr.R) > kWhitenRankTol))
    throw RankDeficientError("srr_matrix: sketched basis is numerically rank deficient; use the stabilized update");
  return qr.R.triangularView<Eigen::Upper>().solve(qr.Q.adjoint() * SAV);
}

RecycleUpdate update_sketched(const SketchedBundle& bundle, const EconQR& qr, Index k) {
  if (k < 0) throw DimensionError("update_sketched: negative k");
  const DenseMatrix M = srr_matrix(qr, bundle.SAVhat);
  const Index kk = std::min(k, M.rows());
  PartialSchur schur = partial_schur_closest_to_origin(M, kk);
  DenseMatrix coeffs = schur.X;
  return finish_sketched(bundle, std::move(schur), std::move(coeffs), k);
}

RecycleUpdate update_sketched(const SketchedBundle& bundle, Index k) {
  return update_sketched(bundle, qr_econ(bundle.SVhat), k);
}

RecycleUpdate update_sketched_stab(const SketchedBundle& bundle, const EconSVD& svd, Index k, double svdtol) {
  if (k < 0) throw DimensionError("update_sketched_stab: negative k");
  const Index l = truncation_rank(svd.sigma, svdtol);
  if (l == 0) throw RankDeficientError("update_sketched_stab: no singular value above the cutoff");
  const auto L = svd.L.leftCols(l);
  const auto J = svd.J.leftCols(l);
  const Vector sinv = svd.sigma.head(l).cwiseInverse().cast<Complex>();
  const DenseMatrix M = sinv.asDiagonal() * (L.adjoint() * bundle.SAVhat * J);
  const Index kk = std::min(k, l);
  PartialSchur schur = partial_schur_closest_to_origin(M, kk);
  DenseMatrix coeffs = J * schur.X;
  return finish_sketched(bundle, std::move(schur), std::move(coeffs), k);
}

RecycleUpdate update_sketched_stab(const SketchedBundle& bundle, Index k, double svdtol) {
  return update_sketched_stab(bundle, svd_econ(bundle.SVhat), k, svdtol);
}

RecycleUpdate update_inexact(const SketchedBundle& bundle, Index k, bool stabilized, double svdtol) {
  return stabilized ? update_sketched_stab(bundle, k, svdtol) : update_sketched(bundle, k);
}

DenseMatrix propagate_AU(const ArnoldiFactorization& fac, const DenseMatrix& AU_prev, const DenseMatrix& C,
                         BasisLayout layout) {
  const Index m = fac.m();
  const Index k = AU_prev.cols();
  if (C.rows() != m + k) throw DimensionError("propagate_AU: coefficient rows must equal m + k");
  if (k > 0 && AU_prev.rows() != fac.dim()) throw DimensionError("propagate_AU: AU has the wrong length");
  const Index v0 = layout == BasisLayout::RecycleFirst ? k : 0;
  const Index u0 = layout == BasisLayout::RecycleFirst ? 0 : m;
  const DenseMatrix Cv = C.middleRows(v0, m);
  DenseMatrix out = fac.V_ext() * (fac.H_ext() * Cv);
  if (k > 0) out.noalias() += AU_prev * C.middleRows(u0, k);
  return out;
}

void refresh_recycle_state(RecycleState& state, const SparseMatrix& A, std::uint64_t epoch,
                           const SketchOperator* sketch, Counters* counters) {
  if (state.empty()) {
    state.epoch = epoch;
    return;
  }
  if (state.epoch == epoch && (sketch ? state.SAU.cols() == state.k() : state.AU.has_value())) return;
  if (state.epoch != epoch || !state.AU) {
    DenseMatrix AU(state.U.rows(), state.k());
    for (Index j = 0; j < state.k(); ++j) AU.col(j) = csr_matvec(A, state.U.col(j), counters);
    state.AU = std::move(AU);
  }
  if (sketch) state.SAU = sketch->apply_columns(*state.AU, counters);
  state.epoch = epoch;
}

}  // namespace krec
