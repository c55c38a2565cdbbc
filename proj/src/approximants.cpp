#include "krec/approximants.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include <Eigen/LU>

#include "krec/error.hpp"

namespace krec {

namespace {

constexpr double kDropTol = 1e-12;
constexpr double kSgmresCondLimit = 1e14;

Vector scaled_e1(Index n, double beta) {
  Vector e = Vector::Zero(n);
  if (n > 0) e[0] = beta;
  return e;
}

// X R^{-1} for upper triangular R.
DenseMatrix right_solve_upper(const DenseMatrix& R, DenseMatrix X) {
  R.triangularView<Eigen::Upper>().solveInPlace<Eigen::OnTheRight>(X);
  return X;
}

Vector solve_upper(const DenseMatrix& R, const Vector& z) { return R.triangularView<Eigen::Upper>().solve(z); }

}  // namespace

const Vector& Approximant::materialize(const Eigen::Ref<const DenseMatrix>& basis) {
  if (basis.cols() != coeffs.size()) throw DimensionError("materialize: basis does not match the coefficients");
  if (!full_vector) full_vector = basis * coeffs;
  return *full_vector;
}

Approximant fom_closed(const DenseMatrix& V, const DenseMatrix& G, const Vector& b, const ScalarFunction& f,
                       Counters* counters) {
  if (V.rows() != b.size()) throw DimensionError("fom_closed: basis and rhs lengths differ");
  if (G.rows() != V.cols() || G.cols() != V.cols()) throw DimensionError("fom_closed: G must be cols(V) square");
  const Vector c = V.adjoint() * b;
  count_inner_products(counters, static_cast<std::uint64_t>(V.cols()));
  Approximant out;
  out.coeffs = matfun_apply(f, G, c);
  out.krylov_dim = V.cols();
  return out;
}

Approximant fom_from_arnoldi(const ArnoldiFactorization& fac, const ScalarFunction& f) {
  Approximant out;
  out.coeffs = matfun_apply(f, DenseMatrix(fac.H()), scaled_e1(fac.m(), fac.beta()));
  out.krylov_dim = fac.m();
  return out;
}

RecycledFom rfom_from_factorization(const ArnoldiFactorization& fac, const DenseMatrix& U, const DenseMatrix& AU,
                                    const ScalarFunction& f, Counters* counters) {
  const Index m = fac.m();
  const Index k = U.cols();
  RecycledFom out;
  if (k == 0) {
    out.approx = fom_from_arnoldi(fac, f);
    out.Q = fac.V();
    out.G = fac.H();
    out.to_block = DenseMatrix::Identity(m, m);
    return out;
  }
  if (U.rows() != fac.dim() || AU.rows() != fac.dim() || AU.cols() != k)
    throw DimensionError("rfom: U and AU must be N x k");

  // Gram-Schmidt with reorthogonalization over B = [U, V_m].
  const Index n = k + m;
  const Index N = fac.dim();
  DenseMatrix Q(N, n);
  DenseMatrix Rt = DenseMatrix::Zero(n, n);  // B = Q Rt (first r rows used)
  std::vector<Index> kept;
  Index r = 0;
  for (Index j = 0; j < n; ++j) {
    Vector w = j < k ? Vector(U.col(j)) : Vector(fac.V().col(j - k));
    const double wn0 = w.norm();
    for (int pass = 0; pass < 2; ++pass) {
      for (Index i = 0; i < r; ++i) {
        const Complex h = Q.col(i).dot(w);
        w -= h * Q.col(i);
        Rt(i, j) += h;
      }
      count_inner_products(counters, static_cast<std::uint64_t>(r));
    }
    const double wn = w.norm();
    count_inner_products(counters);
    if (wn <= kDropTol * wn0) {
      ++out.dropped;
      continue;
    }
    out.min_residual_ratio = std::min(out.min_residual_ratio, wn / wn0);
    Q.col(r) = w / wn;
    Rt(r, j) = wn;
    kept.push_back(j);
    ++r;
  }
  Q.conservativeResize(Eigen::NoChange, r);
  Rt.conservativeResize(r, Eigen::NoChange);

  DenseMatrix R_kept(r, r);
  for (Index c = 0; c < r; ++c) R_kept.col(c) = Rt.col(kept[c]);

  // Q^* A B restricted to kept columns. Q^* V_m is read off Rt, Q^* v_{m+1}
  // and Q^* A u_j cost inner products.
  DenseMatrix QAB(r, r);
  Vector Qv_next = Vector::Zero(r);
  const Complex h_next = fac.h_next();
  if (h_next != Complex(0.0)) {
    Qv_next = Q.adjoint() * fac.v_next();
    count_inner_products(counters, static_cast<std::uint64_t>(r));
  }
  const DenseMatrix QV = Rt.rightCols(m);
  const DenseMatrix H = fac.H();
  for (Index c = 0; c < r; ++c) {
    const Index j = kept[c];
    if (j < k) {
      QAB.col(c) = Q.adjoint() * AU.col(j);
      count_inner_products(counters, static_cast<std::uint64_t>(r));
    } else {
      const Index jj = j - k;
      QAB.col(c) = QV * H.col(jj);
      if (jj == m - 1) QAB.col(c) += h_next * Qv_next;
    }
  }
  out.G = right_solve_upper(R_kept, QAB);

  const DenseMatrix Rinv = R_kept.triangularView<Eigen::Upper>().solve(DenseMatrix::Identity(r, r));
  out.to_block = DenseMatrix::Zero(n, r);
  for (Index c = 0; c < r; ++c) out.to_block.row(kept[c]) = Rinv.row(c);

  const Vector Qb = fac.beta() * Rt.col(k);
  out.approx.coeffs = matfun_apply(f, out.G, Qb);
  out.approx.layout = BasisLayout::RecycleFirst;
  out.approx.krylov_dim = m;
  out.approx.recycle_dim = k;
  out.Q = std::move(Q);
  return out;
}

RfomStep rfom_step(const SparseMatrix& A, const Vector& b, const DenseMatrix& U, Index m, const ScalarFunction& f,
                   const DenseMatrix* cached_AU, Counters* counters) {
  RfomStep out;
  out.fac = arnoldi_build(A, b, m, ArnoldiMode::full(), counters);
  if (cached_AU) {
    out.AU = *cached_AU;
  } else {
    out.AU = DenseMatrix(U.rows(), U.cols());
    for (Index j = 0; j < U.cols(); ++j) out.AU.col(j) = csr_matvec(A, U.col(j), counters);
  }
  out.result = rfom_from_factorization(out.fac, U, out.AU, f, counters);
  return out;
}

WhitenedFom sfom_whitened(const DenseMatrix& SV, const DenseMatrix& SAV, const Vector& Sb, const ScalarFunction& f) {
  if (SV.rows() != SAV.rows() || SV.cols() != SAV.cols() || Sb.size() != SV.rows())
    throw DimensionError("sfom_whitened: inconsistent sketch shapes");
  WhitenedFom out;
  out.qr = qr_econ(SV);
  const double ratio = r_diagonal_ratio(out.qr.R);
  if (!(ratio > kWhitenRankTol))
    throw RankDeficientError("sfom_whitened: sketched basis is numerically rank deficient (R ratio " +
                             std::to_string(ratio) + "); use the stabilized extraction");
  const DenseMatrix M = right_solve_upper(out.qr.R, out.qr.Q.adjoint() * SAV);
  const Vector z = matfun_apply(f, M, out.qr.Q.adjoint() * Sb);
  out.approx.coeffs = solve_upper(out.qr.R, z);
  out.approx.krylov_dim = SV.cols();
  return out;
}

Index truncation_rank(const RealVector& sigma, double svdtol) {
  if (sigma.size() == 0) return 0;
  const double cut = svdtol * sigma[0];
  Index ell = 0;
  while (ell < sigma.size() && sigma[ell] > 0.0 && sigma[ell] >= cut) ++ell;
  return ell;
}

StabilizedFom srfom_stab(const DenseMatrix& SV, const DenseMatrix& SAV, const Vector& Sb, const ScalarFunction& f,
                         double svdtol) {
  if (SV.rows() != SAV.rows() || SV.cols() != SAV.cols() || Sb.size() != SV.rows())
    throw DimensionError("srfom_stab: inconsistent sketch shapes");
  StabilizedFom out;
  out.svd = svd_econ(SV);
  out.ell = truncation_rank(out.svd.sigma, svdtol);
  if (out.ell == 0) throw RankDeficientError("srfom_stab: no singular value above the cutoff");
  const Index l = out.ell;
  const auto L = out.svd.L.leftCols(l);
  const auto J = out.svd.J.leftCols(l);
  const Eigen::ArrayXd sinv = out.svd.sigma.head(l).cwiseInverse().array();
  DenseMatrix M = L.adjoint() * SAV * J;
  M = M * sinv.matrix().cast<Complex>().asDiagonal();
  const Vector z = matfun_apply(f, M, L.adjoint() * Sb);
  out.approx.coeffs = J * (sinv.matrix().cast<Complex>().asDiagonal() * z);
  out.approx.krylov_dim = SV.cols();
  out.approx.ell = l;
  return out;
}

Approximant gmres_type_closed(const ArnoldiFactorization& fac, const ScalarFunction& f) {
  const Index m = fac.m();
  DenseMatrix Hc = fac.H();
  const Complex h = fac.h_next();
  if (h != Complex(0.0)) {
    Vector em = Vector::Zero(m);
    em[m - 1] = 1.0;
    const Vector x = lu_solve(DenseMatrix(fac.H().adjoint()), em);
    Hc.col(m - 1) += std::norm(h) * x;
  }
  Approximant out;
  out.coeffs = matfun_apply(f, Hc, scaled_e1(m, fac.beta()));
  out.krylov_dim = m;
  return out;
}

Approximant sgmres_type(const DenseMatrix& SV, const DenseMatrix& SW, const Vector& Sb, const ScalarFunction& f) {
  if (SV.rows() != SW.rows() || SV.cols() != SW.cols() || Sb.size() != SV.rows())
    throw DimensionError("sgmres_type: inconsistent sketch shapes");
  const Index n = SV.cols();
  const DenseMatrix P = SW.adjoint() * SV;
  Eigen::PartialPivLU<DenseMatrix> lu(P);
  const double rc = lu.rcond();
  if (!(rc * kSgmresCondLimit > 1.0))
    throw RankDeficientError("sgmres_type: (SW)^* SV is numerically singular; use the stabilized extraction");
  DenseMatrix rhs(n, n + 1);
  rhs.leftCols(n) = SW.adjoint() * SW;
  rhs.col(n) = SW.adjoint() * Sb;
  const DenseMatrix sol = lu_solve(P, rhs);
  Approximant out;
  out.coeffs = matfun_apply(f, sol.leftCols(n), sol.col(n));
  out.krylov_dim = n;
  return out;
}

Approximant sgmres_type_stab(const DenseMatrix& SV, const DenseMatrix& SW, const Vector& Sb, const ScalarFunction& f,
                             double svdtol) {
  if (SV.rows() != SW.rows() || SV.cols() != SW.cols() || Sb.size() != SV.rows())
    throw DimensionError("sgmres_type_stab: inconsistent sketch shapes");
  const EconSVD svd = svd_econ(SW);
  const Index l = truncation_rank(svd.sigma, svdtol);
  if (l == 0) throw RankDeficientError("sgmres_type_stab: no singular value above the cutoff");
  const auto L = svd.L.leftCols(l);
  const auto J = svd.J.leftCols(l);
  const DenseMatrix K = L.adjoint() * SV * J;
  DenseMatrix rhs(l, l + 1);
  rhs.leftCols(l) = svd.sigma.head(l).cast<Complex>().asDiagonal();
  rhs.col(l) = L.adjoint() * Sb;
  const DenseMatrix sol = lu_solve(K, rhs);
  Approximant out;
  out.coeffs = J * matfun_apply(f, sol.leftCols(l), sol.col(l));
  out.krylov_dim = SV.cols();
  out.ell = l;
  return out;
}

void SketchedKrylov::sync(const SketchOperator& S, Counters* counters) {
  const Index want = fac.m() + 1;
  Index have = SV_ext.cols();
  if (have > want) {
    SV_ext.conservativeResize(Eigen::NoChange, want);
    return;
  }
  if (SV_ext.rows() != S.sketch_dim()) {
    SV_ext = DenseMatrix(S.sketch_dim(), 0);
    have = 0;
  }
  SV_ext.conservativeResize(S.sketch_dim(), want);
  for (Index j = have; j < want; ++j) {
    if (j == fac.m() && fac.breakdown())
      SV_ext.col(j).setZero();
    else
      SV_ext.col(j) = S.apply(fac.V_ext().col(j), counters);
  }
}

SketchedKrylov sketched_arnoldi(const SparseMatrix& A, const Vector& b, Index m, const SketchOperator& S, int t,
                                Counters* counters) {
  SketchedKrylov out;
  out.fac = arnoldi_build(A, b, m, ArnoldiMode::truncated(t), counters);
  out.SV_ext = DenseMatrix(S.sketch_dim(), 0);
  out.sync(S, counters);
  return out;
}

SketchedBundle assemble_sketched(const SketchedKrylov& krylov, const RecycleState& recycle, std::uint64_t epoch) {
  const auto& fac = krylov.fac;
  const Index m = fac.m();
  const Index k = recycle.k();
  const Index s = krylov.SV_ext.rows();
  if (krylov.SV_ext.cols() != m + 1) throw DimensionError("assemble_sketched: basis sketches are not in sync");
  if (k > 0 && (recycle.SU.cols() != k || recycle.SAU.cols() != k || recycle.SU.rows() != s))
    throw DimensionError("assemble_sketched: recycle sketches are missing");
  SketchedBundle out;
  out.m = m;
  out.k = k;
  out.epoch = epoch;
  out.Vhat.resize(fac.dim(), m + k);
  out.Vhat.leftCols(m) = fac.V();
  out.SVhat.resize(s, m + k);
  out.SVhat.leftCols(m) = krylov.SV_ext.leftCols(m);
  out.SAVhat.resize(s, m + k);
  out.SAVhat.leftCols(m) = sketch_av_from_arnoldi(fac, krylov.SV_ext);
  if (k > 0) {
    out.Vhat.rightCols(k) = recycle.U;
    out.SVhat.rightCols(k) = recycle.SU;
    out.SAVhat.rightCols(k) = recycle.SAU;
  }
  out.Sb = krylov.Sb();
  return out;
}

SrfomStep srfom_evaluate(SketchedBundle bundle, const ScalarFunction& f, bool stabilized, double svdtol) {
  SrfomStep out;
  if (stabilized) {
    StabilizedFom st = srfom_stab(bundle.SVhat, bundle.SAVhat, bundle.Sb, f, svdtol);
    out.approx = std::move(st.approx);
    out.svd = std::move(st.svd);
  } else {
    WhitenedFom w = sfom_whitened(bundle.SVhat, bundle.SAVhat, bundle.Sb, f);
    out.approx = std::move(w.approx);
    out.qr = std::move(w.qr);
  }
  out.approx.layout = bundle.k > 0 ? BasisLayout::KrylovFirst : BasisLayout::Krylov;
  out.approx.krylov_dim = bundle.m;
  out.approx.recycle_dim = bundle.k;
  out.bundle = std::move(bundle);
  return out;
}

SrfomStep srfom_step(const SparseMatrix& A, const Vector& b, const SketchOperator& S, const RecycleState& recycle,
                     Index m, const ScalarFunction& f, int t, std::uint64_t epoch, bool stabilized, double svdtol,
                     Counters* counters) {
  SketchedKrylov krylov = sketched_arnoldi(A, b, m, S, t, counters);
  SrfomStep out = srfom_evaluate(assemble_sketched(krylov, recycle, epoch), f, stabilized, svdtol);
  out.krylov = std::move(krylov);
  return out;
}

}  // namespace krec
