#include <gtest/gtest.h>

#include <cmath>

#include "krec/error.hpp"
#include "krec/matfun.hpp"
#include "support.hpp"

using namespace krec;

namespace {

DenseMatrix diag(std::initializer_list<Complex> d) {
  Vector v(static_cast<Index>(d.size()));
  Index i = 0;
  for (Complex x : d) v[i++] = x;
  return v.asDiagonal();
}

}  // namespace

TEST(Matfun, InvDiagonal) {
  const DenseMatrix F = matfun(ScalarFunction::inv(), diag({2.0, 5.0}));
  EXPECT_LE((F - diag({0.5, 0.2})).norm(), 1e-15);
}

TEST(Matfun, InvSqrtDiagonal) {
  const DenseMatrix F = matfun(ScalarFunction::inv_sqrt(), diag({1.0, 4.0}));
  EXPECT_LE((F - diag({1.0, 0.5})).norm(), 1e-15);
}

TEST(Matfun, ExpNilpotent) {
  DenseMatrix H = DenseMatrix::Zero(2, 2);
  H(0, 1) = 1.0;
  DenseMatrix ref(2, 2);
  ref << 1.0, 1.0, 0.0, 1.0;
  EXPECT_LE((matfun(ScalarFunction::exp(), H) - ref).norm(), 1e-14);
}

TEST(Matfun, InvSqrtHpdSquaresToInverse) {
  const DenseMatrix H = fixtures::random_hpd(20, 3, 0.5, 50.0);
  const DenseMatrix F = matfun(ScalarFunction::inv_sqrt(), H);
  EXPECT_LE(fixtures::rel_diff(F * F, H.inverse()), 1e-10);
}

TEST(Matfun, ExpOfZeroIsIdentity) {
  EXPECT_EQ(matfun(ScalarFunction::exp(), DenseMatrix::Zero(4, 4)), DenseMatrix::Identity(4, 4));
}

TEST(Matfun, ExpDiagonalElementwise) {
  const DenseMatrix F = matfun(ScalarFunction::exp(), diag({-1.0, Complex(0.5, 2.0), 3.0}));
  EXPECT_NEAR(std::abs(F(0, 0) - std::exp(-1.0)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(F(1, 1) - std::exp(Complex(0.5, 2.0))), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(F(2, 2) - std::exp(3.0)), 0.0, 1e-14 * std::exp(3.0));
}

TEST(Matfun, ExpScaled) {
  const DenseMatrix H = fixtures::random_dense(6, 6, 4);
  EXPECT_LE(fixtures::rel_diff(matfun(ScalarFunction::exp_scaled(0.3), H), matfun(ScalarFunction::exp(), 0.3 * H)),
            1e-13);
}

TEST(Matfun, InvSqrtSquareLaw) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const DenseMatrix H = fixtures::random_shifted_nonhermitian(15, seed, 4.0);
    const DenseMatrix F = matfun(ScalarFunction::inv_sqrt(), H);
    EXPECT_LE((F * F * H - DenseMatrix::Identity(15, 15)).norm(), 1e-9);
  }
}

TEST(Matfun, SimilarityInvariance) {
  const DenseMatrix H = fixtures::random_shifted_nonhermitian(12, 9, 3.0);
  const DenseMatrix Q = fixtures::random_unitary(12, 10);
  for (const auto& f : {ScalarFunction::inv_sqrt(), ScalarFunction::inv(), ScalarFunction::exp()}) {
    const DenseMatrix lhs = matfun(f, DenseMatrix(Q.adjoint() * H * Q));
    const DenseMatrix rhs = Q.adjoint() * matfun(f, H) * Q;
    EXPECT_LE(fixtures::rel_diff(lhs, rhs), 1e-10) << f.name();
  }
}

TEST(Matfun, ApplyMatchesMatrix) {
  const DenseMatrix H = fixtures::random_shifted_nonhermitian(30, 2, 5.0);
  const Vector c = fixtures::random_vector(30, 3);
  for (const auto& f : {ScalarFunction::inv_sqrt(), ScalarFunction::inv(), ScalarFunction::exp()}) {
    const Vector ref = matfun(f, H) * c;
    EXPECT_LE((matfun_apply(f, H, c) - ref).norm(), 1e-12 * ref.norm()) << f.name();
  }
}

TEST(Matfun, ApplyScalarAndZero) {
  DenseMatrix H(1, 1);
  H(0, 0) = 2.0;
  Vector c(1);
  c[0] = 4.0;
  EXPECT_NEAR(std::abs(matfun_apply(ScalarFunction::inv(), H, c)[0] - 2.0), 0.0, 1e-15);
  const DenseMatrix G = fixtures::random_shifted_nonhermitian(5, 1);
  EXPECT_EQ(matfun_apply(ScalarFunction::exp(), G, Vector::Zero(5)).norm(), 0.0);
}

TEST(Matfun, DomainErrors) {
  EXPECT_THROW(matfun(ScalarFunction::inv(), diag({1.0, 0.0})), DomainError);
  EXPECT_THROW(matfun(ScalarFunction::inv_sqrt(), diag({1.0, -2.0})), DomainError);
  EXPECT_NO_THROW(matfun(ScalarFunction::inv_sqrt(), diag({1.0, Complex(-2.0, 0.5)})));
}

TEST(Matfun, PrincipalBranch) {
  const DenseMatrix F = matfun(ScalarFunction::inv_sqrt(), diag({Complex(-4.0, 1e-3)}));
  EXPECT_GT(F(0, 0).real(), 0.0);
}

TEST(Matfun, ExpFallsBackForNonNormal) {
  DenseMatrix H(2, 2);
  H << 1.0, 1e6, 0.0, 1.0 + 1e-9;
  const DenseMatrix F = matfun(ScalarFunction::exp(), H);
  // exp([[a, b], [0, a+e]]) = e^a [[1, b (e^e - 1)/e], [0, e^e]]
  const double e = 1e-9;
  EXPECT_NEAR(std::abs(F(0, 1) - std::exp(1.0) * 1e6 * std::expm1(e) / e), 0.0, 1e-6 * std::exp(1.0) * 1e6);
  EXPECT_NEAR(std::abs(F(0, 0) - std::exp(1.0)), 0.0, 1e-14 * F.norm());
}

TEST(Matfun, PadeMatchesDiagonalization) {
  const DenseMatrix H = fixtures::random_hpd(10, 4, -5.0, 5.0);
  EXPECT_LE(fixtures::rel_diff(expm_pade(H), matfun(ScalarFunction::exp(), H)), 1e-12);
}

TEST(Matfun, InvSqrtIllConditionedSignalled) {
  DenseMatrix H(2, 2);
  H << 1.0, 1.0, 0.0, 1.0 + 1e-14;
  EXPECT_THROW(matfun(ScalarFunction::inv_sqrt(), H), IllConditionedError);
}

TEST(Matfun, ParseNames) {
  EXPECT_EQ(ScalarFunction::parse("invsqrt").kind, ScalarFunction::Kind::InvSqrt);
  EXPECT_EQ(ScalarFunction::parse("inv").kind, ScalarFunction::Kind::Inv);
  const ScalarFunction e = ScalarFunction::parse("exp:0.01");
  EXPECT_EQ(e.kind, ScalarFunction::Kind::Exp);
  EXPECT_DOUBLE_EQ(e.tau, 0.01);
  EXPECT_ANY_THROW(ScalarFunction::parse("sign"));
}
