#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "krec/driver.hpp"
#include "krec/error.hpp"
#include "krec/generators.hpp"
#include "krec/matrix_market.hpp"
#include "krec/oracle.hpp"
#include "support.hpp"

using namespace krec;
namespace fs = std::filesystem;

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

SequenceSpec base_spec(Method method) {
  SequenceSpec spec;
  spec.method = method;
  spec.matrix = MatrixSource::parse("gen:convdiff2d:16:20");
  spec.matrix.shift = 0.5;
  spec.function = ScalarFunction::inv_sqrt();
  spec.num_problems = 3;
  spec.m = 30;
  spec.k = 5;
  spec.s = 120;
  spec.seed = 7;
  return spec;
}

fs::path temp_path(const std::string& name) { return fs::temp_directory_path() / ("krec_test_" + name); }

}  // namespace

TEST(Generators, NeumannRowSumsAndSymmetry) {
  const SparseMatrix A = gen_neumann2d(5);
  ASSERT_EQ(A.rows(), 25);
  const DenseMatrix D = A.to_dense();
  EXPECT_LE(D.rowwise().sum().norm(), 1e-14);
  EXPECT_EQ(D(0, 0), Complex(4.0));
  EXPECT_EQ(D(0, 1), Complex(-2.0));
  EXPECT_EQ(D(1, 0), Complex(-1.0));
  EXPECT_EQ(D(12, 13), Complex(-1.0));
}

TEST(Generators, AdvDiffStencilAndDefiniteness) {
  const Index n = 6;
  const double pe = 3.0, h = 1.0 / (n + 1), c = pe / (2.0 * h);
  const DenseMatrix D = gen_advdiff2d(n, pe).to_dense();
  const Index i = 2 * n + 2;  // interior point
  EXPECT_NEAR(std::abs(D(i, i) + 4.0 / (h * h)), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(D(i, i - 1) - (1.0 / (h * h) + c)), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(D(i, i + 1) - (1.0 / (h * h) - c)), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(D(i, i - n) - (1.0 / (h * h) + c)), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(D(i, i + n) - (1.0 / (h * h) - c)), 0.0, 1e-10);
  EXPECT_EQ(D(n - 1, n), Complex(0.0));  // no wrap across grid lines
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(0.5 * (D + DenseMatrix(D.adjoint())));
  EXPECT_LT(es.eigenvalues().maxCoeff(), 0.0);
  const DenseMatrix C = gen_convdiff2d(n, pe).to_dense();
  EXPECT_LE((C + h * h * D).norm(), 1e-12 * C.norm());
}

TEST(Generators, ByName) {
  EXPECT_EQ(generate("neumann2d", {4}).rows(), 16);
  EXPECT_EQ(generate("advdiff2d", {5, 1.0}).rows(), 25);
  EXPECT_THROW(generate("nosuch", {4}), DimensionError);
  EXPECT_EQ(generate("advdiff2d", {5}).values(), gen_advdiff2d(5, 0.0).values());
  EXPECT_THROW(generate("advdiff2d", {}), DimensionError);
  EXPECT_THROW(generate("neumann2d", {2.5}), DimensionError);
}

TEST(Generators, PerturbationKeepsPatternAndIsDeterministic) {
  const SparseMatrix A = gen_neumann2d(6);
  const SparseMatrix P1 = perturb_sparsity_gaussian(A, 1e-3, 9);
  const SparseMatrix P2 = perturb_sparsity_gaussian(A, 1e-3, 9);
  const SparseMatrix P3 = perturb_sparsity_gaussian(A, 1e-3, 10);
  EXPECT_EQ(P1.col_indices(), A.col_indices());
  EXPECT_EQ(P1.row_offsets(), A.row_offsets());
  EXPECT_EQ(P1.values(), P2.values());
  EXPECT_NE(P1.values(), P3.values());
  const double dist = (P1.to_dense() - A.to_dense()).norm();
  EXPECT_GT(dist, 0.0);
  EXPECT_LT(dist, 1e-3 * 10.0 * std::sqrt(static_cast<double>(A.nonzeros())));
  EXPECT_EQ(perturb_sparsity_gaussian(A, 0.0, 9).values(), A.values());
}

TEST(MatrixMarket, RoundTripIsExact) {
  const SparseMatrix A = fixtures::random_sparse(40, 4, 3, Complex(2.0, 0.5));
  std::stringstream ss;
  write_matrix_market(A, ss);
  const SparseMatrix B = read_matrix_market(ss);
  EXPECT_EQ(B.rows(), 40);
  EXPECT_EQ(B.values(), A.values());
  EXPECT_EQ(B.col_indices(), A.col_indices());
  const fs::path p = temp_path("roundtrip.mtx");
  write_matrix_market(A, p.string());
  EXPECT_EQ(read_matrix_market(p.string()).values(), A.values());
  fs::remove(p);
}

TEST(MatrixMarket, SymmetryKinds) {
  std::stringstream sym("%%MatrixMarket matrix coordinate real symmetric\n% c\n2 2 2\n1 1 1.5\n2 1 -2\n");
  DenseMatrix D = read_matrix_market(sym).to_dense();
  EXPECT_EQ(D(0, 1), Complex(-2.0));
  EXPECT_EQ(D(1, 0), Complex(-2.0));
  std::stringstream her("%%MatrixMarket matrix coordinate complex hermitian\n2 2 1\n2 1 1 3\n");
  D = read_matrix_market(her).to_dense();
  EXPECT_EQ(D(1, 0), Complex(1.0, 3.0));
  EXPECT_EQ(D(0, 1), Complex(1.0, -3.0));
  std::stringstream skew("%%MatrixMarket matrix coordinate integer skew-symmetric\n2 2 1\n2 1 4\n");
  D = read_matrix_market(skew).to_dense();
  EXPECT_EQ(D(0, 1), Complex(-4.0));
  std::stringstream dup("%%MatrixMarket matrix coordinate real general\n1 1 2\n1 1 1\n1 1 2\n");
  EXPECT_EQ(read_matrix_market(dup).to_dense()(0, 0), Complex(3.0));
}

TEST(MatrixMarket, ErrorsCarryLineNumbers) {
  std::stringstream banner("%%MatrixMarket matrix array real general\n2 2\n");
  try {
    read_matrix_market(banner);
    FAIL();
  } catch (const BannerError& e) {
    EXPECT_EQ(e.line(), 1u);
  }
  std::stringstream bad("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n2 x 3\n");
  try {
    read_matrix_market(bad);
    FAIL();
  } catch (const MalformedLineError& e) {
    EXPECT_EQ(e.line(), 4u);
  }
  std::stringstream oob("%%MatrixMarket matrix coordinate real general\n%\n2 2 1\n3 1 1.0\n");
  try {
    read_matrix_market(oob);
    FAIL();
  } catch (const IndexOutOfBoundsError& e) {
    EXPECT_EQ(e.line(), 4u);
  }
  std::stringstream shortf("%%MatrixMarket matrix coordinate real general\n2 2 3\n1 1 1.0\n");
  EXPECT_THROW(read_matrix_market(shortf), ParseError);
  EXPECT_THROW(read_matrix_market("/nonexistent/file.mtx"), Error);
}

TEST(Oracle, InvSqrtMatchesHermitianEigen) {
  const DenseMatrix D = fixtures::random_hpd(40, 5, 0.1, 10.0);
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(D);
  const RealVector w = es.eigenvalues().cwiseSqrt().cwiseInverse();
  const DenseMatrix ref = es.eigenvectors() * w.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
  EXPECT_LE(fixtures::rel_diff(dense_matrix_function(D, ScalarFunction::inv_sqrt()), ref), 1e-12);
}

TEST(Oracle, ExpOfNormalMatrix) {
  const DenseMatrix Q = fixtures::random_unitary(30, 6);
  Vector lam(30);
  for (Index i = 0; i < 30; ++i) lam[i] = Complex(-0.3 * i, 0.2 * i);
  const DenseMatrix D = Q * lam.asDiagonal() * Q.adjoint();
  const DenseMatrix ref = Q * lam.array().exp().matrix().asDiagonal() * Q.adjoint();
  EXPECT_LE(fixtures::rel_diff(dense_matrix_function(D, ScalarFunction::exp()), ref), 1e-12);
  const Vector tl = (0.5 * lam).array().exp();
  EXPECT_LE(fixtures::rel_diff(dense_matrix_function(D, ScalarFunction::exp_scaled(0.5)),
                               Q * tl.asDiagonal() * Q.adjoint()),
            1e-12);
}

TEST(Oracle, CacheAndCap) {
  const SparseMatrix A = fixtures::to_sparse(fixtures::random_hpd(30, 7));
  const Vector b = fixtures::random_vector(30, 8);
  OracleCache cache(100);
  const auto f = ScalarFunction::inv_sqrt();
  const Vector x1 = *cache.apply(A, b, f);
  const Vector x2 = *cache.apply(A, b, f);
  EXPECT_EQ(x1, x2);
  EXPECT_LE((x1 - *oracle_exact(A, b, f)).norm(), 1e-13 * x1.norm());
  EXPECT_FALSE(oracle_exact(A, b, f, 29).has_value());
  OracleCache tiny(10);
  EXPECT_FALSE(tiny.apply(A, b, f).has_value());
  const Vector xi = *oracle_exact(A, b, ScalarFunction::inv());
  EXPECT_LE((A.to_dense() * xi - b).norm(), 1e-12 * b.norm());
}

TEST(MatrixSource, Parse) {
  const MatrixSource g = MatrixSource::parse("gen:advdiff2d:32:10");
  EXPECT_EQ(g.generator, "advdiff2d");
  EXPECT_EQ(g.params, (std::vector<double>{32, 10}));
  EXPECT_EQ(MatrixSource::parse("some/file.mtx").path, "some/file.mtx");
  EXPECT_THROW(MatrixSource::parse("gen:advdiff2d:3x"), DimensionError);
  EXPECT_THROW(MatrixSource::parse("gen:"), DimensionError);
  MatrixSource s = MatrixSource::parse("gen:neumann2d:3");
  s.shift = Complex(1.0, 2.0);
  EXPECT_EQ(s.load().to_dense()(4, 4), Complex(5.0, 2.0));
}

TEST(Methods, NamesRoundTrip) {
  for (Method m : {Method::FOM, Method::sFOM, Method::rFOM, Method::srFOM, Method::srFOM_stab})
    EXPECT_EQ(parse_method(method_name(m)), m);
  EXPECT_EQ(parse_method("SRFOM_STAB"), Method::srFOM_stab);
  EXPECT_THROW(parse_method("gmres"), DimensionError);
}

TEST(SequenceSpec, Validation) {
  SequenceSpec spec = base_spec(Method::srFOM);
  EXPECT_NO_THROW(spec.validate(256));
  spec.k = 30;
  EXPECT_THROW(spec.validate(256), DimensionError);
  spec = base_spec(Method::srFOM);
  spec.s = 34;
  EXPECT_THROW(spec.validate(256), DimensionError);
  spec = base_spec(Method::FOM);
  spec.m = 300;
  EXPECT_THROW(spec.validate(256), DimensionError);
  spec = base_spec(Method::FOM);
  spec.epsilon = EpsilonPolicy::fixed(1.0);
  EXPECT_THROW(spec.validate(256), DimensionError);
  spec = base_spec(Method::FOM);
  spec.adaptive = AdaptiveM{1e-6, 0, 50};
  EXPECT_THROW(spec.validate(256), DimensionError);
}

TEST(RunSequence, RfomFirstProblemEqualsFom) {
  const auto fom = run_sequence(base_spec(Method::FOM));
  const auto rfom = run_sequence(base_spec(Method::rFOM));
  ASSERT_EQ(fom.size(), 3u);
  ASSERT_TRUE(fom[0].relerr && rfom[0].relerr);
  EXPECT_NEAR(*rfom[0].relerr, *fom[0].relerr, 1e-10 * *fom[0].relerr);
  EXPECT_EQ(rfom[0].matvecs, fom[0].matvecs);
  EXPECT_EQ(rfom[0].inner_products, fom[0].inner_products);
  for (const auto& r : fom) EXPECT_EQ(r.matvecs, 30u);
}

TEST(RunSequence, RecycleCostsOnFixedAndChangingMatrix) {
  for (double perturb : {0.0, 1e-4}) {
    for (Method method : {Method::rFOM, Method::srFOM, Method::srFOM_stab}) {
      SequenceSpec spec = base_spec(method);
      spec.perturbation = perturb;
      const auto recs = run_sequence(spec);
      const bool sk = method != Method::rFOM;
      const std::uint64_t extra = perturb > 0.0 ? 5 : 0;
      for (std::size_t i = 1; i < recs.size(); ++i) {
        ASSERT_TRUE(recs[i].failure.empty()) << recs[i].failure;
        EXPECT_EQ(recs[i].matvecs, 30u + extra) << method_name(method) << " problem " << i;
        if (sk) EXPECT_EQ(recs[i].sketches, 31u + extra) << method_name(method) << " problem " << i;
      }
      EXPECT_EQ(recs[0].matvecs, 30u);
    }
  }
}

TEST(RunSequence, InexactSkipsRefresh) {
  SequenceSpec spec = base_spec(Method::srFOM);
  spec.perturbation = 1e-4;
  spec.inexact_srr = true;
  const auto recs = run_sequence(spec);
  for (std::size_t i = 1; i < recs.size(); ++i) {
    EXPECT_EQ(recs[i].matvecs, 30u);
    EXPECT_EQ(recs[i].sketches, 31u);
  }
}

TEST(RunSequence, RecyclingImprovesAccuracy) {
  SequenceSpec spec = base_spec(Method::rFOM);
  spec.num_problems = 4;
  spec.m = 20;
  spec.k = 8;
  const auto r = run_sequence(spec);
  spec.method = Method::FOM;
  const auto f = run_sequence(spec);
  for (std::size_t i = 1; i < r.size(); ++i) EXPECT_LT(*r[i].relerr, *f[i].relerr);
}

TEST(RunSequence, Deterministic) {
  SequenceSpec spec = base_spec(Method::srFOM_stab);
  spec.perturbation = 1e-4;
  const auto a = run_sequence_detailed(spec);
  const auto b = run_sequence_detailed(spec);
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.solutions[i], b.solutions[i]);
    EXPECT_EQ(*a.records[i].relerr, *b.records[i].relerr);
    EXPECT_EQ(a.records[i].ell, b.records[i].ell);
  }
  EXPECT_EQ(sequence_matrix(spec, 2).values(), sequence_matrix(spec, 2).values());
}

TEST(RunSequence, SequenceHelpersMatchRun) {
  SequenceSpec spec = base_spec(Method::FOM);
  spec.perturbation = 1e-3;
  spec.m = 60;
  const auto res = run_sequence_detailed(spec);
  const SparseMatrix A2 = sequence_matrix(spec, 2);
  const Vector b2 = sequence_rhs(A2.rows(), spec, 2);
  const Vector exact = *oracle_exact(A2, b2, spec.function);
  EXPECT_NEAR((res.solutions[2] - exact).norm() / exact.norm(), *res.records[2].relerr, 1e-12);
}

TEST(RunSequence, ChainedRightHandSide) {
  SequenceSpec spec = base_spec(Method::FOM);
  spec.rhs = RhsRule::PreviousSolution;
  spec.function = ScalarFunction::exp_scaled(-0.05);
  spec.num_problems = 2;
  const auto res = run_sequence_detailed(spec);
  const SparseMatrix A = sequence_matrix(spec, 1);
  const Vector exact = *oracle_exact(A, res.solutions[0], spec.function);
  EXPECT_NEAR((res.solutions[1] - exact).norm() / exact.norm(), *res.records[1].relerr, 1e-12);
}

TEST(RunSequence, AdaptiveOracleStopping) {
  for (Method method : {Method::FOM, Method::rFOM, Method::sFOM, Method::srFOM, Method::srFOM_stab}) {
    SequenceSpec spec = base_spec(method);
    spec.adaptive = AdaptiveM{1e-7, 7, 140};
    spec.s = 200;
    const auto recs = run_sequence(spec);
    for (const auto& r : recs) {
      ASSERT_TRUE(r.failure.empty()) << r.failure;
      EXPECT_EQ(r.m_used % 7, 0) << method_name(method);
      EXPECT_TRUE(r.converged);
      EXPECT_LE(*r.relerr, 1e-7) << method_name(method);
    }
  }
}

TEST(RunSequence, AdaptiveEstimatorStopping) {
  for (Method method : {Method::FOM, Method::sFOM, Method::srFOM_stab}) {
    SequenceSpec spec = base_spec(method);
    spec.adaptive = AdaptiveM{1e-6, 10, 150};
    spec.stop = StopSource::Estimator;
    spec.s = 200;
    const auto recs = run_sequence(spec);
    for (const auto& r : recs) {
      ASSERT_TRUE(r.estimate.has_value());
      EXPECT_LE(*r.estimate, 1e-6);
      EXPECT_GE(r.m_used, 20);
      EXPECT_LE(*r.relerr, 1e-4) << method_name(method);
    }
  }
}

TEST(RunSequence, NotConvergedAtCap) {
  SequenceSpec spec = base_spec(Method::FOM);
  spec.adaptive = AdaptiveM{1e-14, 5, 10};
  const auto recs = run_sequence(spec);
  for (const auto& r : recs) {
    EXPECT_FALSE(r.converged);
    EXPECT_EQ(r.m_used, 10);
  }
  EXPECT_EQ(summarize(recs).not_converged, 3);
}

TEST(Csv, RoundTripAndTotals) {
  SequenceSpec spec = base_spec(Method::srFOM_stab);
  const auto recs = run_sequence(spec);
  std::stringstream ss;
  emit_csv(recs, ss);
  std::string line;
  std::getline(ss, line);
  EXPECT_EQ(line, kCsvHeader);
  std::uint64_t mv = 0;
  Index row = 0;
  while (std::getline(ss, line)) {
    const auto f = split(line, ',');
    ASSERT_EQ(f.size(), 10u);
    EXPECT_EQ(std::stoll(f[0]), row + 1);
    EXPECT_EQ(f[1], "srfom-stab");
    EXPECT_EQ(std::stoll(f[2]), recs[row].m_used);
    mv += std::stoull(f[3]);
    EXPECT_EQ(std::stod(f[6]), *recs[row].relerr);
    EXPECT_TRUE(f[7].empty());
    EXPECT_EQ(std::stoll(f[8]), *recs[row].ell);
    ++row;
  }
  EXPECT_EQ(row, 3);
  EXPECT_EQ(mv, summarize(recs).matvecs);
  std::stringstream sum;
  print_summary(recs, sum);
  EXPECT_NE(sum.str().find("matvecs " + std::to_string(mv)), std::string::npos);
  EXPECT_THROW(emit_csv(std::vector<RunRecord>{}, ss), DimensionError);
}

#ifdef KREC_CLI_PATH
namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(KREC_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  return std::system(cmd.c_str());
}

}  // namespace

TEST(Cli, ConfigFileAndOverrides) {
  const fs::path cfg = temp_path("cfg.toml");
  const fs::path out = temp_path("out.csv");
  {
    std::ofstream f(cfg);
    f << "matrix = \"gen:convdiff2d:10:5\"\nshift = \"0.5\"\nmethod = \"srfom\"\nm = 20\nk = 4\ns = 60\n"
         "num-problems = 2\nrepetitions = 1\n";
  }
  ASSERT_EQ(run_cli("run --config " + cfg.string() + " --m 25 --out " + out.string()), 0);
  std::ifstream in(out);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_EQ(header, kCsvHeader);
  const auto f = split(row, ',');
  ASSERT_EQ(f.size(), 10u);
  EXPECT_EQ(f[1], "srfom");
  EXPECT_EQ(f[2], "25");
  {
    std::ofstream f2(cfg);
    f2 << "matrix = \"gen:convdiff2d:10:5\"\nbogus = 3\n";
  }
  EXPECT_NE(run_cli("run --config " + cfg.string()), 0);
  EXPECT_NE(run_cli("run --matrix gen:convdiff2d:10:5 --method nope"), 0);
  EXPECT_NE(run_cli("run --matrix gen:convdiff2d:10:5 --m 20 --k 30 --method rfom"), 0);
  fs::remove(cfg);
  fs::remove(out);
}
#endif
