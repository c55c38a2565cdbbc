#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "krec/approximants.hpp"
#include "krec/errest.hpp"
#include "krec/matfun.hpp"
#include "krec/oracle.hpp"
#include "krec/sparse.hpp"
#include "krec/types.hpp"

namespace krec {

enum class Method { FOM, sFOM, rFOM, srFOM, srFOM_stab };

std::string method_name(Method m);
/// Accepts fom, sfom, rfom, srfom, srfom-stab (case-insensitive).
Method parse_method(const std::string& text);

struct AdaptiveM {
  double reltol = 1e-8;
  Index d = 10;
  Index m_max = 200;
};

/// What terminates the adaptive loop: the true relative error or the
/// sketched difference estimate.
enum class StopSource { Oracle, Estimator };

enum class RhsRule { FreshGaussian, PreviousSolution };

/// A named generator with numeric parameters, a Matrix Market file, or an
/// explicit matrix; the shift is added to the diagonal.
struct MatrixSource {
  std::string generator;
  std::vector<double> params;
  std::string path;
  std::optional<SparseMatrix> matrix;  ///< used as is when set
  Complex shift{0.0, 0.0};

  /// "gen:<name>:<p1>:<p2>..." or a file path.
  static MatrixSource parse(const std::string& text);
  SparseMatrix load() const;
};

struct SequenceSpec {
  ScalarFunction function = ScalarFunction::inv_sqrt();
  Method method = Method::FOM;
  Index num_problems = 1;
  Index m = 50;                       ///< fixed cycle length
  std::optional<AdaptiveM> adaptive;  ///< adaptive cycle length when set
  StopSource stop = StopSource::Oracle;
  Index k = 20;
  Index s = 400;
  int t = 2;
  double svdtol = kDefaultSvdTol;
  std::uint64_t seed = 1;
  MatrixSource matrix;
  double perturbation = 0.0;  ///< scale of the Gaussian update between problems
  RhsRule rhs = RhsRule::FreshGaussian;
  bool inexact_srr = false;
  EpsilonPolicy epsilon = EpsilonPolicy::fixed(0.99);
  Index oracle_cap = kDefaultOracleCap;
  int repetitions = 1;

  /// Throws DimensionError describing the first violated constraint.
  void validate(Index N) const;
};

struct RunRecord {
  Index problem_index = 0;
  Method method = Method::FOM;
  Index m_used = 0;
  bool converged = true;
  std::uint64_t matvecs = 0;
  std::uint64_t inner_products = 0;
  std::uint64_t sketches = 0;
  std::optional<double> relerr;
  std::optional<double> estimate;  ///< last error estimate, adaptive estimator mode
  double wall_time = 0.0;
  std::optional<Index> ell;
  std::string failure;  ///< empty unless the method failed on this problem
  std::string warning;
};

struct SequenceResult {
  std::vector<RunRecord> records;
  std::vector<Vector> solutions;  ///< computed f(A)b per problem (empty on failure)
};

/// Run a whole sequence. The oracle cache may be shared between runs on
/// the same matrices; a private one is used when none is given.
SequenceResult run_sequence_detailed(const SequenceSpec& spec, OracleCache* cache = nullptr);
std::vector<RunRecord> run_sequence(const SequenceSpec& spec, OracleCache* cache = nullptr);

/// Matrix of problem i (0-based): the loaded source followed by i Gaussian
/// updates. Identical for every method.
SparseMatrix sequence_matrix(const SequenceSpec& spec, Index i);
/// Right-hand side of problem i under FreshGaussian (and of problem 0
/// under PreviousSolution).
Vector sequence_rhs(Index N, const SequenceSpec& spec, Index i);
/// Seed of the sketching operator used by a sequence.
std::uint64_t sequence_sketch_seed(const SequenceSpec& spec);

inline constexpr const char* kCsvHeader =
    "problem,method,m_used,matvecs,inner_products,sketches,relerr,estimate,ell,wall_time_s";

void emit_csv(const std::vector<RunRecord>& records, std::ostream& out);
void emit_csv(const std::vector<RunRecord>& records, const std::string& path);

struct Totals {
  std::uint64_t matvecs = 0;
  std::uint64_t inner_products = 0;
  std::uint64_t sketches = 0;
  double wall_time = 0.0;
  Index failures = 0;
  Index not_converged = 0;
};
Totals summarize(const std::vector<RunRecord>& records);
void print_summary(const std::vector<RunRecord>& records, std::ostream& out);

}  // namespace krec
