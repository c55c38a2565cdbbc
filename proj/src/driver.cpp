#include "krec/driver.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "krec/arnoldi.hpp"
#include "krec/counters.hpp"
#include "krec/error.hpp"
#include "krec/generators.hpp"
#include "krec/matrix_market.hpp"
#include "krec/random.hpp"
#include "krec/recycle.hpp"
#include "krec/sketch.hpp"

namespace krec {

std::string method_name(Method m) {
  switch (m) {
    case Method::FOM:
      return "fom";
    case Method::sFOM:
      return "sfom";
    case Method::rFOM:
      return "rfom";
    case Method::srFOM:
      return "srfom";
    case Method::srFOM_stab:
      return "srfom-stab";
  }
  return "?";
}

Method parse_method(const std::string& text) {
  std::string t = text;
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  std::replace(t.begin(), t.end(), '_', '-');
  for (Method m : {Method::FOM, Method::sFOM, Method::rFOM, Method::srFOM, Method::srFOM_stab})
    if (method_name(m) == t) return m;
  throw DimensionError("unknown method '" + text + "'");
}

MatrixSource MatrixSource::parse(const std::string& text) {
  MatrixSource src;
  if (text.rfind("gen:", 0) != 0) {
    src.path = text;
    return src;
  }
  std::stringstream ss(text.substr(4));
  std::string item;
  bool first = true;
  while (std::getline(ss, item, ':')) {
    if (first) {
      src.generator = item;
      first = false;
      continue;
    }
    try {
      std::size_t used = 0;
      src.params.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw DimensionError("bad generator parameter '" + item + "' in '" + text + "'");
    }
  }
  if (src.generator.empty()) throw DimensionError("missing generator name in '" + text + "'");
  return src;
}

SparseMatrix MatrixSource::load() const {
  SparseMatrix A;
  if (matrix)
    A = *matrix;
  else if (!generator.empty())
    A = generate(generator, params);
  else if (!path.empty())
    A = read_matrix_market(path);
  else
    throw DimensionError("no matrix source given");
  if (shift != Complex(0.0)) A = A.shifted(shift);
  return A;
}

void SequenceSpec::validate(Index N) const {
  auto fail = [](const std::string& msg) { throw DimensionError("invalid sequence: " + msg); };
  if (num_problems < 1) fail("num_problems must be positive");
  if (repetitions < 1) fail("repetitions must be positive");
  if (t < 1) fail("t must be positive");
  if (!(svdtol >= 0.0)) fail("svdtol must be nonnegative");
  if (k < 0) fail("k must be nonnegative");
  const Index m_top = adaptive ? adaptive->m_max : m;
  if (m_top < 1) fail("m must be positive");
  if (m_top > N) fail("m exceeds the matrix dimension");
  if (adaptive) {
    if (!(adaptive->reltol > 0.0)) fail("reltol must be positive");
    if (adaptive->d < 1) fail("d must be positive");
  }
  const bool recycles = method == Method::rFOM || method == Method::srFOM || method == Method::srFOM_stab;
  if (recycles && k >= m_top) fail("k must be smaller than m");
  const bool sketched = method == Method::sFOM || method == Method::srFOM || method == Method::srFOM_stab;
  if (sketched) {
    const Index cols = m_top + (method == Method::sFOM ? 0 : k);
    if (cols > s) fail("sketch dimension s must be at least m + k");
  }
  if (epsilon.kind == EpsilonPolicy::Kind::Fixed && !(epsilon.value >= 0.0 && epsilon.value < 1.0))
    fail("epsilon must lie in [0, 1)");
}

SparseMatrix sequence_matrix(const SequenceSpec& spec, Index i) {
  SparseMatrix A = spec.matrix.load();
  for (Index j = 1; j <= i; ++j)
    A = perturb_sparsity_gaussian(A, spec.perturbation, mix_seed(spec.seed, 2000 + static_cast<std::uint64_t>(j)));
  return A;
}

Vector sequence_rhs(Index N, const SequenceSpec& spec, Index i) {
  std::mt19937_64 rng(mix_seed(spec.seed, 1000 + static_cast<std::uint64_t>(i)));
  return gaussian_vector(N, rng);
}

std::uint64_t sequence_sketch_seed(const SequenceSpec& spec) { return mix_seed(spec.seed, 3000); }

namespace {

using Clock = std::chrono::steady_clock;

// Accumulates time between start() and stop().
class Stopwatch {
 public:
  void start() { t0_ = Clock::now(); }
  void stop() { total_ += std::chrono::duration<double>(Clock::now() - t0_).count(); }
  double seconds() const { return total_; }

 private:
  Clock::time_point t0_;
  double total_ = 0.0;
};

bool is_sketched(Method m) { return m == Method::sFOM || m == Method::srFOM || m == Method::srFOM_stab; }
bool recycles(Method m) { return m == Method::rFOM || m == Method::srFOM || m == Method::srFOM_stab; }

double relative_error(const Vector& x, const Vector& exact) {
  const double ne = exact.norm();
  return ne > 0.0 ? (x - exact).norm() / ne : (x - exact).norm();
}

struct ProblemResult {
  RunRecord record;
  Vector solution;
};

class SequenceRunner {
 public:
  SequenceRunner(const SequenceSpec& spec, OracleCache& cache) : spec_(spec), cache_(cache) {}

  SequenceResult run() {
    SequenceResult out;
    SparseMatrix A = spec_.matrix.load();
    if (A.rows() != A.cols()) throw DimensionError("sequence matrix must be square");
    const Index N = A.rows();
    spec_.validate(N);
    if (is_sketched(spec_.method)) sketch_.emplace(N, spec_.s, sequence_sketch_seed(spec_));
    Vector b = sequence_rhs(N, spec_, 0);
    for (Index i = 0; i < spec_.num_problems; ++i) {
      if (i > 0) {
        if (spec_.perturbation > 0.0)
          A = perturb_sparsity_gaussian(A, spec_.perturbation, mix_seed(spec_.seed, 2000 + static_cast<std::uint64_t>(i)));
        if (spec_.rhs == RhsRule::FreshGaussian) b = sequence_rhs(N, spec_, i);
      }
      const std::uint64_t epoch = spec_.perturbation > 0.0 ? static_cast<std::uint64_t>(i) : 0;
      ProblemResult r = solve(A, b, i, epoch);
      if (spec_.rhs == RhsRule::PreviousSolution && r.solution.size() == N) b = r.solution;
      out.records.push_back(std::move(r.record));
      out.solutions.push_back(std::move(r.solution));
    }
    return out;
  }

 private:
  struct Candidate {
    Approximant approx;
    DenseMatrix basis;   // columns the coefficients refer to
    DenseMatrix sketch;  // sketch of basis (sketched methods)
    Index m = 0;
    std::optional<RecycledFom> rfom;
    std::optional<SrfomStep> sr;
  };

  ProblemResult solve(const SparseMatrix& A, const Vector& b, Index i, std::uint64_t epoch) {
    ProblemResult res;
    RunRecord& rec = res.record;
    rec.problem_index = i;
    rec.method = spec_.method;
    std::optional<Vector> exact;
    if (A.rows() <= spec_.oracle_cap) exact = cache_.apply(A, b, spec_.function);
    if (spec_.adaptive && spec_.stop == StopSource::Oracle && !exact)
      throw DimensionError("oracle-driven stopping needs N <= oracle cap");

    Counters counters;
    Stopwatch clock;
    clock.start();
    try {
      if (is_sketched(spec_.method))
        solve_sketched(A, b, epoch, exact, counters, clock, rec, res.solution);
      else
        solve_orthonormal(A, b, epoch, exact, counters, clock, rec, res.solution);
    } catch (const Error& e) {
      rec.failure = e.what();
      res.solution = Vector();
    }
    clock.stop();
    const CounterSnapshot snap = counters.snapshot();
    rec.matvecs = snap.matvecs;
    rec.inner_products = snap.inner_products;
    rec.sketches = snap.sketches;
    rec.wall_time = clock.seconds();
    if (rec.failure.empty() && exact) rec.relerr = relative_error(res.solution, *exact);
    if (!rec.failure.empty()) rec.converged = false;
    return res;
  }

  // Decide whether an adaptive loop stops at the current candidate.
  // Returns true when the loop should stop.
  bool check(const Candidate& cur, const std::optional<Candidate>& prev, const std::optional<Vector>& exact,
             Stopwatch& clock, RunRecord& rec, bool orthonormal, double eps) {
    const AdaptiveM& ad = *spec_.adaptive;
    if (spec_.stop == StopSource::Oracle) {
      clock.stop();
      const Vector x = cur.basis * cur.approx.coeffs;
      const double err = relative_error(x, *exact);
      clock.start();
      return err <= ad.reltol;
    }
    if (!prev) return false;
    double est;
    if (orthonormal) {
      // The smaller orthonormal basis is a column prefix of the larger one,
      // also when dependent augmentation columns were dropped.
      Vector padded = Vector::Zero(cur.approx.coeffs.size());
      padded.head(prev->approx.coeffs.size()) = prev->approx.coeffs;
      const double ny = cur.approx.coeffs.norm();
      est = estimate_diff_orthonormal(cur.approx.coeffs, padded).value / (ny > 0.0 ? ny : 1.0);
    } else {
      const Index k = cur.approx.recycle_dim;
      const Vector padded = pad_coefficients(prev->approx.coeffs, prev->m, cur.m, k, cur.approx.layout);
      // Difference bound over a lower bound of ||f_hat||.
      const double diff = estimate_diff(cur.sketch, cur.approx.coeffs, padded, eps).value;
      const double lower = (cur.sketch * cur.approx.coeffs).norm() / std::sqrt(1.0 + eps);
      est = diff / (lower > 0.0 ? lower : 1.0);
    }
    rec.estimate = est;
    return est <= ad.reltol;
  }

  void solve_orthonormal(const SparseMatrix& A, const Vector& b, std::uint64_t epoch,
                         const std::optional<Vector>& exact, Counters& counters, Stopwatch& clock, RunRecord& rec,
                         Vector& solution) {
    const bool rec_on = spec_.method == Method::rFOM;
    if (rec_on) refresh_recycle_state(state_, A, epoch, nullptr, &counters);
    const DenseMatrix U = rec_on ? state_.U : DenseMatrix(b.size(), 0);
    const DenseMatrix AU = rec_on && state_.AU ? *state_.AU : DenseMatrix(b.size(), 0);

    auto evaluate = [&](const ArnoldiFactorization& fac) {
      Candidate c;
      RecycledFom r = rfom_from_factorization(fac, U, AU, spec_.function, &counters);
      c.approx = r.approx;
      c.basis = r.Q;
      c.m = fac.m();
      c.rfom = std::move(r);
      return c;
    };

    const Index m0 = spec_.adaptive ? std::min(spec_.adaptive->d, spec_.adaptive->m_max) : spec_.m;
    ArnoldiFactorization fac = arnoldi_build(A, b, m0, ArnoldiMode::full(), &counters);
    Candidate cur = evaluate(fac);
    if (spec_.adaptive) {
      std::optional<Candidate> prev;
      for (;;) {
        if (check(cur, prev, exact, clock, rec, true, 0.0)) break;
        if (fac.breakdown()) break;
        if (fac.m() >= spec_.adaptive->m_max) {
          rec.converged = false;
          break;
        }
        fac.extend(A, std::min(fac.m() + spec_.adaptive->d, spec_.adaptive->m_max), &counters);
        prev = std::move(cur);
        cur = evaluate(fac);
      }
    }
    rec.m_used = fac.m();
    solution = cur.basis * cur.approx.coeffs;

    if (rec_on && spec_.k > 0) {
      try {
        RecycleUpdate upd = update_orthonormal(*cur.rfom, spec_.k);
        state_ = std::move(upd.state);
        state_.epoch = epoch;
        // A nearly dependent [U, V_m] makes propagation inaccurate; the next
        // refresh then pays k matvecs instead.
        if (cur.rfom->min_residual_ratio >= kPropagateTol)
          state_.AU = propagate_AU(fac, AU, upd.coeffs, BasisLayout::RecycleFirst);
        if (state_.k() < spec_.k) rec.warning = "recycle space reduced to k=" + std::to_string(state_.k());
      } catch (const Error& e) {
        rec.warning = std::string("recycle update failed: ") + e.what();
      }
    }
  }

  void solve_sketched(const SparseMatrix& A, const Vector& b, std::uint64_t epoch, const std::optional<Vector>& exact,
                      Counters& counters, Stopwatch& clock, RunRecord& rec, Vector& solution) {
    const SketchOperator& S = *sketch_;
    const bool rec_on = recycles(spec_.method);
    const bool stab = spec_.method == Method::srFOM_stab;
    if (rec_on && !(spec_.inexact_srr && state_.SAU.cols() == state_.k()))
      refresh_recycle_state(state_, A, epoch, &S, &counters);
    const RecycleState empty;
    const RecycleState& recycle = rec_on ? state_ : empty;

    auto evaluate = [&](const SketchedKrylov& kr) {
      Candidate c;
      SrfomStep st = srfom_evaluate(assemble_sketched(kr, recycle, epoch), spec_.function, stab, spec_.svdtol);
      c.approx = st.approx;
      c.m = kr.fac.m();
      c.sr = std::move(st);
      return c;
    };

    const Index m0 = spec_.adaptive ? std::min(spec_.adaptive->d, spec_.adaptive->m_max) : spec_.m;
    SketchedKrylov kr = sketched_arnoldi(A, b, m0, S, spec_.t, &counters);
    Candidate cur = evaluate(kr);
    if (spec_.adaptive) {
      std::optional<Candidate> prev;
      for (;;) {
        const double eps = epsilon_policy(spec_.epsilon, kr.SV_ext.leftCols(kr.fac.m()));
        cur.basis = cur.sr->bundle.Vhat;
        cur.sketch = cur.sr->bundle.SVhat;
        if (check(cur, prev, exact, clock, rec, false, eps)) break;
        if (kr.fac.breakdown()) break;
        if (kr.fac.m() >= spec_.adaptive->m_max) {
          rec.converged = false;
          break;
        }
        kr.fac.extend(A, std::min(kr.fac.m() + spec_.adaptive->d, spec_.adaptive->m_max), &counters);
        kr.sync(S, &counters);
        prev = std::move(cur);
        prev->basis = DenseMatrix();
        cur = evaluate(kr);
      }
    }
    rec.m_used = kr.fac.m();
    rec.ell = cur.approx.ell;
    solution = cur.sr->bundle.Vhat * cur.approx.coeffs;

    if (rec_on && spec_.k > 0) {
      try {
        const SrfomStep& st = *cur.sr;
        RecycleUpdate upd = stab ? update_sketched_stab(st.bundle, *st.svd, spec_.k, spec_.svdtol)
                                 : update_sketched(st.bundle, *st.qr, spec_.k);
        state_ = std::move(upd.state);
        if (state_.k() < spec_.k) rec.warning = "recycle space reduced to k=" + std::to_string(state_.k());
      } catch (const Error& e) {
        rec.warning = std::string("recycle update failed: ") + e.what();
      }
    }
  }

  SequenceSpec spec_;
  OracleCache& cache_;
  std::optional<SketchOperator> sketch_;
  RecycleState state_;
};

}  // namespace

SequenceResult run_sequence_detailed(const SequenceSpec& spec, OracleCache* cache) {
  OracleCache local(spec.oracle_cap);
  OracleCache& oc = cache ? *cache : local;
  SequenceResult result = SequenceRunner(spec, oc).run();
  for (int rep = 1; rep < spec.repetitions; ++rep) {
    const SequenceResult again = SequenceRunner(spec, oc).run();
    for (std::size_t i = 0; i < result.records.size(); ++i) result.records[i].wall_time += again.records[i].wall_time;
  }
  for (auto& r : result.records) r.wall_time /= spec.repetitions;
  return result;
}

std::vector<RunRecord> run_sequence(const SequenceSpec& spec, OracleCache* cache) {
  return run_sequence_detailed(spec, cache).records;
}

namespace {

std::string fmt_double(double v, int precision) {
  std::ostringstream ss;
  ss << std::setprecision(precision) << v;
  return ss.str();
}

}  // namespace

void emit_csv(const std::vector<RunRecord>& records, std::ostream& out) {
  if (records.empty()) throw DimensionError("emit_csv: no records");
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.problem_index + 1 << ',' << method_name(r.method) << ',' << r.m_used << ',' << r.matvecs << ','
        << r.inner_products << ',' << r.sketches << ',' << (r.relerr ? fmt_double(*r.relerr, 17) : "") << ','
        << (r.estimate ? fmt_double(*r.estimate, 17) : "") << ',' << (r.ell ? std::to_string(*r.ell) : "") << ','
        << fmt_double(r.wall_time, 9) << '\n';
  }
}

void emit_csv(const std::vector<RunRecord>& records, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  emit_csv(records, out);
  out.flush();
  if (!out) throw Error("write to '" + path + "' failed");
}

Totals summarize(const std::vector<RunRecord>& records) {
  Totals t;
  for (const auto& r : records) {
    t.matvecs += r.matvecs;
    t.inner_products += r.inner_products;
    t.sketches += r.sketches;
    t.wall_time += r.wall_time;
    if (!r.failure.empty()) ++t.failures;
    if (!r.converged) ++t.not_converged;
  }
  return t;
}

void print_summary(const std::vector<RunRecord>& records, std::ostream& out) {
  const Totals t = summarize(records);
  out << "problems " << records.size() << "  matvecs " << t.matvecs << "  inner_products " << t.inner_products
      << "  sketches " << t.sketches << "  wall_time_s " << fmt_double(t.wall_time, 6);
  if (t.failures) out << "  failures " << t.failures;
  if (t.not_converged) out << "  not_converged " << t.not_converged;
  out << '\n';
}

}  // namespace krec
