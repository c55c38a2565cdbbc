// Command line front end: runs one problem sequence and writes CSV records.

#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "krec/driver.hpp"
#include "krec/error.hpp"

namespace {

krec::Complex parse_shift(const std::string& text) {
  std::stringstream ss(text);
  std::string re, im;
  std::getline(ss, re, ',');
  std::getline(ss, im);
  try {
    return {std::stod(re), im.empty() ? 0.0 : std::stod(im)};
  } catch (const std::exception&) {
    throw CLI::ValidationError("--shift", "expected <re>[,<im>], got '" + text + "'");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Recycled and sketched Krylov approximation of f(A)b sequences"};
  app.require_subcommand(1);
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.set_config("--config", "", "Key-value configuration file (TOML/INI); flags override it");

  CLI::App* run = app.add_subcommand("run", "Run a sequence of problems")->fallthrough();

  std::string function = "invsqrt";
  std::string method = "fom";
  int m = 50;
  bool adaptive = false;
  double reltol = 1e-8;
  int d = 10;
  int m_max = 200;
  std::string stop = "oracle";
  int k = 20;
  int s = 400;
  int t = 2;
  double svdtol = krec::kDefaultSvdTol;
  int num_problems = 1;
  std::uint64_t seed = 1;
  std::string matrix;
  std::string shift = "0";
  double perturb = 0.0;
  std::string out;
  bool inexact = false;
  std::string rhs = "fresh";
  std::string epsilon = "0.99";
  int repetitions = 3;
  int oracle_cap = static_cast<int>(krec::kDefaultOracleCap);

  app.add_option("--function", function, "invsqrt | inv | exp | exp:<tau>")->capture_default_str();
  app.add_option("--method", method, "fom | sfom | rfom | srfom | srfom-stab")->capture_default_str();
  app.add_option("--m", m, "Fixed cycle length")->capture_default_str();
  app.add_flag("--adaptive", adaptive, "Choose m adaptively per problem");
  app.add_option("--reltol", reltol, "Target relative error (adaptive)")->capture_default_str();
  app.add_option("--d", d, "Check interval (adaptive)")->capture_default_str();
  app.add_option("--m-max", m_max, "Largest cycle length (adaptive)")->capture_default_str();
  app.add_option("--stop", stop, "oracle | estimator (adaptive)")->capture_default_str();
  app.add_option("--k", k, "Recycle space dimension")->capture_default_str();
  app.add_option("--s", s, "Sketch dimension")->capture_default_str();
  app.add_option("--t", t, "Arnoldi truncation length")->capture_default_str();
  app.add_option("--svdtol", svdtol, "Relative singular value cutoff")->capture_default_str();
  app.add_option("--num-problems", num_problems, "Number of problems")->capture_default_str();
  app.add_option("--seed", seed, "Random seed")->capture_default_str();
  app.add_option("--matrix", matrix, "Matrix Market path or gen:<name>:<params>")->required();
  app.add_option("--shift", shift, "Diagonal shift <re>[,<im>]")->capture_default_str();
  app.add_option("--perturb", perturb, "Gaussian perturbation scale between problems")->capture_default_str();
  app.add_option("--out", out, "CSV output path (stdout when empty)");
  app.add_flag("--inexact-srr", inexact, "Reuse stale S A U after matrix changes");
  app.add_option("--rhs", rhs, "fresh | chain")->capture_default_str();
  app.add_option("--epsilon", epsilon, "Embedding distortion: <value> or tracked")->capture_default_str();
  app.add_option("--repetitions", repetitions, "Timing repetitions")->capture_default_str();
  app.add_option("--oracle-cap", oracle_cap, "Largest N for the dense oracle")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    krec::SequenceSpec spec;
    spec.function = krec::ScalarFunction::parse(function);
    spec.method = krec::parse_method(method);
    spec.m = m;
    if (adaptive) spec.adaptive = krec::AdaptiveM{reltol, d, m_max};
    if (stop == "oracle")
      spec.stop = krec::StopSource::Oracle;
    else if (stop == "estimator")
      spec.stop = krec::StopSource::Estimator;
    else
      throw krec::Error("--stop must be oracle or estimator");
    spec.k = k;
    spec.s = s;
    spec.t = t;
    spec.svdtol = svdtol;
    spec.num_problems = num_problems;
    spec.seed = seed;
    spec.matrix = krec::MatrixSource::parse(matrix);
    spec.matrix.shift = parse_shift(shift);
    spec.perturbation = perturb;
    spec.inexact_srr = inexact;
    if (rhs == "fresh")
      spec.rhs = krec::RhsRule::FreshGaussian;
    else if (rhs == "chain")
      spec.rhs = krec::RhsRule::PreviousSolution;
    else
      throw krec::Error("--rhs must be fresh or chain");
    spec.epsilon = epsilon == "tracked" ? krec::EpsilonPolicy::tracked() : krec::EpsilonPolicy::fixed(std::stod(epsilon));
    spec.repetitions = repetitions;
    spec.oracle_cap = oracle_cap;

    const auto records = krec::run_sequence(spec);
    for (const auto& r : records) {
      if (!r.failure.empty()) std::cerr << "problem " << r.problem_index + 1 << ": " << r.failure << '\n';
      if (!r.warning.empty()) std::cerr << "problem " << r.problem_index + 1 << ": " << r.warning << '\n';
    }
    if (out.empty()) {
      krec::emit_csv(records, std::cout);
      krec::print_summary(records, std::cerr);
    } else {
      krec::emit_csv(records, out);
      krec::print_summary(records, std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  (void)run;
  return 0;
}
