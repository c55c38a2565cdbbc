#include "krec/sketch.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "krec/error.hpp"
#include "krec/random.hpp"

namespace krec {

namespace {

Index next_pow2(Index n) {
  Index p = 1;
  while (p < n) p <<= 1;
  return p;
}

constexpr double kMaxEpsilon = 0.99;

}  // namespace

SketchOperator::SketchOperator(Index N, Index s, std::uint64_t seed)
    : n_(N), s_(s), pad_(next_pow2(N)), seed_(seed) {
  if (N <= 0) throw DimensionError("sketch: dimension must be positive");
  if (s <= 0 || s > pad_)
    throw DimensionError("sketch: s = " + std::to_string(s) + " must lie in [1, " + std::to_string(pad_) + "]");
  std::mt19937_64 rng(mix_seed(seed, 0x5ce7));
  signs_.resize(N);
  for (auto& x : signs_) x = (rng() >> 63) ? -1.0 : 1.0;
  std::vector<Index> perm(pad_);
  for (Index i = 0; i < pad_; ++i) perm[i] = i;
  for (Index i = 0; i < s_; ++i) {
    const Index j = i + static_cast<Index>(uniform_below(rng, static_cast<std::uint64_t>(pad_ - i)));
    std::swap(perm[i], perm[j]);
  }
  rows_.assign(perm.begin(), perm.begin() + s_);
  std::sort(rows_.begin(), rows_.end());

  int bits = 0;
  while ((Index{1} << bits) < pad_) ++bits;
  bitrev_.resize(pad_);
  for (Index i = 0; i < pad_; ++i) {
    Index r = 0;
    for (int b = 0; b < bits; ++b)
      if (i & (Index{1} << b)) r |= Index{1} << (bits - 1 - b);
    bitrev_[i] = r;
  }
  roots_.resize(std::max<Index>(1, pad_ / 2));
  for (Index k = 0; k < pad_ / 2; ++k)
    roots_[k] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(pad_));
  twiddle_.resize(pad_);
  for (Index k = 0; k < pad_; ++k)
    twiddle_[k] = std::polar(1.0, -std::numbers::pi * static_cast<double>(k) / (2.0 * static_cast<double>(pad_)));
}

void SketchOperator::fft(std::vector<Complex>& a) const {
  const Index n = pad_;
  for (Index i = 0; i < n; ++i)
    if (i < bitrev_[i]) std::swap(a[i], a[bitrev_[i]]);
  for (Index len = 2; len <= n; len <<= 1) {
    const Index half = len / 2;
    const Index stride = n / len;
    for (Index start = 0; start < n; start += len) {
      for (Index k = 0; k < half; ++k) {
        const Complex u = a[start + k];
        const Complex v = a[start + k + half] * roots_[k * stride];
        a[start + k] = u + v;
        a[start + k + half] = u - v;
      }
    }
  }
}

Vector SketchOperator::apply(const Eigen::Ref<const Vector>& v, Counters* counters) const {
  if (v.size() != n_) throw DimensionError("sketch: vector length mismatch");
  const Index n = pad_;
  // Even/odd reordering of the sign-flipped, zero-padded input.
  std::vector<Complex> u(n, Complex(0.0));
  for (Index i = 0; i < n_; ++i) {
    const Complex x = signs_[i] * v[i];
    if (i % 2 == 0)
      u[i / 2] = x;
    else
      u[n - 1 - i / 2] = x;
  }
  fft(u);
  const double c0 = std::sqrt(1.0 / static_cast<double>(n));
  const double ck = std::sqrt(2.0 / static_cast<double>(n));
  const double scale = std::sqrt(static_cast<double>(n) / static_cast<double>(s_));
  Vector out(s_);
  for (Index r = 0; r < s_; ++r) {
    const Index k = rows_[r];
    // Complex-linear form of Re(w_k U_k) for the DCT-II.
    const Complex y = 0.5 * (twiddle_[k] * u[k] + std::conj(twiddle_[k]) * u[(n - k) % n]);
    out[r] = scale * (k == 0 ? c0 : ck) * y;
  }
  count_sketches(counters);
  return out;
}

DenseMatrix SketchOperator::apply_columns(const DenseMatrix& M, Counters* counters) const {
  DenseMatrix out(s_, M.cols());
  for (Index j = 0; j < M.cols(); ++j) out.col(j) = apply(M.col(j), counters);
  return out;
}

DenseMatrix SketchOperator::dense() const {
  const double n = static_cast<double>(pad_);
  const double scale = std::sqrt(n / static_cast<double>(s_));
  DenseMatrix S(s_, n_);
  for (Index r = 0; r < s_; ++r) {
    const Index k = rows_[r];
    const double ck = k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
    for (Index i = 0; i < n_; ++i)
      S(r, i) = scale * ck * signs_[i] *
                std::cos(std::numbers::pi * (2.0 * static_cast<double>(i) + 1.0) * static_cast<double>(k) / (2.0 * n));
  }
  return S;
}

Vector SketchOperator::apply_direct(const Eigen::Ref<const Vector>& v) const {
  if (v.size() != n_) throw DimensionError("sketch: vector length mismatch");
  return dense() * v;
}

SketchOperator sketch_new(Index N, Index s, std::uint64_t seed) { return SketchOperator(N, s, seed); }

Vector sketch_apply(const SketchOperator& S, const Eigen::Ref<const Vector>& v, Counters* counters) {
  return S.apply(v, counters);
}

DenseMatrix sketch_av_from_arnoldi(const ArnoldiFactorization& fac, const DenseMatrix& SV_ext) {
  const Index m = fac.m();
  const bool tail = fac.h_next() != Complex(0.0);
  if (SV_ext.cols() < m + (tail ? 1 : 0))
    throw DimensionError("sketch_av_from_arnoldi: missing cached sketches of the basis vectors");
  DenseMatrix out = SV_ext.leftCols(m) * fac.H();
  if (tail) out.col(m - 1) += fac.h_next() * SV_ext.col(m);
  return out;
}

double estimate_epsilon(const SketchOperator& S, const std::vector<Vector>& vectors) {
  if (vectors.empty()) throw DimensionError("estimate_epsilon: empty list");
  double eps = 0.0;
  for (const auto& v : vectors) {
    const double nv = v.squaredNorm();
    if (nv == 0.0) throw DimensionError("estimate_epsilon: zero vector");
    eps = std::max(eps, std::abs(S.apply(v).squaredNorm() / nv - 1.0));
  }
  return std::clamp(eps, 0.0, kMaxEpsilon);
}

double estimate_epsilon_unit_columns(const DenseMatrix& S_unit_columns) {
  double eps = 0.0;
  for (Index j = 0; j < S_unit_columns.cols(); ++j)
    eps = std::max(eps, std::abs(S_unit_columns.col(j).squaredNorm() - 1.0));
  return std::clamp(eps, 0.0, kMaxEpsilon);
}

}  // namespace krec
