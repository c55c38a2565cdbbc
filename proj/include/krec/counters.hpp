#pragma once

#include <atomic>
#include <cstdint>

namespace krec {

/// Plain snapshot of the cost counters.
struct CounterSnapshot {
  std::uint64_t matvecs = 0;
  std::uint64_t inner_products = 0;
  std::uint64_t sketches = 0;

  friend CounterSnapshot operator-(const CounterSnapshot& a, const CounterSnapshot& b) {
    return {a.matvecs - b.matvecs, a.inner_products - b.inner_products, a.sketches - b.sketches};
  }
  friend bool operator==(const CounterSnapshot&, const CounterSnapshot&) = default;
};

/// Accumulator injected into the kernels that do N-length work. Only
/// products with the problem matrix, inner products (including norms) of
/// N-length vectors and vector sketches are counted; work in the small
/// projected or sketched spaces is free.
class Counters {
 public:
  Counters() = default;
  Counters(const Counters&) = delete;
  Counters& operator=(const Counters&) = delete;

  void add_matvecs(std::uint64_t n = 1) noexcept { matvecs_.fetch_add(n, std::memory_order_relaxed); }
  void add_inner_products(std::uint64_t n = 1) noexcept {
    inner_products_.fetch_add(n, std::memory_order_relaxed);
  }
  void add_sketches(std::uint64_t n = 1) noexcept { sketches_.fetch_add(n, std::memory_order_relaxed); }

  CounterSnapshot snapshot() const noexcept {
    return {matvecs_.load(std::memory_order_relaxed), inner_products_.load(std::memory_order_relaxed),
            sketches_.load(std::memory_order_relaxed)};
  }

  void reset() noexcept {
    matvecs_ = 0;
    inner_products_ = 0;
    sketches_ = 0;
  }

 private:
  std::atomic<std::uint64_t> matvecs_{0};
  std::atomic<std::uint64_t> inner_products_{0};
  std::atomic<std::uint64_t> sketches_{0};
};

// Null-tolerant helpers; every kernel takes an optional Counters*.
inline void count_matvecs(Counters* c, std::uint64_t n = 1) noexcept {
  if (c) c->add_matvecs(n);
}
inline void count_inner_products(Counters* c, std::uint64_t n = 1) noexcept {
  if (c) c->add_inner_products(n);
}
inline void count_sketches(Counters* c, std::uint64_t n = 1) noexcept {
  if (c) c->add_sketches(n);
}

}  // namespace krec
