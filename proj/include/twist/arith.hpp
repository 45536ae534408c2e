#pragma once

#include <algorithm>
#include <atomic>
#include <complex>
#include <cstdint>
#include <thread>
#include <utility>
#include <vector>

namespace twist {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;

i64 mod(i64 a, i64 m);
i64 mulmod(i64 a, i64 b, i64 m);
i64 powmod(i64 a, u64 e, i64 m);
i64 invmod(i64 a, i64 m);
i64 gcd(i64 a, i64 b);
i64 ipow(i64 b, int e);

bool is_prime(i64 n);
std::vector<int> primes_up_to(int n);
std::vector<std::pair<i64, int>> factorize(i64 n);
std::vector<i64> divisors(i64 n);
int divisor_count(i64 n);
std::vector<int> divisor_count_table(int n);
i64 euler_phi(i64 n);

// Multiplicative order of a modulo m, or 0 if gcd(a, m) > 1.
i64 multiplicative_order(i64 a, i64 m);

// Neumaier-compensated running sum.
template <typename T> class CompensatedSum {
public:
  void add(T x) {
    T t = s_ + x;
    if (abs_(s_) >= abs_(x))
      c_ += (s_ - t) + x;
    else
      c_ += (x - t) + s_;
    s_ = t;
  }
  CompensatedSum &operator+=(T x) {
    add(x);
    return *this;
  }
  T value() const { return s_ + c_; }

private:
  static T abs_(T x) { return x < T(0) ? -x : x; }
  T s_{0};
  T c_{0};
};

template <typename T> class CompensatedSum<std::complex<T>> {
public:
  void add(const std::complex<T> &x) {
    re_.add(x.real());
    im_.add(x.imag());
  }
  CompensatedSum &operator+=(const std::complex<T> &x) {
    add(x);
    return *this;
  }
  std::complex<T> value() const { return {re_.value(), im_.value()}; }

private:
  CompensatedSum<T> re_;
  CompensatedSum<T> im_;
};

unsigned default_threads();
void set_default_threads(unsigned n);

// Runs fn(i) for i in [0, n). Work is handed out in fixed chunks; callers
// write into per-index slots and reduce in index order afterwards.
template <typename Fn>
void parallel_for(std::size_t n, Fn &&fn, unsigned threads = 0,
                  std::size_t chunk = 1024) {
  if (threads == 0)
    threads = default_threads();
  std::size_t nchunks = (n + chunk - 1) / chunk;
  if (threads <= 1 || nchunks <= 1) {
    for (std::size_t i = 0; i < n; ++i)
      fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t c = next.fetch_add(1);
      if (c >= nchunks)
        return;
      std::size_t end = std::min(n, (c + 1) * chunk);
      for (std::size_t i = c * chunk; i < end; ++i)
        fn(i);
    }
  };
  std::vector<std::thread> pool;
  unsigned nt = static_cast<unsigned>(std::min<std::size_t>(threads, nchunks));
  for (unsigned t = 1; t < nt; ++t)
    pool.emplace_back(worker);
  worker();
  for (auto &th : pool)
    th.join();
}

} // namespace twist
