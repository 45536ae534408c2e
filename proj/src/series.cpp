#include "twist/series.hpp"

#include <stdexcept>

namespace twist {

SparseSeries eta_sparse(i64 step, i64 N) {
  SparseSeries out;
  out.emplace_back(0, 1);
  for (i64 k = 1;; ++k) {
    i64 e1 = step * (k * (3 * k - 1) / 2);
    i64 e2 = step * (k * (3 * k + 1) / 2);
    if (e1 > N)
      break;
    i64 s = (k % 2) ? -1 : 1;
    out.emplace_back(e1, s);
    if (e2 <= N)
      out.emplace_back(e2, s);
  }
  return out;
}

SparseSeries eta_cubed_sparse(i64 N) {
  SparseSeries out;
  for (i64 k = 0; k * (k + 1) / 2 <= N; ++k)
    out.emplace_back(k * (k + 1) / 2, (k % 2 ? -1 : 1) * (2 * k + 1));
  return out;
}

template <typename Int>
std::vector<Int> sparse_times_sparse(const SparseSeries &a, const SparseSeries &b,
                                     std::size_t N) {
  std::vector<Int> c(N + 1, 0);
  for (auto [ea, ca] : a)
    for (auto [eb, cb] : b) {
      auto e = static_cast<std::size_t>(ea + eb);
      if (e <= N)
        c[e] += static_cast<Int>(ca) * cb;
    }
  return c;
}

template <typename Int>
std::vector<Int> dense_times_sparse(const std::vector<Int> &a,
                                    const SparseSeries &b, std::size_t N) {
  std::vector<Int> c(N + 1, 0);
  for (auto [eb, cb] : b) {
    auto s = static_cast<std::size_t>(eb);
    if (s > N)
      continue;
    std::size_t top = std::min(N - s, a.size() - 1);
    for (std::size_t i = 0; i <= top; ++i)
      c[i + s] += a[i] * static_cast<Int>(cb);
  }
  return c;
}

template std::vector<i64> sparse_times_sparse<i64>(const SparseSeries &,
                                                   const SparseSeries &,
                                                   std::size_t);
template std::vector<i128> sparse_times_sparse<i128>(const SparseSeries &,
                                                     const SparseSeries &,
                                                     std::size_t);
template std::vector<i64> dense_times_sparse<i64>(const std::vector<i64> &,
                                                  const SparseSeries &,
                                                  std::size_t);
template std::vector<i128> dense_times_sparse<i128>(const std::vector<i128> &,
                                                    const SparseSeries &,
                                                    std::size_t);

namespace {

using u32 = std::uint32_t;

// Primes below 2^31; the first three admit transforms of length 2^26.
constexpr u32 kPrimes[4] = {2013265921u, 1811939329u, 469762049u, 998244353u};

struct Montgomery {
  u32 p;
  u32 ninv; // -p^{-1} mod 2^32
  u32 r2;   // 2^64 mod p

  explicit Montgomery(u32 prime) : p(prime) {
    u32 inv = 1;
    for (int i = 0; i < 5; ++i)
      inv *= 2u - p * inv;
    ninv = ~inv + 1u;
    r2 = static_cast<u32>((static_cast<unsigned __int128>(1) << 64) % p);
  }
  u32 reduce(u64 t) const {
    u32 m = static_cast<u32>(t) * ninv;
    u64 r = (t + static_cast<u64>(m) * p) >> 32;
    return static_cast<u32>(r >= p ? r - p : r);
  }
  u32 mul(u32 a, u32 b) const { return reduce(static_cast<u64>(a) * b); }
  u32 to(u32 a) const { return mul(a, r2); }
  u32 from(u32 a) const { return reduce(a); }
  u32 add(u32 a, u32 b) const {
    u32 s = a + b;
    return s >= p ? s - p : s;
  }
  u32 sub(u32 a, u32 b) const { return a >= b ? a - b : a + p - b; }
  u32 pow(u32 a, u64 e) const {
    u32 r = to(1);
    while (e) {
      if (e & 1)
        r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
};

u32 primitive_root(u32 p) {
  auto f = factorize(static_cast<i64>(p) - 1);
  for (u32 g = 2;; ++g) {
    bool ok = true;
    for (auto [q, e] : f)
      if (powmod(g, static_cast<u64>((p - 1) / q), p) == 1) {
        ok = false;
        break;
      }
    if (ok)
      return g;
  }
}

void ntt(std::vector<u32> &a, const Montgomery &M, u32 root, bool inverse) {
  std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1)
      j ^= bit;
    j ^= bit;
    if (i < j)
      std::swap(a[i], a[j]);
  }
  u32 g = M.to(root);
  if (inverse)
    g = M.pow(g, M.p - 2);
  std::vector<u32> w;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    u32 wl = M.pow(g, (M.p - 1) / len);
    std::size_t half = len / 2;
    w.resize(half);
    w[0] = M.to(1);
    for (std::size_t k = 1; k < half; ++k)
      w[k] = M.mul(w[k - 1], wl);
    for (std::size_t i = 0; i < n; i += len) {
      u32 *x = &a[i];
      u32 *y = &a[i + half];
      for (std::size_t k = 0; k < half; ++k) {
        u32 u = x[k];
        u32 v = M.mul(y[k], w[k]);
        x[k] = M.add(u, v);
        y[k] = M.sub(u, v);
      }
    }
  }
  if (inverse) {
    u32 ninv = M.pow(M.to(static_cast<u32>(n % M.p)), M.p - 2);
    for (auto &x : a)
      x = M.mul(x, ninv);
  }
}

template <typename Int>
std::vector<u32> residues(const std::vector<Int> &a, std::size_t n, std::size_t L,
                          const Montgomery &M) {
  std::vector<u32> r(L, 0);
  std::size_t top = std::min(n + 1, a.size());
  for (std::size_t i = 0; i < top; ++i) {
    Int v = a[i] % static_cast<Int>(M.p);
    if (v < 0)
      v += M.p;
    r[i] = M.to(static_cast<u32>(v));
  }
  return r;
}

// c mod p for one prime, c = a*b truncated to degree N.
template <typename Int>
std::vector<u32> product_mod(const std::vector<Int> &a, const std::vector<Int> &b,
                             std::size_t N, u32 p, bool same) {
  Montgomery M(p);
  std::size_t na = std::min(N, a.size() - 1), nb = std::min(N, b.size() - 1);
  std::size_t L = 1;
  while (L < na + nb + 1)
    L <<= 1;
  if ((static_cast<u64>(p) - 1) % L)
    throw std::length_error("ntt_multiply: transform length too large");
  u32 root = primitive_root(p);
  auto fa = residues(a, na, L, M);
  ntt(fa, M, root, false);
  if (same) {
    for (auto &x : fa)
      x = M.mul(x, x);
  } else {
    auto fb = residues(b, nb, L, M);
    ntt(fb, M, root, false);
    for (std::size_t i = 0; i < L; ++i)
      fa[i] = M.mul(fa[i], fb[i]);
  }
  ntt(fa, M, root, true);
  fa.resize(N + 1 <= L ? N + 1 : L);
  for (auto &x : fa)
    x = M.from(x);
  fa.resize(N + 1, 0);
  return fa;
}

template <typename Int>
std::vector<Int> multiply_crt(const std::vector<Int> &a, const std::vector<Int> &b,
                              std::size_t N, int nprimes) {
  if (nprimes < 1 || nprimes > 4)
    throw std::invalid_argument("ntt_multiply: 1..4 primes");
  if (a.empty() || b.empty())
    return std::vector<Int>(N + 1, 0);
  bool same = &a == &b;
  std::vector<std::vector<u32>> res;
  for (int i = 0; i < nprimes; ++i)
    res.push_back(product_mod(a, b, N, kPrimes[i], same));
  // Garner mixed-radix reconstruction.
  i128 P = 1;
  for (int i = 0; i < nprimes; ++i)
    P *= kPrimes[i];
  std::vector<std::vector<u64>> inv(nprimes, std::vector<u64>(nprimes, 0));
  for (int i = 0; i < nprimes; ++i)
    for (int j = 0; j < i; ++j)
      inv[j][i] = static_cast<u64>(invmod(kPrimes[j], kPrimes[i]));
  std::vector<Int> c(N + 1, 0);
  std::vector<u64> digit(static_cast<std::size_t>(nprimes));
  for (std::size_t k = 0; k <= N; ++k) {
    for (int i = 0; i < nprimes; ++i) {
      u64 x = res[i][k];
      for (int j = 0; j < i; ++j) {
        x = (x + kPrimes[i] - digit[j] % kPrimes[i]) % kPrimes[i];
        x = x * inv[j][i] % kPrimes[i];
      }
      digit[i] = x;
    }
    i128 v = 0;
    for (int i = nprimes - 1; i >= 0; --i)
      v = v * kPrimes[i] + digit[i];
    if (v > P / 2)
      v -= P;
    c[k] = static_cast<Int>(v);
  }
  return c;
}

} // namespace

std::vector<i64> ntt_multiply(const std::vector<i64> &a,
                              const std::vector<i64> &b, std::size_t N,
                              int nprimes) {
  return multiply_crt(a, b, N, nprimes);
}

std::vector<i128> ntt_multiply(const std::vector<i128> &a,
                               const std::vector<i128> &b, std::size_t N,
                               int nprimes) {
  return multiply_crt(a, b, N, nprimes);
}

} // namespace twist
