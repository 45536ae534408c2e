#include "twist/arith.hpp"

#include <stdexcept>

namespace twist {

i64 mod(i64 a, i64 m) {
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

i64 mulmod(i64 a, i64 b, i64 m) {
  return static_cast<i64>(static_cast<i128>(mod(a, m)) * mod(b, m) % m);
}

i64 powmod(i64 a, u64 e, i64 m) {
  if (m == 1)
    return 0;
  i64 r = 1, b = mod(a, m);
  while (e) {
    if (e & 1)
      r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

i64 gcd(i64 a, i64 b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b) {
    i64 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

i64 invmod(i64 a, i64 m) {
  i64 r0 = m, r1 = mod(a, m), s0 = 0, s1 = 1;
  while (r1) {
    i64 qt = r0 / r1;
    i64 t = r0 - qt * r1;
    r0 = r1;
    r1 = t;
    t = s0 - qt * s1;
    s0 = s1;
    s1 = t;
  }
  if (r0 != 1)
    throw std::domain_error("invmod: argument not invertible");
  return mod(s0, m);
}

i64 ipow(i64 b, int e) {
  i64 r = 1;
  for (int i = 0; i < e; ++i)
    r *= b;
  return r;
}

bool is_prime(i64 n) {
  if (n < 2)
    return false;
  for (i64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0)
      return n == p;
  }
  i64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (i64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    i64 x = powmod(a, static_cast<u64>(d), n);
    if (x == 1 || x == n - 1)
      continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite)
      return false;
  }
  return true;
}

std::vector<int> primes_up_to(int n) {
  std::vector<int> out;
  if (n < 2)
    return out;
  std::vector<char> comp(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 2; i <= n; ++i) {
    if (comp[i])
      continue;
    out.push_back(i);
    for (i64 j = static_cast<i64>(i) * i; j <= n; j += i)
      comp[j] = 1;
  }
  return out;
}

std::vector<std::pair<i64, int>> factorize(i64 n) {
  if (n < 1)
    throw std::domain_error("factorize: n must be positive");
  std::vector<std::pair<i64, int>> f;
  for (i64 p = 2; p * p <= n; ++p) {
    if (n % p)
      continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    f.emplace_back(p, e);
  }
  if (n > 1)
    f.emplace_back(n, 1);
  return f;
}

std::vector<i64> divisors(i64 n) {
  std::vector<i64> d{1};
  for (auto [p, e] : factorize(n)) {
    std::size_t k = d.size();
    i64 pp = 1;
    for (int i = 0; i < e; ++i) {
      pp *= p;
      for (std::size_t j = 0; j < k; ++j)
        d.push_back(d[j] * pp);
    }
  }
  std::sort(d.begin(), d.end());
  return d;
}

int divisor_count(i64 n) {
  int c = 1;
  for (auto [p, e] : factorize(n))
    c *= e + 1;
  return c;
}

std::vector<int> divisor_count_table(int n) {
  std::vector<int> d(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 1; i <= n; ++i)
    for (int j = i; j <= n; j += i)
      ++d[j];
  return d;
}

i64 euler_phi(i64 n) {
  i64 r = n;
  for (auto [p, e] : factorize(n))
    r = r / p * (p - 1);
  return r;
}

i64 multiplicative_order(i64 a, i64 m) {
  if (gcd(a, m) != 1)
    return 0;
  i64 ph = euler_phi(m);
  i64 ord = ph;
  for (auto [p, e] : factorize(ph)) {
    for (int i = 0; i < e; ++i) {
      if (powmod(a, static_cast<u64>(ord / p), m) == 1)
        ord /= p;
      else
        break;
    }
  }
  return ord;
}

namespace {
std::atomic<unsigned> g_threads{0};
}

unsigned default_threads() {
  unsigned t = g_threads.load();
  if (t)
    return t;
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

void set_default_threads(unsigned n) { g_threads.store(n); }

} // namespace twist
