#include "twist/lattice.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include <boost/math/constants/constants.hpp>

namespace twist {

namespace {

i128 dot(const Vec2 &a, const Vec2 &b) {
  return static_cast<i128>(a.x) * b.x + static_cast<i128>(a.y) * b.y;
}

// Nearest integer to a/b, b > 0.
i64 round_div(i128 a, i128 b) {
  i128 t = 2 * a + b;
  i128 d = 2 * b;
  i128 q = t / d;
  if ((t % d != 0) && ((t < 0) != (d < 0)))
    --q;
  return static_cast<i64>(q);
}

i64 floor_div(i64 a, i64 b) {
  i64 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0)))
    --q;
  return q;
}

// #{x in [a, b) : x = r mod m}.
i64 count_in_class(i64 a, i64 b, i64 r, i64 m) {
  if (b <= a)
    return 0;
  return floor_div(b - 1 - r, m) - floor_div(a - 1 - r, m);
}

i64 ceil_i(double x) { return static_cast<i64>(std::ceil(x - 1e-12)); }

} // namespace

i64 Lattice2::covolume() const {
  i128 d = static_cast<i128>(b1.x) * b2.y - static_cast<i128>(b1.y) * b2.x;
  return static_cast<i64>(d < 0 ? -d : d);
}

bool Lattice2::contains(i64 m, i64 n) const {
  i128 D = static_cast<i128>(b1.x) * b2.y - static_cast<i128>(b1.y) * b2.x;
  if (D == 0)
    throw std::domain_error("Lattice2: degenerate basis");
  i128 a = static_cast<i128>(m) * b2.y - static_cast<i128>(n) * b2.x;
  i128 b = static_cast<i128>(b1.x) * n - static_cast<i128>(b1.y) * m;
  return a % D == 0 && b % D == 0;
}

CongruenceLattice CongruenceLattice::make(i64 q, i64 l1, i64 l2, i64 xi) {
  if (q < 1)
    throw std::domain_error("CongruenceLattice: q must be positive");
  if (gcd(l1, q) != 1 || gcd(l2, q) != 1 || gcd(xi, q) != 1)
    throw std::domain_error("CongruenceLattice: need (l1 l2 xi, q) = 1");
  CongruenceLattice L;
  L.q = q;
  L.l1 = l1;
  L.l2 = l2;
  L.xi = mod(xi, q);
  i64 c = q == 1 ? 0
                 : mulmod(mulmod(L.xi, mod(l2, q), q), invmod(mod(l1, q), q), q);
  L.basis = {{q, 0}, {c, 1}};
  return L;
}

bool CongruenceLattice::satisfies(i64 m, i64 n) const {
  return mod(mulmod(mod(l1, q), mod(m, q), q) -
                 mulmod(mulmod(xi, mod(l2, q), q), mod(n, q), q),
             q) == 0;
}

Lattice2 lagrange_reduce(Lattice2 B) {
  if (B.covolume() == 0)
    throw std::domain_error("lagrange_reduce: degenerate basis");
  if (B.b2.norm2() < B.b1.norm2())
    std::swap(B.b1, B.b2);
  for (;;) {
    i64 mu = round_div(dot(B.b1, B.b2), B.b1.norm2());
    B.b2 = {B.b2.x - mu * B.b1.x, B.b2.y - mu * B.b1.y};
    if (B.b2.norm2() < B.b1.norm2())
      std::swap(B.b1, B.b2);
    else
      break;
  }
  return B;
}

GaussReduction gauss_reduce(const CongruenceLattice &L) {
  GaussReduction g;
  g.reduced = lagrange_reduce(L.basis);
  g.s2 = g.reduced.b1.norm2();
  g.s = std::sqrt(static_cast<double>(g.s2));
  g.covolume = g.reduced.covolume();
  g.xi_order = multiplicative_order(L.xi, L.q);
  g.xi_pm_one = L.xi == 1 % L.q || L.xi == L.q - 1;
  if (!g.xi_pm_one && g.xi_order > 0) {
    g.bound_applies = true;
    g.lower_bound = std::pow(static_cast<double>(L.q),
                             1.0 / static_cast<double>(g.xi_order)) /
                    (2.0 * static_cast<double>(std::max(L.l1, L.l2)));
    g.bound_holds = g.s >= g.lower_bound;
  }
  return g;
}

Vec2 shortest_vector_exhaustive(const CongruenceLattice &L, double R) {
  i64 r = static_cast<i64>(std::floor(R));
  Vec2 best;
  i128 best2 = -1;
  i64 c = L.slope();
  for (i64 n = -r; n <= r; ++n) {
    i64 m0 = mod(mulmod(c, mod(n, L.q), L.q), L.q);
    // m = m0 + k q in [-r, r]
    for (i64 m = m0 - (floor_div(m0 + r, L.q)) * L.q; m <= r; m += L.q) {
      if (m == 0 && n == 0)
        continue;
      Vec2 v{m, n};
      if (static_cast<double>(v.norm2()) > R * R)
        continue;
      if (best2 < 0 || v.norm2() < best2) {
        best = v;
        best2 = v.norm2();
      }
    }
  }
  return best;
}

i64 small_vectors_in_box(const CongruenceLattice &L, i64 d) {
  double B = std::pow(static_cast<double>(L.q), 1.0 / static_cast<double>(d)) / 2;
  i64 c = L.slope();
  i64 count = 0;
  i64 nmax = static_cast<i64>(std::ceil(B / static_cast<double>(L.l2)));
  i64 mmax = static_cast<i64>(std::ceil(B / static_cast<double>(L.l1)));
  for (i64 n = -nmax; n <= nmax; ++n) {
    if (static_cast<double>(L.l2 * std::abs(n)) >= B)
      continue;
    i64 m0 = mod(mulmod(c, mod(n, L.q), L.q), L.q);
    for (i64 m = m0 - floor_div(m0 + mmax, L.q) * L.q; m <= mmax; m += L.q) {
      if ((m == 0 && n == 0) || static_cast<double>(L.l1 * std::abs(m)) >= B)
        continue;
      ++count;
    }
  }
  return count;
}

BoxCount box_count(const CongruenceLattice &L, double M, double N, double s) {
  if (M < 1 || N < 1)
    throw std::domain_error("box_count: need M, N >= 1");
  BoxCount b;
  b.M = M;
  b.N = N;
  i64 m0 = ceil_i(M), m1 = ceil_i(2 * M);
  i64 n0 = ceil_i(N), n1 = ceil_i(2 * N);
  i64 c = L.slope();
  if (n1 - n0 <= m1 - m0) {
    for (i64 n = n0; n < n1; ++n)
      b.count += count_in_class(m0, m1, mulmod(c, n % L.q, L.q), L.q);
  } else {
    i64 cinv = L.q == 1 ? 0 : invmod(c, L.q);
    for (i64 m = m0; m < m1; ++m)
      b.count += count_in_class(n0, n1, mulmod(cinv, m % L.q, L.q), L.q);
  }
  double q = static_cast<double>(L.q);
  b.prediction = M * N / q;
  b.deviation = std::abs(static_cast<double>(b.count) - b.prediction);
  b.envelope = 1 + std::min(std::min(M, N) + (M + N) / q, (M + N) / s);
  b.ratio = b.deviation / b.envelope;
  return b;
}

BoxSamples box_samples(const CongruenceLattice &L, int count, std::uint64_t seed,
                       double max_side) {
  double s = gauss_reduce(L).s;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, std::log(max_side));
  BoxSamples out;
  double total = 0;
  for (int i = 0; i < count; ++i) {
    double M = std::floor(std::exp(U(rng)));
    double N = std::floor(std::exp(U(rng)));
    auto b = box_count(L, std::max(1.0, M), std::max(1.0, N), s);
    out.max_ratio = std::max(out.max_ratio, b.ratio);
    total += b.ratio;
    out.samples.push_back(b);
  }
  out.mean_ratio = count ? total / count : 0;
  return out;
}

BallCount ball_count(const CongruenceLattice &L, double T, double s) {
  if (T < 1)
    throw std::domain_error("ball_count: need T >= 1");
  BallCount b;
  b.T = T;
  i64 r = static_cast<i64>(std::floor(T));
  i64 c = L.slope();
  for (i64 n = -r; n <= r; ++n) {
    double w = std::sqrt(std::max(0.0, T * T - static_cast<double>(n) * n));
    i64 lo = -static_cast<i64>(std::floor(w)), hi = static_cast<i64>(std::floor(w));
    b.count += count_in_class(lo, hi + 1, mulmod(c, mod(n, L.q), L.q), L.q);
  }
  b.count -= 1; // origin
  b.envelope = T * T / static_cast<double>(L.q) + T / s;
  b.ratio = static_cast<double>(b.count) / b.envelope;
  return b;
}

Lattice2 sublattice(const CongruenceLattice &L, i64 d1, i64 d2) {
  if (d1 < 1 || d2 < 1 || gcd(d1 * d2, L.q) != 1)
    throw std::domain_error("sublattice: need (d1 d2, q) = 1");
  // m = d1 m', n = d2 n' with l1 d1 m' = xi l2 d2 n' mod q.
  auto inner = CongruenceLattice::make(L.q, L.l1 * d1, L.l2 * d2, L.xi);
  return {{d1 * inner.basis.b1.x, d2 * inner.basis.b1.y},
          {d1 * inner.basis.b2.x, d2 * inner.basis.b2.y}};
}

SieveRow sieve_row(const CongruenceLattice &L, double M, double N, i64 d1,
                   i64 d2, double X, double Y) {
  if (gcd(d1 * d2, L.q) != 1)
    throw std::domain_error("sieve_condition_check: need (d1 d2, q) = 1");
  SieveRow row;
  row.d1 = d1;
  row.d2 = d2;
  i64 m0 = ceil_i(M), m1 = ceil_i(2 * M);
  i64 n0 = ceil_i(N), n1 = ceil_i(2 * N);
  i64 c = L.slope();
  i64 Q = L.q * d1;
  i64 d1inv = L.q == 1 ? 0 : invmod(mod(d1, L.q), L.q);
  for (i64 n = n0 + mod(-n0, d2); n < n1; n += d2) {
    // m = d1 t, t = c n conj(d1) mod q.
    i64 t = mulmod(mulmod(c, n % L.q, L.q), d1inv, L.q);
    row.count += count_in_class(m0, m1, mod(d1 * t, Q), Q);
  }
  row.expected = X / static_cast<double>(d1 * d2);
  row.constant = std::abs(static_cast<double>(row.count) - row.expected) / Y;
  row.covolume = sublattice(L, d1, d2).covolume();
  return row;
}

SieveConditionReport sieve_condition_check(const CongruenceLattice &L, double M,
                                           double N, i64 max_product) {
  SieveConditionReport r;
  r.M = M;
  r.N = N;
  double q = static_cast<double>(L.q);
  i64 d = std::max<i64>(1, multiplicative_order(L.xi, L.q));
  r.X = M * N / q;
  r.Y = 1 + std::min(std::min(M, N) + (M + N) / q,
                     (M + N) * static_cast<double>(L.l1 + L.l2) /
                         std::pow(q, 1.0 / static_cast<double>(d)));
  for (i64 d1 = 1; d1 <= max_product; ++d1) {
    if (gcd(d1, L.q) != 1)
      continue;
    for (i64 d2 = 1; d1 * d2 <= max_product; ++d2) {
      if (gcd(d2, L.q) != 1)
        continue;
      auto row = sieve_row(L, M, N, d1, d2, r.X, r.Y);
      r.worst_constant = std::max(r.worst_constant, row.constant);
      r.covolumes_ok = r.covolumes_ok && row.covolume == L.q * d1 * d2;
      r.rows.push_back(row);
    }
  }
  return r;
}

std::complex<double> kloosterman(i64 m, i64 n, i64 r) {
  if (r < 1)
    throw std::domain_error("kloosterman: modulus must be positive");
  const double tp = boost::math::constants::two_pi<double>();
  CompensatedSum<double> re, im;
  for (i64 x = 0; x < r; ++x) {
    if (gcd(x, r) != 1)
      continue;
    i64 k = mod(mulmod(mod(m, r), x, r) + mulmod(mod(n, r), invmod(x, r), r), r);
    re.add(std::cos(tp * static_cast<double>(k) / static_cast<double>(r)));
    im.add(std::sin(tp * static_cast<double>(k) / static_cast<double>(r)));
  }
  return {re.value(), im.value()};
}

double weil_bound(i64 m, i64 n, i64 r) {
  i64 g = gcd(gcd(std::abs(m), std::abs(n)), r);
  return divisor_count(r) * std::sqrt(static_cast<double>(g)) *
         std::sqrt(static_cast<double>(r));
}

WeilReport weil_check_exhaustive(i64 max_modulus) {
  WeilReport rep;
  const double tp = boost::math::constants::two_pi<double>();
  for (i64 r = 2; r <= max_modulus; ++r) {
    auto fac = factorize(r);
    if (fac.size() != 1)
      continue;
    ++rep.moduli;
    std::vector<double> cs(static_cast<std::size_t>(r)), sn(cs.size());
    for (i64 k = 0; k < r; ++k) {
      cs[static_cast<std::size_t>(k)] = std::cos(tp * static_cast<double>(k) / static_cast<double>(r));
      sn[static_cast<std::size_t>(k)] = std::sin(tp * static_cast<double>(k) / static_cast<double>(r));
    }
    std::vector<i64> units, inv;
    for (i64 x = 1; x < r; ++x)
      if (gcd(x, r) == 1) {
        units.push_back(x);
        inv.push_back(invmod(x, r));
      }
    struct Worst {
      double ratio = 0;
      i64 n = 0;
    };
    std::vector<Worst> per_m(static_cast<std::size_t>(r));
    parallel_for(
        static_cast<std::size_t>(r),
        [&](std::size_t mi) {
          i64 m = static_cast<i64>(mi);
          std::vector<i64> base(units.size()), acc(units.size(), 0);
          for (std::size_t i = 0; i < units.size(); ++i)
            base[i] = mulmod(m, units[i], r);
          Worst w;
          for (i64 n = 0; n < r; ++n) {
            double re = 0, im = 0;
            for (std::size_t i = 0; i < units.size(); ++i) {
              i64 k = base[i] + acc[i];
              if (k >= r)
                k -= r;
              re += cs[static_cast<std::size_t>(k)];
              im += sn[static_cast<std::size_t>(k)];
              acc[i] += inv[i];
              if (acc[i] >= r)
                acc[i] -= r;
            }
            double ratio = std::hypot(re, im) / weil_bound(m, n, r);
            if (ratio > w.ratio)
              w = {ratio, n};
          }
          per_m[mi] = w;
        },
        0, 1);
    for (i64 m = 0; m < r; ++m) {
      const auto &w = per_m[static_cast<std::size_t>(m)];
      if (w.ratio > rep.max_ratio) {
        rep.max_ratio = w.ratio;
        rep.worst_m = m;
        rep.worst_n = w.n;
        rep.worst_r = r;
      }
    }
    rep.evaluations += r * r;
  }
  rep.holds = rep.max_ratio <= 1 + 1e-9;
  return rep;
}

BilinearReport bilinear_B(const std::vector<std::complex<double>> &alpha,
                          const std::vector<std::complex<double>> &beta, i64 l,
                          i64 d, i64 r) {
  if (alpha.empty() || beta.empty())
    throw std::invalid_argument("bilinear_B: empty coefficient vectors");
  if (gcd(l, r) != 1)
    throw std::domain_error("bilinear_B: need (l, r) = 1");
  BilinearReport b;
  const i64 M = static_cast<i64>(alpha.size());
  const i64 Ns = static_cast<i64>(beta.size());
  const double sr = std::sqrt(static_cast<double>(r));
  CompensatedSum<std::complex<double>> S;
  for (i64 m = 1; m <= M; ++m) {
    for (i64 n = 1; n <= Ns; ++n) {
      i64 a = mulmod(mod(l * d, r), m % r, r);
      auto k = kloosterman(a, n, r);
      b.max_weil_ratio = std::max(b.max_weil_ratio, std::abs(k) / weil_bound(a, n, r));
      S.add(alpha[static_cast<std::size_t>(m - 1)] *
            beta[static_cast<std::size_t>(n - 1)] * k / sr);
    }
  }
  b.value = S.value();
  double Md = static_cast<double>(M), Nd = static_cast<double>(Ns),
         rd = static_cast<double>(r);
  double best = -1;
  for (i64 s : divisors(r)) {
    double sd = static_cast<double>(s);
    double e = std::sqrt(rd / Nd) + std::pow(sd / rd, 0.25) +
               std::pow(rd / (Md * Md * sd), 0.25);
    if (best < 0 || e < best) {
      best = e;
      b.best_s = s;
    }
  }
  b.envelope = Md * Nd * best;
  b.constant = std::abs(b.value) / b.envelope;
  return b;
}

} // namespace twist
