#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "twist/arith.hpp"

namespace twist {

struct Vec2 {
  i64 x = 0;
  i64 y = 0;
  i128 norm2() const { return static_cast<i128>(x) * x + static_cast<i128>(y) * y; }
  friend bool operator==(const Vec2 &a, const Vec2 &b) {
    return a.x == b.x && a.y == b.y;
  }
};

struct Lattice2 {
  Vec2 b1;
  Vec2 b2;
  i64 covolume() const;
  // (m, n) is an integer combination of b1, b2.
  bool contains(i64 m, i64 n) const;
};

// {(m, n) : l1 m = xi l2 n mod q} with (l1 l2 xi, q) = 1.
struct CongruenceLattice {
  i64 q = 1;
  i64 l1 = 1;
  i64 l2 = 1;
  i64 xi = 1;
  Lattice2 basis; // (q, 0), (c, 1) with c = xi l2 conj(l1)

  static CongruenceLattice make(i64 q, i64 l1, i64 l2, i64 xi);
  bool satisfies(i64 m, i64 n) const;
  // m = c n mod q.
  i64 slope() const { return basis.b2.x; }
};

struct GaussReduction {
  Lattice2 reduced;
  double s = 0; // shortest nonzero length
  i128 s2 = 0;  // its squared length, exact
  i64 covolume = 0;
  i64 xi_order = 0;
  bool xi_pm_one = false;
  // q^{1/d}/(2 max(l1, l2)); applies when xi != +-1.
  double lower_bound = 0;
  bool bound_applies = false;
  bool bound_holds = true;
};

// Lagrange-Gauss reduction.
GaussReduction gauss_reduce(const CongruenceLattice &L);
Lattice2 lagrange_reduce(Lattice2 B);

// Shortest nonzero vector by enumerating the congruence inside radius R;
// returns (0, 0) when no nonzero vector has length <= R.
Vec2 shortest_vector_exhaustive(const CongruenceLattice &L, double R);

// Nonzero lattice vectors with max(l1 |m|, l2 |n|) < q^{1/d}/2.
i64 small_vectors_in_box(const CongruenceLattice &L, i64 d);

struct BoxCount {
  double M = 1, N = 1;
  i64 count = 0;
  double prediction = 0; // MN/q
  double deviation = 0;
  double envelope = 0;   // 1 + min(min(M,N) + (M+N)/q, (M+N)/s)
  double ratio = 0;
};

// Lattice points in [M, 2M) x [N, 2N).
BoxCount box_count(const CongruenceLattice &L, double M, double N, double s);

struct BoxSamples {
  std::vector<BoxCount> samples;
  double max_ratio = 0;
  double mean_ratio = 0;
};

// M, N log-uniform in [1, max_side], drawn from one seeded generator.
BoxSamples box_samples(const CongruenceLattice &L, int count, std::uint64_t seed,
                       double max_side = 4096);

struct BallCount {
  double T = 1;
  i64 count = 0; // nonzero points with |v| <= T
  double envelope = 0; // T^2/q + T/s
  double ratio = 0;
};

BallCount ball_count(const CongruenceLattice &L, double T, double s);

// {(m, n) in Lambda : d1 | m, d2 | n}.
Lattice2 sublattice(const CongruenceLattice &L, i64 d1, i64 d2);

struct SieveRow {
  i64 d1 = 1, d2 = 1;
  i64 count = 0;
  double expected = 0; // X/(d1 d2)
  double constant = 0; // |count - expected| / Y
  i64 covolume = 0;
};

struct SieveConditionReport {
  double M = 1, N = 1;
  double X = 0; // MN/q
  double Y = 0; // 1 + min(min(M,N) + (M+N)/q, (M+N)(l1+l2)/q^{1/d})
  std::vector<SieveRow> rows;
  double worst_constant = 0;
  bool covolumes_ok = true;
};

// All (d1, d2) with d1 d2 <= max_product and (d1 d2, q) = 1.
SieveConditionReport sieve_condition_check(const CongruenceLattice &L, double M,
                                           double N, i64 max_product = 100);
SieveRow sieve_row(const CongruenceLattice &L, double M, double N, i64 d1,
                   i64 d2, double X, double Y);

// S(m, n; r) = sum_{x mod r, (x,r)=1} e((m x + n conj(x))/r).
std::complex<double> kloosterman(i64 m, i64 n, i64 r);
// d(r) (m, n, r)^{1/2} r^{1/2}
double weil_bound(i64 m, i64 n, i64 r);

struct WeilReport {
  i64 moduli = 0;
  i64 evaluations = 0;
  double max_ratio = 0; // max |S| / bound
  i64 worst_m = 0, worst_n = 0, worst_r = 0;
  bool holds = true;
};

// Every prime power r <= max_modulus and every 0 <= m, n < r.
WeilReport weil_check_exhaustive(i64 max_modulus);

struct BilinearReport {
  std::complex<double> value;
  double envelope = 0; // M N* min_s(...)
  i64 best_s = 1;
  double constant = 0; // |B| / envelope
  double max_weil_ratio = 0;
};

// sum_{m <= M, n <= N*} alpha_m beta_n S(l d m, n; r)/sqrt(r).
BilinearReport bilinear_B(const std::vector<std::complex<double>> &alpha,
                          const std::vector<std::complex<double>> &beta, i64 l,
                          i64 d, i64 r);

} // namespace twist
