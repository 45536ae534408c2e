#include <doctest.h>

#include <cmath>
#include <random>

#include <boost/math/special_functions/bessel.hpp>

#include "twist/arith.hpp"
#include "twist/series.hpp"
#include "twist/special.hpp"

using namespace twist;

TEST_SUITE("core") {

TEST_CASE("modular arithmetic against brute force") {
  for (i64 m : {2, 9, 25, 27, 97, 625, 1000003}) {
    for (i64 a = 1; a < std::min<i64>(m, 300); ++a) {
      if (gcd(a, m) != 1)
        continue;
      CHECK(mulmod(a, invmod(a, m), m) == 1 % m);
      i64 naive = 1;
      for (int e = 0; e < 13; ++e)
        naive = naive * a % m;
      CHECK(powmod(a, 13, m) == naive);
    }
  }
  CHECK(mod(-7, 5) == 3);
  CHECK(ipow(3, 6) == 729);
}

TEST_CASE("factorization, divisors, phi, order") {
  for (i64 n = 1; n <= 2000; ++n) {
    i64 prod = 1;
    for (auto [p, e] : factorize(n)) {
      CHECK(is_prime(p));
      prod *= ipow(p, e);
    }
    CHECK(prod == n);
    i64 phi = 0, dc = 0;
    for (i64 k = 1; k <= n; ++k) {
      if (gcd(k, n) == 1)
        ++phi;
      if (n % k == 0)
        ++dc;
    }
    CHECK(euler_phi(n) == phi);
    CHECK(divisor_count(n) == dc);
    CHECK(static_cast<i64>(divisors(n).size()) == dc);
  }
  auto table = divisor_count_table(500);
  for (int n = 1; n <= 500; ++n)
    CHECK(table[static_cast<std::size_t>(n)] == divisor_count(n));
  for (i64 a = 1; a < 81; ++a) {
    i64 expect = 0;
    if (gcd(a, 81) == 1) {
      i64 x = a;
      expect = 1;
      while (x != 1) {
        x = x * a % 81;
        ++expect;
      }
    }
    CHECK(multiplicative_order(a, 81) == expect);
  }
  auto ps = primes_up_to(100);
  CHECK(ps.size() == 25);
  CHECK(ps.back() == 97);
}

TEST_CASE("compensated sum recovers cancelled mass") {
  CompensatedSum<double> s;
  s.add(1e16);
  for (int i = 0; i < 1000; ++i)
    s.add(1.0);
  s.add(-1e16);
  CHECK(s.value() == doctest::Approx(1000.0).epsilon(1e-15));
}

TEST_CASE("parallel_for writes every slot once") {
  std::vector<int> hits(100'000, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; }, 4, 999);
  for (int h : hits)
    REQUIRE(h == 1);
}

TEST_CASE("eta series agree with the naive product") {
  const i64 N = 300;
  std::vector<i64> naive(N + 1, 0);
  naive[0] = 1;
  for (i64 n = 1; n <= N; ++n)
    for (i64 k = N; k >= n; --k)
      naive[static_cast<std::size_t>(k)] -= naive[static_cast<std::size_t>(k - n)];
  std::vector<i64> dense(N + 1, 0);
  for (auto [e, c] : eta_sparse(1, N))
    dense[static_cast<std::size_t>(e)] += c;
  CHECK(dense == naive);

  std::vector<i64> cube(N + 1, 0);
  for (auto [e, c] : eta_cubed_sparse(N))
    cube[static_cast<std::size_t>(e)] += c;
  std::vector<i64> naive3(N + 1, 0);
  for (i64 a = 0; a <= N; ++a)
    for (i64 b = 0; a + b <= N; ++b)
      for (i64 c = 0; a + b + c <= N; ++c)
        naive3[static_cast<std::size_t>(a + b + c)] +=
            naive[static_cast<std::size_t>(a)] * naive[static_cast<std::size_t>(b)] *
            naive[static_cast<std::size_t>(c)];
  CHECK(cube == naive3);
}

TEST_CASE("NTT product matches the schoolbook product") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<i64> dist(-1'000'000, 1'000'000);
  std::vector<i64> a(700), b(500);
  for (auto &x : a)
    x = dist(rng);
  for (auto &x : b)
    x = dist(rng);
  std::size_t N = 1000;
  std::vector<i64> ref(N + 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size() && i + j <= N; ++j)
      ref[i + j] += a[i] * b[j];
  auto got = ntt_multiply(a, b, N, 2);
  got.resize(N + 1);
  CHECK(got == ref);
}

TEST_CASE("special functions against reference values") {
  CHECK(complex_log_gamma({0.5, 0}).real() ==
        doctest::Approx(0.5 * std::log(M_PI)).epsilon(1e-14));
  for (double x : {0.1, 0.7, 1.5, 3.25, 10.0, 57.5})
    CHECK(complex_log_gamma({x, 0}).real() == doctest::Approx(std::lgamma(x)).epsilon(1e-13));
  // |Gamma(1/2 + it)|^2 = pi / cosh(pi t)
  for (double t : {0.5, 2.0, 7.0}) {
    double lhs = 2 * complex_log_gamma({0.5, t}).real();
    CHECK(lhs == doctest::Approx(std::log(M_PI / std::cosh(M_PI * t))).epsilon(1e-12));
  }
  CHECK(riemann_zeta({2, 0}).real() == doctest::Approx(M_PI * M_PI / 6).epsilon(1e-14));
  CHECK(riemann_zeta({3, 0}).real() == doctest::Approx(1.2020569031595942).epsilon(1e-14));
  CHECK(riemann_zeta({0.5, 0}).real() == doctest::Approx(-1.4603545088095868).epsilon(1e-12));
  CHECK_THROWS_AS(riemann_zeta({-1, 0}), std::domain_error);
  for (double nu : {1.0, 11.0})
    for (double x : {0.3, 5.0, 40.0, 300.0})
      CHECK(bessel_j(nu, x) ==
            doctest::Approx(boost::math::cyl_bessel_j(nu, x)).epsilon(1e-12).scale(1));
  CHECK(gamma_q_int(1, 2.0) == doctest::Approx(std::exp(-2.0)));
  CHECK(gamma_q_int(3, 1.0) == doctest::Approx(2.5 * std::exp(-1.0)));
}

}
