#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "support.hpp"
#include "twist/newforms.hpp"

using namespace twist;

namespace {

// q prod_{n>=1} prod_{(step, e)} (1 - q^{step n})^e by repeated multiplication.
std::vector<i128> naive_eta_product(const std::vector<std::pair<i64, int>> &factors, i64 N) {
  std::vector<i128> c(static_cast<std::size_t>(N), 0);
  c[0] = 1;
  for (auto [step, e] : factors)
    for (i64 n = 1; step * n < N; ++n)
      for (int r = 0; r < e; ++r)
        for (i64 k = N - 1; k >= step * n; --k)
          c[static_cast<std::size_t>(k)] -= c[static_cast<std::size_t>(k - step * n)];
  std::vector<i128> a(static_cast<std::size_t>(N) + 1, 0);
  for (i64 n = 1; n <= N; ++n)
    a[static_cast<std::size_t>(n)] = c[static_cast<std::size_t>(n - 1)];
  return a;
}

i64 affine_points(const Weierstrass &E, i64 ell) {
  i64 count = 0;
  for (i64 x = 0; x < ell; ++x)
    for (i64 y = 0; y < ell; ++y) {
      i64 lhs = mod(y * y + E[0] * x * y + E[2] * y, ell);
      i64 rhs = mod(x * x % ell * x + E[1] * x * x + E[3] * x + E[4], ell);
      if (lhs == rhs)
        ++count;
    }
  return count;
}

} // namespace

TEST_SUITE("newforms") {

TEST_CASE("level 11 coefficients match the naive eta product") {
  auto f = eta_product_coefficients(BuiltinForm::level11, 200);
  auto naive = naive_eta_product({{1, 2}, {11, 2}}, 200);
  for (i64 n = 1; n <= 200; ++n)
    REQUIRE(f.a(n) == naive[static_cast<std::size_t>(n)]);
  CHECK(f.a(2) == -2);
  CHECK(f.a(3) == -1);
  CHECK(f.a(5) == 1);
  CHECK(f.a(7) == -2);
  CHECK(f.level() == 11);
  CHECK(f.two_kappa() == 2);
}

TEST_CASE("delta coefficients match the naive product and Ramanujan's congruence") {
  auto d = eta_product_coefficients(BuiltinForm::delta, 100);
  auto naive = naive_eta_product({{1, 24}}, 100);
  for (i64 n = 1; n <= 100; ++n)
    REQUIRE(d.a(n) == naive[static_cast<std::size_t>(n)]);
  CHECK(d.a(2) == -24);
  CHECK(d.a(3) == 252);
  CHECK(d.a(5) == 4830);
  auto big = twist::test::delta(20'000);
  for (i64 n = 1; n <= 20'000; n += 7) {
    i64 sigma = 0;
    for (i64 dv : divisors(n))
      sigma = (sigma + powmod(dv, 11, 691)) % 691;
    i64 tau = static_cast<i64>(big.a(n) % 691);
    REQUIRE(mod(tau - sigma, 691) == 0);
  }
}

TEST_CASE("level 11 coefficients agree with brute-force point counts") {
  const auto &f = twist::test::level11();
  for (int ell : primes_up_to(400)) {
    if (ell == 11)
      continue;
    i64 brute = ell - affine_points(kCurve11a, ell);
    REQUIRE(elliptic_ap(kCurve11a, ell) == brute);
    REQUIRE(f.a(ell) == brute);
  }
  CHECK(curve_discriminant(kCurve11a) == -161051);
  CHECK_THROWS_AS(elliptic_ap(kCurve11a, 11), std::domain_error);
}

TEST_CASE("Hecke relations and Deligne bound") {
  const auto &f = twist::test::level11();
  const auto &d = twist::test::delta();
  CHECK(f.first_multiplicativity_violation(200'000) == 0);
  CHECK(d.first_multiplicativity_violation(200'000) == 0);
  CHECK(f.truncated(200'000).first_deligne_violation() == 0);
  CHECK(d.truncated(200'000).first_deligne_violation() == 0);
  for (const NewformTable *g : {&f, &d})
    for (i64 ell : {2, 3, 5, 7, 11, 13})
      for (int t = 0; ipow(ell, t) <= 100'000; ++t)
        CHECK(hecke_value_primepower(*g, ell, t) ==
              doctest::Approx(g->lambda(ipow(ell, t))).epsilon(1e-9).scale(1));
}

TEST_CASE("Langlands parameters") {
  const auto &f = twist::test::level11();
  for (i64 ell : {2, 3, 5, 7, 13, 101}) {
    auto lp = langlands_pair(f, ell);
    CHECK(std::abs(lp.alpha + lp.beta - f.lambda(ell)) < 1e-12);
    CHECK(std::abs(lp.alpha * lp.beta - 1.0) < 1e-12);
    CHECK(std::abs(std::abs(lp.alpha) - 1) < 1e-12);
  }
  CHECK_THROWS_AS(langlands_pair(f, 11), std::domain_error);
  auto deg = langlands_pair_from_lambda(2.0);
  CHECK(std::abs(deg.alpha - 1.0) < 1e-7);
}

TEST_CASE("corrupted tables are rejected") {
  auto f = eta_product_coefficients(BuiltinForm::level11, 100);
  auto a = f.coefficients();
  a[6] += 1;
  NewformTable bad("bad", 11, 2, 1, a);
  CHECK(bad.first_multiplicativity_violation(100) == 6);
  CHECK_THROWS_AS(bad.validate(), std::runtime_error);
  a = f.coefficients();
  a[97] = 1000;
  NewformTable loud("loud", 11, 2, 1, a);
  CHECK(loud.first_deligne_violation() == 97);
}

TEST_CASE("q-expansion files round trip") {
  auto f = eta_product_coefficients(BuiltinForm::delta, 300);
  auto g = parse_qexpansion(format_qexpansion(f));
  CHECK(g.label() == "delta");
  CHECK(g.level() == 1);
  CHECK(g.two_kappa() == 12);
  CHECK(g.eps() == 1);
  CHECK(g.coefficients() == f.coefficients());

  std::vector<double> re(51, 0.0);
  auto l11 = eta_product_coefficients(BuiltinForm::level11, 50);
  for (i64 n = 1; n <= 50; ++n)
    re[static_cast<std::size_t>(n)] = static_cast<double>(l11.a(n)) + 0.0;
  NewformTable real("emb", 11, 2, 1, re);
  CHECK_FALSE(real.exact());
  auto back = parse_qexpansion(format_qexpansion(real));
  for (i64 n = 1; n <= 50; ++n)
    CHECK(back.a_real(n) == real.a_real(n));
}

TEST_CASE("malformed q-expansions name the line") {
  auto expect_error = [](const std::string &text, const std::string &needle) {
    try {
      parse_qexpansion(text, "in");
      FAIL("accepted malformed input");
    } catch (const std::runtime_error &e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  expect_error("", "missing header");
  expect_error("label x level 11 weight 2\n1 1\n", "in:1");
  expect_error("label x level 11 weight 2 eps 0\n1 1\n", "bad header value");
  expect_error("label x level 11 weight 2 eps +1\n1 1\n3 1\n", "in:3: expected index 2");
  expect_error("label x level 11 weight 2 eps +1\n1 1\n2 abc\n", "bad coefficient");
  CHECK_THROWS_AS(parse_builtin("level12"), std::invalid_argument);
}

TEST_CASE("Sato-Tate mean and prime sets") {
  const auto &f = twist::test::level11();
  auto st = satotate_sum(f, 200'000);
  CHECK(st.count == 17'984);
  CHECK(std::abs(st.mean / (8 / (3 * M_PI)) - 1) < 0.02);
  auto ps = lf_prime_set(f, 3, 1000);
  for (i64 ell : ps.primes) {
    CHECK(ell % 3 == 1);
    CHECK(ell % 9 != 1);
    CHECK(f.a(ell) != 0);
  }
  CHECK(in_lf_prime_set(f, 3, 13));
  CHECK_FALSE(in_lf_prime_set(f, 3, 19));
}

}
