#include <doctest.h>

#include <cmath>
#include <complex>

#include "twist/characters.hpp"

using namespace twist;

namespace {

std::complex<double> brute_gauss(const DirichletCharacter &chi) {
  std::complex<double> s = 0;
  i64 q = chi.modulus();
  for (i64 n = 1; n < q; ++n)
    s += chi.evaluate_complex(n) * std::polar(1.0, 2 * M_PI * static_cast<double>(n) / q);
  return s;
}

} // namespace

TEST_SUITE("characters") {

TEST_CASE("discrete log table is consistent") {
  for (auto [p, h] : std::vector<std::pair<i64, int>>{{3, 2}, {3, 5}, {5, 3}, {7, 3}, {11, 2}}) {
    CharacterTable T(p, h);
    CHECK(multiplicative_order(T.g(), T.q()) == T.phi());
    for (i64 n = 0; n < T.q(); ++n) {
      if (n % p == 0) {
        CHECK(T.dlog(n) == -1);
        continue;
      }
      REQUIRE(T.dlog(n) >= 0);
      CHECK(T.power(T.dlog(n)) == n);
    }
  }
}

TEST_CASE("wild characters mod p^h") {
  auto T = build_character_table(3, 3);
  auto wild = wild_characters(T);
  REQUIRE(wild.size() == 6);
  for (const auto &chi : wild) {
    CHECK(chi.order() == 9);
    CHECK(chi.conductor() == 27);
    CHECK(chi.is_wild());
    CHECK(chi.is_even());
  }
  CHECK(galois_orbit(wild[0]).size() == 6);
  CHECK(wild_characters(build_character_table(5, 3)).size() == 20);
  CHECK(wild_characters(build_character_table(3, 6)).size() == 162);
}

TEST_CASE("character values are multiplicative roots of unity") {
  auto T = build_character_table(5, 3);
  DirichletCharacter chi(T, 7);
  for (i64 m = 1; m < 60; ++m)
    for (i64 n = 1; n < 60; ++n) {
      auto lhs = chi.evaluate_complex(m * n);
      auto rhs = chi.evaluate_complex(m) * chi.evaluate_complex(n);
      CHECK(std::abs(lhs - rhs) < 1e-12);
    }
  CHECK(std::abs(chi.evaluate_complex(5)) == 0.0);
  auto c = chi.conj();
  for (i64 n = 1; n < 125; ++n)
    if (n % 5)
      CHECK(std::abs(c.evaluate_complex(n) * chi.evaluate_complex(n) - 1.0) < 1e-12);
}

TEST_CASE("Gauss sums") {
  for (auto [p, h] : std::vector<std::pair<i64, int>>{{3, 2}, {3, 3}, {3, 4}, {5, 2}, {7, 2}}) {
    auto T = build_character_table(p, h);
    for (const auto &chi : wild_characters(T)) {
      auto G = gauss_sum<double>(chi);
      auto B = brute_gauss(chi);
      CHECK(std::abs(G - B) < 1e-9);
      CHECK(std::norm(G) == doctest::Approx(static_cast<double>(T->q())).epsilon(1e-12));
      auto Gc = gauss_sum<double>(chi.conj());
      double sign = chi.is_even() ? 1 : -1;
      CHECK(std::abs(G * Gc - sign * static_cast<double>(T->q())) < 1e-9);
    }
  }
}

TEST_CASE("Teichmuller decomposition") {
  for (auto [p, h] : std::vector<std::pair<i64, int>>{{3, 4}, {5, 3}, {7, 2}}) {
    i64 q = ipow(p, h);
    for (i64 n = 1; n < q; ++n) {
      if (n % p == 0)
        continue;
      auto [t, u] = teichmuller_decompose(n, p, h);
      CHECK(mulmod(t, u, q) == n);
      CHECK(powmod(t, static_cast<u64>(p - 1), q) == 1);
      CHECK(u % p == 1);
    }
  }
}

TEST_CASE("Galois averages equal conjugate sums") {
  struct Config {
    i64 p;
    int h;
    GaloisAverageContext ctx;
  };
  std::vector<Config> configs = {
      {3, 3, GaloisAverageContext::rational(3)},
      {3, 4, GaloisAverageContext::rational(3)},
      {5, 3, GaloisAverageContext::rational(5)},
      {3, 4, GaloisAverageContext::cyclotomic(3, 2)},
      {7, 3, GaloisAverageContext::cyclotomic(7, 1, 3)},
  };
  for (const auto &c : configs) {
    auto chi = wild_characters(build_character_table(c.p, c.h))[0];
    for (i64 n = 1; n <= 200; ++n) {
      if (n % c.p == 0)
        continue;
      auto fast = galois_average(chi, n, c.ctx);
      auto brute = galois_average_brute(chi, n, c.ctx);
      REQUIRE(fast == brute);
      // Numerical cross-check of the embedding.
      std::complex<double> direct = 0;
      auto group = c.ctx.fixing_group(c.h - 1);
      for (i64 a : group)
        direct += chi.pow(a).evaluate_complex(n);
      direct /= static_cast<double>(group.size());
      CHECK(std::abs(fast.embed() - direct) < 1e-10);
    }
  }
}

TEST_CASE("relative traces vanish off the subfield") {
  const i64 p = 3;
  for (int h = 2; h <= 4; ++h) {
    i64 M = ipow(p, h - 1);
    for (int r = 1; r <= h - 1; ++r) {
      i64 pr = ipow(p, r);
      for (i64 k = 0; k < M; ++k) {
        auto x = CyclotomicElement::root(M, k);
        auto tr = subfield_trace(x, p, r).reduced();
        if ((k * pr) % M == 0)
          CHECK(tr == (x * (M / pr)).reduced());
        else
          CHECK(tr.is_zero());
      }
    }
  }
}

TEST_CASE("cyclotomic arithmetic") {
  auto z = CyclotomicElement::root(9, 1);
  auto prod = z * CyclotomicElement::root(9, 4);
  CHECK(prod.reduced() == CyclotomicElement::root(9, 5).reduced());
  CyclotomicElement s(9);
  for (i64 k = 0; k < 9; k += 3)
    s += CyclotomicElement::root(9, k);
  CHECK(s.is_zero());
  auto x = CyclotomicElement::root(27, 2) + CyclotomicElement::integer(27, 3);
  auto y = CyclotomicElement::root(27, 5) * 2;
  CHECK((x * y).galois(4).reduced() == (x.galois(4) * y.galois(4)).reduced());
  CHECK(std::abs((x * y).embed() - x.embed() * y.embed()) < 1e-12);
  CHECK(cyclotomic_polynomial(9) == std::vector<i64>{1, 0, 0, 1, 0, 0, 1});
  i64 v = 0;
  CHECK(CyclotomicElement::integer(9, 7).is_integer(&v));
  CHECK(v == 7);
}

}
