#include <doctest.h>

#include <cmath>
#include <complex>

#include "support.hpp"
#include "twist/lfun.hpp"

using namespace twist;

namespace {

std::complex<double> brute_gauss(const DirichletCharacter &chi) {
  std::complex<double> s = 0;
  i64 q = chi.modulus();
  for (i64 n = 1; n < q; ++n)
    s += chi.evaluate_complex(n) * std::polar(1.0, 2 * M_PI * static_cast<double>(n) / q);
  return s;
}

// Classical weight-2 series: L(E x chi, 1) = sum a_n chi(n)/n e^{-2 pi n/sqrt(N')}
// + w sum a_n conj chi(n)/n e^{-2 pi n/sqrt(N')}.
std::complex<double> classical_twist(const NewformTable &f, const DirichletCharacter *chi) {
  double q = chi ? static_cast<double>(chi->modulus()) : 1.0;
  double root = q * std::sqrt(static_cast<double>(f.level()));
  std::complex<double> w = static_cast<double>(f.eps());
  if (chi) {
    auto G = brute_gauss(*chi);
    w *= chi->evaluate_complex(f.level()) * G * G / q;
  }
  std::complex<double> s1 = 0, s2 = 0;
  for (i64 n = 1; n <= f.size(); ++n) {
    double decay = std::exp(-2 * M_PI * static_cast<double>(n) / root);
    if (decay < 1e-18)
      break;
    std::complex<double> c = chi ? chi->evaluate_complex(n) : 1.0;
    double an = static_cast<double>(f.a(n)) / static_cast<double>(n);
    s1 += an * c * decay;
    s2 += an * std::conj(c) * decay;
  }
  return s1 + w * s2;
}

} // namespace

TEST_SUITE("lfun") {

TEST_CASE("central value of the level 11 form") {
  const auto &f = twist::test::level11(2'000'000);
  auto L = lvalue_trivial(f);
  auto oracle = classical_twist(f, nullptr);
  CHECK(std::abs(L.value - oracle) < 1e-12);
  CHECK(L.value.real() == doctest::Approx(0.2538418608559107).epsilon(1e-12));
  CHECK(std::abs(L.value.imag()) < 1e-15);
  CHECK(L.err_estimate < 1e-12);
}

TEST_CASE("twisted central values against the classical series") {
  const auto &f = twist::test::level11(2'000'000);
  for (auto [p, h] : std::vector<std::pair<i64, int>>{{3, 2}, {3, 3}, {5, 2}, {7, 2}}) {
    auto T = build_character_table(p, h);
    for (const auto &chi : wild_characters(T)) {
      auto L = lvalue_single(f, chi);
      auto oracle = classical_twist(f, &chi);
      REQUIRE(std::abs(L.value - oracle) < 1e-10);
      auto w = root_number(f, chi);
      CHECK(std::abs(std::abs(w) - 1) < 1e-12);
    }
  }
}

TEST_CASE("split parameter does not change the value") {
  const auto &f = twist::test::level11(2'000'000);
  auto chi = wild_characters(build_character_table(3, 4))[0];
  auto a = lvalue_single(f, chi, 1.0);
  for (double X : {0.6, 1.7, 3.0}) {
    auto b = lvalue_single(f, chi, X);
    CHECK(std::abs(a.value - b.value) < 1e-10);
  }
  const auto &d = twist::test::delta(1'000'000);
  auto chid = wild_characters(build_character_table(5, 2))[1];
  auto u = lvalue_single(d, chid, 1.0), v = lvalue_single(d, chid, 1.4);
  CHECK(std::abs(u.value - v.value) < 1e-10);
}

TEST_CASE("extended precision agrees with double") {
  const auto &f = twist::test::level11(2'000'000);
  auto chi = wild_characters(build_character_table(3, 3))[2];
  auto d = lvalue_single_t<double>(f, &chi);
  auto r = lvalue_single_t<Real50>(f, &chi);
  std::complex<double> rd(static_cast<double>(r.value.real()),
                          static_cast<double>(r.value.imag()));
  CHECK(std::abs(rd - d.value) < 1e-12);
  CHECK(static_cast<double>(r.err_estimate) < 1e-30);
  auto longer = lvalue_single_t<Real50>(f, &chi, 1.0, 1.5);
  CHECK(static_cast<double>(abs(longer.value.real() - r.value.real())) < 1e-30);
}

TEST_CASE("short tables are reported with the required length") {
  auto f = twist::test::level11(2'000'000).truncated(500);
  auto chi = wild_characters(build_character_table(3, 5))[0];
  i64 need = lvalue_required_terms(f, 243);
  CHECK(need > 500);
  try {
    lvalue_single(f, chi);
    FAIL("expected length_error");
  } catch (const std::length_error &e) {
    CHECK(std::string(e.what()).find("need N >= " + std::to_string(need)) != std::string::npos);
  }
}

TEST_CASE("orbit evaluation matches character-by-character evaluation") {
  const auto &f = twist::test::level11(2'000'000);
  auto chi = wild_characters(build_character_table(3, 4))[0];
  std::vector<i64> exps{1, 2, 4, 5, 7, 8};
  auto batch = orbit_lvalues(f, chi, exps);
  REQUIRE(batch.size() == exps.size());
  for (std::size_t i = 0; i < exps.size(); ++i) {
    auto one = lvalue_single(f, chi.pow(exps[i]));
    CHECK(std::abs(batch[i].value - one.value) < 1e-11);
  }
}

TEST_CASE("product approximate functional equation") {
  const auto &f = twist::test::level11(2'000'000);
  const auto &d = twist::test::delta(1'000'000);
  for (int h : {2, 3}) {
    for (const auto &chi : wild_characters(build_character_table(3, h))) {
      auto pp = lvalue_pair_product(f, f, chi);
      double ref = std::norm(lvalue_single(f, chi).value);
      CHECK(std::abs(pp.value - ref) <= 1e-6 * ref);
    }
  }
  auto chi = wild_characters(build_character_table(3, 2))[0];
  auto mixed = lvalue_pair_product(f, d, chi);
  auto ref = lvalue_single(f, chi).value * std::conj(lvalue_single(d, chi).value);
  CHECK(std::abs(mixed.value - ref) <= 1e-6 * std::abs(ref));
}

TEST_CASE("product weight") {
  auto g = gamma_spec(twist::test::level11(2'000'000));
  AfeWeight W(g, g);
  // Residue 1 at u = 0, then a double pole at u = -1: 1 - W(y) = O(y log(1/y)).
  for (double y : {1e-6, 1e-8, 1e-10}) {
    CHECK(1 - W(y) > 0);
    CHECK(1 - W(y) < 200 * y * std::log(1 / y));
  }
  for (double y : {0.01, 0.3, 1.0, 2.5, 10.0})
    CHECK(W(y) == doctest::Approx(W.direct(y)).epsilon(1e-8).scale(1e-12));
  double prev = 2;
  for (double y = 0.05; y < 20; y *= 1.5) {
    CHECK(W(y) < prev);
    prev = W(y);
  }
  CHECK(std::abs(W(8.0)) <= W.tail_bound(8.0));
}

TEST_CASE("Voronoi summation") {
  const auto &d = twist::test::delta(1'000'000);
  auto v = voronoi_check(d.truncated(20'000), 1, 5, 50, bump_window());
  CHECK(v.discrepancy <= 1e-6);
  CHECK(std::abs(v.lhs) > 1e-3);
  const auto &f = twist::test::level11(2'000'000);
  auto w = voronoi_check(f.truncated(200'000), 2, 7, 40, bump_window());
  CHECK(w.discrepancy <= 1e-6);
  CHECK_THROWS_AS(voronoi_check(f, 1, 11, 40, bump_window()), std::domain_error);
}

}
