#include <doctest.h>

#include <cmath>
#include <set>

#include "support.hpp"
#include "twist/moments.hpp"

using namespace twist;

namespace {

constexpr double kSym2 = 0.969497714745584;

double mean_square(const NewformTable &f, i64 p, int h) {
  auto wild = wild_characters(build_character_table(p, h));
  double s = 0;
  for (const auto &chi : wild)
    s += std::norm(lvalue_single(f, chi).value);
  return s / static_cast<double>(wild.size());
}

// Direct double loop over l1 m = xi l2 n mod q, mn <= K.
double brute_congruence(const NewformTable &f, i64 q, i64 l1, i64 l2, i64 xi, i64 K,
                        bool exclude_diagonal) {
  i64 p = factorize(q)[0].first;
  AfeWeight W(gamma_spec(f), gamma_spec(f));
  double Z = static_cast<double>(q) * q * static_cast<double>(f.level());
  double s = 0;
  for (i64 m = 1; m <= K; ++m) {
    if (m % p == 0)
      continue;
    for (i64 n = 1; m * n <= K; ++n) {
      if (n % p == 0 || mod(l1 * m - xi * l2 * n, q) != 0)
        continue;
      if (exclude_diagonal && l1 * m == l2 * n)
        continue;
      s += f.lambda(m) * f.lambda(n) / std::sqrt(static_cast<double>(m * n)) *
           W(static_cast<double>(m * n) / Z);
    }
  }
  return s;
}

} // namespace

TEST_SUITE("moments") {

TEST_CASE("least squares line") {
  auto r = fit_line({1, 2, 3, 4}, {3, 5, 7, 9});
  CHECK(r.slope == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(r.intercept == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r.max_abs_residual < 1e-12);
  auto n = fit_line({0, 1, 2}, {0, 1, 0});
  CHECK(n.slope == doctest::Approx(0.0).scale(1));
  CHECK(n.intercept == doctest::Approx(1.0 / 3));
  CHECK(n.max_abs_residual == doctest::Approx(2.0 / 3));
  CHECK_THROWS_AS(fit_line({1}, {1}), std::invalid_argument);
}

TEST_CASE("orbit moment equals the mean of |L|^2 over wild characters") {
  const auto &f = twist::test::level11();
  auto F0 = GaloisAverageContext::rational(3);
  for (int h : {2, 3}) {
    auto m = orbit_moment(f, f, 3, h, 1, 1, F0, kSym2);
    CHECK(m.orbit_size == euler_phi(ipow(3, h - 1)));
    CHECK(m.empirical.real() == doctest::Approx(mean_square(f, 3, h)).epsilon(1e-10));
    CHECK(std::abs(m.empirical.imag()) < 1e-10);
  }
  auto m2 = orbit_moment(f, f, 3, 2, 1, 1, F0, kSym2);
  CHECK(m2.empirical.real() == doctest::Approx(4.474700716860523).epsilon(1e-9));
  auto m3 = orbit_moment(f, f, 3, 3, 1, 1, F0, kSym2);
  CHECK(m3.empirical.real() == doctest::Approx(4.4747007168605215).epsilon(1e-9));
  CHECK(m3.mt_slope == doctest::Approx(0.9823065599656412).epsilon(1e-9));
}

TEST_CASE("congruence route reproduces the orbit moment") {
  const auto &f = twist::test::level11();
  auto F0 = GaloisAverageContext::rational(3);
  auto r = moment_by_congruence_route(f, f, 3, 2, 1, 1, F0);
  CHECK(r.discrepancy <= 1e-6 * std::abs(r.direct));
  CHECK(std::abs(r.direct - std::complex<double>(4.474700716860523, 0)) < 1e-8);
}

TEST_CASE("xi decomposition") {
  for (auto [p, h, count] : std::vector<std::tuple<i64, int, std::size_t>>{{3, 3, 6}, {5, 3, 20}}) {
    auto d = xi_decomposition(p, h, 1);
    CHECK(d.verified);
    REQUIRE(d.classes.size() == count);
    i64 q = ipow(p, h);
    std::set<i64> us;
    for (const auto &c : d.classes) {
      CHECK(powmod(c.xi, static_cast<u64>(p - 1), q) == 1);
      CHECK(c.u == mod(c.xi * (1 + c.a * ipow(p, h - 1)), q));
      us.insert(c.u);
    }
    CHECK(us.size() == count);
  }
}

TEST_CASE("congruence sums against a direct double loop") {
  const auto &f = twist::test::level11();
  SUBCASE("truncated table") {
    auto small = f.truncated(4000);
    auto spec = make_congruence_spec(27, 1, 1, 1);
    CHECK_THROWS_AS(congruence_sum(spec, small, small), std::length_error);
    CongruenceSumOptions opt;
    opt.allow_truncation = true;
    auto r = congruence_sum(spec, small, small, opt);
    CHECK(r.truncated);
    CHECK(r.support == 4000);
    double ref = brute_congruence(small, 27, 1, 1, 1, 4000, true);
    CHECK(r.value.real() == doctest::Approx(ref).epsilon(1e-10));
  }
  SUBCASE("full support, xi = -1, twisted") {
    auto spec = make_congruence_spec(9, 2, 1, 8);
    auto r = congruence_sum(spec, f, f);
    CHECK_FALSE(r.truncated);
    double ref = brute_congruence(f, 9, 2, 1, 8, r.support, true);
    CHECK(r.value.real() == doctest::Approx(ref).epsilon(1e-10));
  }
  SUBCASE("diagonal bookkeeping") {
    auto spec = make_congruence_spec(9, 1, 1, 1);
    CongruenceSumOptions keep;
    keep.exclude_diagonal = false;
    auto a = congruence_sum(spec, f, f);
    auto b = congruence_sum(spec, f, f, keep);
    CHECK(b.value.real() == doctest::Approx(a.value.real() + a.diagonal).epsilon(1e-12));
    CHECK(a.diagonal == doctest::Approx(diagonal_sum(f, f, 3, 2, 1, 1)).epsilon(1e-10));
  }
}

TEST_CASE("frozen off-diagonal values") {
  const auto &f = twist::test::level11();
  auto r = congruence_sum(make_congruence_spec(27, 1, 1, 1), f, f);
  CHECK(r.value.real() == doctest::Approx(0.3223185472386681).epsilon(1e-8));
  CHECK(diagonal_sum(f, f, 3, 3, 1, 1) == doctest::Approx(2.2567179586581205).epsilon(1e-10));
  CHECK_THROWS_AS(make_congruence_spec(27, 1, 1, 2), std::domain_error);
  CHECK_THROWS_AS(make_congruence_spec(27, 3, 1, 1), std::domain_error);
}

TEST_CASE("orbit traces") {
  const auto &f = twist::test::level11();
  auto F0 = GaloisAverageContext::rational(3);
  auto omega = period_proxy(f);
  CHECK(omega.omega == doctest::Approx(0.064435690323).epsilon(1e-9));
  auto t = trace_sum(f, F0, 1.0, 3, 3, 13, 1, omega, kSym2);
  CHECK(t.value.real() == doctest::Approx(-5633.673867912481).epsilon(1e-8));
  CHECK(std::abs(t.value.imag()) < 1e-6);
  // Unweighted trace: mean of q |L|^2 / Omega.
  auto u = trace_sum(f, F0, 1.0, 3, 2, 1, 1, omega, kSym2);
  CHECK(u.value.real() == doctest::Approx(9 * mean_square(f, 3, 2) / omega.omega).epsilon(1e-9));
}

}
