#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "twist/rankin.hpp"

using namespace twist;

namespace {

// lambda(ell^k) from the roots of X^2 - lambda X + 1.
double power_lambda(double lam, int k) {
  std::vector<double> v{1.0, lam};
  for (int j = 2; j <= k; ++j)
    v.push_back(lam * v[static_cast<std::size_t>(j - 1)] - v[static_cast<std::size_t>(j - 2)]);
  return v[static_cast<std::size_t>(k)];
}

cplx series_A(double lf, double lg, i64 ell, int t, cplx s, int terms = 200) {
  cplx acc = 0;
  for (int r = 0; r < terms; ++r)
    acc += power_lambda(lf, t + r) * power_lambda(lg, r) *
           std::exp(-s * (r * std::log(static_cast<double>(ell))));
  return acc;
}

} // namespace

TEST_SUITE("rankin") {

TEST_CASE("prime-power A factors against the defining series") {
  for (double lf : {0.3, -1.1, 1.9, 2.0, -2.0})
    for (double lg : {0.7, -0.4, 2.0})
      for (i64 ell : {2, 13})
        for (int t : {0, 1, 2, 4})
          for (double s : {1.0, 1.25, 1.5}) {
            auto c = A_prime_power_closed(lf, lg, ell, t, s);
            auto ref = series_A(lf, lg, ell, t, s);
            CHECK(std::abs(c.value - ref) <= 1e-10 * std::max(1.0, std::abs(ref)));
            CHECK((c.branch == LocalBranch::degenerate) == (std::abs(lf) == 2.0));
          }
}

TEST_CASE("A_l is multiplicative over prime powers") {
  const auto &f = twist::test::level11();
  const auto &d = twist::test::delta();
  for (i64 l : {1, 2, 4, 13, 26, 52, 91}) {
    std::vector<LocalFactorValue> parts;
    auto v = A_l_closed(f, d, l, 1.2, &parts);
    cplx prod = 1.0;
    for (auto &p : parts)
      prod *= series_A(f.lambda(p.ell), d.lambda(p.ell), p.ell, p.t, 1.2);
    CHECK(std::abs(v - prod) <= 1e-10 * std::abs(prod));
    CHECK(std::abs(v - A_l_brute(f, d, l, 1.2)) <= 1e-10 * std::abs(prod));
  }
  CHECK_THROWS_AS(A_l_closed(f, f, 22, 1.0), std::domain_error);
}

TEST_CASE("local Rankin-Selberg factor") {
  for (double lf : {0.5, -1.3})
    for (double lg : {1.1, -0.2})
      for (double s : {1.0, 1.5, 2.0}) {
        i64 ell = 7;
        cplx sum = 0;
        for (int r = 0; r < 80; ++r)
          sum += power_lambda(lf, r) * power_lambda(lg, r) * std::pow(7.0, -r * s);
        // sum_r lambda_f(ell^r) lambda_g(ell^r) X^r = L_ell(f x g) / zeta_ell(2s)
        auto ref = sum * local_zeta(ell, 2.0 * s);
        CHECK(std::abs(local_rs_factor(lf, lg, ell, s) - ref) < 1e-12);
      }
}

TEST_CASE("assembled D matches the direct Dirichlet series") {
  const auto &f = twist::test::level11();
  double N = static_cast<double>(f.size());
  auto a = D_assembled(f, f, 3, 1, 1, 1.5, N / 60);
  auto b = D_direct(f, f, 3, 1, 1, 1.5, N / 60);
  CHECK(std::abs(a - b) <= 1e-6 * std::abs(b));
  auto c = D_assembled(f, f, 3, 2, 1, 1.5, N / 120);
  auto e = D_direct(f, f, 3, 2, 1, 1.5, N / 120);
  CHECK(std::abs(c - e) <= 1e-6 * std::abs(e));
  CHECK_THROWS_AS(D_direct(f, f, 3, 13, 1, 1.5, N / 60), std::length_error);
}

TEST_CASE("symmetric square residue") {
  const auto &f = twist::test::level11();
  auto r = sym2_residue(f);
  CHECK(r.value == doctest::Approx(0.969497714745584).epsilon(1e-9));
  CHECK(r.rel_spread < 1e-4);
  double slope_route = sym2_residue_slope(f, static_cast<double>(f.size()) / 120);
  CHECK(std::abs(slope_route / r.value - 1) < 2e-3);
}

TEST_CASE("main term") {
  const auto &f = twist::test::level11();
  MainTermSpec spec{&f, &f, 3, 2, 1, 1};
  auto mt = main_term(spec, 0.969497714745584);
  CHECK(mt.same_form);
  CHECK(mt.slope() == doctest::Approx(0.9823065599656412).epsilon(1e-9));
  auto doubled = main_term(spec, 2 * 0.969497714745584);
  CHECK(doubled.slope() == doctest::Approx(2 * mt.slope()).epsilon(1e-12));
  MainTermSpec bad{&f, &f, 11, 2, 1, 1};
  CHECK_THROWS_AS(main_term(bad, 1.0), std::domain_error);
}

}
