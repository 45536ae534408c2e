#include <doctest.h>

#include <boost/math/constants/constants.hpp>

#include "support.hpp"
#include "twist/recognize.hpp"

using namespace twist;

TEST_SUITE("recognize") {

TEST_CASE("LLL output is reduced and spans the same lattice") {
  IntMatrix<BigInt> B(3, 3);
  B << 1, 1, 1, -1, 0, 2, 3, 5, 6;
  LllStats stats;
  auto R = lll_reduce<BigInt>(B, 0.99, &stats);
  CHECK(is_lll_reduced<BigInt>(R, 0.99));
  CHECK_FALSE(is_lll_reduced<BigInt>(B, 0.99));
  // |det| is preserved: det B = 3.
  auto det = [](const IntMatrix<BigInt> &M) {
    return M(0, 0) * (M(1, 1) * M(2, 2) - M(1, 2) * M(2, 1)) -
           M(0, 1) * (M(1, 0) * M(2, 2) - M(1, 2) * M(2, 0)) +
           M(0, 2) * (M(1, 0) * M(2, 1) - M(1, 1) * M(2, 0));
  };
  BigInt d0 = det(B), d1 = det(R);
  CHECK(abs(d0) == abs(d1));
  auto gs = gram_schmidt_norms<BigInt>(R);
  RealGso prod = 1;
  for (const auto &g : gs)
    prod *= g;
  CHECK(abs(prod - RealGso(d0 * d0)) < RealGso(1e-30));
}

TEST_CASE("LLL on a knapsack-style relation lattice") {
  IntMatrix<i64> B(4, 5);
  const i64 S = 1'000'000;
  // 3 a0 + 5 a1 - 2 a2 - 7 a3 = 0 with a = (11, 13, 17, 19) scaled.
  i64 a[4] = {11 * S, 13 * S, 17 * S, 19 * S};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j)
      B(i, j) = i == j;
    B(i, 4) = a[i];
  }
  auto R = lll_reduce<i64>(B);
  CHECK(is_lll_reduced<i64>(R));
  bool found_relation = false;
  for (int i = 0; i < 4; ++i)
    if (R(i, 4) == 0) {
      i64 s = 0;
      for (int j = 0; j < 4; ++j)
        s += R(i, j) * a[j];
      CHECK(s == 0);
      found_relation = true;
    }
  CHECK(found_relation);
}

TEST_CASE("algebraic and cyclotomic recognition") {
  using boost::math::constants::pi;
  const Real100 two_pi = 2 * pi<Real100>();
  auto s2 = recognize_algebraic(sqrt(Real100(2)), 2, 100);
  REQUIRE(s2.recognized());
  CHECK(s2.polynomial_string() == "x^2 - 2");
  auto cube = recognize_algebraic(cbrt(Real100(3)) + 1, 3, 100);
  REQUIRE(cube.recognized());
  CHECK(cube.polynomial_string() == "x^3 - 3x^2 + 3x - 4");
  CHECK_FALSE(recognize_algebraic(pi<Real100>(), 3, 1000).recognized());

  Real100 c1 = 2 * cos(two_pi / 9), c2 = 2 * cos(2 * two_pi / 9);
  Real100 x = Real100(7) / 3 - c1 + Real100(5) / 2 * c2;
  auto r = recognize_real_cyclotomic(x, 9, 100);
  REQUIRE(r.recognized());
  CHECK(r.stable);
  for (i64 a : {1, 2, 4}) {
    Real100 conj = Real100(7) / 3 - 2 * cos(a * two_pi / 9) +
                   Real100(5) / 2 * 2 * cos(2 * a * two_pi / 9);
    CHECK(abs(evaluate_cyclotomic_candidate(r, 9, a) - conj) < Real100(1e-40));
  }
  CHECK_FALSE(recognize_real_cyclotomic(exp(Real100(1)), 9, 1000).recognized());
}

TEST_CASE("rational recognition") {
  auto h = rationality_check({Real100(355) / 113, Real100(0)}, 1000);
  REQUIRE(h.recognized());
  CHECK(h.value.to_string() == "355/113");
  CHECK(h.stable);
  auto neg = rationality_check({Real100(-7) / 4, Real100(0)}, 10);
  REQUIRE(neg.recognized());
  CHECK(neg.value == Rational{-7, 4});
  CHECK_FALSE(rationality_check({sqrt(Real100(2)), Real100(0)}, 1'000'000).recognized());
  CHECK_THROWS_AS(rationality_check({Real100(1) / 3, Real100("1e-3")}, 100), std::domain_error);
  // A recheck value that moves beyond its stated accuracy breaks stability.
  Recheck moved{Real100(1) / 3 + Real100("1e-6"), 1e-12};
  auto unstable = rationality_check({Real100(1) / 3, Real100(0)}, 100, moved);
  CHECK_FALSE((unstable.recognized() && unstable.stable));
}

TEST_CASE("generation certificates") {
  const auto &f = twist::test::level11();
  auto c2 = certify_generation(f, 3, 2);
  CHECK(c2.passed);
  CHECK(c2.rational_recognition.recognized());
  CHECK(c2.rational_recognition.value.to_string() == "625");
  auto c3 = certify_generation(f, 3, 3);
  CHECK(c3.passed);
  CHECK(c3.field_recognition.recognized());
  CHECK(c3.rational_rejected);
  CHECK(c3.conjugates_match);
  CHECK(c3.trace_consistent);
}

}
