#include <cmath>
#include <array>
#include <functional>

#include <boost/math/constants/constants.hpp>

#include "cli.hpp"
#include "twist/lattice.hpp"
#include "twist/moments.hpp"
#include "twist/rankin.hpp"
#include "twist/recognize.hpp"

namespace twist::cli {

namespace {

struct Check {
  std::string name;
  bool passed = false;
  json value;
  json tolerance;
};

Check galois_average_check() {
  struct Config {
    i64 p;
    int h;
    GaloisAverageContext ctx;
  };
  std::vector<Config> configs = {
      {3, 3, GaloisAverageContext::rational(3)},
      {3, 4, GaloisAverageContext::rational(3)},
      {5, 3, GaloisAverageContext::rational(5)},
      {7, 2, GaloisAverageContext::rational(7)},
      {3, 4, GaloisAverageContext::cyclotomic(3, 2)},
  };
  i64 mismatches = 0, compared = 0;
  for (const auto &c : configs) {
    auto chi = wild_characters(build_character_table(c.p, c.h))[0];
    for (i64 n = 1; n <= 1000; ++n) {
      if (n % c.p == 0)
        continue;
      ++compared;
      if (!(galois_average(chi, n, c.ctx) == galois_average_brute(chi, n, c.ctx)))
        ++mismatches;
    }
  }
  return {"characters.galois_average_vs_brute", mismatches == 0,
          exact({{"compared", compared}, {"mismatches", mismatches}}), exact(0)};
}

Check orth_trace_check() {
  const i64 p = 3;
  i64 failures = 0, cases = 0;
  for (int h = 2; h <= 4; ++h) {
    i64 M = ipow(p, h - 1);
    for (int r = 1; r <= h - 1; ++r) {
      i64 pr = ipow(p, r);
      for (i64 k = 0; k < M; ++k) {
        auto x = CyclotomicElement::root(M, k);
        auto tr = subfield_trace(x, p, r).reduced();
        bool in_L = (k * pr) % M == 0;
        auto expect = in_L ? (x * (M / pr)).reduced() : CyclotomicElement(M);
        ++cases;
        if (!(tr == expect))
          ++failures;
      }
    }
  }
  return {"characters.subfield_trace_orthogonality", failures == 0,
          exact({{"cases", cases}, {"failures", failures}}), exact(0)};
}

Check gauss_norm_check() {
  double worst = 0;
  for (auto [p, h] : std::vector<std::pair<i64, int>>{{3, 3}, {3, 4}, {5, 3}}) {
    auto T = build_character_table(p, h);
    for (const auto &chi : wild_characters(T))
      worst = std::max(worst, std::abs(std::norm(gauss_sum<double>(chi)) /
                                           static_cast<double>(T->q()) -
                                       1));
  }
  return {"characters.gauss_sum_modulus", worst <= 1e-12, measured(worst, 1e-15),
          exact(1e-12)};
}

Check point_count_check(const NewformTable &f) {
  i64 bad = 0, compared = 0;
  for (int ell : primes_up_to(2000)) {
    if (ell == 11)
      continue;
    ++compared;
    if (f.a(ell) != elliptic_ap(kCurve11a, ell))
      ++bad;
  }
  return {"newforms.eta_vs_point_count", bad == 0,
          exact({{"primes", compared}, {"mismatches", bad}}), exact(0)};
}

Check coefficient_invariants_check(const NewformTable &f, const NewformTable &d) {
  i64 m1 = f.first_multiplicativity_violation(f.size());
  i64 d1 = f.first_deligne_violation();
  i64 m2 = d.first_multiplicativity_violation(d.size());
  i64 d2 = d.first_deligne_violation();
  return {"newforms.multiplicativity_and_deligne", !m1 && !d1 && !m2 && !d2,
          exact({{"level11_N", f.size()},
                 {"delta_N", d.size()},
                 {"first_violation", {m1, d1, m2, d2}}}),
          exact(0)};
}

Check a_closed_check(const NewformTable &f, const NewformTable &d) {
  double worst = 0;
  std::vector<std::pair<const NewformTable *, const NewformTable *>> pairs = {
      {&f, &f}, {&d, &d}, {&d, &f}};
  for (auto [a, b] : pairs)
    for (i64 l : {1, 2, 4, 7, 13, 14, 26})
      for (double s : {1.0, 1.2, 1.5}) {
        auto c = A_l_closed(*a, *b, l, s), r = A_l_brute(*a, *b, l, s);
        worst = std::max(worst, std::abs(c - r) / std::max(1e-300, std::abs(r)));
      }
  for (double lam : {2.0, -2.0})
    for (int t : {0, 1, 2, 5}) {
      auto c = A_prime_power_closed(lam, 0.7, 13, t, 1.0).value;
      auto r = A_prime_power_brute(lam, 0.7, 13, t, 1.0);
      worst = std::max(worst, std::abs(c - r) / std::max(1e-300, std::abs(r)));
    }
  return {"rankin.A_closed_vs_brute", worst <= 1e-10, measured(worst, 1e-16),
          exact(1e-10)};
}

Check central_value_check(const NewformTable &f) {
  auto L = lvalue_trivial(f);
  double v = L.value.real();
  return {"lfun.central_value_level11", std::abs(v - 0.2538) <= 1e-3,
          measured(v, L.err_estimate), exact({{"target", 0.2538}, {"abs", 1e-3}})};
}

Check product_afe_check(const NewformTable &f) {
  double worst = 0;
  for (int h : {2, 3}) {
    auto T = build_character_table(3, h);
    for (const auto &chi : wild_characters(T)) {
      auto s = lvalue_single(f, chi);
      auto pp = lvalue_pair_product(f, f, chi);
      double ref = std::norm(s.value);
      worst = std::max(worst, std::abs(pp.value - ref) / ref);
    }
  }
  return {"lfun.product_vs_single_afe", worst <= 1e-6, measured(worst, 1e-12),
          exact(1e-6)};
}

Check voronoi_check_delta(const NewformTable &d) {
  auto v = voronoi_check(d, 1, 5, 50, bump_window());
  return {"lfun.voronoi_delta_q5", v.discrepancy <= 1e-6,
          measured(v.discrepancy, 1e-12), exact(1e-6)};
}

Check xi_decomposition_check() {
  auto a = xi_decomposition(3, 3, 1);
  auto b = xi_decomposition(5, 3, 1);
  bool ok = a.verified && b.verified && a.classes.size() == 6 && b.classes.size() == 20;
  return {"moments.xi_decomposition", ok,
          exact({{"p3_classes", a.classes.size()}, {"p5_classes", b.classes.size()}}),
          exact({{"p3_classes", 6}, {"p5_classes", 20}})};
}

Check lattice_shortest_check() {
  i64 mismatches = 0, cases = 0;
  auto T625 = build_character_table(5, 4);
  auto T343 = build_character_table(7, 3);
  i64 xi4 = T625->power(T625->phi() / 4);
  i64 xi3 = T343->power(T343->phi() / 3);
  std::vector<std::array<i64, 4>> specs = {{25, 1, 1, 7},     {27, 1, 2, 26},
                                           {625, 1, 1, xi4},  {625, 2, 3, xi4},
                                           {343, 1, 1, xi3}, {343, 4, 5, xi3}};
  for (auto [q, l1, l2, xi] : specs) {
    auto L = CongruenceLattice::make(q, l1, l2, xi);
    auto g = gauss_reduce(L);
    auto v = shortest_vector_exhaustive(L, g.s * (1 + 1e-9));
    ++cases;
    if (v.norm2() != g.s2 || !g.bound_holds)
      ++mismatches;
  }
  return {"lattice.gauss_vs_exhaustive", mismatches == 0,
          exact({{"cases", cases}, {"mismatches", mismatches}}), exact(0)};
}

Check weil_check() {
  auto w = weil_check_exhaustive(125);
  return {"lattice.weil_bound", w.holds && w.max_ratio <= 1 + 1e-9,
          measured(w.max_ratio, 1e-9), exact(1.0)};
}

Check box_check(std::uint64_t seed) {
  auto L = CongruenceLattice::make(27, 1, 1, 1);
  auto bs = box_samples(L, 200, seed);
  return {"lattice.box_count_envelope", bs.max_ratio <= 10,
          measured(bs.max_ratio, 1e-12), exact(10)};
}

Check recognition_check() {
  const Real100 two_pi = boost::math::constants::two_pi<Real100>();
  auto s2 = recognize_algebraic(sqrt(Real100(2)), 2, 100);
  auto gr = recognize_algebraic((1 + sqrt(Real100(5))) / 2, 2, 100);
  auto cy = recognize_real_cyclotomic(2 * cos(two_pi / 9) + 1, 9, 2);
  auto pi = recognize_real_cyclotomic(boost::math::constants::pi<Real100>(), 9, 1000);
  auto half = rationality_check({Real100("0.5000000001"), Real100(0)}, 1000);
  auto r2 = rationality_check({sqrt(Real100(2)), Real100(0)}, 1000000);
  bool ok = s2.recognized() && s2.polynomial_string() == "x^2 - 2" &&
            gr.recognized() && gr.polynomial_string() == "x^2 - x - 1" &&
            cy.recognized() && !pi.recognized() && half.recognized() &&
            half.value.to_string() == "1/2" && !r2.recognized();
  return {"recognize.known_constants", ok,
          exact({{"sqrt2", s2.polynomial_string()},
                 {"golden", gr.polynomial_string()},
                 {"cyclotomic_9", cy.recognized() ? cy.candidate_string() : ""},
                 {"pi_rejected", !pi.recognized()},
                 {"half", half.recognized() ? half.value.to_string() : ""},
                 {"sqrt2_rational_rejected", !r2.recognized()}}),
          exact("x^2 - 2, x^2 - x - 1, 1/2")};
}

} // namespace

json run_selftest(const RunConfig &cfg, FormProvider &forms) {
  NewformTable f = forms.get("level11", 1'300'000);
  NewformTable d = forms.get("delta", 100'000);
  std::vector<std::pair<std::string, std::function<Check()>>> suite = {
      {"characters.galois_average_vs_brute", galois_average_check},
      {"characters.subfield_trace_orthogonality", orth_trace_check},
      {"characters.gauss_sum_modulus", gauss_norm_check},
      {"newforms.eta_vs_point_count", [&] { return point_count_check(f); }},
      {"newforms.multiplicativity_and_deligne",
       [&] { return coefficient_invariants_check(f, d); }},
      {"rankin.A_closed_vs_brute", [&] { return a_closed_check(f, d); }},
      {"lfun.central_value_level11", [&] { return central_value_check(f); }},
      {"lfun.product_vs_single_afe", [&] { return product_afe_check(f); }},
      {"lfun.voronoi_delta_q5", [&] { return voronoi_check_delta(d.truncated(20'000)); }},
      {"moments.xi_decomposition", xi_decomposition_check},
      {"lattice.gauss_vs_exhaustive", lattice_shortest_check},
      {"lattice.weil_bound", weil_check},
      {"lattice.box_count_envelope", [&] { return box_check(cfg.seed); }},
      {"recognize.known_constants", recognition_check},
  };
  json r;
  r["command"] = "selftest";
  r["schema"] = 1;
  r["config"] = {{"seed", cfg.seed},
                 {"format", cfg.format == Format::csv ? "csv" : "json"}};
  r["rows"] = json::array();
  i64 failed = 0;
  for (const auto &[name, run] : suite) {
    Check c;
    try {
      c = run();
    } catch (const std::exception &e) {
      c.name = name;
      c.passed = false;
      c.value = {{"error", e.what()}};
    }
    if (!c.passed)
      ++failed;
    r["rows"].push_back({{"name", c.name},
                         {"passed", c.passed},
                         {"value", c.value},
                         {"tolerance", c.tolerance}});
  }
  r["summary"] = {{"checks", exact(static_cast<i64>(suite.size()))},
                  {"failed", exact(failed)},
                  {"passed", failed == 0}};
  return r;
}

} // namespace twist::cli
