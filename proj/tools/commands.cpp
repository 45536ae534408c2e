#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>

#include <boost/math/constants/constants.hpp>

#include "cli.hpp"
#include "twist/lattice.hpp"
#include "twist/moments.hpp"
#include "twist/recognize.hpp"

namespace twist::cli {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr i64 kMaxCoefficients = 40'000'000;

json rounded(double v) { return measured(v, std::abs(v) * 4 * kEps); }

json base_report(const std::string &command, const RunConfig &cfg, json config) {
  json r;
  r["command"] = command;
  r["schema"] = 1;
  config["format"] = cfg.format == Format::csv ? "csv" : "json";
  r["config"] = std::move(config);
  r["rows"] = json::array();
  r["summary"] = json::object();
  return r;
}

void check_prime(i64 p) {
  if (p < 3 || !is_prime(p))
    throw FlagError("--p", "must be an odd prime, got " + std::to_string(p));
}

void check_modulus(i64 p, int h) {
  double q = std::pow(static_cast<double>(p), h);
  if (q > 2e7)
    throw FlagError("--h", "p^h = " + std::to_string(p) + "^" + std::to_string(h) +
                               " exceeds the supported modulus 2e7");
}

void check_l(const char *flag, i64 l, i64 p) {
  if (l < 1)
    throw FlagError(flag, "must be positive");
  if (l % p == 0)
    throw FlagError(flag, "must be coprime to p");
}

// Runs fn(f, g), growing the coefficient tables when the library reports
// that more terms are needed.
template <typename Fn>
json with_forms(const RunConfig &cfg, FormProvider &forms, i64 N0, bool two,
                Fn fn) {
  i64 N = cfg.coeffs ? cfg.coeffs : N0;
  for (int attempt = 0;; ++attempt) {
    NewformTable f = forms.get(cfg.form, N);
    NewformTable g = two && !cfg.form2.empty() ? forms.get(cfg.form2, N) : f;
    try {
      json r = fn(f, g);
      r["config"]["coeffs"] = N;
      return r;
    } catch (const std::length_error &e) {
      auto k = required_terms(e.what());
      if (!k || *k <= N || attempt >= 4)
        throw;
      if (*k > kMaxCoefficients)
        throw ContractFailure(std::string(e.what()) +
                              "; beyond the table limit of 4e7 coefficients");
      N = (*k + 99'999) / 100'000 * 100'000;
      std::clog << "growing coefficient table to N = " << N << "\n";
    }
  }
}

bool same_form(const NewformTable &f, const NewformTable &g) {
  return f.label() == g.label() && f.level() == g.level() &&
         f.two_kappa() == g.two_kappa();
}

struct AtOne {
  double value = 0;
  double err = 0;
  std::string definition;
};

AtOne at_one_value(const NewformTable &f, const NewformTable &g) {
  AtOne a;
  if (same_form(f, g)) {
    auto r = sym2_residue(f);
    a.value = r.value;
    a.err = r.rel_spread * std::abs(r.value);
    a.definition = "L(1, sym^2 f), extrapolated smoothed series";
  } else {
    double X = static_cast<double>(std::min(f.size(), g.size())) / 60.0;
    auto r = rs_partial(f, g, 1.0, X, SmoothKernel::sharp);
    a.value = r.value.real();
    a.err = std::abs(r.delta);
    a.definition = "L(1, f x g), sharp-kernel smoothed series";
  }
  return a;
}

json regression_json(const Regression &reg) {
  std::size_t n = reg.x.size();
  double slope_err = std::numeric_limits<double>::quiet_NaN();
  double icept_err = slope_err;
  if (n > 2) {
    double mx = 0, sxx = 0, ssr = 0;
    for (double x : reg.x)
      mx += x / static_cast<double>(n);
    for (double x : reg.x)
      sxx += (x - mx) * (x - mx);
    for (double r : reg.residuals)
      ssr += r * r;
    double s2 = ssr / static_cast<double>(n - 2);
    slope_err = std::sqrt(s2 / sxx);
    double xx = 0;
    for (double x : reg.x)
      xx += x * x;
    icept_err = std::sqrt(s2 * xx / (static_cast<double>(n) * sxx));
  }
  json res = json::array();
  for (double r : reg.residuals)
    res.push_back(r);
  return {{"slope", measured(reg.slope, slope_err)},
          {"intercept", measured(reg.intercept, icept_err)},
          {"residuals", res},
          {"max_abs_residual", rounded(reg.max_abs_residual)}};
}

GaloisAverageContext base_field(i64 p) { return GaloisAverageContext::rational(p); }

i64 teichmuller_generator(i64 p, int h, i64 d) {
  if (d < 1 || (p - 1) % d != 0)
    throw FlagError("--xi-order", "must divide p - 1 = " + std::to_string(p - 1));
  auto T = build_character_table(p, h);
  return T->power(T->phi() / d);
}

json recognition_json(const RecognitionResult &r) {
  return {{"recognized", r.recognized()},
          {"candidate", r.recognized() && r.polynomial.empty() ? r.candidate_string() : ""},
          {"polynomial", r.polynomial.empty() ? "" : r.polynomial_string()},
          {"height", exact(r.height.str())},
          {"height_bound", exact(r.height_bound.str())},
          {"residual", rounded(r.residual)},
          {"tolerance", exact(r.tolerance)},
          {"digits", exact(r.digits)},
          {"stable", r.stable},
          {"note", r.note}};
}

json rationality_json(const RationalityResult &r) {
  return {{"recognized", r.recognized()},
          {"value", r.recognized() ? r.value.to_string() : ""},
          {"residual", rounded(r.residual)},
          {"tolerance", exact(r.tolerance)},
          {"stable", r.stable},
          {"note", r.note}};
}

} // namespace

json run_characters(const RunConfig &cfg, bool list_wild) {
  check_prime(cfg.p);
  if (cfg.hs.size() != 1)
    throw FlagError("--h", "characters takes a single h");
  int h = cfg.hs[0];
  check_modulus(cfg.p, h);
  auto T = build_character_table(cfg.p, h);
  auto wild = wild_characters(T);
  json r = base_report("characters", cfg,
                       {{"p", cfg.p}, {"h", h}, {"list_wild", list_wild}});
  auto &s = r["summary"];
  s["q"] = exact(T->q());
  s["phi"] = exact(T->phi());
  s["primitive_root"] = exact(T->g());
  s["wild_count"] = exact(static_cast<i64>(wild.size()));
  s["orbit_size"] = exact(wild.empty() ? 0 : static_cast<i64>(galois_orbit(wild[0]).size()));
  if (list_wild) {
    json idx = json::array();
    for (const auto &chi : wild) {
      idx.push_back(chi.index());
      double g2 = std::norm(gauss_sum<double>(chi)) / static_cast<double>(T->q());
      r["rows"].push_back(
          {{"index", exact(chi.index())},
           {"order", exact(chi.order())},
           {"conductor", exact(chi.conductor())},
           {"parity", chi.is_even() ? "even" : "odd"},
           {"gauss_norm_over_q",
            measured(g2, 8 * kEps * static_cast<double>(T->q()))}});
    }
    s["wild_indices"] = exact(idx);
  }
  return r;
}

json run_lvalue(const RunConfig &cfg, FormProvider &forms, bool all, int digits) {
  if (digits != 16 && digits != 50 && digits != 100)
    throw FlagError("--digits", "must be 16, 50 or 100");
  if (!(cfg.cutoff_scale >= 1 && cfg.cutoff_scale <= 8))
    throw FlagError("--cutoff-scale", "must lie in [1, 8]");
  if (!cfg.hs.empty()) {
    check_prime(cfg.p);
    for (int h : cfg.hs)
      check_modulus(cfg.p, h);
  }
  json config = {{"form", cfg.form},     {"p", cfg.p},
                 {"h", cfg.hs},          {"all", all},
                 {"digits", digits},     {"cutoff_scale", cfg.cutoff_scale}};
  return with_forms(cfg, forms, 100'000, false, [&](const NewformTable &f,
                                                    const NewformTable &) {
    json r = base_report("lvalue", cfg, config);
    auto row = [&](int h, i64 q, i64 index, const DirichletCharacter *chi) {
      json j = {{"h", exact(h)}, {"q", exact(q)}, {"index", exact(index)}};
      auto fill = [&](auto v) {
        j["value"] = measured(std::complex<double>(static_cast<double>(v.value.real()),
                                                   static_cast<double>(v.value.imag())),
                              static_cast<double>(v.err_estimate));
        if (digits > 16)
          j["value_digits"] = {{"re", v.value.real().str(digits - 5)},
                               {"im", v.value.imag().str(digits - 5)}};
        auto eps = std::complex<double>(static_cast<double>(v.root_number.real()),
                                        static_cast<double>(v.root_number.imag()));
        j["root_number"] = measured(eps, std::abs(std::abs(eps) - 1) +
                                             8 * kEps * static_cast<double>(q));
        j["terms"] = exact(v.terms_used);
      };
      if (digits == 16) {
        auto v = lvalue_single_t<double>(f, chi, 1.0, cfg.cutoff_scale);
        j["value"] = measured(v.value, v.err_estimate);
        j["root_number"] = measured(v.root_number, std::abs(std::abs(v.root_number) - 1) +
                                                       8 * kEps * static_cast<double>(q));
        j["terms"] = exact(v.terms_used);
      } else if (digits == 50) {
        fill(lvalue_single_t<Real50>(f, chi, 1.0, cfg.cutoff_scale));
      } else {
        fill(lvalue_single_t<Real100>(f, chi, 1.0, cfg.cutoff_scale));
      }
      r["rows"].push_back(std::move(j));
    };
    if (cfg.hs.empty()) {
      row(0, 1, 0, nullptr);
      return r;
    }
    for (int h : cfg.hs) {
      auto T = build_character_table(cfg.p, h);
      auto wild = wild_characters(T);
      std::size_t count = all ? wild.size() : 1;
      for (std::size_t i = 0; i < count; ++i)
        row(h, T->q(), wild[i].index(), &wild[i]);
    }
    return r;
  });
}

json run_moment(const RunConfig &cfg, FormProvider &forms) {
  check_prime(cfg.p);
  check_l("--l1", cfg.l1, cfg.p);
  check_l("--l2", cfg.l2, cfg.p);
  if (gcd(cfg.l1, cfg.l2) != 1)
    throw FlagError("--l2", "need gcd(l1, l2) = 1");
  for (int h : cfg.hs)
    check_modulus(cfg.p, h);
  json config = {{"form", cfg.form}, {"form2", cfg.form2.empty() ? cfg.form : cfg.form2},
                 {"p", cfg.p},       {"h", cfg.hs},
                 {"l1", cfg.l1},     {"l2", cfg.l2}};
  return with_forms(cfg, forms, 2'000'000, true, [&](const NewformTable &f,
                                                     const NewformTable &g) {
    json r = base_report("moment", cfg, config);
    auto F0 = base_field(cfg.p);
    AtOne a = at_one_value(f, g);
    double rel = a.err / std::abs(a.value);
    std::vector<MomentReport> reports;
    MomentSeries series;
    if (cfg.hs.size() >= 2) {
      series = moment_series(f, g, cfg.p, cfg.hs, cfg.l1, cfg.l2, F0, a.value);
      reports = series.reports;
    } else {
      reports.push_back(orbit_moment(f, g, cfg.p, cfg.hs[0], cfg.l1, cfg.l2, F0, a.value));
    }
    for (const auto &m : reports) {
      json comps = json::object();
      for (const auto &[k, v] : m.components)
        comps[k] = measured(v, std::abs(v) * rel);
      r["rows"].push_back({{"h", exact(m.h)},
                           {"q", exact(m.q)},
                           {"log_q", rounded(std::log(static_cast<double>(m.q)))},
                           {"orbit_size", exact(m.orbit_size)},
                           {"empirical", measured(m.empirical, m.err_estimate)},
                           {"mt", measured(m.mt, std::abs(m.mt) * rel)},
                           {"mt_constant_fitted", m.mt_constant_fitted},
                           {"discrepancy", measured(m.discrepancy, m.err_estimate +
                                                                       std::abs(m.mt) * rel)},
                           {"components", comps}});
    }
    auto &s = r["summary"];
    s["same_form"] = same_form(f, g);
    s["at_one"] = measured(a.value, a.err);
    s["at_one_definition"] = a.definition;
    if (cfg.hs.size() >= 2) {
      s["regression"] = regression_json(series.regression);
      s["mt_slope"] = measured(series.mt_slope, std::abs(series.mt_slope) * rel);
      double ss = 0;
      for (double res : series.regression.residuals)
        ss += res * res;
      double n = static_cast<double>(series.regression.residuals.size());
      s["fitted_constant"] = measured(series.fitted_constant, std::sqrt(ss / n) / std::sqrt(n));
      s["slope_rel_error"] = rounded(series.slope_rel_error);
      s["residual_ratio"] = rounded(series.residual_ratio);
    }
    if (!same_form(f, g))
      s["note"] = "f != g: boundedness diagnostics only, the error term dominates at desk scale";
    return r;
  });
}

json run_trace(const RunConfig &cfg, FormProvider &forms, double c) {
  check_prime(cfg.p);
  for (int h : cfg.hs)
    check_modulus(cfg.p, h);
  if (cfg.ell != 1 && !is_prime(cfg.ell))
    throw FlagError("--ell", "must be a prime or 1");
  if (cfg.t < 1)
    throw FlagError("--t", "must be positive");
  if (!(c > 0) || !std::isfinite(c))
    throw FlagError("--c", "must be a positive number");
  json config = {{"form", cfg.form}, {"p", cfg.p}, {"h", cfg.hs},
                 {"ell", cfg.ell},   {"t", cfg.t}, {"c", c}};
  return with_forms(cfg, forms, 2'000'000, false, [&](const NewformTable &f,
                                                      const NewformTable &) {
    json r = base_report("trace", cfg, config);
    auto F0 = base_field(cfg.p);
    AtOne a = at_one_value(f, f);
    PeriodProxy omega;
    try {
      omega = period_proxy(f);
    } catch (const std::domain_error &e) {
      throw ContractFailure(e.what());
    }
    bool real = true, nonzero = true, monotone = true;
    double prev = -std::numeric_limits<double>::infinity();
    for (int h : cfg.hs) {
      auto t = trace_sum(f, F0, c, cfg.p, h, cfg.ell, cfg.t, omega, a.value);
      double re = t.value.real();
      bool is_real = std::abs(t.value.imag()) <= 1e-6 * std::max(1.0, std::abs(re));
      bool is_nonzero = std::abs(t.value) > 5 * t.err_estimate;
      real = real && is_real;
      nonzero = nonzero && is_nonzero;
      monotone = monotone && re > prev;
      prev = re;
      r["rows"].push_back(
          {{"h", exact(h)},
           {"q", exact(ipow(cfg.p, h))},
           {"orbit_size", exact(t.orbit_size)},
           {"value", measured(t.value, t.err_estimate)},
           {"prediction", measured(t.prediction, std::abs(t.prediction) *
                                                     (a.err / a.value + omega.err_estimate / omega.omega))},
           {"chi_ell_t_order", exact(t.chi_ell_t_order)},
           {"real", is_real},
           {"nonzero_at_5x", is_nonzero}});
    }
    auto &s = r["summary"];
    s["omega"] = measured(omega.omega, omega.err_estimate);
    s["omega_definition"] = omega.definition;
    s["at_one"] = measured(a.value, a.err);
    s["all_real"] = real;
    s["all_nonzero"] = nonzero;
    s["monotone_in_log_q"] = monotone;
    return r;
  });
}

json run_errorterm(const RunConfig &cfg, FormProvider &forms, std::optional<i64> xi,
                   std::optional<i64> xi_order, bool keep_diagonal,
                   bool allow_truncation) {
  check_prime(cfg.p);
  check_l("--l1", cfg.l1, cfg.p);
  check_l("--l2", cfg.l2, cfg.p);
  if (gcd(cfg.l1, cfg.l2) != 1)
    throw FlagError("--l2", "need gcd(l1, l2) = 1");
  for (int h : cfg.hs)
    check_modulus(cfg.p, h);
  if (xi && xi_order)
    throw FlagError("--xi", "give either --xi or --xi-order, not both");
  if (xi_order)
    teichmuller_generator(cfg.p, 2, *xi_order);
  json config = {{"form", cfg.form},
                 {"form2", cfg.form2.empty() ? cfg.form : cfg.form2},
                 {"p", cfg.p},
                 {"h", cfg.hs},
                 {"l1", cfg.l1},
                 {"l2", cfg.l2},
                 {"xi", xi ? json(*xi) : json(nullptr)},
                 {"xi_order", xi_order ? json(*xi_order) : json(nullptr)},
                 {"keep_diagonal", keep_diagonal},
                 {"allow_truncation", allow_truncation}};
  return with_forms(cfg, forms, 2'000'000, true, [&](const NewformTable &f,
                                                     const NewformTable &g) {
    json r = base_report("errorterm", cfg, config);
    AfeWeight W(gamma_spec(f), gamma_spec(g));
    for (int h : cfg.hs) {
      i64 q = ipow(cfg.p, h);
      std::vector<i64> xis;
      if (xi)
        xis.push_back(mod(*xi, q));
      else if (xi_order)
        xis.push_back(teichmuller_generator(cfg.p, h, *xi_order));
      else
        xis = {1, q - 1};
      double D = diagonal_sum(f, g, cfg.p, h, cfg.l1, cfg.l2, &W);
      double D_err = 1e-10 * std::max(1.0, std::abs(D));
      for (i64 x : xis) {
        CongruenceSumSpec spec;
        try {
          spec = make_congruence_spec(q, cfg.l1, cfg.l2, x);
        } catch (const std::domain_error &e) {
          throw FlagError(xi ? "--xi" : "--xi-order", e.what());
        }
        CongruenceSumOptions opt;
        opt.exclude_diagonal = !keep_diagonal;
        opt.allow_truncation = allow_truncation;
        opt.weight = &W;
        auto c = congruence_sum(spec, f, g, opt);
        double ratio = std::abs(c.value) / std::abs(D);
        r["rows"].push_back(
            {{"h", exact(h)},
             {"q", exact(q)},
             {"xi", exact(spec.xi)},
             {"d", exact(spec.d)},
             {"value", measured(c.value, c.err_estimate)},
             {"support", exact(c.support)},
             {"terms", exact(c.terms)},
             {"truncated", c.truncated},
             {"excluded_diagonal", measured(c.diagonal, 1e-12 * std::max(1.0, std::abs(c.diagonal)))},
             {"reference_diagonal", measured(D, D_err)},
             {"ratio", measured(ratio, c.err_estimate / std::abs(D) + ratio * D_err / std::abs(D))}});
      }
    }
    r["summary"]["reference"] =
        "ratio = |ET| / sum_{(n,p)=1} lambda_f(l2 n) lambda_g(l1 n)/n W(l1 l2 n^2/Z)";
    return r;
  });
}

json run_lattice(const RunConfig &cfg, const LatticeFlags &lf) {
  if (lf.q < 2)
    throw FlagError("--q", "must be at least 2");
  if (lf.q > 1'000'000'000)
    throw FlagError("--q", "must be at most 1e9");
  if (cfg.l1 < 1 || gcd(cfg.l1, lf.q) != 1)
    throw FlagError("--l1", "must be positive and coprime to q");
  if (cfg.l2 < 1 || gcd(cfg.l2, lf.q) != 1)
    throw FlagError("--l2", "must be positive and coprime to q");
  if (gcd(lf.xi, lf.q) != 1)
    throw FlagError("--xi", "must be coprime to q");
  if (lf.samples < 0 || lf.samples > 100000)
    throw FlagError("--samples", "must lie in [0, 100000]");
  if (!(lf.max_side >= 1 && lf.max_side <= 1e6))
    throw FlagError("--max-side", "must lie in [1, 1e6]");
  if (lf.weil_max < 0 || lf.weil_max > 2000)
    throw FlagError("--weil-max", "must lie in [0, 2000]");
  json config = {{"q", lf.q},           {"l1", cfg.l1},
                 {"l2", cfg.l2},        {"xi", lf.xi},
                 {"samples", lf.samples}, {"seed", cfg.seed},
                 {"max_side", lf.max_side}, {"ball_T", lf.ball_T},
                 {"sieve_M", lf.sieve_M}, {"sieve_N", lf.sieve_N},
                 {"sieve_max_product", lf.sieve_max_product},
                 {"weil_max", lf.weil_max}};
  json r = base_report("lattice", cfg, config);
  auto L = CongruenceLattice::make(lf.q, cfg.l1, cfg.l2, lf.xi);
  auto g = gauss_reduce(L);
  auto bs = box_samples(L, lf.samples, cfg.seed, lf.max_side);
  for (const auto &b : bs.samples)
    r["rows"].push_back({{"M", rounded(b.M)},
                         {"N", rounded(b.N)},
                         {"count", exact(b.count)},
                         {"prediction", rounded(b.prediction)},
                         {"deviation", rounded(b.deviation)},
                         {"envelope", rounded(b.envelope)},
                         {"ratio", rounded(b.ratio)}});
  auto &s = r["summary"];
  s["reduced_basis"] = exact({{g.reduced.b1.x, g.reduced.b1.y},
                              {g.reduced.b2.x, g.reduced.b2.y}});
  s["shortest_length_squared"] = exact(i128_string(g.s2));
  s["shortest_length"] = rounded(g.s);
  s["covolume"] = exact(g.covolume);
  s["xi_order"] = exact(g.xi_order);
  s["xi_pm_one"] = g.xi_pm_one;
  s["lower_bound"] = rounded(g.lower_bound);
  s["bound_applies"] = g.bound_applies;
  s["bound_holds"] = g.bound_holds;
  if (g.bound_applies)
    s["small_vectors_in_box"] = exact(small_vectors_in_box(L, g.xi_order));
  s["box_max_ratio"] = rounded(bs.max_ratio);
  s["box_mean_ratio"] = rounded(bs.mean_ratio);
  auto ball = ball_count(L, lf.ball_T, g.s);
  s["ball"] = {{"T", exact(lf.ball_T)},
               {"count", exact(ball.count)},
               {"envelope", rounded(ball.envelope)},
               {"ratio", rounded(ball.ratio)}};
  auto sc = sieve_condition_check(L, lf.sieve_M, lf.sieve_N, lf.sieve_max_product);
  s["sieve"] = {{"X", rounded(sc.X)},
                {"Y", rounded(sc.Y)},
                {"rows", exact(static_cast<i64>(sc.rows.size()))},
                {"worst_constant", rounded(sc.worst_constant)},
                {"covolumes_ok", sc.covolumes_ok}};
  if (lf.weil_max > 0) {
    auto w = weil_check_exhaustive(lf.weil_max);
    s["weil"] = {{"moduli", exact(w.moduli)},
                 {"evaluations", exact(w.evaluations)},
                 {"max_ratio", measured(w.max_ratio, 1e-9)},
                 {"worst", exact({w.worst_m, w.worst_n, w.worst_r})},
                 {"holds", w.holds}};
  }
  return r;
}

json run_satotate(const RunConfig &cfg, FormProvider &forms, i64 z) {
  if (z < 100 || z > kMaxCoefficients)
    throw FlagError("--z", "must lie in [100, 4e7]");
  json config = {{"form", cfg.form}, {"z", z}};
  RunConfig c2 = cfg;
  c2.coeffs = z;
  return with_forms(c2, forms, z, false, [&](const NewformTable &f,
                                              const NewformTable &) {
    json r = base_report("satotate", cfg, config);
    auto st = satotate_sum(f, z);
    const double target = 8.0 / (3.0 * boost::math::constants::pi<double>());
    double mean_err = 4 * kEps * static_cast<double>(st.count) * st.mean;
    r["rows"].push_back(
        {{"z", exact(z)},
         {"count", exact(st.count)},
         {"mean_abs_lambda", measured(st.mean, mean_err)},
         {"target", rounded(target)},
         {"rel_deviation", measured(std::abs(st.mean - target) / target, mean_err / target)},
         {"sum_over_ell", measured(st.sum, 4 * kEps * static_cast<double>(st.count) * st.sum)},
         {"loglog_offset", measured(st.loglog_offset,
                                    4 * kEps * static_cast<double>(st.count) * std::abs(st.sum))}});
    return r;
  });
}

json run_recognize(const RunConfig &cfg, FormProvider &forms, const RecognizeFlags &rf) {
  BigInt height;
  try {
    height = BigInt(rf.height);
  } catch (const std::exception &) {
    throw FlagError("--height", "expected a positive integer, got '" + rf.height + "'");
  }
  if (height < 1)
    throw FlagError("--height", "must be positive");
  if (!rf.value.empty()) {
    Real100 x;
    try {
      x = Real100(rf.value);
    } catch (const std::exception &) {
      throw FlagError("--value", "not a decimal number: '" + rf.value + "'");
    }
    int modes = (rf.m > 0) + (rf.degree > 0) + (rf.rational ? 1 : 0);
    if (modes != 1)
      throw FlagError("--value", "needs exactly one of --m, --degree, --rational");
    json config = {{"value", rf.value}, {"m", rf.m}, {"degree", rf.degree},
                   {"rational", rf.rational}, {"height", rf.height}};
    json r = base_report("recognize", cfg, config);
    // The doubled-precision pass must stay inside the digits supplied.
    int sig = 0;
    bool leading = true;
    for (char ch : rf.value) {
      if (ch == 'e' || ch == 'E')
        break;
      if (ch < '0' || ch > '9')
        continue;
      if (leading && ch == '0')
        continue;
      leading = false;
      ++sig;
    }
    RecognitionOptions opt;
    opt.digits = std::clamp(sig / 2, 8, 40);
    r["config"]["first_pass_digits"] = opt.digits;
    if (rf.rational) {
      r["rows"].push_back(rationality_json(rationality_check({x, Real100(0)}, height)));
    } else if (rf.degree > 0) {
      if (rf.degree > 11)
        throw FlagError("--degree", "must lie in [1, 11]");
      r["rows"].push_back(recognition_json(recognize_algebraic(x, rf.degree, height, opt)));
    } else {
      if (euler_phi(rf.m) / 2 > 12)
        throw FlagError("--m", "real cyclotomic degree above 12");
      r["rows"].push_back(recognition_json(recognize_real_cyclotomic(x, rf.m, height, std::nullopt, opt)));
    }
    return r;
  }
  check_prime(cfg.p);
  for (int h : cfg.hs)
    check_modulus(cfg.p, h);
  json config = {{"form", cfg.form}, {"p", cfg.p}, {"h", cfg.hs}, {"height", rf.height}};
  return with_forms(cfg, forms, 200'000, false, [&](const NewformTable &f,
                                                    const NewformTable &) {
    json r = base_report("recognize", cfg, config);
    bool all = true;
    for (int h : cfg.hs) {
      GenerationCertificate C;
      try {
        C = certify_generation(f, cfg.p, h, height);
      } catch (const std::domain_error &e) {
        throw FlagError("--form", e.what());
      }
      json ladder = json::array();
      for (const auto &st : C.ladder)
        ladder.push_back({{"precision", st.precision},
                          {"cutoff_scale", exact(st.cutoff_scale)},
                          {"value", st.value},
                          {"err", st.err_estimate}});
      r["rows"].push_back(
          {{"h", exact(h)},
           {"m", exact(C.m)},
           {"character_index", exact(C.character_index)},
           {"r", measured(static_cast<double>(C.r), C.ladder.empty() ? 0.0 : C.ladder.back().err_estimate)},
           {"r_digits", C.r.str(60)},
           {"ladder", ladder},
           {"field", recognition_json(C.field_recognition)},
           {"rational", rationality_json(C.rational_recognition)},
           {"rational_rejected", C.rational_rejected},
           {"conjugate_max_error", rounded(C.conjugate_max_error)},
           {"conjugates_match", C.conjugates_match},
           {"trace", rationality_json(C.trace_recognition)},
           {"trace_consistent", C.trace_consistent},
           {"passed", C.passed}});
      all = all && C.passed;
      r["summary"]["proxy_definition"] = C.proxy_definition;
    }
    r["summary"]["all_passed"] = all;
    return r;
  });
}

} // namespace twist::cli
