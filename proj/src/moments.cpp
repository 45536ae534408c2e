#include "twist/moments.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>

namespace twist {

namespace {

std::shared_ptr<const CharacterTable> table_for(i64 p, int h) {
  if (!is_prime(p) || p == 2)
    throw std::domain_error("moments: p must be an odd prime");
  if (h < 2)
    throw std::domain_error("moments: h must be >= 2");
  return build_character_table(p, h);
}

// First wild primitive character: chi(g^k) = e(k/p^{h-1}).
DirichletCharacter wild_representative(i64 p, int h) {
  return DirichletCharacter(table_for(p, h), p - 1);
}

bool same_form(const NewformTable &f, const NewformTable &g) {
  return &f == &g || (f.label() == g.label() && f.level() == g.level() &&
                      f.two_kappa() == g.two_kappa() && f.size() == g.size());
}

double weight_scale(const NewformTable &f, const NewformTable &g, i64 Q) {
  double qq = static_cast<double>(Q);
  return qq * qq * std::sqrt(static_cast<double>(f.level()) * g.level());
}

// Smallest y (on a 2% grid) past which |W| stays under `level` up to 2y.
double weight_support(const AfeWeight &w, double level) {
  double y = 1.0;
  while (std::abs(w(y)) > level || std::abs(w(2 * y)) > level)
    y *= 1.02;
  return y;
}

i64 wild_order(const DirichletCharacter &chi, i64 n) {
  i64 k = chi.wild_exponent(n);
  i64 M = chi.modulus() / chi.table().p();
  return M / gcd(k, M);
}

} // namespace

Regression fit_line(const std::vector<double> &x, const std::vector<double> &y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_line: need at least two points");
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd A(n, 2);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    A(i, 0) = x[static_cast<std::size_t>(i)];
    A(i, 1) = 1.0;
    b(i) = y[static_cast<std::size_t>(i)];
  }
  Eigen::Vector2d c = A.colPivHouseholderQr().solve(b);
  Regression r;
  r.slope = c(0);
  r.intercept = c(1);
  r.x = x;
  r.y = y;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double res = y[i] - (r.slope * x[i] + r.intercept);
    r.residuals.push_back(res);
    r.max_abs_residual = std::max(r.max_abs_residual, std::abs(res));
  }
  return r;
}

double main_term_at_one(const NewformTable &f, const NewformTable &g) {
  if (same_form(f, g))
    return sym2_residue(f).value;
  double X = static_cast<double>(std::min(f.size(), g.size())) / 60.0;
  return rs_partial(f, g, 1.0, X, SmoothKernel::sharp).value.real();
}

MomentReport orbit_moment(const NewformTable &f, const NewformTable &g, i64 p,
                          int h, i64 l1, i64 l2,
                          const GaloisAverageContext &F0, double at_one) {
  MainTermSpec spec{&f, &g, p, h, l1, l2};
  spec.validate();
  if (F0.p != p)
    throw std::invalid_argument("orbit_moment: base field prime mismatch");
  auto chi = wild_representative(p, h);
  i64 q = chi.modulus();
  auto exps = F0.fixing_group(h - 1);
  auto Lf = orbit_lvalues(f, chi, exps);
  auto Lg = same_form(f, g) ? Lf : orbit_lvalues(g, chi, exps);
  i64 w = mod(l1 * invmod(mod(l2, q), q), q);

  CompensatedSum<std::complex<double>> S;
  double err = 0;
  for (std::size_t i = 0; i < exps.size(); ++i) {
    auto c = chi.pow(exps[i]);
    S.add(Lf[i].value * std::conj(Lg[i].value) * c.evaluate(w));
    err += std::abs(Lf[i].value) * Lg[i].err_estimate +
           std::abs(Lg[i].value) * Lf[i].err_estimate +
           Lf[i].err_estimate * Lg[i].err_estimate;
  }
  double scale = std::sqrt(static_cast<double>(l1 * l2)) /
                 static_cast<double>(exps.size());

  MomentReport r;
  r.p = p;
  r.h = h;
  r.q = q;
  r.l1 = l1;
  r.l2 = l2;
  r.orbit_size = static_cast<i64>(exps.size());
  r.empirical = scale * S.value();
  r.err_estimate = scale * err;
  auto mt = main_term(spec, at_one);
  double logq = std::log(static_cast<double>(q));
  r.mt_slope = mt.slope();
  r.mt = mt.value(logq);
  r.mt_constant_fitted = !mt.same_form;
  r.discrepancy = std::abs(r.empirical.real() - r.mt);
  r.components = mt.components;
  r.components["log q"] = logq;
  return r;
}

MomentSeries moment_series(const NewformTable &f, const NewformTable &g, i64 p,
                           const std::vector<int> &hs, i64 l1, i64 l2,
                           const GaloisAverageContext &F0, double at_one) {
  if (hs.size() < 2)
    throw std::invalid_argument("moment_series: need at least two h values");
  MomentSeries s;
  std::vector<double> x, y;
  for (int h : hs) {
    s.reports.push_back(orbit_moment(f, g, p, h, l1, l2, F0, at_one));
    x.push_back(std::log(static_cast<double>(s.reports.back().q)));
    y.push_back(s.reports.back().empirical.real());
  }
  s.regression = fit_line(x, y);
  s.mt_slope = s.reports.front().mt_slope;
  bool same = same_form(f, g);
  if (same) {
    // FITTED: least-squares constant with the slope held at its MT value.
    double c = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
      c += y[i] - s.mt_slope * x[i];
    s.fitted_constant = c / static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      auto &rep = s.reports[i];
      rep.mt = s.mt_slope * x[i] + s.fitted_constant;
      rep.mt_constant_fitted = true;
      rep.discrepancy = std::abs(rep.empirical.real() - rep.mt);
    }
  }
  s.slope_rel_error = s.mt_slope != 0
                          ? std::abs(s.regression.slope - s.mt_slope) /
                                std::abs(s.mt_slope)
                          : std::numeric_limits<double>::infinity();
  s.residual_ratio = s.regression.max_abs_residual / std::abs(y.back());
  return s;
}

PeriodProxy period_proxy(const NewformTable &f) {
  auto L = lvalue_trivial(f);
  double v = L.value.real();
  if (std::abs(v) < 10 * L.err_estimate || v == 0)
    throw std::domain_error(
        "period_proxy: reference L-value below 10x its error estimate");
  PeriodProxy P;
  P.omega = v * v;
  P.err_estimate = 2 * std::abs(v) * L.err_estimate + L.err_estimate * L.err_estimate;
  P.definition = "|G(chi_ref) L(1/2, f x chi_ref)|^2, chi_ref trivial mod 1";
  return P;
}

TraceReport trace_sum(const NewformTable &f, const GaloisAverageContext &F0,
                      double c, i64 p, int h, i64 ell, int t,
                      const PeriodProxy &omega, double at_one) {
  const int TF = 4; // 2 max(2, [F:Q]) for rational f
  if (ell != 1) {
    if (!in_lf_prime_set(f, p, ell))
      throw std::domain_error("trace_sum: ell = " + std::to_string(ell) +
                              " is not in the prime set L_f");
    if (t < 1 || t > TF)
      throw std::domain_error("trace_sum: t = " + std::to_string(t) +
                              " outside [1, " + std::to_string(TF) + "]");
  }
  if (F0.p != p)
    throw std::invalid_argument("trace_sum: base field prime mismatch");
  if (omega.omega <= 0)
    throw std::domain_error("trace_sum: period proxy must be positive");
  auto chi = wild_representative(p, h);
  i64 q = chi.modulus();
  i64 lt = ell == 1 ? 1 : ipow(ell, t);
  auto exps = F0.fixing_group(h - 1);
  auto L = orbit_lvalues(f, chi, exps);
  double norm = c * static_cast<double>(q) / omega.omega;

  CompensatedSum<std::complex<double>> S;
  double err = 0, mag = 0;
  for (std::size_t i = 0; i < exps.size(); ++i) {
    double a2 = std::norm(L[i].value);
    auto w = chi.pow(exps[i]).evaluate(mod(lt, q));
    S.add(norm * a2 * w);
    mag += std::abs(norm) * a2;
    err += std::abs(norm) * (2 * std::abs(L[i].value) * L[i].err_estimate +
                             L[i].err_estimate * L[i].err_estimate);
  }
  double scale = std::sqrt(static_cast<double>(lt)) /
                 static_cast<double>(exps.size());
  TraceReport r;
  r.p = p;
  r.h = h;
  r.ell = ell;
  r.t = t;
  r.orbit_size = static_cast<i64>(exps.size());
  r.value = scale * S.value();
  r.err_estimate = scale * (err + mag * omega.err_estimate / omega.omega);
  r.chi_ell_t = chi.evaluate(mod(lt, q));
  r.chi_ell_t_order = wild_order(chi, lt);
  MainTermSpec spec{&f, &f, p, h, lt, 1};
  auto mt = main_term(spec, at_one);
  r.prediction = norm * mt.slope() * std::log(static_cast<double>(q));
  return r;
}

// ------------------------------------------------------- congruence sums

void CongruenceSumSpec::validate() const {
  auto fac = factorize(q);
  if (q < 3 || fac.size() != 1 || fac[0].first == 2)
    throw std::domain_error("CongruenceSumSpec: q must be a power of an odd prime");
  i64 p = fac[0].first;
  if (l1 < 1 || l2 < 1 || gcd(l1 * l2, p) != 1)
    throw std::domain_error("CongruenceSumSpec: need (l1 l2, p) = 1");
  if (gcd(xi, q) != 1)
    throw std::domain_error("CongruenceSumSpec: xi must be a unit mod q");
  if (powmod(mod(xi, q), static_cast<u64>(p - 1), q) != 1)
    throw std::domain_error("CongruenceSumSpec: xi^(p-1) != 1 mod q");
  if (d < 1 || (p - 1) % d || multiplicative_order(mod(xi, q), q) != d)
    throw std::domain_error("CongruenceSumSpec: d is not the order of xi");
  if (weight_modulus < 0)
    throw std::domain_error("CongruenceSumSpec: negative weight modulus");
}

CongruenceSumSpec make_congruence_spec(i64 q, i64 l1, i64 l2, i64 xi,
                                       i64 weight_modulus) {
  CongruenceSumSpec s;
  s.q = q;
  s.l1 = l1;
  s.l2 = l2;
  s.xi = mod(xi, q);
  s.d = multiplicative_order(s.xi, q);
  s.weight_modulus = weight_modulus;
  s.validate();
  return s;
}

CongruenceSumResult congruence_sum(const CongruenceSumSpec &spec,
                                   const NewformTable &f, const NewformTable &g,
                                   const CongruenceSumOptions &opt) {
  spec.validate();
  std::optional<AfeWeight> own;
  const AfeWeight *weight = opt.weight;
  if (!weight) {
    own.emplace(gamma_spec(f), gamma_spec(g));
    weight = &*own;
  }
  const i64 q = spec.q;
  const i64 p = factorize(q)[0].first;
  const double Z =
      weight_scale(f, g, spec.weight_modulus ? spec.weight_modulus : q);
  i64 avail = std::min(f.size(), g.size());
  i64 Kmin = static_cast<i64>(std::ceil(weight_support(*weight, 1e-7) * Z));
  CongruenceSumResult r;
  i64 K;
  if (Kmin > avail) {
    if (!opt.allow_truncation)
      throw std::length_error("insufficient coefficients: need N >= " +
                              std::to_string(Kmin) + ", tables have " +
                              std::to_string(avail));
    K = avail;
    r.truncated = true;
  } else {
    K = std::min(
        avail, static_cast<i64>(std::ceil(weight_support(*weight, 1e-12) * Z)));
  }
  const i64 Khalf = K / 2;
  // n = c m mod q with c = conj(xi) conj(l2) l1.
  const i64 c = mulmod(mulmod(invmod(spec.xi, q), invmod(mod(spec.l2, q), q), q),
                       mod(spec.l1, q), q);
  const double logZ = std::log(Z);

  const std::size_t block = 256;
  std::size_t nblocks = (static_cast<std::size_t>(K) + block - 1) / block;
  struct Part {
    double s = 0, sh = 0, diag = 0, mag = 0;
    i64 terms = 0;
  };
  std::vector<Part> parts(nblocks);
  parallel_for(
      nblocks,
      [&](std::size_t bi) {
        CompensatedSum<double> acc, acc_h, diag;
        double mag = 0;
        i64 terms = 0;
        i64 m0 = static_cast<i64>(bi * block) + 1;
        i64 m1 = std::min<i64>(K, m0 + static_cast<i64>(block) - 1);
        for (i64 m = m0; m <= m1; ++m) {
          if (m % p == 0)
            continue;
          double am = f.lambda(m);
          if (am == 0)
            continue;
          double lm = std::log(static_cast<double>(m));
          i64 top = K / m, top_h = Khalf / m;
          i64 n0 = mulmod(c, m % q, q);
          for (i64 n = n0; n <= top; n += q) {
            double bn = g.lambda(n);
            if (bn == 0)
              continue;
            double ln = std::log(static_cast<double>(n));
            double v = am * bn * std::exp(-0.5 * (lm + ln)) *
                       weight->at_log(lm + ln - logZ);
            ++terms;
            mag += std::abs(v);
            if (spec.l1 * m == spec.l2 * n) {
              diag.add(v);
              if (opt.exclude_diagonal)
                continue;
            }
            acc.add(v);
            if (n <= top_h)
              acc_h.add(v);
          }
        }
        parts[bi] = {acc.value(), acc_h.value(), diag.value(), mag, terms};
      },
      0, 1);
  CompensatedSum<double> S, Sh, D;
  double mag = 0;
  for (const auto &pt : parts) {
    S.add(pt.s);
    Sh.add(pt.sh);
    D.add(pt.diag);
    mag += pt.mag;
    r.terms += pt.terms;
  }
  r.value = S.value();
  r.diagonal = D.value();
  r.support = K;
  r.err_estimate = 2 * std::abs(S.value() - Sh.value()) + 1e-15 * mag + 1e-13;
  return r;
}

double diagonal_sum(const NewformTable &f, const NewformTable &g, i64 p, int h,
                    i64 l1, i64 l2, const AfeWeight *weight) {
  std::optional<AfeWeight> own;
  if (!weight) {
    own.emplace(gamma_spec(f), gamma_spec(g));
    weight = &*own;
  }
  const double Z = weight_scale(f, g, ipow(p, h));
  const double y = weight_support(*weight, 1e-12);
  // l1 l2 n^2 <= y Z.
  i64 top = static_cast<i64>(std::sqrt(y * Z / static_cast<double>(l1 * l2))) + 1;
  i64 need = top * std::max(l1, l2);
  if (need > std::min(f.size(), g.size()))
    throw std::length_error("insufficient coefficients: need N >= " +
                            std::to_string(need));
  CompensatedSum<double> S;
  for (i64 n = 1; n <= top; ++n) {
    if (n % p == 0)
      continue;
    double v = f.lambda(l2 * n) * g.lambda(l1 * n) / static_cast<double>(n);
    if (v == 0)
      continue;
    S.add(v * (*weight)(static_cast<double>(l1 * l2) * n * n / Z));
  }
  return S.value();
}

XiDecomposition xi_decomposition(i64 p, int h, int h0) {
  if (!is_prime(p) || p == 2)
    throw std::domain_error("xi_decomposition: p must be an odd prime");
  if (h0 < 0 || h <= h0)
    throw std::domain_error("xi_decomposition: need h > h0 >= 0");
  i64 q = ipow(p, h);
  i64 step = ipow(p, h - h0);
  i64 top = ipow(p, h0);
  XiDecomposition D;
  D.p = p;
  D.h = h;
  D.h0 = h0;
  std::vector<int> hits(static_cast<std::size_t>(q), 0);
  for (i64 x = 1; x < p; ++x) {
    i64 xi = powmod(x, static_cast<u64>(ipow(p, h - 1)), q);
    for (i64 a = 0; a < top; ++a) {
      i64 u = mulmod(xi, mod(1 + a * step, q), q);
      D.classes.push_back({xi, a, u});
      ++hits[static_cast<std::size_t>(u)];
    }
  }
  bool ok = true;
  for (i64 u = 1; u < q && ok; ++u) {
    if (u % p == 0)
      continue;
    auto [tm, pu] = teichmuller_decompose(u, p, h);
    (void)tm;
    bool principal = mod(pu - 1, step) == 0;
    ok = hits[static_cast<std::size_t>(u)] == (principal ? 1 : 0);
  }
  for (const auto &cl : D.classes)
    ok = ok && powmod(cl.xi, static_cast<u64>(p - 1), q) == 1;
  D.verified = ok;
  return D;
}

RouteComparison moment_by_congruence_route(const NewformTable &f,
                                           const NewformTable &g, i64 p, int h,
                                           i64 l1, i64 l2,
                                           const GaloisAverageContext &F0) {
  MainTermSpec spec{&f, &g, p, h, l1, l2};
  spec.validate();
  if (f.level() != g.level() || f.eps() * g.eps() != 1)
    throw std::domain_error(
        "moment_by_congruence_route: need equal levels and eps(f) eps(g) = 1");
  auto chi = wild_representative(p, h);
  const i64 q = chi.modulus();
  AfeWeight weight(gamma_spec(f), gamma_spec(g));
  const double Z = weight_scale(f, g, q);
  i64 avail = std::min(f.size(), g.size());
  i64 Kmin = static_cast<i64>(std::ceil(weight_support(weight, 1e-7) * Z));
  if (Kmin > avail)
    throw std::length_error("insufficient coefficients: need N >= " +
                            std::to_string(Kmin) + ", tables have " +
                            std::to_string(avail));
  const i64 K = std::min(
      avail, static_cast<i64>(std::ceil(weight_support(weight, 1e-12) * Z)));
  const i64 Khalf = K / 2;
  std::vector<i64> inv(static_cast<std::size_t>(q), 0);
  for (i64 x = 1; x < q; ++x)
    if (x % p)
      inv[static_cast<std::size_t>(x)] = invmod(x, q);
  const double logZ = std::log(Z);

  // S(u) = sum over m conj(n) = u of lambda_f(m) lambda_g(n)/sqrt(mn) W(mn/Z).
  const std::size_t block = 256;
  std::size_t nblocks = (static_cast<std::size_t>(K) + block - 1) / block;
  std::vector<std::vector<double>> bins(nblocks), bins_h(nblocks);
  std::vector<i64> counts(nblocks, 0);
  parallel_for(
      nblocks,
      [&](std::size_t bi) {
        std::vector<double> b(static_cast<std::size_t>(q), 0.0), bh = b;
        i64 cnt = 0;
        i64 m0 = static_cast<i64>(bi * block) + 1;
        i64 m1 = std::min<i64>(K, m0 + static_cast<i64>(block) - 1);
        for (i64 m = m0; m <= m1; ++m) {
          if (m % p == 0 || f.lambda(m) == 0)
            continue;
          double lm = std::log(static_cast<double>(m));
          double am = f.lambda(m) * std::exp(-0.5 * lm);
          i64 top = K / m, top_h = Khalf / m;
          for (i64 n = 1; n <= top; ++n) {
            if (n % p == 0 || g.lambda(n) == 0)
              continue;
            double ln = std::log(static_cast<double>(n));
            double v = am * g.lambda(n) * std::exp(-0.5 * ln) *
                       weight.at_log(lm + ln - logZ);
            auto u = static_cast<std::size_t>(
                mulmod(m % q, inv[static_cast<std::size_t>(n % q)], q));
            b[u] += v;
            if (n <= top_h)
              bh[u] += v;
            ++cnt;
          }
        }
        bins[bi] = std::move(b);
        bins_h[bi] = std::move(bh);
        counts[bi] = cnt;
      },
      0, 1);
  std::vector<CompensatedSum<double>> S(static_cast<std::size_t>(q)),
      Sh(static_cast<std::size_t>(q));
  RouteComparison r;
  for (std::size_t bi = 0; bi < nblocks; ++bi) {
    for (i64 u = 0; u < q; ++u) {
      S[static_cast<std::size_t>(u)].add(bins[bi][static_cast<std::size_t>(u)]);
      Sh[static_cast<std::size_t>(u)].add(bins_h[bi][static_cast<std::size_t>(u)]);
    }
    r.terms += counts[bi];
  }
  // Average of chi^s(l1 conj(l2) v) over the orbit, exact then embedded.
  i64 w = mod(l1 * invmod(mod(l2, q), q), q);
  CompensatedSum<std::complex<double>> M, Mh;
  for (i64 u = 1; u < q; ++u) {
    if (u % p == 0)
      continue;
    auto a1 = galois_average(chi, mulmod(w, u, q), F0).embed();
    auto a2 = galois_average(chi, mulmod(w, inv[static_cast<std::size_t>(u)], q), F0)
                  .embed();
    M.add(S[static_cast<std::size_t>(u)].value() * (a1 + a2));
    Mh.add(Sh[static_cast<std::size_t>(u)].value() * (a1 + a2));
  }
  double scale = std::sqrt(static_cast<double>(l1 * l2));
  r.congruence_route = scale * M.value();
  double route_err = scale * (2 * std::abs(M.value() - Mh.value()) +
                              static_cast<double>(r.terms) * 1e-16 + 1e-13);
  double at_one = 1.0; // main term is not needed for the comparison
  auto direct = orbit_moment(f, g, p, h, l1, l2, F0, at_one);
  r.direct = direct.empirical;
  r.err_estimate = route_err + direct.err_estimate;
  r.discrepancy = std::abs(r.direct - r.congruence_route);
  return r;
}

} // namespace twist
