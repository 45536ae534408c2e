#include "twist/rankin.hpp"

#include <cmath>
#include <stdexcept>

#include "twist/special.hpp"

namespace twist {

namespace {

// Smallest prime factor sieve.
std::vector<std::int32_t> spf_table(i64 n) {
  std::vector<std::int32_t> spf(static_cast<std::size_t>(n) + 1, 0);
  for (i64 i = 2; i <= n; ++i) {
    if (spf[static_cast<std::size_t>(i)])
      continue;
    for (i64 j = i; j <= n; j += i)
      if (!spf[static_cast<std::size_t>(j)])
        spf[static_cast<std::size_t>(j)] = static_cast<std::int32_t>(i);
  }
  return spf;
}

// lambda(n^2) for n <= M by multiplicativity and the Hecke recursion.
std::vector<double> lambda_squares(const NewformTable &f, i64 M) {
  if (M > f.size())
    throw std::length_error("lambda_squares: table too short");
  auto spf = spf_table(M);
  std::vector<double> out(static_cast<std::size_t>(M) + 1, 0.0);
  out[1] = 1.0;
  for (i64 n = 2; n <= M; ++n) {
    i64 ell = spf[static_cast<std::size_t>(n)], m = n;
    int e = 0;
    while (m % ell == 0) {
      m /= ell;
      ++e;
    }
    out[static_cast<std::size_t>(n)] =
        out[static_cast<std::size_t>(m)] *
        hecke_value_primepower(f.lambda(ell), f.chi0(ell), 2 * e);
  }
  return out;
}

cplx zeta_c(cplx s) { return riemann_zeta(s); }

// Sharp kernel e^{-x} sum c_j x^j with Mellin transform
// Gamma(w)(1 + 2w)(1 + w)(1 + w/2)(1 + w/3).
constexpr double kSharp[5] = {1.0, 1.0, 1.0 / 2, 1.0 / 6, 1.0 / 3};

i64 support_for(double X, i64 N) {
  auto M = static_cast<i64>(std::ceil(60.0 * X - 1e-6));
  if (M > N)
    throw std::length_error("smoothed series: need N >= " + std::to_string(M));
  return M;
}

std::vector<i64> prime_divisors(i64 n) {
  std::vector<i64> out;
  for (auto [q, e] : factorize(n))
    out.push_back(q);
  return out;
}

} // namespace

double smooth_kernel(SmoothKernel k, double x) {
  if (k == SmoothKernel::exponential)
    return std::exp(-x);
  double p = 0;
  for (int j = 4; j >= 0; --j)
    p = p * x + kSharp[j];
  return std::exp(-x) * p;
}

RsPartial rs_partial(const NewformTable &f, const NewformTable &g, cplx s,
                     double X, SmoothKernel k) {
  if (s.real() < 1)
    throw std::domain_error("rs_partial: need Re s >= 1");
  i64 M = support_for(X, std::min(f.size(), g.size()));
  CompensatedSum<cplx> full, half;
  for (i64 n = 1; n <= M; ++n) {
    double c = f.lambda(n) * g.lambda(n);
    if (c == 0)
      continue;
    cplx ns = std::exp(-s * std::log(static_cast<double>(n)));
    full.add(c * ns * smooth_kernel(k, n / X));
    half.add(c * ns * smooth_kernel(k, 2.0 * n / X));
  }
  cplx z = zeta_c(2.0 * s);
  RsPartial r;
  r.value = z * full.value();
  r.delta = r.value - z * half.value();
  r.X = X;
  return r;
}

Sym2Residue sym2_residue(const NewformTable &f, std::vector<double> X) {
  if (X.empty()) {
    double N = static_cast<double>(f.size());
    X = {N / 240, N / 120, N / 60};
  }
  if (X.size() < 3)
    throw std::invalid_argument("sym2_residue: need three smoothing levels");
  double Xmax = *std::max_element(X.begin(), X.end());
  i64 M = support_for(Xmax, f.size());
  auto l2 = lambda_squares(f, M);
  const double z2 = M_PI * M_PI / 6;

  // At ell | R, lambda(ell^k) = lambda(ell)^k, so the local factors of
  // zeta(2s) sum lambda(n^2) n^-s and of L(s, f x f)/zeta(s) differ by
  // (1 - ell^-s).
  double correction = 1.0;
  for (i64 ell : prime_divisors(f.level()))
    correction *= 1.0 - 1.0 / static_cast<double>(ell);

  Sym2Residue r;
  r.X = X;
  for (double x : X) {
    i64 top = support_for(x, M);
    CompensatedSum<double> s;
    for (i64 n = 1; n <= top; ++n)
      s.add(l2[static_cast<std::size_t>(n)] / static_cast<double>(n) *
            std::exp(-n / x));
    r.raw.push_back(z2 * s.value() * correction);
  }
  // v(X) = L + c/X + ...: eliminate c between consecutive levels.
  for (std::size_t i = 0; i + 1 < X.size(); ++i) {
    double a = X[i], b = X[i + 1];
    r.extrapolants.push_back((b * r.raw[i + 1] - a * r.raw[i]) / (b - a));
  }
  r.value = r.extrapolants.back();
  double lo = *std::min_element(r.extrapolants.begin(), r.extrapolants.end());
  double hi = *std::max_element(r.extrapolants.begin(), r.extrapolants.end());
  r.rel_spread = (hi - lo) / std::abs(r.value);
  if (r.rel_spread > 1e-3)
    throw std::runtime_error("sym2_residue: extrapolation did not converge");
  if (!(r.value > 0))
    throw std::runtime_error("sym2_residue: non-positive value");
  return r;
}

double sym2_residue_slope(const NewformTable &f, double X) {
  i64 M = support_for(2 * X, f.size());
  CompensatedSum<double> d;
  for (i64 n = 1; n <= M; ++n) {
    double c = f.lambda(n) * f.lambda(n) / static_cast<double>(n);
    d.add(c * (std::exp(-n / (2 * X)) - std::exp(-n / X)));
  }
  return M_PI * M_PI / 6 * d.value() / std::log(2.0);
}

cplx local_zeta(i64 ell, cplx s) {
  return 1.0 / (1.0 - std::exp(-s * std::log(static_cast<double>(ell))));
}

cplx local_rs_factor(double lambda_f, double lambda_g, i64 ell, cplx s) {
  auto a = langlands_pair_from_lambda(lambda_f);
  auto b = langlands_pair_from_lambda(lambda_g);
  cplx x = std::exp(-s * std::log(static_cast<double>(ell)));
  cplx d = (1.0 - a.alpha * b.alpha * x) * (1.0 - a.alpha * b.beta * x) *
           (1.0 - a.beta * b.alpha * x) * (1.0 - a.beta * b.beta * x);
  return 1.0 / d;
}

LocalFactorValue A_prime_power_closed(double lambda_f, double lambda_g, i64 ell,
                                      int t, cplx s) {
  if (t < 0)
    throw std::invalid_argument("A_prime_power_closed: t must be >= 0");
  cplx x = std::exp(-s * std::log(static_cast<double>(ell)));
  cplx base = local_rs_factor(lambda_f, lambda_g, ell, s) /
              local_zeta(ell, 2.0 * s);
  cplx c = (lambda_f - lambda_g * x) / (1.0 - x * x);
  LocalFactorValue r;
  r.ell = ell;
  r.t = t;
  if (std::abs(lambda_f) == 2.0) {
    // Repeated root alpha = beta = lambda_f/2 = +-1.
    double alpha = lambda_f / 2;
    r.branch = LocalBranch::degenerate;
    r.value = base * std::pow(alpha, t) *
              (1.0 - static_cast<double>(t) + c * alpha * static_cast<double>(t));
    return r;
  }
  auto lp = langlands_pair_from_lambda(lambda_f);
  cplx al = lp.alpha, be = lp.beta;
  cplx a = (c - be) / (al - be), b = (al - c) / (al - be);
  r.branch = LocalBranch::generic;
  r.value = base * (a * std::pow(al, t) + b * std::pow(be, t));
  return r;
}

cplx A_prime_power_brute(double lambda_f, double lambda_g, i64 ell, int t,
                         cplx s, int r_max) {
  cplx x = std::exp(-s * std::log(static_cast<double>(ell)));
  CompensatedSum<cplx> acc;
  cplx pw = 1.0;
  for (int r = 0; r <= r_max; ++r) {
    acc.add(hecke_value_primepower(lambda_f, 1, t + r) *
            hecke_value_primepower(lambda_g, 1, r) * pw);
    pw *= x;
  }
  return acc.value();
}

namespace {

void check_local(const NewformTable &f, const NewformTable &g, i64 l) {
  if (l < 1)
    throw std::invalid_argument("A_l: l must be positive");
  if (gcd(l, f.level()) != 1 || gcd(l, g.level()) != 1)
    throw std::domain_error("A_l: l must be coprime to the levels");
}

} // namespace

cplx A_l_closed(const NewformTable &f, const NewformTable &g, i64 l, cplx s,
                std::vector<LocalFactorValue> *parts) {
  check_local(f, g, l);
  cplx v = 1.0;
  for (auto [ell, t] : factorize(l)) {
    auto part = A_prime_power_closed(f.lambda(ell), g.lambda(ell), ell, t, s);
    v *= part.value;
    if (parts)
      parts->push_back(part);
  }
  return v;
}

cplx A_l_brute(const NewformTable &f, const NewformTable &g, i64 l, cplx s,
               int r_max) {
  check_local(f, g, l);
  // sum over d | l^infty, d = prod ell_i^{r_i}, of lambda_f(ld) lambda_g(d) d^{-s},
  // enumerated as a full multi-index sum.
  auto fac = factorize(l);
  std::size_t k = fac.size();
  std::vector<int> r(k, 0);
  CompensatedSum<cplx> acc;
  for (;;) {
    cplx term = 1.0;
    for (std::size_t i = 0; i < k; ++i) {
      auto [ell, t] = fac[i];
      term *= hecke_value_primepower(f.lambda(ell), 1, t + r[i]) *
              hecke_value_primepower(g.lambda(ell), 1, r[i]) *
              std::exp(-s * (r[i] * std::log(static_cast<double>(ell))));
    }
    acc.add(term);
    std::size_t i = 0;
    while (i < k && ++r[i] > r_max)
      r[i++] = 0;
    if (i == k)
      break;
  }
  return acc.value();
}

cplx D_assembled(const NewformTable &f, const NewformTable &g, i64 p, i64 l1,
                 i64 l2, cplx s, double X, SmoothKernel k) {
  if (s.real() <= 1)
    throw std::domain_error("D_assembled: need Re s > 1");
  cplx L = rs_partial(f, g, s, X, k).value;
  cplx zeta2s = zeta_c(2.0 * s);
  for (i64 ell : prime_divisors(p * l1 * l2)) {
    L /= local_rs_factor(f.lambda(ell), g.lambda(ell), ell, s);
    zeta2s /= local_zeta(ell, 2.0 * s);
  }
  return A_l_closed(f, g, l1, s) * A_l_closed(g, f, l2, s) * L / zeta2s;
}

cplx D_direct(const NewformTable &f, const NewformTable &g, i64 p, i64 l1,
              i64 l2, cplx s, double X, SmoothKernel k) {
  auto M = static_cast<i64>(std::ceil(60.0 * X - 1e-6));
  if (M * std::max(l1, l2) > std::min(f.size(), g.size()))
    throw std::length_error("D_direct: table too short");
  CompensatedSum<cplx> acc;
  for (i64 n = 1; n <= M; ++n) {
    if (n % p == 0)
      continue;
    double c = f.lambda(n * l1) * g.lambda(n * l2);
    if (c == 0)
      continue;
    acc.add(c * std::exp(-s * std::log(static_cast<double>(n))) *
            smooth_kernel(k, n / X));
  }
  return acc.value();
}

void MainTermSpec::validate() const {
  if (!f || !g)
    throw std::invalid_argument("MainTermSpec: forms missing");
  if (!is_prime(p) || p == 2)
    throw std::domain_error("MainTermSpec: p must be an odd prime");
  if (h < 2)
    throw std::domain_error("MainTermSpec: h must be >= 2");
  if (l1 < 1 || l2 < 1 || gcd(l1, l2) != 1)
    throw std::domain_error("MainTermSpec: need gcd(l1, l2) = 1");
  if (gcd(l1 * l2, p * f->level()) != 1 || gcd(l1 * l2, g->level()) != 1)
    throw std::domain_error("MainTermSpec: need gcd(l1 l2, pR) = 1");
  if (f->level() % p == 0 || g->level() % p == 0)
    throw std::domain_error("MainTermSpec: p divides the level");
}

double MainTermResult::value(double logq) const {
  double v = slope() * logq;
  if (P12.constant_fitted || !same_form)
    v += P12.constant + P21.constant;
  return v;
}

MainTermResult main_term(const MainTermSpec &spec, double at_one) {
  spec.validate();
  const auto &f = *spec.f;
  const auto &g = *spec.g;
  MainTermResult r;
  r.same_form = &f == &g || (f.label() == g.label() && f.level() == g.level() &&
                             f.two_kappa() == g.two_kappa());
  i64 N = spec.p * spec.l1 * spec.l2;
  double euler_rs = 1, zeta_N1 = 1, zeta_N2 = M_PI * M_PI / 6;
  for (i64 ell : prime_divisors(N)) {
    double x = 1.0 / static_cast<double>(ell);
    euler_rs *= local_rs_factor(f.lambda(ell), g.lambda(ell), ell, 1.0).real();
    zeta_N1 /= 1 - x;
    zeta_N2 *= 1 - x * x;
  }
  // Coprime l1, l2 and A at s = 1.
  double A12 = A_l_closed(f, g, spec.l1, 1.0).real() *
               A_l_closed(g, f, spec.l2, 1.0).real();
  double A21 = A_l_closed(f, g, spec.l2, 1.0).real() *
               A_l_closed(g, f, spec.l1, 1.0).real();
  r.components["zeta_N(1)"] = zeta_N1;
  r.components["zeta^(N)(2)"] = zeta_N2;
  r.components["prod L_ell(1, f x g), ell | N"] = euler_rs;
  r.components["A_l1 A_l2"] = A12;
  r.components["A_l2 A_l1 (swapped)"] = A21;
  if (r.same_form) {
    // res L^{(N)}(s, f x f) = at_one / prod L_ell(1); L^{(N)}(1, sym^2 f) is
    // that residue times zeta_N(1).
    double sym2N = at_one / euler_rs * zeta_N1;
    r.components["L(1, sym^2 f)"] = at_one;
    r.components["L^(N)(1, sym^2 f)"] = sym2N;
    double lead = sym2N / (zeta_N1 * zeta_N2);
    r.P12.slope = lead * A12;
    r.P21.slope = lead * A21;
    r.components["leading coefficient"] = r.P12.slope;
  } else {
    double LN = at_one / euler_rs;
    r.components["L(1, f x g)"] = at_one;
    r.components["L^(N)(1, f x g)"] = LN;
    r.P12.constant = LN / zeta_N2 * A12;
    r.P21.constant = LN / zeta_N2 * A21;
  }
  return r;
}

} // namespace twist
