#include "twist/lfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <boost/math/constants/constants.hpp>

#include "twist/special.hpp"

namespace twist {

namespace {

constexpr double kPi = boost::math::constants::pi<double>();
constexpr double kTwoPi = 2 * kPi;

std::complex<double> log_gamma_ratio(const GammaFactorSpec &s,
                                     std::complex<double> u) {
  double a = 0.5 + s.shift();
  return -u * std::log(kTwoPi) + complex_log_gamma(a + u) -
         complex_log_gamma({a, 0.0});
}

template <typename Real> Real to_real(i128 v) {
  bool neg = v < 0;
  unsigned __int128 m = neg ? -static_cast<unsigned __int128>(v)
                            : static_cast<unsigned __int128>(v);
  Real hi = Real(static_cast<u64>(m >> 64));
  Real lo = Real(static_cast<u64>(m));
  Real r = hi * Real(18446744073709551616.0) + lo;
  return neg ? Real(-r) : r;
}

// lambda(n)/sqrt(n) = a_n / n^kappa.
template <typename Real> Real scaled_lambda(const NewformTable &f, i64 n) {
  if constexpr (std::is_same_v<Real, double>) {
    return f.lambda(n) / std::sqrt(static_cast<double>(n));
  } else {
    using std::pow;
    Real an = f.exact() ? to_real<Real>(f.a(n)) : Real(f.a_real(n));
    return an / pow(Real(n), f.kappa());
  }
}

template <typename Real> double log_tolerance() {
  if constexpr (std::is_same_v<Real, double>)
    return std::log(1e-20);
  else
    return -(std::numeric_limits<Real>::digits10 + 5) * std::log(10.0);
}

// Smallest x with Q(kappa, x) below e^{logtol}, roughly.
double kernel_cutoff(int kappa, double logtol) {
  double x = -logtol;
  for (int it = 0; it < 30; ++it) {
    double s = 0, term = 1;
    for (int j = 0; j < kappa; ++j) {
      s += term;
      term *= x / (j + 1);
    }
    x = -logtol + std::log(s);
  }
  return x;
}

// Bound for sum_{n > N} 2 V(n/Y): 2 int_N^inf V(x/Y) dx.
double kernel_tail(int kappa, double N, double Y) {
  double x = kTwoPi * N / Y, s = 0;
  for (int j = 1; j <= kappa; ++j)
    s += gamma_q_int<double>(j, x);
  return Y / kPi * s;
}

struct AfeLayout {
  double sqrtQ;
  double Y1, Y2;
  i64 N1, N2;
};

AfeLayout afe_layout(const NewformTable &f, i64 q, double X, double scale,
                     double logtol) {
  if (X <= 0)
    throw std::invalid_argument("lvalue: split parameter must be positive");
  AfeLayout L{};
  L.sqrtQ = static_cast<double>(q) * std::sqrt(static_cast<double>(f.level()));
  L.Y1 = X * L.sqrtQ;
  L.Y2 = L.sqrtQ / X;
  double xc = kernel_cutoff(f.kappa(), logtol) * scale;
  L.N1 = static_cast<i64>(std::ceil(xc * L.Y1 / kTwoPi));
  L.N2 = static_cast<i64>(std::ceil(xc * L.Y2 / kTwoPi));
  return L;
}

void require_terms(const NewformTable &f, i64 need) {
  if (need > f.size())
    throw std::length_error("insufficient coefficients: need N >= " +
                            std::to_string(need) + ", table has " +
                            std::to_string(f.size()));
}

template <typename Real>
std::vector<std::complex<Real>> root_table(i64 phi) {
  using std::cos;
  using std::sin;
  std::vector<std::complex<Real>> e(static_cast<std::size_t>(phi));
  const Real two_pi = boost::math::constants::two_pi<Real>();
  for (i64 k = 0; k < phi; ++k) {
    Real t = two_pi * Real(k) / Real(phi);
    e[static_cast<std::size_t>(k)] = std::complex<Real>(Real(cos(t)), Real(sin(t)));
  }
  return e;
}

template <typename Real>
std::complex<Real> root_number_t(const NewformTable &f,
                                 const DirichletCharacter *chi) {
  if (!chi)
    return {Real(f.eps()), Real(0)};
  if (gcd(f.level(), chi->modulus()) != 1)
    throw std::domain_error("lvalue: level and conductor must be coprime");
  auto G = gauss_sum<Real>(*chi);
  auto cR = chi->evaluate<Real>(f.level());
  std::complex<Real> eps = G * G * cR / Real(chi->modulus());
  eps *= Real(f.eps());
  using std::abs;
  Real mod2 = eps.real() * eps.real() + eps.imag() * eps.imag();
  if (abs(mod2 - Real(1)) > Real(2e-8))
    throw std::runtime_error("lvalue: root number is not unimodular");
  return eps;
}

} // namespace

GammaFactorSpec gamma_spec(const NewformTable &f, int parity) {
  return {f.two_kappa(), parity};
}

// ---------------------------------------------------------------- AfeWeight

AfeWeight::AfeWeight(GammaFactorSpec f, GammaFactorSpec g, double step,
                     double tmax)
    : f_(f), g_(g), step_(step), tmax_(tmax) {
  if (step <= 0 || tmax <= 0)
    throw std::invalid_argument("AfeWeight: bad quadrature parameters");
  auto K = static_cast<std::size_t>(std::llround(tmax / step));
  auto fill = [&](double c, std::vector<std::complex<double>> &out) {
    out.resize(K + 1);
    for (std::size_t k = 0; k <= K; ++k) {
      std::complex<double> u(c, step * static_cast<double>(k));
      out[k] = std::exp(log_gamma_ratio(f_, u) + log_gamma_ratio(g_, u) +
                        u * u) /
               u;
    }
  };
  fill(-0.5, nodes_lo_);
  fill(2.0, nodes_hi_);
  for (double c : {2.0, 4.0, 8.0}) {
    double s = 0;
    double h = 0.01;
    for (double t = 0; t <= tmax_ + 4; t += h) {
      std::complex<double> u(c, t);
      double v = std::abs(std::exp(log_gamma_ratio(f_, u) +
                                   log_gamma_ratio(g_, u) + u * u) /
                          u);
      s += (t == 0 ? 1.0 : 2.0) * v * h;
    }
    tail_c_.push_back(s / kTwoPi);
  }
  auto n = static_cast<std::size_t>(std::llround((log_hi_ - log_lo_) / dlog_));
  table_.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    double ly = log_lo_ + dlog_ * static_cast<double>(i);
    table_[i] = ly < 0 ? line_integral(-0.5, ly) : line_integral(2.0, ly);
  }
}

double AfeWeight::line_integral(double c, double logy) const {
  const auto &nodes = c < 0 ? nodes_lo_ : nodes_hi_;
  double s = 0;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    std::complex<double> u(c, step_ * static_cast<double>(k));
    double v = (nodes[k] * std::exp(-u * logy)).real();
    s += (k == 0 ? 1.0 : 2.0) * v;
  }
  s *= step_ / kTwoPi;
  return c < 0 ? 1.0 + s : s;
}

double AfeWeight::direct(double y) const {
  if (!(y > 0))
    throw std::domain_error("afe_weight: y must be positive");
  double ly = std::log(y);
  return ly < 0 ? line_integral(-0.5, ly) : line_integral(2.0, ly);
}

double AfeWeight::tail_bound(double y) const {
  double b = std::numeric_limits<double>::infinity();
  const double cs[3] = {2.0, 4.0, 8.0};
  for (int i = 0; i < 3; ++i)
    b = std::min(b, tail_c_[static_cast<std::size_t>(i)] * std::pow(y, -cs[i]));
  return b;
}

double AfeWeight::at_log(double ly) const {
  double pos = (ly - log_lo_) / dlog_;
  auto n = static_cast<double>(table_.size() - 1);
  if (pos < 4 || pos > n - 4)
    return ly < 0 ? line_integral(-0.5, ly) : line_integral(2.0, ly);
  auto i0 = static_cast<long>(std::floor(pos)) - 3;
  double s = 0;
  for (int j = 0; j < 8; ++j) {
    double w = 1;
    for (int k = 0; k < 8; ++k)
      if (k != j)
        w *= (pos - static_cast<double>(i0 + k)) / static_cast<double>(j - k);
    s += w * table_[static_cast<std::size_t>(i0 + j)];
  }
  return s;
}

double afe_weight(double y, const GammaFactorSpec &f, const GammaFactorSpec &g,
                  double step) {
  return AfeWeight(f, g, step).direct(y);
}

std::complex<double> root_number(const NewformTable &f,
                                 const DirichletCharacter &chi) {
  return root_number_t<double>(f, &chi);
}

// ------------------------------------------------------------- single AFE

i64 lvalue_required_terms(const NewformTable &f, i64 q, double X,
                          double cutoff_scale) {
  auto L = afe_layout(f, q, X, cutoff_scale, log_tolerance<double>());
  return std::max(L.N1, L.N2);
}

template <typename Real>
LValueT<Real> lvalue_single_t(const NewformTable &f,
                              const DirichletCharacter *chi, double X,
                              double cutoff_scale) {
  using std::abs;
  using std::exp;
  using std::sqrt;
  i64 q = chi ? chi->modulus() : 1;
  if (chi && !chi->is_primitive())
    throw std::domain_error("lvalue_single: character must be primitive");
  auto L = afe_layout(f, q, X, cutoff_scale, log_tolerance<Real>());
  require_terms(f, std::max(L.N1, L.N2));
  LValueT<Real> out;
  out.root_number = root_number_t<Real>(f, chi);

  std::vector<std::complex<Real>> roots;
  i64 phi = chi ? chi->table().phi() : 1;
  if (chi)
    roots = root_table<Real>(phi);
  const Real two_pi = boost::math::constants::two_pi<Real>();
  const int kappa = f.kappa();
  Real sqrtQ = Real(q) * sqrt(Real(f.level()));
  Real Y1 = Real(X) * sqrtQ, Y2 = sqrtQ / Real(X);

  CompensatedSum<Real> r1, i1, r2, i2, mag;
  i64 top = std::max(L.N1, L.N2);
  for (i64 n = 1; n <= top; ++n) {
    if (f.a_real(n) == 0)
      continue;
    i64 k = 0;
    if (chi) {
      k = chi->exponent(n);
      if (k < 0)
        continue;
    }
    Real c = scaled_lambda<Real>(f, n);
    const std::complex<Real> e = chi ? roots[static_cast<std::size_t>(k)]
                                     : std::complex<Real>(1, 0);
    if (n <= L.N1) {
      Real v = c * gamma_q_int<Real>(kappa, two_pi * Real(n) / Y1);
      r1.add(v * e.real());
      i1.add(v * e.imag());
      mag.add(abs(v));
    }
    if (n <= L.N2) {
      Real v = c * gamma_q_int<Real>(kappa, two_pi * Real(n) / Y2);
      r2.add(v * e.real());
      i2.add(-v * e.imag());
      mag.add(abs(v));
    }
  }
  std::complex<Real> S1(r1.value(), i1.value()), S2(r2.value(), i2.value());
  out.value = S1 + out.root_number * S2;
  out.terms_used = L.N1 + L.N2;
  double tail = kernel_tail(kappa, static_cast<double>(L.N1), L.Y1) +
                kernel_tail(kappa, static_cast<double>(L.N2), L.Y2);
  out.err_estimate = Real(tail) + Real(8) *
                                      std::numeric_limits<Real>::epsilon() *
                                      mag.value();
  return out;
}

template LValueT<double> lvalue_single_t<double>(const NewformTable &,
                                                 const DirichletCharacter *,
                                                 double, double);
template LValueT<Real50> lvalue_single_t<Real50>(const NewformTable &,
                                                 const DirichletCharacter *,
                                                 double, double);
template LValueT<Real100> lvalue_single_t<Real100>(const NewformTable &,
                                                   const DirichletCharacter *,
                                                   double, double);

LValueRecord lvalue_single(const NewformTable &f, const DirichletCharacter &chi,
                           double X) {
  auto r = lvalue_single_t<double>(f, &chi, X);
  return {r.value, LMethod::single_afe, r.terms_used, r.err_estimate};
}

LValueRecord lvalue_trivial(const NewformTable &f) {
  auto r = lvalue_single_t<double>(f, nullptr);
  return {r.value, LMethod::single_afe, r.terms_used, r.err_estimate};
}

std::vector<LValueRecord> orbit_lvalues(const NewformTable &f,
                                        const DirichletCharacter &chi,
                                        const std::vector<i64> &exps) {
  if (!chi.is_primitive())
    throw std::domain_error("orbit_lvalues: character must be primitive");
  const auto &T = chi.table();
  i64 q = T.q(), phi = T.phi();
  auto L = afe_layout(f, q, 1.0, 1.0, log_tolerance<double>());
  require_terms(f, L.N1);
  // B_k = sum over n with dlog n = k of lambda(n)/sqrt(n) V(n/sqrt Q).
  std::vector<CompensatedSum<double>> bins(static_cast<std::size_t>(phi));
  double mag = 0;
  for (i64 n = 1; n <= L.N1; ++n) {
    i64 k = T.dlog(n);
    if (k < 0 || f.lambda(n) == 0)
      continue;
    double v = f.lambda(n) / std::sqrt(static_cast<double>(n)) *
               gamma_q_int<double>(f.kappa(), kTwoPi * n / L.Y1);
    bins[static_cast<std::size_t>(k)].add(v);
    mag += std::abs(v);
  }
  std::vector<double> B(static_cast<std::size_t>(phi));
  for (i64 k = 0; k < phi; ++k)
    B[static_cast<std::size_t>(k)] = bins[static_cast<std::size_t>(k)].value();
  auto roots = root_table<double>(phi);
  double tail = 2 * kernel_tail(f.kappa(), static_cast<double>(L.N1), L.Y1);

  std::vector<LValueRecord> out(exps.size());
  parallel_for(
      exps.size(),
      [&](std::size_t i) {
        auto c = chi.pow(exps[i]);
        i64 j = c.index();
        CompensatedSum<std::complex<double>> S;
        for (i64 k = 0; k < phi; ++k)
          S.add(B[static_cast<std::size_t>(k)] *
                roots[static_cast<std::size_t>(mulmod(j, k, phi))]);
        auto eps = root_number_t<double>(f, &c);
        auto s = S.value();
        out[i] = {s + eps * std::conj(s), LMethod::single_afe, 2 * L.N1,
                  tail + 16 * std::numeric_limits<double>::epsilon() *
                             (mag + static_cast<double>(phi) * mag)};
      },
      0, 1);
  return out;
}

// ------------------------------------------------------------ product AFE

LValueRecord lvalue_pair_product(const NewformTable &f, const NewformTable &g,
                                 const DirichletCharacter &chi,
                                 const AfeWeight *weight) {
  if (!chi.is_primitive())
    throw std::domain_error("lvalue_pair_product: character must be primitive");
  if (gcd(f.level() * g.level(), chi.modulus()) != 1)
    throw std::domain_error("lvalue_pair_product: level and conductor share a factor");
  std::optional<AfeWeight> own;
  if (!weight) {
    own.emplace(gamma_spec(f), gamma_spec(g));
    weight = &*own;
  }
  const double q = static_cast<double>(chi.modulus());
  const double Z =
      q * q * std::sqrt(static_cast<double>(f.level()) * g.level());
  // Support mn <= K: at least up to |W| < 1e-7, as far as |W| < 1e-12 when
  // the tables allow.
  auto support = [&](double level) {
    double y = 1.0;
    while (std::abs((*weight)(y)) > level || std::abs((*weight)(2 * y)) > level)
      y *= 1.02;
    return static_cast<i64>(std::ceil(y * Z));
  };
  i64 avail = std::min(f.size(), g.size());
  i64 Kmin = support(1e-7);
  if (Kmin > avail)
    throw std::length_error("insufficient coefficients: need N >= " +
                            std::to_string(Kmin) + ", tables have " +
                            std::to_string(avail));
  i64 K = std::min(avail, support(1e-12));
  i64 Khalf = K / 2;

  const auto &T = chi.table();
  auto roots = root_table<double>(T.phi());
  std::vector<std::complex<double>> a(static_cast<std::size_t>(K) + 1),
      b(static_cast<std::size_t>(K) + 1);
  std::vector<double> logn(static_cast<std::size_t>(K) + 1, 0.0);
  for (i64 n = 1; n <= K; ++n) {
    logn[static_cast<std::size_t>(n)] = std::log(static_cast<double>(n));
    i64 k = chi.exponent(n);
    if (k < 0)
      continue;
    auto e = roots[static_cast<std::size_t>(k)];
    double s = std::sqrt(static_cast<double>(n));
    a[static_cast<std::size_t>(n)] = f.lambda(n) / s * e;
    b[static_cast<std::size_t>(n)] = g.lambda(n) / s * std::conj(e);
  }
  const double logZ = std::log(Z);
  const std::size_t block = 64;
  std::size_t nblocks = (static_cast<std::size_t>(K) + block - 1) / block;
  std::vector<std::complex<double>> partial(nblocks), partial_half(nblocks);
  std::vector<i64> counts(nblocks, 0);
  parallel_for(
      nblocks,
      [&](std::size_t bi) {
        CompensatedSum<std::complex<double>> acc, acc_half;
        i64 cnt = 0;
        i64 m0 = static_cast<i64>(bi * block) + 1;
        i64 m1 = std::min<i64>(K, m0 + static_cast<i64>(block) - 1);
        for (i64 m = m0; m <= m1; ++m) {
          auto am = a[static_cast<std::size_t>(m)];
          if (am == 0.0)
            continue;
          i64 top = K / m;
          i64 top_half = Khalf / m;
          std::complex<double> inner = 0, inner_half = 0;
          for (i64 n = 1; n <= top; ++n) {
            auto bn = b[static_cast<std::size_t>(n)];
            if (bn == 0.0)
              continue;
            double ly = logn[static_cast<std::size_t>(m)] +
                        logn[static_cast<std::size_t>(n)] - logZ;
            auto t = bn * weight->at_log(ly);
            inner += t;
            if (n <= top_half)
              inner_half += t;
            ++cnt;
          }
          acc.add(am * inner);
          acc_half.add(am * inner_half);
        }
        partial[bi] = acc.value();
        partial_half[bi] = acc_half.value();
        counts[bi] = cnt;
      },
      0, 1);
  CompensatedSum<std::complex<double>> S, Sh;
  i64 pairs = 0;
  for (std::size_t i = 0; i < nblocks; ++i) {
    S.add(partial[i]);
    Sh.add(partial_half[i]);
    pairs += counts[i];
  }
  auto eps = static_cast<double>(f.eps() * g.eps()) *
             chi.evaluate(f.level() * invmod(g.level() % chi.modulus(), chi.modulus()));
  auto s = S.value();
  LValueRecord r;
  r.value = s + eps * std::conj(s);
  r.method = LMethod::product_afe;
  r.terms_used = pairs;
  // Truncation at mn = K estimated by self-convergence against mn <= K/2.
  r.err_estimate = 2 * std::abs(S.value() - Sh.value()) +
                   static_cast<double>(pairs) * 1e-16 * std::abs(r.value) + 1e-13;
  return r;
}

// ---------------------------------------------------------------- Voronoi

Window bump_window(double lo, double hi) {
  return [lo, hi](double x) {
    if (x <= lo || x >= hi)
      return 0.0;
    return std::exp(-1.0 / ((x - lo) * (hi - x)));
  };
}

namespace {

// x = u^2 turns the transform into int W(u^2) J(4 pi u sqrt y) 2u du, a smooth
// compactly supported integrand; the trapezoid rule is spectrally accurate once
// every oscillation gets a fixed number of nodes.
double bessel_integral(const Window &w, double lo, double hi, int two_kappa,
                       double y, int nodes) {
  double a = std::sqrt(lo), b = std::sqrt(hi), sy = std::sqrt(y);
  double periods = 2 * sy * (b - a);
  int n = std::max(nodes, static_cast<int>(400 + 24 * periods));
  double h = (b - a) / n, s = 0;
  for (int i = 1; i < n; ++i) {
    double u = a + h * i;
    double v = w(u * u);
    if (v != 0)
      s += v * bessel_j(two_kappa - 1, 4 * kPi * u * sy) * 2 * u;
  }
  // i^{2 kappa} = (-1)^kappa.
  double sign = (two_kappa / 2) % 2 ? -1.0 : 1.0;
  return kTwoPi * sign * s * h;
}

} // namespace

double bessel_transform(const Window &w, double lo, double hi, int two_kappa,
                        double y, int nodes) {
  return bessel_integral(w, lo, hi, two_kappa, y, nodes);
}

VoronoiResult voronoi_check(const NewformTable &f, i64 a, i64 q, double N,
                            const Window &w, double lo, double hi) {
  if (q < 1)
    throw std::invalid_argument("voronoi_check: modulus must be positive");
  if (gcd(mod(a * f.level(), q), q) != 1 || mod(a, q) == 0)
    throw std::domain_error("voronoi_check: need gcd(aR, q) = 1");
  VoronoiResult r;
  CompensatedSum<std::complex<double>> L;
  i64 n0 = static_cast<i64>(std::floor(lo * N)), n1 = static_cast<i64>(std::ceil(hi * N));
  require_terms(f, n1);
  for (i64 n = std::max<i64>(1, n0); n <= n1; ++n) {
    double t = kTwoPi * static_cast<double>(mod(a * n, q)) / static_cast<double>(q);
    L.add(f.lambda(n) * w(n / N) * std::complex<double>(std::cos(t), std::sin(t)));
    ++r.terms_lhs;
  }
  r.lhs = L.value();

  i64 abar = invmod(mod(a * f.level(), q), q);
  double R = static_cast<double>(f.level());
  // The sign in front of the dual sum is the Fricke eigenvalue
  // eta = i^{2 kappa} eps(f); bessel_transform already carries i^{2 kappa}.
  double ik = (f.two_kappa() / 2) % 2 ? -1.0 : 1.0;
  double scale = ik * static_cast<double>(f.eps()) * N / (q * std::sqrt(R));
  // Window smoothness makes the transform decay fast; stop after a long run of
  // negligible terms.
  CompensatedSum<std::complex<double>> Rs;
  int quiet = 0;
  i64 cap = std::min<i64>(f.size(), 40000);
  for (i64 n = 1; n <= cap; ++n) {
    double y = N * n / (static_cast<double>(q) * q * R);
    double wt = bessel_integral(w, lo, hi, f.two_kappa(), y, 400);
    double t = -kTwoPi * static_cast<double>(mod(abar * n, q)) / static_cast<double>(q);
    Rs.add(f.lambda(n) * wt * std::complex<double>(std::cos(t), std::sin(t)));
    r.terms_rhs = n;
    quiet = std::abs(wt) < 1e-10 ? quiet + 1 : 0;
    if (quiet > 100)
      break;
  }
  r.rhs = scale * Rs.value();
  r.discrepancy = std::abs(r.lhs - r.rhs);
  return r;
}

} // namespace twist
