#include "twist/recognize.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <boost/math/constants/constants.hpp>

#include "twist/characters.hpp"

namespace twist {

namespace {

template <typename Real> using RealMatrix =
    Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real, typename Int> Real to_real_t(const Int &x) {
  if constexpr (std::is_same_v<Int, BigInt>)
    return Real(x);
  else
    return Real(static_cast<long long>(x));
}

template <typename Int, typename Real> Int round_to(const Real &x) {
  Real r = boost::multiprecision::round(x);
  if constexpr (std::is_same_v<Int, BigInt>)
    return r.template convert_to<BigInt>();
  else
    return r.template convert_to<Int>();
}

template <typename Int, typename Real>
void gso(const IntMatrix<Int> &B, RealMatrix<Real> &mu, std::vector<Real> &Bn) {
  const auto n = B.rows(), dim = B.cols();
  RealMatrix<Real> bs(n, dim);
  mu = RealMatrix<Real>::Zero(n, n);
  Bn.assign(static_cast<std::size_t>(n), Real(0));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index c = 0; c < dim; ++c)
      bs(i, c) = to_real_t<Real>(B(i, c));
    for (Eigen::Index j = 0; j < i; ++j) {
      Real dotv = 0;
      for (Eigen::Index c = 0; c < dim; ++c)
        dotv += to_real_t<Real>(B(i, c)) * bs(j, c);
      mu(i, j) = dotv / Bn[static_cast<std::size_t>(j)];
      for (Eigen::Index c = 0; c < dim; ++c)
        bs(i, c) -= mu(i, j) * bs(j, c);
    }
    Real s = 0;
    for (Eigen::Index c = 0; c < dim; ++c)
      s += bs(i, c) * bs(i, c);
    Bn[static_cast<std::size_t>(i)] = s;
  }
}

BigInt big_abs(const BigInt &x) { return x < 0 ? BigInt(-x) : x; }

BigInt big_gcd(BigInt a, BigInt b) {
  a = big_abs(a);
  b = big_abs(b);
  while (b != 0) {
    BigInt t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::string big_str(const BigInt &x) { return x.str(); }

Real100 pow10(int d) { return boost::multiprecision::pow(Real100(10), d); }

struct Relation {
  std::vector<BigInt> c; // coefficient of v_i
  BigInt height = 0;
};

// Short integer relations among v, shortest first.
std::vector<Relation> find_relations(const std::vector<Real100> &v, int digits) {
  const auto n = static_cast<Eigen::Index>(v.size());
  IntMatrix<BigInt> B = IntMatrix<BigInt>::Zero(n, n + 1);
  Real100 S = pow10(digits);
  for (Eigen::Index i = 0; i < n; ++i) {
    B(i, i) = 1;
    B(i, n) = boost::multiprecision::round(S * v[static_cast<std::size_t>(i)])
                  .convert_to<BigInt>();
  }
  auto R = lll_reduce<BigInt, RealGso>(B, 0.99);
  std::vector<Relation> out;
  for (Eigen::Index i = 0; i < n; ++i) {
    Relation r;
    for (Eigen::Index j = 0; j < n; ++j) {
      r.c.push_back(R(i, j));
      r.height = std::max(r.height, big_abs(R(i, j)));
    }
    out.push_back(std::move(r));
  }
  return out;
}

// Best relation with a nonzero coefficient on v_0, normalized to c_0 > 0 and
// primitive.
std::optional<Relation> relation_for_first(const std::vector<Relation> &rels) {
  std::optional<Relation> best;
  for (const auto &r : rels) {
    if (r.c[0] == 0)
      continue;
    if (!best || r.height < best->height)
      best = r;
  }
  if (!best)
    return best;
  BigInt g = 0;
  for (const auto &c : best->c)
    g = big_gcd(g, c);
  if (best->c[0] < 0)
    g = -g;
  best->height = 0;
  for (auto &c : best->c) {
    c /= g;
    best->height = std::max(best->height, big_abs(c));
  }
  return best;
}

std::vector<Real100> real_cyclotomic_basis(i64 m, i64 a = 1) {
  i64 d = std::max<i64>(1, euler_phi(m) / 2);
  const Real100 tp = boost::math::constants::two_pi<Real100>();
  std::vector<Real100> b{Real100(1)};
  for (i64 k = 1; k < d; ++k)
    b.push_back(2 * cos(tp * Real100(mod(a * k, m)) / Real100(m)));
  return b;
}

std::vector<std::string> real_cyclotomic_labels(i64 m) {
  i64 d = std::max<i64>(1, euler_phi(m) / 2);
  std::vector<std::string> out{"1"};
  for (i64 k = 1; k < d; ++k)
    out.push_back("2cos(2pi*" + std::to_string(k) + "/" + std::to_string(m) + ")");
  return out;
}

double to_d(const Real100 &x) { return x.convert_to<double>(); }

struct Pass {
  std::optional<Relation> rel;
  double residual = 0;
};

// v = (x, basis...); relation c_0 x + sum c_i basis_i = 0.
Pass run_pass(const Real100 &x, const std::vector<Real100> &basis, int digits) {
  std::vector<Real100> v{x};
  v.insert(v.end(), basis.begin(), basis.end());
  Pass p;
  p.rel = relation_for_first(find_relations(v, digits));
  if (p.rel) {
    Real100 s = Real100(p.rel->c[0]) * x;
    for (std::size_t i = 0; i < basis.size(); ++i)
      s += Real100(p.rel->c[i + 1]) * basis[i];
    p.residual = to_d(abs(s) / Real100(p.rel->c[0]));
  }
  return p;
}

RecognitionResult recognize_against(const Real100 &x, const Real100 &x2,
                                    const std::vector<Real100> &basis,
                                    std::vector<std::string> labels,
                                    const BigInt &height_bound,
                                    const RecognitionOptions &opt) {
  RecognitionResult r;
  r.basis_labels = std::move(labels);
  r.height_bound = height_bound;
  r.digits = opt.digits;
  r.tolerance = opt.residual_scale * std::max(1.0, std::abs(to_d(x)));
  auto p1 = run_pass(x, basis, opt.digits);
  auto p2 = run_pass(x2, basis, 2 * opt.digits);
  std::ostringstream why;
  if (!p1.rel) {
    why << "no relation found at (height " << big_str(height_bound)
        << ", residual " << r.tolerance << ", digits " << opt.digits << ")";
    r.note = why.str();
    return r;
  }
  r.denominator = p1.rel->c[0];
  for (std::size_t i = 1; i < p1.rel->c.size(); ++i)
    r.coeffs.push_back(-p1.rel->c[i]);
  r.height = p1.rel->height;
  r.residual = std::max(p1.residual, p2.rel && p2.rel->c == p1.rel->c
                                         ? p2.residual
                                         : p1.residual);
  r.stable = p2.rel && p2.rel->c == p1.rel->c;
  bool ok = r.residual <= r.tolerance && r.height <= height_bound && r.stable;
  r.status = ok ? RecognitionStatus::recognized : RecognitionStatus::rejected;
  if (!ok) {
    why << "no relation found at (height " << big_str(height_bound)
        << ", residual " << r.tolerance << ", digits " << opt.digits << "/"
        << 2 * opt.digits << ")";
    if (r.height > height_bound)
      why << "; shortest candidate height " << big_str(r.height);
    if (!r.stable)
      why << "; candidate changed at doubled precision";
    r.note = why.str();
  }
  return r;
}

// Ramanujan sum c_m(k) = sum_{d | (m, k)} mu(m/d) d.
i64 ramanujan_sum(i64 m, i64 k) {
  i64 g = gcd(m, k == 0 ? m : k);
  i64 total = 0;
  for (i64 d : divisors(g)) {
    i64 e = m / d;
    int mu = 1;
    for (auto [pr, ex] : factorize(e)) {
      (void)pr;
      if (ex > 1) {
        mu = 0;
        break;
      }
      mu = -mu;
    }
    total += mu * d;
  }
  return total;
}

} // namespace

// ------------------------------------------------------------------- LLL

template <typename Int, typename Real>
std::vector<Real> gram_schmidt_norms(const IntMatrix<Int> &B) {
  RealMatrix<Real> mu;
  std::vector<Real> Bn;
  gso<Int, Real>(B, mu, Bn);
  return Bn;
}

template <typename Int, typename Real>
IntMatrix<Int> lll_reduce(IntMatrix<Int> B, double delta, LllStats *stats) {
  const auto n = B.rows();
  if (n == 0)
    return B;
  if (n > 12 + 1)
    throw std::domain_error("lll_reduce: dimension above 13");
  RealMatrix<Real> mu;
  std::vector<Real> Bn;
  gso<Int, Real>(B, mu, Bn);
  for (const auto &b : Bn)
    if (b == 0)
      throw std::domain_error("lll_reduce: rank-deficient basis");
  const Real d(delta);
  LllStats st;
  Eigen::Index k = 1;
  while (k < n) {
    for (Eigen::Index j = k - 1; j >= 0; --j) {
      Int qr = round_to<Int, Real>(mu(k, j));
      if (qr == 0)
        continue;
      ++st.size_reductions;
      for (Eigen::Index c = 0; c < B.cols(); ++c)
        B(k, c) -= qr * B(j, c);
      Real qd = to_real_t<Real>(qr);
      for (Eigen::Index i = 0; i < j; ++i)
        mu(k, i) -= qd * mu(j, i);
      mu(k, j) -= qd;
    }
    auto ku = static_cast<std::size_t>(k);
    if (Bn[ku] >= (d - mu(k, k - 1) * mu(k, k - 1)) * Bn[ku - 1]) {
      ++k;
    } else {
      B.row(k).swap(B.row(k - 1));
      ++st.swaps;
      gso<Int, Real>(B, mu, Bn);
      k = std::max<Eigen::Index>(k - 1, 1);
    }
  }
  if (stats)
    *stats = st;
  return B;
}

template <typename Int, typename Real>
bool is_lll_reduced(const IntMatrix<Int> &B, double delta) {
  RealMatrix<Real> mu;
  std::vector<Real> Bn;
  gso<Int, Real>(B, mu, Bn);
  const Real half = Real(1) / 2 + Real(1e-30);
  for (Eigen::Index i = 0; i < B.rows(); ++i)
    for (Eigen::Index j = 0; j < i; ++j)
      if (abs(mu(i, j)) > half)
        return false;
  for (Eigen::Index k = 1; k < B.rows(); ++k) {
    auto ku = static_cast<std::size_t>(k);
    if (Bn[ku] < (Real(delta) - mu(k, k - 1) * mu(k, k - 1)) * Bn[ku - 1] *
                     (1 - Real(1e-30)))
      return false;
  }
  return true;
}

template IntMatrix<BigInt> lll_reduce<BigInt, RealGso>(IntMatrix<BigInt>, double,
                                                       LllStats *);
template IntMatrix<i64> lll_reduce<i64, RealGso>(IntMatrix<i64>, double,
                                                 LllStats *);
template bool is_lll_reduced<BigInt, RealGso>(const IntMatrix<BigInt> &, double);
template bool is_lll_reduced<i64, RealGso>(const IntMatrix<i64> &, double);
template std::vector<RealGso>
gram_schmidt_norms<BigInt, RealGso>(const IntMatrix<BigInt> &);
template std::vector<RealGso> gram_schmidt_norms<i64, RealGso>(const IntMatrix<i64> &);

// ----------------------------------------------------------- recognition

std::string RecognitionResult::candidate_string() const {
  std::ostringstream os;
  os << "(";
  bool first = true;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i] == 0)
      continue;
    if (!first)
      os << (coeffs[i] < 0 ? " - " : " + ");
    else if (coeffs[i] < 0)
      os << "-";
    first = false;
    bool unit_label = i >= basis_labels.size() || basis_labels[i] == "1";
    if (unit_label || big_abs(coeffs[i]) != 1)
      os << big_str(big_abs(coeffs[i])) << (unit_label ? "" : "*");
    if (!unit_label)
      os << basis_labels[i];
  }
  if (first)
    os << "0";
  os << ")/" << big_str(denominator);
  return os.str();
}

RecognitionResult recognize_algebraic(const Real100 &x, int degree,
                                      const BigInt &height_bound,
                                      const RecognitionOptions &opt) {
  if (degree < 1 || degree > 11)
    throw std::domain_error("recognize_algebraic: degree must be in [1, 11]");
  // Relation among x^degree, ..., x, 1: leading coefficient on x^degree.
  std::vector<Real100> basis;
  std::vector<std::string> labels;
  Real100 top = pow(x, degree);
  for (int k = degree - 1; k >= 0; --k) {
    basis.push_back(pow(x, k));
    labels.push_back(k == 0 ? "1" : "x^" + std::to_string(k));
  }
  auto r = recognize_against(top, top, basis, labels, height_bound, opt);
  if (!r.coeffs.empty()) {
    // b x^degree = sum a_k x^k, coefficients listed from x^(degree-1) down.
    r.polynomial.assign(static_cast<std::size_t>(degree) + 1, BigInt(0));
    r.polynomial[static_cast<std::size_t>(degree)] = r.denominator;
    for (int k = 0; k < degree; ++k)
      r.polynomial[static_cast<std::size_t>(k)] =
          -r.coeffs[static_cast<std::size_t>(degree - 1 - k)];
  }
  return r;
}

RecognitionResult recognize_real_cyclotomic(const Real100 &x, i64 m,
                                            const BigInt &height_bound,
                                            const std::optional<Real100> &recheck,
                                            const RecognitionOptions &opt) {
  if (m < 1 || euler_phi(m) / 2 > 12)
    throw std::domain_error("recognize_real_cyclotomic: degree above 12");
  if (!isfinite(x))
    throw std::domain_error("recognize_real_cyclotomic: input not finite");
  auto basis = real_cyclotomic_basis(m);
  return recognize_against(x, recheck ? *recheck : x, basis,
                           real_cyclotomic_labels(m), height_bound, opt);
}

Real100 evaluate_cyclotomic_candidate(const RecognitionResult &r, i64 m, i64 a) {
  auto basis = real_cyclotomic_basis(m, a);
  if (basis.size() != r.coeffs.size())
    throw std::invalid_argument("evaluate_cyclotomic_candidate: basis mismatch");
  Real100 s = 0;
  for (std::size_t i = 0; i < basis.size(); ++i)
    s += Real100(r.coeffs[i]) * basis[i];
  return s / Real100(r.denominator);
}

std::string RecognitionResult::polynomial_string() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = polynomial.size(); i-- > 0;) {
    const BigInt &c = polynomial[i];
    if (c == 0)
      continue;
    if (!first)
      os << (c < 0 ? " - " : " + ");
    else if (c < 0)
      os << "-";
    first = false;
    BigInt a = big_abs(c);
    if (a != 1 || i == 0)
      os << big_str(a);
    if (i > 0)
      os << "x" << (i > 1 ? "^" + std::to_string(i) : "");
  }
  return first ? "0" : os.str();
}

std::string Rational::to_string() const {
  return den == 1 ? big_str(num) : big_str(num) + "/" + big_str(den);
}

namespace {

// Smallest-denominator convergent within tol, denominators <= bound.
std::optional<Rational> convergent_within(const Real100 &x, const BigInt &bound,
                                          const Real100 &tol) {
  BigInt p0 = 1, q0 = 0, p1 = 0, q1 = 1;
  Real100 y = x;
  for (int it = 0; it < 400; ++it) {
    Real100 fl = floor(y);
    BigInt a = fl.convert_to<BigInt>();
    BigInt p2 = a * p0 + p1, q2 = a * q0 + q1;
    if (q2 > bound)
      return std::nullopt;
    if (abs(x - Real100(p2) / Real100(q2)) <= tol)
      return Rational{p2, q2};
    Real100 frac = y - fl;
    if (frac == 0)
      return std::nullopt;
    y = 1 / frac;
    p1 = p0;
    q1 = q0;
    p0 = p2;
    q0 = q2;
  }
  return std::nullopt;
}

} // namespace

RationalityResult rationality_check(const std::complex<Real100> &value,
                                    const BigInt &denominator_bound,
                                    const std::optional<Recheck> &recheck) {
  const Real100 &x = value.real();
  if (abs(value.imag()) > Real100(1e-6) * abs(x))
    throw std::domain_error("rationality_check: imaginary part too large");
  RationalityResult r;
  r.tolerance = 1e-8 * std::max(1.0, std::abs(to_d(x)));
  auto c = convergent_within(x, denominator_bound, Real100(r.tolerance));
  std::ostringstream why;
  if (!c) {
    why << "no relation found at (denominator " << big_str(denominator_bound)
        << ", residual " << r.tolerance << ")";
    r.note = why.str();
    return r;
  }
  r.value = *c;
  Real100 q = Real100(c->num) / Real100(c->den);
  r.residual = to_d(abs(x - q));
  if (recheck) {
    double acc = std::max(10 * recheck->accuracy,
                          1e-90 * std::max(1.0, std::abs(to_d(x))));
    r.stable = to_d(abs(recheck->value - q)) <= acc;
  } else {
    auto c2 = convergent_within(x, denominator_bound, Real100(r.tolerance / 10));
    r.stable = c2 && *c2 == *c;
  }
  if (r.stable) {
    r.status = RecognitionStatus::recognized;
  } else {
    why << "no relation found at (denominator " << big_str(denominator_bound)
        << ", residual " << r.tolerance << "); candidate " << c->to_string()
        << " failed the stability re-check";
    r.note = why.str();
  }
  return r;
}

// ----------------------------------------------------------- certificates

namespace {

template <typename Real> std::string str_of(const Real &x) {
  std::ostringstream os;
  os.precision(std::numeric_limits<Real>::digits10);
  os << x;
  return os.str();
}

} // namespace

GenerationCertificate certify_generation(const NewformTable &f, i64 p, int h,
                                         const BigInt &height_bound) {
  if (!f.exact())
    throw std::domain_error("certify_generation: needs a rational form");
  if (!is_prime(p) || p == 2 || h < 2)
    throw std::domain_error("certify_generation: need odd p and h >= 2");
  const i64 m = ipow(p, h - 1);
  if (euler_phi(m) / 2 > 12)
    throw std::domain_error("certify_generation: field degree above 12");
  GenerationCertificate C;
  C.form = f.label();
  C.p = p;
  C.h = h;
  C.m = m;
  DirichletCharacter chi(build_character_table(p, h), p - 1);
  C.character_index = chi.index();
  const i64 q = chi.modulus();

  auto ref50 = lvalue_single_t<Real50>(f, nullptr);
  auto ref100 = lvalue_single_t<Real100>(f, nullptr, 1.0, 2.0);
  if (abs(ref50.value.real()) < 10 * ref50.err_estimate)
    throw std::domain_error(
        "certify_generation: reference L-value below 10x its error estimate");
  C.proxy_definition =
      "Omega = |G(chi_ref) L(1/2, f x chi_ref)|^2, chi_ref trivial; "
      "r = p^h |L(1/2, f x chi)|^2 / Omega";

  auto value_at = [&](const DirichletCharacter &c, bool high) {
    if (high) {
      auto L = lvalue_single_t<Real100>(f, &c, 1.0, 2.0);
      Real100 om = norm(ref100.value);
      Real100 v = Real100(q) * norm(L.value) / om;
      Real100 err = v * (2 * L.err_estimate / abs(L.value) +
                         2 * ref100.err_estimate / abs(ref100.value));
      return std::pair<Real100, Real100>{v, err};
    }
    auto L = lvalue_single_t<Real50>(f, &c);
    Real50 om = norm(ref50.value);
    Real50 v = Real50(q) * norm(L.value) / om;
    Real50 err = v * (2 * L.err_estimate / abs(L.value) +
                      2 * ref50.err_estimate / abs(ref50.value));
    return std::pair<Real100, Real100>{Real100(v), Real100(err)};
  };

  auto [r50, e50] = value_at(chi, false);
  auto [r100, e100] = value_at(chi, true);
  C.r = r50;
  C.ladder.push_back({"50 digits", 1.0, str_of(Real50(r50)), to_d(e50)});
  C.ladder.push_back({"100 digits", 2.0, str_of(r100), to_d(e100)});

  const i64 degree = std::max<i64>(1, euler_phi(m) / 2);
  C.field_recognition = recognize_real_cyclotomic(r50, m, height_bound, r100);
  C.rational_recognition = rationality_check(
      {r50, Real100(0)}, height_bound, Recheck{r100, to_d(e100)});
  C.rational_rejected = !C.rational_recognition.recognized();

  // Orbit values against the Galois conjugates of the recognized element.
  auto orbit = galois_orbit(chi);
  std::vector<double> vals, conj;
  Real100 T50 = 0, T100 = 0, terr = 0;
  for (const auto &c : orbit) {
    auto [v50, ve50] = value_at(c, false);
    auto [v100, ve100] = value_at(c, true);
    T50 += v50;
    T100 += v100;
    terr += ve100;
    vals.push_back(to_d(v50));
  }
  if (C.field_recognition.recognized()) {
    for (i64 a = 1; a < m; ++a)
      if (gcd(a, m) == 1)
        conj.push_back(to_d(evaluate_cyclotomic_candidate(C.field_recognition, m, a)));
    std::sort(vals.begin(), vals.end());
    std::sort(conj.begin(), conj.end());
    if (conj.size() == vals.size()) {
      for (std::size_t i = 0; i < vals.size(); ++i)
        C.conjugate_max_error = std::max(
            C.conjugate_max_error,
            std::abs(vals[i] - conj[i]) / std::max(1.0, std::abs(conj[i])));
      C.conjugates_match = C.conjugate_max_error <= 1e-6;
    }
  }
  C.trace_recognition = rationality_check({T50, Real100(0)}, height_bound,
                                          Recheck{T100, to_d(terr)});
  if (C.trace_recognition.recognized() && C.field_recognition.recognized()) {
    // The orbit is Gal(Q(mu_m)/Q); each real conjugate appears twice.
    const auto &R = C.field_recognition;
    BigInt num = R.coeffs[0] * degree;
    for (std::size_t k = 1; k < R.coeffs.size(); ++k)
      num += R.coeffs[k] * ramanujan_sum(m, static_cast<i64>(k));
    num *= 2;
    BigInt den = R.denominator;
    BigInt g = big_gcd(num, den);
    Rational exact{num / g, den / g};
    C.trace_consistent = exact == C.trace_recognition.value;
  }
  bool field_ok = C.field_recognition.recognized();
  bool subfield_ok = degree == 1 ? C.rational_recognition.recognized()
                                 : C.rational_rejected;
  C.passed = field_ok && subfield_ok && C.conjugates_match && C.trace_consistent;
  return C;
}

} // namespace twist
