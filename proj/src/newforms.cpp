#include "twist/newforms.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <boost/math/constants/constants.hpp>

#include "twist/series.hpp"

namespace twist {

namespace {

std::string i128_to_string(i128 v) {
  if (v == 0)
    return "0";
  bool neg = v < 0;
  unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v)
                            : static_cast<unsigned __int128>(v);
  std::string s;
  while (u) {
    s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (neg)
    s.push_back('-');
  return {s.rbegin(), s.rend()};
}

bool parse_i128(const std::string &s, i128 &out) {
  if (s.empty())
    return false;
  std::size_t i = 0;
  bool neg = false;
  if (s[0] == '-' || s[0] == '+') {
    neg = s[0] == '-';
    i = 1;
  }
  if (i == s.size())
    return false;
  i128 v = 0;
  const i128 limit = (~static_cast<unsigned __int128>(0) >> 1) / 10 - 1;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9')
      return false;
    if (v > limit)
      return false;
    v = v * 10 + (s[i] - '0');
  }
  out = neg ? -v : v;
  return true;
}

std::vector<i64> smallest_prime_factor(i64 N) {
  std::vector<i64> spf(static_cast<std::size_t>(N) + 1, 0);
  for (i64 i = 2; i <= N; ++i) {
    if (spf[static_cast<std::size_t>(i)])
      continue;
    for (i64 j = i; j <= N; j += i)
      if (!spf[static_cast<std::size_t>(j)])
        spf[static_cast<std::size_t>(j)] = i;
  }
  return spf;
}

} // namespace

NewformTable::NewformTable(std::string label, i64 level, int two_kappa, int eps,
                           std::vector<i128> a)
    : label_(std::move(label)), R_(level), two_kappa_(two_kappa), eps_(eps),
      a_(std::move(a)) {
  if (a_.size() < 2)
    throw std::invalid_argument("NewformTable: empty coefficient table");
  N_ = static_cast<i64>(a_.size()) - 1;
  a_[0] = 0;
  fill_lambda();
}

NewformTable::NewformTable(std::string label, i64 level, int two_kappa, int eps,
                           std::vector<double> a_real)
    : label_(std::move(label)), R_(level), two_kappa_(two_kappa), eps_(eps),
      a_real_(std::move(a_real)) {
  if (a_real_.size() < 2)
    throw std::invalid_argument("NewformTable: empty coefficient table");
  N_ = static_cast<i64>(a_real_.size()) - 1;
  a_real_[0] = 0;
  fill_lambda();
}

void NewformTable::fill_lambda() {
  if (two_kappa_ < 2 || two_kappa_ % 2)
    throw std::invalid_argument("NewformTable: weight must be even and >= 2");
  if (eps_ != 1 && eps_ != -1)
    throw std::invalid_argument("NewformTable: root number must be +1 or -1");
  if (R_ < 1)
    throw std::invalid_argument("NewformTable: level must be positive");
  lambda_.assign(static_cast<std::size_t>(N_) + 1, 0.0);
  long double w = (two_kappa_ - 1) / 2.0L;
  for (i64 n = 1; n <= N_; ++n) {
    long double an = exact() ? static_cast<long double>(a_[static_cast<std::size_t>(n)])
                             : a_real_[static_cast<std::size_t>(n)];
    long double s = two_kappa_ == 2 ? std::sqrt(static_cast<long double>(n))
                                    : std::pow(static_cast<long double>(n), w);
    lambda_[static_cast<std::size_t>(n)] = static_cast<double>(an / s);
  }
}

double NewformTable::a_real(i64 n) const {
  if (exact())
    return static_cast<double>(a_[static_cast<std::size_t>(n)]);
  return a_real_[static_cast<std::size_t>(n)];
}

NewformTable NewformTable::truncated(i64 N) const {
  if (N > N_)
    throw std::out_of_range("NewformTable::truncated: bound exceeds table");
  if (exact())
    return NewformTable(label_, R_, two_kappa_, eps_,
                        std::vector<i128>(a_.begin(), a_.begin() + N + 1));
  return NewformTable(label_, R_, two_kappa_, eps_,
                      std::vector<double>(a_real_.begin(), a_real_.begin() + N + 1));
}

i64 NewformTable::first_multiplicativity_violation(i64 limit) const {
  limit = std::min(limit, N_);
  if (limit >= 1) {
    bool one = exact() ? a_[1] == 1 : std::abs(a_real_[1] - 1.0) < 1e-12;
    if (!one)
      return 1;
  }
  auto spf = smallest_prime_factor(limit);
  for (i64 n = 2; n <= limit; ++n) {
    i64 p = spf[static_cast<std::size_t>(n)];
    i64 pe = 1;
    i64 m = n;
    while (m % p == 0) {
      m /= p;
      pe *= p;
    }
    if (m == 1)
      continue;
    if (exact()) {
      if (a_[static_cast<std::size_t>(n)] !=
          a_[static_cast<std::size_t>(pe)] * a_[static_cast<std::size_t>(m)])
        return n;
    } else {
      double lhs = lambda_[static_cast<std::size_t>(n)];
      double rhs = lambda_[static_cast<std::size_t>(pe)] *
                   lambda_[static_cast<std::size_t>(m)];
      if (std::abs(lhs - rhs) > 1e-9 * std::max(1.0, std::abs(rhs)))
        return n;
    }
  }
  return 0;
}

i64 NewformTable::first_deligne_violation() const {
  auto d = divisor_count_table(static_cast<int>(N_));
  for (i64 n = 1; n <= N_; ++n)
    if (std::abs(lambda_[static_cast<std::size_t>(n)]) >
        d[static_cast<std::size_t>(n)] * (1.0 + 1e-9))
      return n;
  return 0;
}

void NewformTable::validate() const {
  if (i64 n = first_multiplicativity_violation(N_))
    throw std::runtime_error("newform table '" + label_ +
                             "': multiplicativity fails at n = " +
                             std::to_string(n));
  if (i64 n = first_deligne_violation())
    throw std::runtime_error("newform table '" + label_ +
                             "': Deligne bound fails at n = " + std::to_string(n));
}

BuiltinForm parse_builtin(const std::string &name) {
  if (name == "delta")
    return BuiltinForm::delta;
  if (name == "level11" || name == "11a")
    return BuiltinForm::level11;
  throw std::invalid_argument("unknown built-in form '" + name + "'");
}

NewformTable eta_product_coefficients(BuiltinForm form, i64 N) {
  if (N < 1 || N > 40'000'000)
    throw std::invalid_argument("eta_product_coefficients: N out of range");
  auto M = static_cast<std::size_t>(N - 1);
  std::vector<i128> a(static_cast<std::size_t>(N) + 1, 0);
  if (form == BuiltinForm::level11) {
    // q * prod (1-q^n)^2 (1-q^{11n})^2
    auto B = sparse_times_sparse<i64>(eta_sparse(1, N), eta_sparse(11, N), M);
    auto A = ntt_multiply(B, B, M, 2);
    for (std::size_t n = 1; n <= static_cast<std::size_t>(N); ++n)
      a[n] = A[n - 1];
    return NewformTable("level11", 11, 2, 1, std::move(a));
  }
  // q * prod (1-q^n)^24 = q * (eta^3)^8 / q
  auto E3 = eta_cubed_sparse(N);
  auto P2 = sparse_times_sparse<i128>(E3, E3, M);
  auto P4 = ntt_multiply(P2, P2, M, 4);
  auto P8 = ntt_multiply(P4, P4, M, 4);
  for (std::size_t n = 1; n <= static_cast<std::size_t>(N); ++n)
    a[n] = P8[n - 1];
  return NewformTable("delta", 1, 12, 1, std::move(a));
}

i64 curve_discriminant(const Weierstrass &E) {
  i128 a1 = E[0], a2 = E[1], a3 = E[2], a4 = E[3], a6 = E[4];
  i128 b2 = a1 * a1 + 4 * a2;
  i128 b4 = 2 * a4 + a1 * a3;
  i128 b6 = a3 * a3 + 4 * a6;
  i128 b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
  i128 d = -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6;
  return static_cast<i64>(d);
}

i64 elliptic_ap(const Weierstrass &E, i64 ell) {
  if (!is_prime(ell))
    throw std::invalid_argument("elliptic_ap: ell must be prime");
  if (ell > 10'000'000)
    throw std::invalid_argument("elliptic_ap: ell exceeds 10^7");
  if (curve_discriminant(E) % ell == 0)
    throw std::domain_error("elliptic_ap: bad reduction at " + std::to_string(ell));
  auto [a1, a2, a3, a4, a6] = E;
  if (ell == 2) {
    i64 count = 1;
    for (i64 x = 0; x < 2; ++x)
      for (i64 y = 0; y < 2; ++y) {
        i64 lhs = y * y + a1 * x * y + a3 * y;
        i64 rhs = x * x * x + a2 * x * x + a4 * x + a6;
        if (mod(lhs - rhs, 2) == 0)
          ++count;
      }
    return ell + 1 - count;
  }
  // (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
  i64 b2 = mod(a1 * a1 + 4 * a2, ell);
  i64 b4 = mod(2 * a4 + a1 * a3, ell);
  i64 b6 = mod(a3 * a3 + 4 * a6, ell);
  std::vector<signed char> chi(static_cast<std::size_t>(ell), -1);
  chi[0] = 0;
  for (i64 y = 1; y <= ell / 2; ++y)
    chi[static_cast<std::size_t>(y * y % ell)] = 1;
  i64 s = 0;
  for (i64 x = 0; x < ell; ++x) {
    i64 v = (4 * x % ell * x % ell * x + b2 * x % ell * x + 2 * b4 * x + b6) % ell;
    s += chi[static_cast<std::size_t>(v)];
  }
  i64 ap = -s;
  if (static_cast<double>(ap) * ap > 4.0 * ell)
    throw std::logic_error("elliptic_ap: Hasse bound violated");
  return ap;
}

NewformTable parse_qexpansion(const std::string &text, const std::string &origin) {
  std::istringstream in(text);
  std::string line;
  auto fail = [&](std::size_t lineno, const std::string &msg) {
    throw std::runtime_error(origin + ":" + std::to_string(lineno) + ": " + msg);
  };
  std::size_t lineno = 0;
  std::string label;
  i64 level = 0;
  int weight = 0, eps = 0;
  bool have_header = false;
  std::vector<std::string> values{""};
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;)
      tok.push_back(t);
    if (tok.empty())
      continue;
    if (!have_header) {
      if (tok.size() != 8)
        fail(lineno, "header must be 'label <s> level <R> weight <2k> eps <+-1>'");
      bool seen[4] = {false, false, false, false};
      for (std::size_t i = 0; i < 8; i += 2) {
        const std::string &k = tok[i], &v = tok[i + 1];
        try {
          if (k == "label") {
            label = v;
            seen[0] = true;
          } else if (k == "level") {
            std::size_t pos;
            level = std::stoll(v, &pos);
            if (pos != v.size())
              throw std::invalid_argument(v);
            seen[1] = true;
          } else if (k == "weight") {
            std::size_t pos;
            weight = std::stoi(v, &pos);
            if (pos != v.size())
              throw std::invalid_argument(v);
            seen[2] = true;
          } else if (k == "eps") {
            if (v == "+1" || v == "1")
              eps = 1;
            else if (v == "-1")
              eps = -1;
            else
              throw std::invalid_argument(v);
            seen[3] = true;
          } else {
            fail(lineno, "unknown header key '" + k + "'");
          }
        } catch (const std::logic_error &) {
          fail(lineno, "bad header value '" + v + "' for key '" + k + "'");
        }
      }
      if (!(seen[0] && seen[1] && seen[2] && seen[3]))
        fail(lineno, "header is missing a key");
      have_header = true;
      continue;
    }
    if (tok.size() != 2)
      fail(lineno, "expected '<n> <a_n>'");
    i128 n;
    if (!parse_i128(tok[0], n) || n != static_cast<i128>(values.size()))
      fail(lineno, "expected index " + std::to_string(values.size()));
    values.push_back(tok[1]);
  }
  if (!have_header)
    fail(lineno, "missing header");
  if (values.size() < 2)
    fail(lineno, "no coefficients");
  std::vector<i128> ints(values.size(), 0);
  bool integral = true;
  for (std::size_t n = 1; n < values.size() && integral; ++n)
    integral = parse_i128(values[n], ints[n]);
  NewformTable f;
  if (integral) {
    f = NewformTable(label, level, weight, eps, std::move(ints));
  } else {
    std::vector<double> reals(values.size(), 0.0);
    for (std::size_t n = 1; n < values.size(); ++n) {
      const char *s = values[n].c_str();
      char *end = nullptr;
      reals[n] = std::strtod(s, &end);
      if (end == s || *end != '\0' || !std::isfinite(reals[n]))
        throw std::runtime_error(origin + ": bad coefficient at n = " +
                                 std::to_string(n));
    }
    f = NewformTable(label, level, weight, eps, std::move(reals));
  }
  f.validate();
  return f;
}

NewformTable load_qexpansion(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open q-expansion file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_qexpansion(ss.str(), path);
}

std::string format_qexpansion(const NewformTable &f) {
  std::ostringstream os;
  os << "label " << f.label() << " level " << f.level() << " weight "
     << f.two_kappa() << " eps " << (f.eps() > 0 ? "+1" : "-1") << "\n";
  os.precision(17);
  for (i64 n = 1; n <= f.size(); ++n) {
    os << n << " ";
    if (f.exact())
      os << i128_to_string(f.a(n));
    else
      os << f.a_real(n);
    os << "\n";
  }
  return os.str();
}

double hecke_value_primepower(double lambda_ell, int chi0_ell, int t) {
  double prev = 1.0, cur = lambda_ell;
  if (t == 0)
    return 1.0;
  for (int k = 2; k <= t; ++k) {
    double next = lambda_ell * cur - chi0_ell * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double hecke_value_primepower(const NewformTable &f, i64 ell, int t) {
  if (!is_prime(ell))
    throw std::invalid_argument("hecke_value_primepower: ell must be prime");
  return hecke_value_primepower(f.lambda(ell), f.chi0(ell), t);
}

LanglandsPair langlands_pair_from_lambda(double lambda_ell) {
  double disc = lambda_ell * lambda_ell - 4.0;
  LanglandsPair lp;
  if (disc <= 0) {
    double im = std::sqrt(-disc) / 2;
    lp.alpha = {lambda_ell / 2, im};
    lp.beta = {lambda_ell / 2, -im};
  } else {
    double r = std::sqrt(disc);
    lp.alpha = {(lambda_ell + r) / 2, 0};
    lp.beta = {(lambda_ell - r) / 2, 0};
  }
  return lp;
}

LanglandsPair langlands_pair(const NewformTable &f, i64 ell) {
  if (f.level() % ell == 0)
    throw std::domain_error("langlands_pair: ell divides the level");
  return langlands_pair_from_lambda(f.lambda(ell));
}

bool in_lf_prime_set(const NewformTable &f, i64 p, i64 ell) {
  if (!is_prime(ell) || ell % p == 0 || f.level() % ell == 0)
    return false;
  if (ell % p != 1 || ell % (p * p) == 1)
    return false;
  if (ell > f.size())
    throw std::out_of_range("in_lf_prime_set: ell beyond coefficient table");
  if (f.exact()) {
    i128 a = f.a(ell);
    if (a == 0)
      return false;
    // lambda = +-2 iff a^2 = 4 ell^{2k-1}
    long double lam = f.lambda(ell);
    if (std::abs(std::abs(lam) - 2.0L) < 1e-12L)
      return false;
    return true;
  }
  double lam = f.lambda(ell);
  return std::abs(lam) > 1e-12 && std::abs(std::abs(lam) - 2.0) > 1e-12;
}

PrimeSetReport lf_prime_set(const NewformTable &f, i64 p, i64 bound) {
  if (bound > f.size())
    throw std::out_of_range("lf_prime_set: bound exceeds coefficient table");
  PrimeSetReport r;
  for (int ell : primes_up_to(static_cast<int>(bound))) {
    ++r.prime_count;
    if (in_lf_prime_set(f, p, ell))
      r.primes.push_back(ell);
  }
  r.density = r.prime_count ? static_cast<double>(r.primes.size()) / r.prime_count : 0;
  return r;
}

SatoTateReport satotate_sum(const NewformTable &f, i64 z) {
  if (z > f.size())
    throw std::out_of_range("satotate_sum: z exceeds coefficient table");
  SatoTateReport r;
  CompensatedSum<double> s, m;
  for (int ell : primes_up_to(static_cast<int>(z))) {
    double a = std::abs(f.lambda(ell));
    s.add(a / ell);
    m.add(a);
    ++r.count;
  }
  r.sum = s.value();
  r.mean = r.count ? m.value() / r.count : 0;
  const double c = 16.0 / (3.0 * boost::math::constants::pi<double>());
  r.loglog_offset = z > 2 ? 2 * r.sum - c * std::log(std::log(double(z))) : 2 * r.sum;
  return r;
}

} // namespace twist
