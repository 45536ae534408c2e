#include "twist/cyclotomic.hpp"

#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace twist {

CyclotomicElement::CyclotomicElement(i64 m) : m_(m) {
  if (m < 1)
    throw std::invalid_argument("CyclotomicElement: order must be >= 1");
  c_.assign(static_cast<std::size_t>(m), 0);
}

CyclotomicElement CyclotomicElement::integer(i64 m, i64 c) {
  CyclotomicElement e(m);
  e.c_[0] = c;
  return e;
}

CyclotomicElement CyclotomicElement::root(i64 m, i64 k, i64 c) {
  CyclotomicElement e(m);
  e.c_[static_cast<std::size_t>(mod(k, m))] = c;
  return e;
}

void CyclotomicElement::check_compatible(const CyclotomicElement &o) const {
  if (o.m_ != m_)
    throw std::invalid_argument("CyclotomicElement: order mismatch");
}

CyclotomicElement &CyclotomicElement::operator+=(const CyclotomicElement &o) {
  check_compatible(o);
  for (std::size_t k = 0; k < c_.size(); ++k)
    c_[k] += o.c_[k];
  return *this;
}

CyclotomicElement &CyclotomicElement::operator-=(const CyclotomicElement &o) {
  check_compatible(o);
  for (std::size_t k = 0; k < c_.size(); ++k)
    c_[k] -= o.c_[k];
  return *this;
}

CyclotomicElement &CyclotomicElement::operator*=(i64 s) {
  for (auto &c : c_)
    c *= s;
  return *this;
}

CyclotomicElement operator*(const CyclotomicElement &a,
                            const CyclotomicElement &b) {
  a.check_compatible(b);
  CyclotomicElement r(a.m_);
  for (i64 i = 0; i < a.m_; ++i) {
    i64 x = a.c_[static_cast<std::size_t>(i)];
    if (!x)
      continue;
    for (i64 j = 0; j < a.m_; ++j) {
      i64 y = b.c_[static_cast<std::size_t>(j)];
      if (y)
        r.c_[static_cast<std::size_t>((i + j) % a.m_)] += x * y;
    }
  }
  return r;
}

CyclotomicElement CyclotomicElement::galois(i64 a) const {
  if (gcd(a, m_) != 1)
    throw std::invalid_argument("galois: exponent not a unit");
  CyclotomicElement r(m_);
  for (i64 k = 0; k < m_; ++k)
    r.c_[static_cast<std::size_t>(mulmod(k, a, m_))] +=
        c_[static_cast<std::size_t>(k)];
  return r;
}

CyclotomicElement CyclotomicElement::lift(i64 M) const {
  if (M % m_)
    throw std::invalid_argument("lift: target order not a multiple");
  CyclotomicElement r(M);
  i64 s = M / m_;
  for (i64 k = 0; k < m_; ++k)
    r.c_[static_cast<std::size_t>(k * s)] = c_[static_cast<std::size_t>(k)];
  return r;
}

const std::vector<i64> &cyclotomic_polynomial(i64 m) {
  static std::recursive_mutex mu;
  static std::map<i64, std::vector<i64>> cache;
  std::lock_guard<std::recursive_mutex> lock(mu);
  auto it = cache.find(m);
  if (it != cache.end())
    return it->second;
  // x^m - 1 divided by Phi_d for every proper divisor d.
  std::vector<i64> num(static_cast<std::size_t>(m) + 1, 0);
  num[0] = -1;
  num[static_cast<std::size_t>(m)] = 1;
  std::vector<std::vector<i64>> factors;
  for (i64 d : divisors(m)) {
    if (d == m)
      continue;
    factors.push_back(cyclotomic_polynomial(d));
  }
  for (const auto &den : factors) {
    std::size_t dn = den.size() - 1;
    std::vector<i64> quo(num.size() - dn, 0);
    for (std::size_t i = num.size() - 1; i + 1 > dn; --i) {
      i64 c = num[i];
      quo[i - dn] = c;
      if (c)
        for (std::size_t k = 0; k <= dn; ++k)
          num[i - dn + k] -= c * den[k];
      if (i == dn)
        break;
    }
    num = quo;
  }
  return cache.emplace(m, num).first->second;
}

CyclotomicElement CyclotomicElement::reduced() const {
  const auto &phi = cyclotomic_polynomial(m_);
  std::size_t deg = phi.size() - 1;
  std::vector<i64> r = c_;
  for (std::size_t i = r.size(); i-- > deg;) {
    i64 c = r[i];
    if (!c)
      continue;
    for (std::size_t k = 0; k <= deg; ++k)
      r[i - deg + k] -= c * phi[k];
  }
  CyclotomicElement out(m_);
  out.c_ = std::move(r);
  return out;
}

bool CyclotomicElement::is_zero() const {
  auto r = reduced();
  for (auto c : r.c_)
    if (c)
      return false;
  return true;
}

bool CyclotomicElement::is_integer(i64 *value) const {
  auto r = reduced();
  for (std::size_t k = 1; k < r.c_.size(); ++k)
    if (r.c_[k])
      return false;
  if (value)
    *value = r.c_[0];
  return true;
}

i64 CyclotomicElement::content() const {
  auto r = reduced();
  i64 g = 0;
  for (auto c : r.c_)
    g = gcd(g, c);
  return g;
}

bool operator==(const CyclotomicElement &a, const CyclotomicElement &b) {
  if (a.m_ == b.m_)
    return (a - b).is_zero();
  i64 M = a.m_ / gcd(a.m_, b.m_) * b.m_;
  return (a.lift(M) - b.lift(M)).is_zero();
}

std::string CyclotomicElement::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (i64 k = 0; k < m_; ++k) {
    i64 c = c_[static_cast<std::size_t>(k)];
    if (!c)
      continue;
    if (!first)
      os << (c < 0 ? " - " : " + ");
    else if (c < 0)
      os << "-";
    i64 a = c < 0 ? -c : c;
    if (k == 0)
      os << a;
    else {
      if (a != 1)
        os << a << "*";
      os << "z" << m_ << "^" << k;
    }
    first = false;
  }
  if (first)
    os << "0";
  return os.str();
}

CyclotomicRational::CyclotomicRational(CyclotomicElement n, i64 d)
    : num(std::move(n).reduced()), den(d) {
  if (den == 0)
    throw std::invalid_argument("CyclotomicRational: zero denominator");
  if (den < 0) {
    num *= -1;
    den = -den;
  }
  i64 g = gcd(num.content(), den);
  if (g > 1) {
    CyclotomicElement q(num.order());
    for (i64 k = 0; k < num.order(); ++k)
      q += CyclotomicElement::root(num.order(), k, num.coeff(k) / g);
    num = q;
    den /= g;
  }
  if (num.is_zero())
    den = 1;
}

std::complex<double> CyclotomicRational::embed() const {
  return num.embed<double>() / static_cast<double>(den);
}

std::string CyclotomicRational::to_string() const {
  if (den == 1)
    return num.to_string();
  return "(" + num.to_string() + ")/" + std::to_string(den);
}

bool operator==(const CyclotomicRational &a, const CyclotomicRational &b) {
  return a.num * b.den == b.num * a.den;
}

} // namespace twist
