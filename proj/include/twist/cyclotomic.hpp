#pragma once

#include <complex>
#include <string>
#include <vector>

#include <boost/math/constants/constants.hpp>

#include "twist/arith.hpp"

namespace twist {

// Element sum_k c_k zeta_m^k of Z[mu_m], stored by exponent 0..m-1.
class CyclotomicElement {
public:
  CyclotomicElement() : CyclotomicElement(1) {}
  explicit CyclotomicElement(i64 m);

  static CyclotomicElement integer(i64 m, i64 c);
  static CyclotomicElement root(i64 m, i64 k, i64 c = 1);

  i64 order() const { return m_; }
  const std::vector<i64> &coeffs() const { return c_; }
  i64 coeff(i64 k) const { return c_[static_cast<std::size_t>(mod(k, m_))]; }

  CyclotomicElement &operator+=(const CyclotomicElement &o);
  CyclotomicElement &operator-=(const CyclotomicElement &o);
  CyclotomicElement &operator*=(i64 s);
  friend CyclotomicElement operator+(CyclotomicElement a,
                                     const CyclotomicElement &b) {
    return a += b;
  }
  friend CyclotomicElement operator-(CyclotomicElement a,
                                     const CyclotomicElement &b) {
    return a -= b;
  }
  friend CyclotomicElement operator*(CyclotomicElement a, i64 s) {
    return a *= s;
  }
  friend CyclotomicElement operator*(const CyclotomicElement &a,
                                     const CyclotomicElement &b);

  // zeta -> zeta^a, gcd(a, m) = 1.
  CyclotomicElement galois(i64 a) const;
  // Re-express in Z[mu_M] for m | M.
  CyclotomicElement lift(i64 M) const;
  // Canonical representative modulo the m-th cyclotomic polynomial.
  CyclotomicElement reduced() const;

  bool is_zero() const;
  bool is_integer(i64 *value = nullptr) const;
  // Content of the reduced representative.
  i64 content() const;

  template <typename Real = double> std::complex<Real> embed() const;

  std::string to_string() const;

  friend bool operator==(const CyclotomicElement &a,
                         const CyclotomicElement &b);

private:
  void check_compatible(const CyclotomicElement &o) const;
  i64 m_;
  std::vector<i64> c_;
};

// num / den with den > 0, content of num coprime to den.
struct CyclotomicRational {
  CyclotomicElement num;
  i64 den = 1;

  CyclotomicRational() = default;
  CyclotomicRational(CyclotomicElement n, i64 d);

  bool is_zero() const { return num.is_zero(); }
  std::complex<double> embed() const;
  std::string to_string() const;
  friend bool operator==(const CyclotomicRational &a,
                         const CyclotomicRational &b);
};

// Integer coefficients of the m-th cyclotomic polynomial, lowest degree first.
const std::vector<i64> &cyclotomic_polynomial(i64 m);

template <typename Real> std::complex<Real> CyclotomicElement::embed() const {
  using std::cos;
  using std::sin;
  const Real two_pi = boost::math::constants::two_pi<Real>();
  Real re = 0, im = 0;
  for (i64 k = 0; k < m_; ++k) {
    i64 c = c_[static_cast<std::size_t>(k)];
    if (!c)
      continue;
    Real t = two_pi * Real(k) / Real(m_);
    re += Real(c) * cos(t);
    im += Real(c) * sin(t);
  }
  return {re, im};
}

} // namespace twist
