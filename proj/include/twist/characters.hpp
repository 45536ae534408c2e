#pragma once

#include <complex>
#include <memory>
#include <utility>
#include <vector>

#include <boost/math/constants/constants.hpp>

#include "twist/arith.hpp"
#include "twist/cyclotomic.hpp"

namespace twist {

// Discrete logarithm table for (Z/p^h)^x against a fixed primitive root.
class CharacterTable {
public:
  CharacterTable(i64 p, int h);

  i64 p() const { return p_; }
  int h() const { return h_; }
  i64 q() const { return q_; }
  i64 phi() const { return phi_; }
  i64 g() const { return g_; }

  // Exponent in [0, phi) with g^k = n mod q, or -1 when p | n.
  i64 dlog(i64 n) const { return dlog_[static_cast<std::size_t>(mod(n, q_))]; }
  i64 power(i64 k) const { return powmod(g_, static_cast<u64>(mod(k, phi_)), q_); }

private:
  i64 p_;
  int h_;
  i64 q_;
  i64 phi_;
  i64 g_;
  std::vector<std::int32_t> dlog_;
};

std::shared_ptr<const CharacterTable> build_character_table(i64 p, int h);

// chi_j(g^k) = e(jk/phi).
class DirichletCharacter {
public:
  DirichletCharacter(std::shared_ptr<const CharacterTable> table, i64 j);

  const CharacterTable &table() const { return *table_; }
  std::shared_ptr<const CharacterTable> table_ptr() const { return table_; }
  i64 index() const { return j_; }
  i64 modulus() const { return table_->q(); }

  i64 order() const;
  i64 conductor() const;
  bool is_primitive() const { return conductor() == table_->q(); }
  bool is_wild() const;
  bool is_even() const;
  bool is_trivial() const { return j_ == 0; }

  DirichletCharacter conj() const;
  DirichletCharacter pow(i64 a) const;

  // chi(n) = e(k/phi) with k returned, or -1 when p | n.
  i64 exponent(i64 n) const;
  CyclotomicElement evaluate_exact(i64 n) const;
  template <typename Real = double> std::complex<Real> evaluate(i64 n) const;
  std::complex<double> evaluate_complex(i64 n) const { return evaluate<double>(n); }

  // For wild chi: chi(n) = zeta_{p^{h-1}}^k, k returned (or -1 when p | n).
  i64 wild_exponent(i64 n) const;

private:
  std::shared_ptr<const CharacterTable> table_;
  i64 j_;
};

std::vector<DirichletCharacter>
wild_characters(const std::shared_ptr<const CharacterTable> &table);

// Gal(Q(chi)/Q)-orbit of a wild character, ordered by ascending exponent a.
std::vector<DirichletCharacter> galois_orbit(const DirichletCharacter &chi);

template <typename Real = double>
std::complex<Real> gauss_sum(const DirichletCharacter &chi);

std::pair<i64, i64> teichmuller_decompose(i64 n, i64 p, int h);

// Base field F modelled as the fixed field in Q(mu_{p^s}) of the subgroup of
// Teichmuller roots of order dividing tame_order; s = 0 gives F = Q.
struct GaloisAverageContext {
  i64 p = 3;
  int s = 0;
  i64 tame_order = 1;
  int h0 = 1;
  i64 degree = 1;

  static GaloisAverageContext rational(i64 p);
  static GaloisAverageContext cyclotomic(i64 p, int s, i64 tame_order = 1);

  // Residues a mod p^k (k >= s) whose action zeta -> zeta^a fixes F.
  std::vector<i64> fixing_group(int k) const;
  // Gal(F(mu_p)/F) acting on mu_{p^h0}.
  std::vector<i64> tau_exponents() const;
};

CyclotomicRational galois_average(const DirichletCharacter &chi, i64 n,
                                  const GaloisAverageContext &ctx);
CyclotomicRational galois_average_brute(const DirichletCharacter &chi, i64 n,
                                        const GaloisAverageContext &ctx);

// Tr from Q(mu_{p^k}) (k = order exponent of x) down to Q(mu_{p^r}).
CyclotomicElement subfield_trace(const CyclotomicElement &x, i64 p, int r);

template <typename Real>
std::complex<Real> DirichletCharacter::evaluate(i64 n) const {
  i64 k = exponent(n);
  if (k < 0)
    return {Real(0), Real(0)};
  using std::cos;
  using std::sin;
  Real t = boost::math::constants::two_pi<Real>() * Real(k) /
           Real(table_->phi());
  return {Real(cos(t)), Real(sin(t))};
}

template <typename Real>
std::complex<Real> gauss_sum(const DirichletCharacter &chi) {
  const auto &t = chi.table();
  if (!chi.is_primitive())
    throw std::domain_error("gauss_sum: character is not primitive");
  using std::cos;
  using std::sin;
  const Real two_pi = boost::math::constants::two_pi<Real>();
  CompensatedSum<Real> re, im;
  i64 q = t.q();
  for (i64 n = 1; n < q; ++n) {
    i64 k = chi.exponent(n);
    if (k < 0)
      continue;
    // e(k/phi + n/q) reduced to one fraction over phi*q.
    i64 den = t.phi() * q;
    i64 num = mod(k * q + n * t.phi(), den);
    Real a = two_pi * Real(num) / Real(den);
    re.add(Real(cos(a)));
    im.add(Real(sin(a)));
  }
  return {re.value(), im.value()};
}

} // namespace twist
