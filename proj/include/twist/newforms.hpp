#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "twist/arith.hpp"

namespace twist {

// Fourier coefficients a_f(1..N) of a newform with trivial nebentypus.
class NewformTable {
public:
  NewformTable() = default;
  NewformTable(std::string label, i64 level, int two_kappa, int eps,
               std::vector<i128> a);
  // Embedded-real coefficients (one embedding of a non-rational form).
  NewformTable(std::string label, i64 level, int two_kappa, int eps,
               std::vector<double> a_real);

  const std::string &label() const { return label_; }
  i64 level() const { return R_; }
  int two_kappa() const { return two_kappa_; }
  int kappa() const { return two_kappa_ / 2; }
  int eps() const { return eps_; }
  i64 size() const { return N_; }
  bool exact() const { return !a_.empty(); }

  i128 a(i64 n) const { return a_[static_cast<std::size_t>(n)]; }
  double a_real(i64 n) const;
  double lambda(i64 n) const { return lambda_[static_cast<std::size_t>(n)]; }
  const std::vector<double> &lambdas() const { return lambda_; }
  const std::vector<i128> &coefficients() const { return a_; }

  int chi0(i64 n) const { return gcd(n, R_) == 1 ? 1 : 0; }

  // Copy restricted to n <= N.
  NewformTable truncated(i64 N) const;

  // Invariant checks; return the first offending n or 0.
  i64 first_multiplicativity_violation(i64 limit) const;
  i64 first_deligne_violation() const;
  void validate() const;

private:
  void fill_lambda();
  std::string label_;
  i64 R_ = 1;
  int two_kappa_ = 2;
  int eps_ = 1;
  i64 N_ = 0;
  std::vector<i128> a_;
  std::vector<double> a_real_;
  std::vector<double> lambda_;
};

enum class BuiltinForm { delta, level11 };

BuiltinForm parse_builtin(const std::string &name);
NewformTable eta_product_coefficients(BuiltinForm form, i64 N);

// Weierstrass coefficients [a1, a2, a3, a4, a6].
using Weierstrass = std::array<i64, 5>;
inline constexpr Weierstrass kCurve11a{0, -1, 1, -10, -20};

i64 curve_discriminant(const Weierstrass &E);
i64 elliptic_ap(const Weierstrass &E, i64 ell);

NewformTable load_qexpansion(const std::string &path);
NewformTable parse_qexpansion(const std::string &text,
                              const std::string &origin = "<memory>");
std::string format_qexpansion(const NewformTable &f);

// lambda_f(ell^t) by the Hecke recursion.
double hecke_value_primepower(const NewformTable &f, i64 ell, int t);
double hecke_value_primepower(double lambda_ell, int chi0_ell, int t);

struct LanglandsPair {
  std::complex<double> alpha;
  std::complex<double> beta;
};

LanglandsPair langlands_pair(const NewformTable &f, i64 ell);
LanglandsPair langlands_pair_from_lambda(double lambda_ell);

struct PrimeSetReport {
  std::vector<i64> primes;
  i64 prime_count = 0;
  double density = 0;
};

PrimeSetReport lf_prime_set(const NewformTable &f, i64 p, i64 bound);
bool in_lf_prime_set(const NewformTable &f, i64 p, i64 ell);

struct SatoTateReport {
  double sum = 0;       // sum_{ell <= z} |lambda(ell)| / ell
  double mean = 0;      // mean_{ell <= z} |lambda(ell)|
  i64 count = 0;
  double loglog_offset = 0; // 2 sum - (16/(3 pi)) log log z
};

SatoTateReport satotate_sum(const NewformTable &f, i64 z);

} // namespace twist
