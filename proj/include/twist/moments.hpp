#pragma once

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "twist/characters.hpp"
#include "twist/lfun.hpp"
#include "twist/newforms.hpp"
#include "twist/rankin.hpp"

namespace twist {

struct Regression {
  double slope = 0;
  double intercept = 0;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> residuals;
  double max_abs_residual = 0;
};

// Least-squares line y = slope x + intercept.
Regression fit_line(const std::vector<double> &x, const std::vector<double> &y);

struct MomentReport {
  i64 p = 3;
  int h = 2;
  i64 q = 9;
  i64 l1 = 1;
  i64 l2 = 1;
  i64 orbit_size = 0;
  std::complex<double> empirical;
  double err_estimate = 0;
  double mt_slope = 0;
  // MT(log q) with the fitted constant when one is available, else the
  // slope part alone.
  double mt = 0;
  bool mt_constant_fitted = false;
  double discrepancy = 0;
  std::map<std::string, double> components;
};

// The main-term input at s = 1: res L(s, f x f) for f = g, L(1, f x g)
// otherwise, both as naive Dirichlet series.
double main_term_at_one(const NewformTable &f, const NewformTable &g);

// (l1 l2)^{1/2}/[F(chi):F] sum_sigma L(1/2, f x chi^s) conj L(1/2, g x chi^s)
// chi^s(l1 conj(l2)) over the wild orbit of conductor p^h.
MomentReport orbit_moment(const NewformTable &f, const NewformTable &g, i64 p,
                          int h, i64 l1, i64 l2,
                          const GaloisAverageContext &F0, double at_one);

struct MomentSeries {
  std::vector<MomentReport> reports;
  Regression regression; // Re(empirical) against log q
  double mt_slope = 0;
  double fitted_constant = 0;
  double slope_rel_error = 0;
  // max |residual| / |empirical at the largest h|
  double residual_ratio = 0;
};

MomentSeries moment_series(const NewformTable &f, const NewformTable &g, i64 p,
                           const std::vector<int> &hs, i64 l1, i64 l2,
                           const GaloisAverageContext &F0, double at_one);

// Omega_proxy = |G(conj chi_ref) L(1/2, f x chi_ref)|^2 with the trivial
// reference character.
struct PeriodProxy {
  double omega = 0;
  double err_estimate = 0;
  std::string definition;
};
PeriodProxy period_proxy(const NewformTable &f);

struct TraceReport {
  i64 p = 3;
  int h = 2;
  i64 ell = 0;
  int t = 1;
  i64 orbit_size = 0;
  std::complex<double> value;
  double err_estimate = 0;
  double prediction = 0; // c q / Omega times the slope part of MT(log q)
  std::complex<double> chi_ell_t; // chi(ell^t) for the orbit representative
  i64 chi_ell_t_order = 0;
};

// ell^{t/2}/[F(chi):F0] Tr(c |L_f(chi)|^2 chi(ell^t)) with
// |L_f(chi)|^2 = p^h |L(1/2, f x chi)|^2 / Omega. With ell = 1 the character
// weight is dropped (Galois average of |L_f|^2).
TraceReport trace_sum(const NewformTable &f, const GaloisAverageContext &F0,
                      double c, i64 p, int h, i64 ell, int t,
                      const PeriodProxy &omega, double at_one);

struct CongruenceSumSpec {
  i64 q = 9;
  i64 l1 = 1;
  i64 l2 = 1;
  i64 xi = 1;
  i64 d = 1;
  // Weight scale W(mn / (Q^2 sqrt(R R'))); 0 means Q = q.
  i64 weight_modulus = 0;

  bool xi_is_pm_one() const { return mod(xi, q) == 1 || mod(xi, q) == q - 1; }
  // q a power of an odd prime, xi a unit of exact order d dividing p - 1.
  void validate() const;
};

// Fills d from xi.
CongruenceSumSpec make_congruence_spec(i64 q, i64 l1, i64 l2, i64 xi,
                                       i64 weight_modulus = 0);

struct CongruenceSumResult {
  std::complex<double> value;
  double err_estimate = 0;
  i64 support = 0;
  i64 terms = 0;
  bool truncated = false;
  double diagonal = 0; // the excluded l1 m = l2 n part
};

struct CongruenceSumOptions {
  bool exclude_diagonal = true;
  // Sum up to the table length when it is shorter than the |W| < 1e-7
  // support instead of failing.
  bool allow_truncation = false;
  const AfeWeight *weight = nullptr;
};

// sum_{l1 m = xi l2 n mod q, (mn, q) = 1} lambda_f(m) lambda_g(n)/sqrt(mn)
// W(mn/Z).
CongruenceSumResult congruence_sum(const CongruenceSumSpec &spec,
                                   const NewformTable &f, const NewformTable &g,
                                   const CongruenceSumOptions &opt = {});

// sum_{(n,p)=1} lambda_f(l2 n) lambda_g(l1 n)/n W(l1 l2 n^2/Z).
double diagonal_sum(const NewformTable &f, const NewformTable &g, i64 p, int h,
                    i64 l1, i64 l2, const AfeWeight *weight = nullptr);

struct XiClass {
  i64 xi = 1;
  i64 a = 0;
  i64 u = 1; // xi (1 + a p^{h-h0}) mod p^h
};

struct XiDecomposition {
  i64 p = 3;
  int h = 2;
  int h0 = 1;
  std::vector<XiClass> classes;
  bool verified = false;
};

// Units u mod p^h with <u> = 1 mod p^{h-h0}, grouped by (xi, a); verified
// exhaustively against the Teichmuller decomposition.
XiDecomposition xi_decomposition(i64 p, int h, int h0);

struct RouteComparison {
  std::complex<double> direct;
  std::complex<double> congruence_route;
  double discrepancy = 0;
  double err_estimate = 0;
  i64 terms = 0;
};

// Orbit moment rebuilt from the product AFE: binned sums over residues
// u = m conj(n) mod q weighted by the exact Galois averages (diagonal kept).
RouteComparison moment_by_congruence_route(const NewformTable &f,
                                           const NewformTable &g, i64 p, int h,
                                           i64 l1, i64 l2,
                                           const GaloisAverageContext &F0);

} // namespace twist
