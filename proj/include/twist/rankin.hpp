#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "twist/newforms.hpp"

namespace twist {

using cplx = std::complex<double>;

// Smoothing e^{-x} Q(x) for Dirichlet series. The exponential kernel is Q = 1;
// the sharp kernel's Mellin transform vanishes at w = -1/2 and cancels the
// Gamma poles at w = -1, -2, -3, so at s = 3/2 neither the pole of
// L(s, f x f) nor the first trivial terms leak into the smoothed value.
enum class SmoothKernel { exponential, sharp };
double smooth_kernel(SmoothKernel k, double x);

struct RsPartial {
  cplx value;
  cplx delta; // value(X) - value(X/2)
  double X = 0;
};

// zeta(2s) sum_n lambda_f(n) lambda_g(n) n^{-s} e^{-n/X}.
RsPartial rs_partial(const NewformTable &f, const NewformTable &g, cplx s,
                     double X, SmoothKernel k = SmoothKernel::exponential);

struct Sym2Residue {
  double value = 0;
  std::vector<double> X;
  std::vector<double> raw;         // smoothed values at each X
  std::vector<double> extrapolants; // Richardson pairs (X_i, X_{i+1})
  double rel_spread = 0;
};

// L(1, sym^2 f) from zeta(2) sum lambda(n^2)/n e^{-n/X} with the 1/X error
// removed by Richardson extrapolation. Empty X picks {N/240, N/120, N/60}
// from the table length.
Sym2Residue sym2_residue(const NewformTable &f, std::vector<double> X = {});

// Second route: zeta(2) [S(2X) - S(X)]/log 2 with
// S(X) = sum lambda(n)^2/n e^{-n/X}.
double sym2_residue_slope(const NewformTable &f, double X);

// L_ell(s, f x g) = prod_{i,j} (1 - alpha_i alpha'_j ell^{-s})^{-1}.
cplx local_rs_factor(double lambda_f, double lambda_g, i64 ell, cplx s);
// zeta_ell(s) = (1 - ell^{-s})^{-1}.
cplx local_zeta(i64 ell, cplx s);

enum class LocalBranch { generic, degenerate };

struct LocalFactorValue {
  i64 ell = 0;
  int t = 0;
  cplx value;
  LocalBranch branch = LocalBranch::generic;
};

// A_{ell^t}(f, g; s) from the characteristic-root solution of the Hecke
// recurrence; lambda_f = +-2 takes the repeated-root branch.
LocalFactorValue A_prime_power_closed(double lambda_f, double lambda_g, i64 ell,
                                      int t, cplx s);
// sum_{r <= r_max} lambda_f(ell^{t+r}) lambda_g(ell^r) ell^{-rs}.
cplx A_prime_power_brute(double lambda_f, double lambda_g, i64 ell, int t,
                         cplx s, int r_max = 60);

cplx A_l_closed(const NewformTable &f, const NewformTable &g, i64 l, cplx s,
                std::vector<LocalFactorValue> *parts = nullptr);
cplx A_l_brute(const NewformTable &f, const NewformTable &g, i64 l, cplx s,
               int r_max = 60);

// D^(p)(f, g, s; l1, l2) = A_{l1}(f,g;s) A_{l2}(g,f;s) L^{(p l1 l2)}(s, f x g)
//                           / zeta^{(p l1 l2)}(2s),  Re s > 1.
cplx D_assembled(const NewformTable &f, const NewformTable &g, i64 p, i64 l1,
                 i64 l2, cplx s, double X, SmoothKernel k = SmoothKernel::sharp);
// sum_{(n,p)=1} lambda_f(n l1) lambda_g(n l2) n^{-s} phi(n/X).
cplx D_direct(const NewformTable &f, const NewformTable &g, i64 p, i64 l1,
              i64 l2, cplx s, double X, SmoothKernel k = SmoothKernel::sharp);

struct MainTermSpec {
  const NewformTable *f = nullptr;
  const NewformTable *g = nullptr;
  i64 p = 3;
  int h = 2;
  i64 l1 = 1;
  i64 l2 = 1;
  void validate() const;
};

// P(X) = slope X + constant. For f = g the constant is FITTED (absent until
// supplied by a regression).
struct Polynomial1 {
  double slope = 0;
  double constant = 0;
  bool constant_fitted = false;
};

struct MainTermResult {
  bool same_form = false;
  Polynomial1 P12; // P_{f,g,l1,l2}
  Polynomial1 P21; // P_{f,g,l2,l1}
  std::map<std::string, double> components;

  double slope() const { return P12.slope + P21.slope; }
  // MT(log q), using the fitted constant when present.
  double value(double logq) const;
};

// at_one: L(1, sym^2 f) (naive, i.e. res_{s=1} L(s, f x f)) when f = g,
// L(1, f x g) (naive) otherwise.
MainTermResult main_term(const MainTermSpec &spec, double at_one);

} // namespace twist
