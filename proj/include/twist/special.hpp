#pragma once

#include <cmath>
#include <complex>

namespace twist {

// log Gamma(z). Analytic branch for Re z >= 1/2 (Stirling series after upward
// recursion); reflection elsewhere with the imaginary part reduced to (-pi, pi].
std::complex<double> complex_log_gamma(std::complex<double> z);

// Riemann zeta by Euler-Maclaurin, s != 1.
std::complex<double> riemann_zeta(std::complex<double> s);

// J_nu(x) for x >= 0.
double bessel_j(double nu, double x);

// Regularized upper incomplete gamma Q(k, x) = Gamma(k, x)/Gamma(k), integer k >= 1.
template <typename Real> Real gamma_q_int(int k, const Real &x) {
  using std::exp;
  Real term = 1, sum = 1;
  for (int j = 1; j < k; ++j) {
    term *= x / Real(j);
    sum += term;
  }
  return exp(-x) * sum;
}

} // namespace twist
