#include "twist/special.hpp"

#include <stdexcept>

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/bessel.hpp>

namespace twist {

namespace {

constexpr double kPi = boost::math::constants::pi<double>();

// B_{2k} / (2k (2k-1)), k = 1..10
constexpr double kStirling[10] = {
    1.0 / 12.0,          -1.0 / 360.0,       1.0 / 1260.0,
    -1.0 / 1680.0,       1.0 / 1188.0,       -691.0 / 360360.0,
    1.0 / 156.0,         -3617.0 / 122400.0, 43867.0 / 244188.0,
    -174611.0 / 125400.0};

// B_{2k} / (2k)!, k = 1..8
constexpr double kEulerMaclaurin[8] = {
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
    -3617.0 / 10670622842880000.0};

std::complex<double> log_gamma_right(std::complex<double> z) {
  std::complex<double> shift = 0;
  while (z.real() < 15.0 || std::abs(z) < 15.0) {
    shift += std::log(z);
    z += 1.0;
    if (z.real() >= 15.0 && std::abs(z) >= 15.0)
      break;
  }
  std::complex<double> r =
      (z - 0.5) * std::log(z) - z + 0.5 * std::log(2 * kPi);
  std::complex<double> zi = 1.0 / z, z2 = zi * zi, pw = zi;
  for (double c : kStirling) {
    r += c * pw;
    pw *= z2;
  }
  return r - shift;
}

} // namespace

std::complex<double> complex_log_gamma(std::complex<double> z) {
  if (z.imag() == 0 && z.real() <= 0 && z.real() == std::floor(z.real()))
    throw std::domain_error("complex_log_gamma: pole at non-positive integer");
  if (z.real() >= 0.5)
    return log_gamma_right(z);
  std::complex<double> r =
      std::log(kPi) - std::log(std::sin(kPi * z)) - log_gamma_right(1.0 - z);
  double im = std::remainder(r.imag(), 2 * kPi);
  if (im <= -kPi)
    im += 2 * kPi;
  return {r.real(), im};
}

std::complex<double> riemann_zeta(std::complex<double> s) {
  if (s == std::complex<double>(1.0, 0.0))
    throw std::domain_error("riemann_zeta: pole at s = 1");
  if (s.real() < 0.5)
    throw std::domain_error("riemann_zeta: Re s < 1/2 not supported");
  const int N = 30;
  std::complex<double> sum = 0;
  for (int n = 1; n < N; ++n)
    sum += std::pow(double(n), -s);
  std::complex<double> Nc(N, 0);
  sum += std::pow(Nc, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(Nc, -s);
  std::complex<double> fall = s;
  std::complex<double> pw = std::pow(Nc, -s - 1.0);
  for (int k = 0; k < 8; ++k) {
    sum += kEulerMaclaurin[k] * fall * pw;
    fall *= (s + double(2 * k + 1)) * (s + double(2 * k + 2));
    pw /= double(N) * N;
  }
  return sum;
}

double bessel_j(double nu, double x) {
  if (x < 0)
    throw std::domain_error("bessel_j: negative argument");
  if (x == 0)
    return nu == 0 ? 1.0 : 0.0;
  return boost::math::cyl_bessel_j(nu, x);
}

} // namespace twist
