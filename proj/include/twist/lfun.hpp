#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "twist/characters.hpp"
#include "twist/newforms.hpp"

namespace twist {

using Real50 = boost::multiprecision::cpp_bin_float_50;
using Real100 = boost::multiprecision::cpp_bin_float_100;

// L_inf(s) = Gamma_C(s + shift), shift = (2 kappa - 1)/2.
struct GammaFactorSpec {
  int two_kappa = 2;
  int parity = 1;
  double shift() const { return (two_kappa - 1) / 2.0; }
};

GammaFactorSpec gamma_spec(const NewformTable &f, int parity = 1);

enum class LMethod { single_afe, product_afe };

struct LValueRecord {
  std::complex<double> value;
  LMethod method = LMethod::single_afe;
  i64 terms_used = 0;
  double err_estimate = 0;
};

// Weight of the product approximate functional equation,
// W(y) = (1/2 pi i) int_(2) G_f(u) G_g(u) e^{u^2} y^{-u} du/u with
// G(u) = (2 pi)^{-u} Gamma(1/2 + u + shift)/Gamma(1/2 + shift).
// For y < 1 the line is moved to Re u = -1/2 and the residue at 0 added.
class AfeWeight {
public:
  AfeWeight(GammaFactorSpec f, GammaFactorSpec g, double step = 0.05,
            double tmax = 12.0);

  // Interpolated from a log-y table inside [e^-40, e^30], direct outside.
  double operator()(double y) const { return at_log(std::log(y)); }
  double at_log(double logy) const;
  double direct(double y) const;
  // |W(y)| <= min_c C_c y^{-c}, c in {2, 4, 8}; for y >= 1.
  double tail_bound(double y) const;
  double step() const { return step_; }

private:
  double line_integral(double c, double logy) const;
  GammaFactorSpec f_, g_;
  double step_, tmax_;
  // G(u) e^{u^2}/u on the nodes of both contours.
  std::vector<std::complex<double>> nodes_lo_, nodes_hi_;
  std::vector<double> tail_c_;
  std::vector<double> table_;
  double log_lo_ = -40, log_hi_ = 30, dlog_ = 0.02;
};

double afe_weight(double y, const GammaFactorSpec &f, const GammaFactorSpec &g,
                  double step = 0.05);

// eps(f x chi) = eps(f) chi(R) G(chi)^2 / q for primitive chi.
std::complex<double> root_number(const NewformTable &f,
                                 const DirichletCharacter &chi);

template <typename Real> struct LValueT {
  std::complex<Real> value;
  std::complex<Real> root_number;
  i64 terms_used = 0;
  Real err_estimate = 0;
};

// Single-twist AFE with kernel V(y) = Gamma(kappa, 2 pi y)/Gamma(kappa) and
// split parameter X. chi == nullptr means the trivial character mod 1.
// cutoff_scale > 1 lengthens both sums beyond the tolerance cutoff.
template <typename Real>
LValueT<Real> lvalue_single_t(const NewformTable &f,
                              const DirichletCharacter *chi, double X = 1.0,
                              double cutoff_scale = 1.0);

extern template LValueT<double> lvalue_single_t<double>(
    const NewformTable &, const DirichletCharacter *, double, double);
extern template LValueT<Real50> lvalue_single_t<Real50>(
    const NewformTable &, const DirichletCharacter *, double, double);
extern template LValueT<Real100> lvalue_single_t<Real100>(
    const NewformTable &, const DirichletCharacter *, double, double);

LValueRecord lvalue_single(const NewformTable &f, const DirichletCharacter &chi,
                           double X = 1.0);
LValueRecord lvalue_trivial(const NewformTable &f);

// Coefficient count needed by lvalue_single at this conductor.
i64 lvalue_required_terms(const NewformTable &f, i64 q, double X = 1.0,
                          double cutoff_scale = 1.0);

// Central values for the characters chi^a, a in exps, sharing one binned pass
// over the coefficients.
std::vector<LValueRecord> orbit_lvalues(const NewformTable &f,
                                        const DirichletCharacter &chi,
                                        const std::vector<i64> &exps);

// L(1/2, f x chi) conj L(1/2, g x chi) by the product AFE.
LValueRecord lvalue_pair_product(const NewformTable &f, const NewformTable &g,
                                 const DirichletCharacter &chi,
                                 const AfeWeight *weight = nullptr);

struct VoronoiResult {
  std::complex<double> lhs;
  std::complex<double> rhs;
  double discrepancy = 0;
  i64 terms_lhs = 0;
  i64 terms_rhs = 0;
};

// Smooth compactly supported window on (0, inf).
using Window = std::function<double(double)>;

// Standard bump supported on [lo, hi].
Window bump_window(double lo = 0.5, double hi = 2.5);

// Hankel-type transform 2 pi i^{2 kappa} int W(x) J_{2kappa-1}(4 pi sqrt(xy)) dx
// for a window supported in [lo, hi].
double bessel_transform(const Window &w, double lo, double hi, int two_kappa,
                        double y, int nodes = 400);

VoronoiResult voronoi_check(const NewformTable &f, i64 a, i64 q, double N,
                            const Window &w, double lo = 0.5, double hi = 2.5);

} // namespace twist
