#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/eigen.hpp>

#include "twist/lfun.hpp"
#include "twist/newforms.hpp"

namespace twist {

using BigInt = boost::multiprecision::number<
    boost::multiprecision::cpp_int_backend<>, boost::multiprecision::et_off>;
using RealGso = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<250>, boost::multiprecision::et_off>;

template <typename Int>
using IntMatrix = Eigen::Matrix<Int, Eigen::Dynamic, Eigen::Dynamic>;

struct LllStats {
  int swaps = 0;
  int size_reductions = 0;
};

// LLL on the rows of B with Lovasz parameter delta; Gram-Schmidt data is
// kept in Real.
template <typename Int, typename Real = RealGso>
IntMatrix<Int> lll_reduce(IntMatrix<Int> B, double delta = 0.99,
                          LllStats *stats = nullptr);

// Gram-Schmidt squared norms of the rows.
template <typename Int, typename Real = RealGso>
std::vector<Real> gram_schmidt_norms(const IntMatrix<Int> &B);

// True when B satisfies the size and Lovasz conditions.
template <typename Int, typename Real = RealGso>
bool is_lll_reduced(const IntMatrix<Int> &B, double delta = 0.99);

enum class RecognitionStatus { recognized, rejected };

struct RecognitionResult {
  RecognitionStatus status = RecognitionStatus::rejected;
  // x = (sum_k coeffs[k] basis_k) / denominator.
  std::vector<BigInt> coeffs;
  BigInt denominator = 1;
  std::vector<std::string> basis_labels;
  double residual = 0;
  double tolerance = 0;
  BigInt height = 0;
  BigInt height_bound = 0;
  int digits = 0;
  bool stable = false;
  std::string note;
  // recognize_algebraic only: integer polynomial, constant term first.
  std::vector<BigInt> polynomial;

  bool recognized() const { return status == RecognitionStatus::recognized; }
  std::string candidate_string() const;
  std::string polynomial_string() const;
};

struct RecognitionOptions {
  int digits = 40;              // scale 10^digits for the first pass
  double residual_scale = 1e-8; // relative residual bar
};

// Integer polynomial of degree <= degree with a root at x.
RecognitionResult recognize_algebraic(const Real100 &x, int degree,
                                      const BigInt &height_bound,
                                      const RecognitionOptions &opt = {});

// x as a rational combination of 1, 2cos(2 pi k/m), 1 <= k < phi(m)/2.
// `recheck` is x recomputed at higher working precision; without it the
// second pass reuses x.
RecognitionResult recognize_real_cyclotomic(const Real100 &x, i64 m,
                                            const BigInt &height_bound,
                                            const std::optional<Real100> &recheck = {},
                                            const RecognitionOptions &opt = {});

// Value of a recognized real-cyclotomic element under zeta -> zeta^a.
Real100 evaluate_cyclotomic_candidate(const RecognitionResult &r, i64 m, i64 a);

struct Rational {
  BigInt num = 0;
  BigInt den = 1;
  friend bool operator==(const Rational &a, const Rational &b) {
    return a.num == b.num && a.den == b.den;
  }
  std::string to_string() const;
};

struct RationalityResult {
  RecognitionStatus status = RecognitionStatus::rejected;
  Rational value;
  double residual = 0;
  double tolerance = 0;
  bool stable = false;
  std::string note;
  bool recognized() const { return status == RecognitionStatus::recognized; }
};

struct Recheck {
  Real100 value;
  double accuracy = 0; // absolute
};

// Continued-fraction recognition: smallest denominator <= bound within
// 1e-8 max(1, |x|). Stability: the candidate must survive the tighter of
// a 10x smaller tolerance (no recheck) or the recheck value's accuracy.
RationalityResult rationality_check(const std::complex<Real100> &value,
                                    const BigInt &denominator_bound,
                                    const std::optional<Recheck> &recheck = {});

struct LadderStep {
  std::string precision;
  double cutoff_scale = 1;
  std::string value;
  double err_estimate = 0;
};

struct GenerationCertificate {
  std::string form;
  i64 p = 3;
  int h = 2;
  i64 m = 3; // real cyclotomic field Q(mu_m)^+
  i64 character_index = 0;
  std::string proxy_definition;
  std::vector<LadderStep> ladder;
  Real100 r;
  RecognitionResult field_recognition;
  RationalityResult rational_recognition;
  bool rational_rejected = false;
  // Shimura consistency: orbit values against Galois conjugates.
  double conjugate_max_error = 0;
  bool conjugates_match = false;
  // Tr r over the orbit, recognized as a rational.
  RationalityResult trace_recognition;
  bool trace_consistent = false;
  bool passed = false;
};

GenerationCertificate certify_generation(const NewformTable &f, i64 p, int h,
                                         const BigInt &height_bound = 1000000);

extern template IntMatrix<BigInt> lll_reduce<BigInt, RealGso>(IntMatrix<BigInt>,
                                                              double, LllStats *);
extern template IntMatrix<i64> lll_reduce<i64, RealGso>(IntMatrix<i64>, double,
                                                        LllStats *);
extern template bool is_lll_reduced<BigInt, RealGso>(const IntMatrix<BigInt> &,
                                                     double);
extern template bool is_lll_reduced<i64, RealGso>(const IntMatrix<i64> &, double);
extern template std::vector<RealGso>
gram_schmidt_norms<BigInt, RealGso>(const IntMatrix<BigInt> &);
extern template std::vector<RealGso>
gram_schmidt_norms<i64, RealGso>(const IntMatrix<i64> &);

} // namespace twist
