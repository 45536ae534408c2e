#pragma once

#include <cstddef>
#include <vector>

#include "twist/arith.hpp"

namespace twist {

// Sparse power series: (exponent, coefficient) pairs.
using SparseSeries = std::vector<std::pair<i64, i64>>;

// prod_{n>=1} (1 - x^{step*n}) up to x^N via Euler's pentagonal theorem.
SparseSeries eta_sparse(i64 step, i64 N);

// Jacobi: prod (1 - x^n)^3 = sum (-1)^k (2k+1) x^{k(k+1)/2}.
SparseSeries eta_cubed_sparse(i64 N);

template <typename Int>
std::vector<Int> sparse_times_sparse(const SparseSeries &a, const SparseSeries &b,
                                     std::size_t N);

template <typename Int>
std::vector<Int> dense_times_sparse(const std::vector<Int> &a,
                                    const SparseSeries &b, std::size_t N);

// Product truncated to degree N by number-theoretic transforms over
// `nprimes` word primes and CRT; exact while every |c_k| stays below half the
// product of the primes used (about 1.8e18 for 2 primes, 1.7e36 for 4).
std::vector<i64> ntt_multiply(const std::vector<i64> &a,
                              const std::vector<i64> &b, std::size_t N,
                              int nprimes);
std::vector<i128> ntt_multiply(const std::vector<i128> &a,
                               const std::vector<i128> &b, std::size_t N,
                               int nprimes);

} // namespace twist
