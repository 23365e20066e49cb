#pragma once

// Finite pieces of the Cauchy-product coupling in the temperature equation and
// the weighted-l2 estimate toolkit built on top of them.
//
// Sequences are 1-indexed mathematically and stored 0-indexed: a_k lives at
// a[k - 1]. Entries past the end of a span are zero.

#include <array>
#include <span>

#include "heatstring/errors.hpp"

namespace heatstring {

namespace detail {

template <typename T>
inline T at(std::span<const T> seq, long k) {
  return (k >= 1 && k <= static_cast<long>(seq.size())) ? seq[k - 1] : T{};
}

inline void require_index(long n) {
  if (n < 1) throw DomainError("convolution index n must be >= 1");
}

}  // namespace detail

// sum_{k=1}^{n-1} a_{n-k} b_k
template <typename T>
T conv_cauchy(std::span<const T> a, std::span<const T> b, long n) {
  detail::require_index(n);
  T acc{};
  const long k_hi = std::min<long>(n - 1, static_cast<long>(b.size()));
  for (long k = std::max<long>(1, n - static_cast<long>(a.size())); k <= k_hi; ++k) {
    acc += a[n - k - 1] * b[k - 1];
  }
  return acc;
}

// sum_{l=1}^{L} a_{l+n} * l * b_l
template <typename T>
T conv_tail_left(std::span<const T> a, std::span<const T> b, long n, long terms) {
  detail::require_index(n);
  T acc{};
  const long l_hi = std::min({terms, static_cast<long>(b.size()),
                              static_cast<long>(a.size()) - n});
  for (long l = 1; l <= l_hi; ++l) {
    acc += a[l + n - 1] * static_cast<double>(l) * b[l - 1];
  }
  return acc;
}

// sum_{l=1}^{L} a_l * (l+n) * b_{l+n}
template <typename T>
T conv_tail_right(std::span<const T> a, std::span<const T> b, long n, long terms) {
  detail::require_index(n);
  T acc{};
  const long l_hi = std::min({terms, static_cast<long>(a.size()),
                              static_cast<long>(b.size()) - n});
  for (long l = 1; l <= l_hi; ++l) {
    acc += a[l - 1] * static_cast<double>(l + n) * b[l + n - 1];
  }
  return acc;
}

// Truncation length that makes the tail sums exact for the given spans.
template <typename T>
long full_terms(std::span<const T> a, std::span<const T> b) {
  return static_cast<long>(std::max(a.size(), b.size()));
}

// (sum_{n=1}^{n_terms} n^{2(beta - s)})^{1/2}: the Cauchy-Schwarz constant in
//   sum n^beta |a_n| <= c (sum n^{2s} |a_n|^2)^{1/2}.
// DivergenceError unless s > beta + 1/2.
double weighted_sum_constant(double s, double beta, long n_terms);

// Upper bound for the n_terms -> infinity limit of weighted_sum_constant: a long
// partial sum plus the integral bound on the remaining tail.
double weighted_sum_constant_limit(double s, double beta);

// Constants for the three bilinear estimates on
//   (1/n) sum_{k<n} theta_{n-k} k v_k,
//   (1/n) sum_l theta_{l+n} l v_l,
//   (1/n) sum_l theta_l (l+n) v_{l+n}
// in the n^{2s}-weighted l2 norm, for s in (3/4, 1).
struct BilinearConstants {
  double epsilon = 0.0;       // slack with 2s > 3/2 + eps and s > 1/2 + eps
  double c_cauchy = 0.0;      // weighted-sum constant with beta = 0
  double c_tail_left = 0.0;   // weighted-sum constant with beta = s - 1/2 - eps
  double c_tail_right = 0.0;  // 2^{1-s} times c_tail_left
};

BilinearConstants bilinear_constants(double s);

// Left-hand sides of the three bilinear estimates for time-independent
// sequences (v_n), (theta_n), summed over every n where they can be non-zero.
std::array<double, 3> bilinear_lhs(std::span<const double> v, std::span<const double> theta,
                                   double s);

}  // namespace heatstring
