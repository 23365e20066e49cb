#include "heatstring/convolution.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace heatstring {

namespace {

constexpr long kLimitTerms = 200000;

void require_convergent(double s, double beta) {
  if (!(s > beta + 0.5)) {
    throw DivergenceError("weighted l1/l2 constant diverges: need s > beta + 1/2 (s = " +
                          std::to_string(s) + ", beta = " + std::to_string(beta) + ")");
  }
}

}  // namespace

double weighted_sum_constant(double s, double beta, long n_terms) {
  require_convergent(s, beta);
  if (n_terms < 1) throw DomainError("weighted_sum_constant needs n_terms >= 1");
  const double p = 2.0 * (beta - s);
  // Sum smallest terms first.
  double acc = 0.0;
  for (long n = n_terms; n >= 1; --n) acc += std::pow(static_cast<double>(n), p);
  return std::sqrt(acc);
}

double weighted_sum_constant_limit(double s, double beta) {
  const double c = weighted_sum_constant(s, beta, kLimitTerms);
  const double q = 2.0 * (s - beta);  // terms are n^{-q}, q > 1
  const double tail = std::pow(static_cast<double>(kLimitTerms), 1.0 - q) / (q - 1.0);
  return std::sqrt(c * c + tail);
}

BilinearConstants bilinear_constants(double s) {
  if (!(s > 0.75 && s < 1.0)) throw DomainError("bilinear estimates need s in (3/4, 1)");
  BilinearConstants k;
  // Midpoint of the admissible interval 0 < eps < min(2s - 3/2, s - 1/2).
  k.epsilon = 0.5 * std::min(2.0 * s - 1.5, s - 0.5);
  k.c_cauchy = weighted_sum_constant_limit(s, 0.0);
  k.c_tail_left = weighted_sum_constant_limit(s, s - 0.5 - k.epsilon);
  k.c_tail_right = std::pow(2.0, 1.0 - s) * k.c_tail_left;
  return k;
}

std::array<double, 3> bilinear_lhs(std::span<const double> v, std::span<const double> theta,
                                   double s) {
  std::vector<double> kv(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) kv[k] = static_cast<double>(k + 1) * v[k];
  const std::span<const double> kv_span(kv);
  const long terms = full_terms(v, theta);
  const long n_max = static_cast<long>(v.size() + theta.size());

  std::array<double, 3> acc{};
  for (long n = 1; n <= n_max; ++n) {
    const double weight = std::pow(static_cast<double>(n), 2.0 * s);
    const double inv_n = 1.0 / static_cast<double>(n);
    const double c = inv_n * conv_cauchy(theta, kv_span, n);
    const double l = inv_n * conv_tail_left(theta, v, n, terms);
    const double r = inv_n * conv_tail_right(theta, v, n, terms);
    acc[0] += weight * c * c;
    acc[1] += weight * l * l;
    acc[2] += weight * r * r;
  }
  for (double& x : acc) x = std::sqrt(x);
  return acc;
}

}  // namespace heatstring
