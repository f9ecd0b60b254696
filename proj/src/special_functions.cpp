#include "satroute/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace satroute {

double binom(int n, int k) {
  if (n < 0) throw std::invalid_argument("binom: n must be nonnegative");
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  if (n <= 60) {
    // Each partial product is i * C(n-k+i, i) <= 30 * C(60, 30) < 2^64.
    std::uint64_t result = 1;
    for (int i = 1; i <= k; ++i) {
      result = result * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    }
    return static_cast<double>(result);
  }
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

double beta_fn(int a, int b) {
  if (a < 1 || b < 1) throw std::invalid_argument("beta_fn: arguments must be positive integers");
  if (a + b <= 20) {
    std::uint64_t fa = 1, fb = 1, fab = 1;
    for (int i = 2; i < a; ++i) fa *= static_cast<std::uint64_t>(i);
    for (int i = 2; i < b; ++i) fb *= static_cast<std::uint64_t>(i);
    for (int i = 2; i < a + b; ++i) fab *= static_cast<std::uint64_t>(i);
    // fa * fb <= (a+b-2)! stays below 2^64 in this range.
    return static_cast<double>(fa * fb) / static_cast<double>(fab);
  }
  if (a + b - 1 <= 60) return 1.0 / (static_cast<double>(a) * binom(a + b - 1, a));
  return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

double reg_inc_beta(double v, int a, int b) {
  if (a < 1 || b < 1) throw std::invalid_argument("reg_inc_beta: a and b must be positive integers");
  if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("reg_inc_beta: v must lie in [0, 1]");
  if (v == 0.0) return 0.0;
  if (v == 1.0) return 1.0;

  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(b));
  double term = std::pow(v, a);
  const double q = 1.0 - v;
  for (int k = 0; k < b; ++k) {
    terms.push_back(term);
    term *= q * static_cast<double>(k + a) / static_cast<double>(k + 1);
  }
  std::sort(terms.begin(), terms.end());
  double sum = 0.0;
  for (double t : terms) sum += t;
  return std::fmin(1.0, sum);
}

}  // namespace satroute
