#pragma once

namespace satroute {

/// Binomial coefficient. Exact (integer arithmetic) for n <= 60, log-gamma
/// beyond. Returns 0 for k < 0 or k > n.
double binom(int n, int k);

/// Beta function B(a, b) for positive integers, (a-1)!(b-1)!/(a+b-1)!.
double beta_fn(int a, int b);

/// Regularized incomplete beta I_v(a, b) for positive integers a, b, via the
/// negative-binomial tail identity
///   I_v(a, b) = sum_{k=0}^{b-1} C(k+a-1, k) (1-v)^k v^a.
double reg_inc_beta(double v, int a, int b);

}  // namespace satroute
