#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "satroute/dual.hpp"
#include "satroute/link_dynamics.hpp"

namespace satroute {

/// Upper bound on SCPR throughput from (x, y): prod_{i<x+y} (p + (1-p) mu^{t_c+i}).
double scpr_throughput_bound(const LinkParams& params, int x, int y, std::int64_t t_c);

/// Success probability of one path that is connected at t = 0 and entered at
/// t_c: prod_{i<len} p11(t_c + i).
double scpr_path_success_prob(const LinkParams& params, int path_len, std::int64_t t_c);

// MGF recursion coefficients. Templated so that dual numbers can be pushed
// through them; `t` is the MGF argument.

template <typename Scalar>
Scalar mu_pow_real(double mu, const Scalar& t) {
  using std::exp;
  return exp(t * std::log(mu));
}

template <typename Scalar>
Scalar mgf_coeff_a(const LinkParams& params, const Scalar& t) {
  const Scalar q = mu_pow_real(params.mu(), t);
  const double p = params.p();
  const double e2 = params.epsilon2();
  return (p * (Scalar(1.0) - q) * q + e2 * q * q) / (Scalar(1.0) - (1.0 - e2) * q);
}

template <typename Scalar>
Scalar mgf_coeff_b(const LinkParams& params, std::int64_t t_c, const Scalar& t) {
  const Scalar q = mu_pow_real(params.mu(), t);
  const double scale = (1.0 - params.p()) * mu_power(params.mu(), t_c);
  return scale * q * (Scalar(1.0) - q) / (Scalar(1.0) - (1.0 - params.epsilon2()) * q);
}

/// Raw MGF table R_i(t0 + j) = E[mu^{(t0+j) S_i}] for i in [0, depth] and
/// j in [0, depth - i]. Row i is stored in element i.
template <typename Scalar>
std::vector<std::vector<Scalar>> raw_mgf_table(const LinkParams& params, std::int64_t t_c, int depth,
                                               const Scalar& t0) {
  std::vector<std::vector<Scalar>> rows(static_cast<std::size_t>(depth) + 1);
  rows[0].assign(static_cast<std::size_t>(depth) + 1, Scalar(1.0));
  std::vector<Scalar> a(static_cast<std::size_t>(depth) + 1);
  std::vector<Scalar> b(static_cast<std::size_t>(depth) + 1);
  for (int j = 0; j <= depth; ++j) {
    const Scalar t = t0 + Scalar(static_cast<double>(j));
    a[static_cast<std::size_t>(j)] = mgf_coeff_a(params, t);
    b[static_cast<std::size_t>(j)] = mgf_coeff_b(params, t_c, t);
  }
  for (int i = 1; i <= depth; ++i) {
    const auto& prev = rows[static_cast<std::size_t>(i) - 1];
    auto& row = rows[static_cast<std::size_t>(i)];
    row.resize(static_cast<std::size_t>(depth - i) + 1);
    for (std::size_t j = 0; j < row.size(); ++j) row[j] = a[j] * prev[j] + b[j] * prev[j + 1];
  }
  return rows;
}

/// M_i(t) = E[mu^{t S_i}] / log(mu) tabulated at the integer points the
/// derivative at t = 0 depends on. Requires 0 < mu < 1 - 1e-9.
class MgfEvaluator {
 public:
  MgfEvaluator(const LinkParams& params, std::int64_t t_c, int depth);

  int depth() const noexcept { return depth_; }
  double log_mu() const noexcept { return log_mu_; }

  /// M_i(j) and dM_i/dt at t = j, for 0 <= j <= depth - i.
  double value(int i, int j) const;
  double derivative(int i, int j) const;

  /// E[S_i] = M_i'(0).
  double mean_delay(int i) const { return derivative(i, 0); }

 private:
  int depth_;
  double log_mu_;
  std::vector<std::vector<Dual>> raw_;
};

struct MgfTable {
  /// Entries outside the triangle j <= depth - i are NaN.
  Eigen::ArrayXXd value;
  Eigen::ArrayXXd derivative;
};

MgfTable mgf_table(const MgfEvaluator& evaluator);

/// Lower bound on SCPR mean delay from (x, y): d/dt M_{x+y}(t) at t = 0.
/// Measured from the departure at t_c. mu = 0 uses the closed form.
double scpr_delay_lower_bound(const LinkParams& params, int x, int y, std::int64_t t_c);

/// Same quantity for a single connected-at-0 path of `path_len` links; exact
/// for that path.
double scpr_path_delay(const LinkParams& params, int path_len, std::int64_t t_c);

}  // namespace satroute
