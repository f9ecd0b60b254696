#include "satroute/link_dynamics.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>
#include <string>

namespace satroute {
namespace {

double clamp_probability(double value) {
  const double clamped = std::fmin(1.0, std::fmax(0.0, value));
  assert(std::fabs(clamped - value) <= 1e-12 && "probability clamping moved a value");
  return clamped;
}

}  // namespace

LinkParams LinkParams::from_p_mu(double p, double mu) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("steady-state probability p must lie in (0, 1), got " + std::to_string(p));
  }
  if (!(mu >= 0.0 && mu < 1.0)) {
    throw std::invalid_argument("memory parameter mu must lie in [0, 1), got " + std::to_string(mu));
  }
  return LinkParams{(1.0 - mu) * (1.0 - p), (1.0 - mu) * p, p, mu};
}

LinkParams LinkParams::from_epsilons(double epsilon1, double epsilon2) {
  if (!(epsilon1 > 0.0 && epsilon1 <= 1.0) || !(epsilon2 > 0.0 && epsilon2 <= 1.0)) {
    throw std::invalid_argument("link transition probabilities must lie in (0, 1]");
  }
  const double mu = 1.0 - epsilon1 - epsilon2;
  if (mu < 0.0) {
    throw std::invalid_argument("negative-memory links (eps1 + eps2 > 1) are not supported");
  }
  return LinkParams{epsilon1, epsilon2, epsilon2 / (epsilon1 + epsilon2), mu};
}

double mu_power(double mu, std::int64_t k) {
  if (k < 0) throw std::invalid_argument("slot count must be nonnegative");
  if (k == 0) return 1.0;
  return std::pow(mu, static_cast<double>(k));
}

double on_probability(const LinkParams& params, LinkState from, std::int64_t k) {
  const double decay = mu_power(params.mu(), k);
  const double p = params.p();
  return clamp_probability(is_on(from) ? p + (1.0 - p) * decay : p - p * decay);
}

double transition_prob(const LinkParams& params, LinkState from, LinkState to, std::int64_t k) {
  const double on = on_probability(params, from, k);
  return is_on(to) ? on : 1.0 - on;
}

Eigen::Matrix2d transition_matrix(const LinkParams& params, std::int64_t k) {
  Eigen::Matrix2d m;
  for (int i = 0; i < 2; ++i) {
    const double on = on_probability(params, to_state(i == 1), k);
    m(i, 0) = 1.0 - on;
    m(i, 1) = on;
  }
  return m;
}

}  // namespace satroute
