#pragma once

#include <cstdint>

#include <Eigen/Core>

#include "satroute/rng.hpp"

namespace satroute {

enum class LinkState : std::uint8_t { off = 0, on = 1 };

constexpr bool is_on(LinkState s) noexcept { return s == LinkState::on; }
constexpr LinkState to_state(bool on) noexcept { return on ? LinkState::on : LinkState::off; }

/// Two-state Markov link. Holds both (eps1, eps2) and (p, mu) so neither
/// representation is recomputed in hot loops.
///
/// eps1 = P(ON -> OFF), eps2 = P(OFF -> ON), p = eps2 / (eps1 + eps2),
/// mu = 1 - eps1 - eps2. Construction enforces 0 < p < 1 and 0 <= mu < 1.
class LinkParams {
 public:
  static LinkParams from_p_mu(double p, double mu);
  static LinkParams from_epsilons(double epsilon1, double epsilon2);

  double epsilon1() const noexcept { return eps1_; }
  double epsilon2() const noexcept { return eps2_; }
  double p() const noexcept { return p_; }
  double mu() const noexcept { return mu_; }

 private:
  LinkParams(double eps1, double eps2, double p, double mu) noexcept
      : eps1_{eps1}, eps2_{eps2}, p_{p}, mu_{mu} {}

  double eps1_;
  double eps2_;
  double p_;
  double mu_;
};

/// mu^k with the convention 0^0 = 1.
double mu_power(double mu, std::int64_t k);

/// p_{i1}(k): probability of being ON k slots after being in `from`.
double on_probability(const LinkParams& params, LinkState from, std::int64_t k);

/// p_{ij}(k). k = 0 gives the identity.
double transition_prob(const LinkParams& params, LinkState from, LinkState to, std::int64_t k);

/// k-stage transition matrix, rows indexed by `from` (0 = OFF, 1 = ON).
Eigen::Matrix2d transition_matrix(const LinkParams& params, std::int64_t k);

/// One-step ON probability of the raw kernel. Accepts the degenerate
/// eps in {0, 1} that LinkParams rejects.
constexpr double next_on_probability(LinkState current, double epsilon1, double epsilon2) noexcept {
  return is_on(current) ? 1.0 - epsilon1 : epsilon2;
}

template <Uniform64Generator G>
LinkState sample_next(const LinkParams& params, LinkState current, G& rng) {
  return to_state(bernoulli(rng, next_on_probability(current, params.epsilon1(), params.epsilon2())));
}

/// Distributionally equal to k calls of sample_next, using one draw.
template <Uniform64Generator G>
LinkState sample_k_steps(const LinkParams& params, LinkState current, std::int64_t k, G& rng) {
  if (k == 0) return current;
  return to_state(bernoulli(rng, on_probability(params, current, k)));
}

template <Uniform64Generator G>
LinkState sample_steady_state(const LinkParams& params, G& rng) {
  return to_state(bernoulli(rng, params.p()));
}

}  // namespace satroute
