#include <doctest.h>

#include <cmath>
#include <map>
#include <stdexcept>

#include "satroute/analytic_greedy.hpp"
#include "satroute/analytic_scpr.hpp"
#include "satroute/simulator.hpp"
#include "satroute/special_functions.hpp"

using namespace satroute;

namespace {

bool within_sigmas(const Estimate& e, double want, double k = 3.0) {
  return std::abs(e.mean - want) <= k * e.std_error + 1e-12;
}

}  // namespace

TEST_CASE("network state caches and refuses to go back in time") {
  const GridSpec g{5, 5};
  NetworkState state{g, LinkParams::from_p_mu(0.5, 0.9)};
  TrialRng rng{1};
  const DirectedLink l{{0, 0}, Direction::up};
  const LinkState first = state.observe(l, 3, rng);
  CHECK(state.observe(l, 3, rng) == first);  // k = 0 keeps the state
  state.observe(l, 7, rng);
  CHECK_THROWS_AS(state.observe(l, 6, rng), std::logic_error);
  state.reset();
  CHECK_NOTHROW(state.observe(l, 0, rng));
}

TEST_CASE("perfect links") {
  // p just below 1: an OFF draw has probability ~1e-12 per observation.
  const auto lp = LinkParams::from_p_mu(1.0 - 1e-12, 0.5);
  const GridSpec g{20, 20};
  for (bool buffered : {false, true}) {
    const auto scpr = run_trials(ScprTrialConfig{g, lp, 4, {3, -5}, {0, 0}, buffered}, 200, 9, 2);
    for (const auto& o : scpr) {
      CHECK(o.success);
      CHECK(o.delay == 8);
      CHECK(o.path_len == 8);
    }
    const auto gr = run_trials(GrTrialConfig{g, lp, {3, -5}, {0, 0}, buffered, TieBreak{0.3}}, 200, 9, 2);
    for (const auto& o : gr) {
      CHECK(o.success);
      CHECK(o.delay == 8);
    }
  }
}

TEST_CASE("invariants of individual trials") {
  const GridSpec g{30, 30};
  const auto lp = LinkParams::from_p_mu(0.8, 0.7);
  for (const auto& o : run_trials(GrTrialConfig{g, lp, {4, 6}, {0, 0}, false, TieBreak{0.5}}, 5000, 3)) {
    if (o.success) CHECK(o.path_len == 10);
    CHECK(o.delay.has_value() == o.success);
  }
  for (const auto& o : run_trials(GrTrialConfig{g, lp, {4, 6}, {0, 0}, true, TieBreak{0.5}}, 5000, 3)) {
    CHECK(o.success);
    CHECK(o.path_len == 10);
    CHECK(*o.delay >= 10);
  }
  for (const auto& o : run_trials(ScprTrialConfig{g, lp, 3, {4, 6}, {0, 0}, true}, 2000, 3)) {
    CHECK(o.success);
    CHECK(*o.delay >= o.path_len);
    CHECK(o.path_len >= 10);
  }
  CHECK_THROWS(run_trials(ScprTrialConfig{g, lp, 3, {4, 6}}, 0, 3));
}

TEST_CASE("results do not depend on the thread count") {
  const GridSpec g{25, 25};
  const auto lp = LinkParams::from_p_mu(0.85, 0.9);
  const SimulationConfig configs[] = {
      ScprTrialConfig{g, lp, 5, {4, 5}, {0, 0}, false},
      ScprTrialConfig{g, lp, 5, {4, 5}, {0, 0}, true},
      GrTrialConfig{g, lp, {4, 5}, {0, 0}, true, DeterministicTie{}},
      StylizedPathConfig{lp, 7, 2, true},
  };
  for (const auto& cfg : configs) {
    const Metric m = std::holds_alternative<ScprTrialConfig>(cfg) && !std::get<ScprTrialConfig>(cfg).buffered
                         ? Metric::throughput
                         : Metric::delay;
    const Estimate one = estimate(cfg, m, 3001, 77, 1);
    for (unsigned t : {2u, 3u, 8u, 0u}) {
      const Estimate many = estimate(cfg, m, 3001, 77, t);
      CHECK(one.mean == many.mean);
      CHECK(one.std_error == many.std_error);
      CHECK(one.trials == many.trials);
    }
    CHECK(estimate(cfg, m, 3001, 78, 4).mean != one.mean);
  }
}

TEST_CASE("lazy and stepwise link evolution agree in distribution") {
  const GridSpec g{5, 5};
  const auto lp = LinkParams::from_p_mu(0.6, 0.8);
  const int n = 100000;
  auto freq = [&](EvolutionMode mode, std::uint64_t seed) {
    const ScprTrialConfig cfg{g, lp, 4, {2, 2}, {0, 0}, true, mode};
    std::map<std::int64_t, int> counts;
    for (const auto& o : run_trials(cfg, n, seed)) ++counts[std::min<std::int64_t>(*o.delay, 12)];
    return counts;
  };
  auto lazy = freq(EvolutionMode::lazy, 1);
  auto stepwise = freq(EvolutionMode::stepwise, 2);
  for (const auto& [d, c] : lazy) {
    const double a = c / static_cast<double>(n);
    const double b = stepwise[d] / static_cast<double>(n);
    const double pooled = 0.5 * (a + b);
    CHECK(std::abs(a - b) <= 3.0 * std::sqrt(2.0 * pooled * (1.0 - pooled) / n) + 1e-12);
  }

  const GrTrialConfig gl{g, lp, {2, 2}, {0, 0}, true, TieBreak{0.5}, EvolutionMode::lazy};
  GrTrialConfig gs = gl;
  gs.mode = EvolutionMode::stepwise;
  const Estimate el = estimate(gl, Metric::delay, n, 5);
  const Estimate es = estimate(gs, Metric::delay, n, 6);
  CHECK(std::abs(el.mean - es.mean) <= 3.0 * std::hypot(el.std_error, es.std_error));
}

TEST_CASE("stylized path matches the closed forms") {
  for (double mu : {0.0, 0.9, 0.99}) {
    const auto lp = LinkParams::from_p_mu(0.9, mu);
    for (int tc : {0, 5}) {
      for (int len : {2, 10}) {
        const Estimate e = run_stylized_scpr_path(lp, len, tc, false, 200000, 1000 + len + tc);
        CHECK(within_sigmas(e, scpr_path_success_prob(lp, len, tc)));
      }
    }
  }
  const auto memoryless = LinkParams::from_p_mu(0.9, 0.0);
  const Estimate d = run_stylized_scpr_path(memoryless, 10, 5, true, 200000, 17);
  CHECK(within_sigmas(d, 10.0 * (1.0 + 0.1 / memoryless.epsilon2())));
}

TEST_CASE("SCPR on the full network stays under the throughput bound") {
  const GridSpec g{100, 100};
  for (double mu : {0.0, 0.9, 0.99}) {
    const auto lp = LinkParams::from_p_mu(0.9, mu);
    const Estimate e = estimate(ScprTrialConfig{g, lp, 5, {5, 5}}, Metric::throughput, 4000, 21);
    CHECK(e.mean <= scpr_throughput_bound(lp, 5, 5, 5) + 3.0 * e.std_error);
  }
}

TEST_CASE("GR bufferless throughput is independent of mu") {
  const GridSpec g{40, 40};
  const double want = gr_throughput(0.9, 5, 5, TieBreak{0.5});
  const Estimate a = estimate(GrTrialConfig{g, LinkParams::from_p_mu(0.9, 0.0), {5, 5}}, Metric::throughput, 100000, 1);
  const Estimate b = estimate(GrTrialConfig{g, LinkParams::from_p_mu(0.9, 0.99), {5, 5}}, Metric::throughput, 100000, 2);
  CHECK(within_sigmas(a, want));
  CHECK(within_sigmas(b, want));
  CHECK(std::abs(a.mean - b.mean) <= 3.0 * std::hypot(a.std_error, b.std_error));
}

TEST_CASE("GR buffered delay at mu = 0 matches the exact component") {
  const GridSpec g{40, 40};
  const auto lp = LinkParams::from_p_mu(0.9, 0.0);
  const Estimate e = estimate(GrTrialConfig{g, lp, {5, 5}, {0, 0}, true, TieBreak{0.5}}, Metric::delay, 100000, 4);
  CHECK(within_sigmas(e, gr_delay_exact_component(lp, 5, 5, 0.5)));
}

TEST_CASE("boundary hitting time follows the negative-binomial law") {
  // P(min = k) = C(k-1, x-1) wb^x w^(k-x) + C(k-1, y-1) w^y wb^(k-y).
  const GridSpec g{30, 30};
  const auto lp = LinkParams::from_p_mu(0.7, 0.9);
  const int x = 3;
  const int y = 5;
  const double w = w_from_u(lp, TieBreak{0.5}).w;
  const int n = 100000;
  std::map<int, int> counts;
  for (const auto& o : run_trials(GrTrialConfig{g, lp, {x, y}, {0, 0}, true, TieBreak{0.5}}, n, 8)) {
    REQUIRE(o.hit_boundary_at);
    ++counts[*o.hit_boundary_at];
  }
  double chi2 = 0.0;
  int bins = 0;
  double total = 0.0;
  for (int k = x; k < x + y; ++k) {
    double prob = binom(k - 1, x - 1) * std::pow(1 - w, x) * std::pow(w, k - x);
    if (k >= y) prob += binom(k - 1, y - 1) * std::pow(w, y) * std::pow(1 - w, k - y);
    total += prob;
    const double expected = prob * n;
    chi2 += (counts[k] - expected) * (counts[k] - expected) / expected;
    ++bins;
  }
  CHECK(std::abs(total - 1.0) < 1e-12);
  CHECK(counts.size() == static_cast<std::size_t>(bins));
  const int df = bins - 1;
  // Roughly the 99.9% point of chi-square with df degrees of freedom.
  CHECK(chi2 < df + 4.0 * std::sqrt(2.0 * df) + 5.0);
}

TEST_CASE("summaries") {
  std::vector<TrialOutcome> outs(4);
  outs[0].success = true;
  outs[0].delay = 4;
  outs[1].success = true;
  outs[1].delay = 6;
  const Estimate t = summarize(outs, Metric::throughput, 5);
  CHECK(t.mean == 0.5);
  CHECK(t.trials == 4);
  CHECK(t.seed == 5);
  CHECK(t.std_error == doctest::Approx(std::sqrt(1.0 / 3.0 / 4.0)));
  const Estimate d = summarize(outs, Metric::delay, 5);
  CHECK(d.mean == 5.0);
  CHECK(d.trials == 2);
  CHECK_THROWS(summarize(outs, Metric::boundary_hit, 5));
}
