#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "satroute/analytic_greedy.hpp"
#include "satroute/grid_topology.hpp"
#include "satroute/link_dynamics.hpp"
#include "satroute/rng.hpp"

namespace satroute {

/// How a link catches up from its last observation to the query time.
enum class EvolutionMode {
  lazy,      ///< one k-step draw
  stepwise,  ///< k one-slot draws
};

/// Per-directed-link (state, last observed slot) cache. Links that were never
/// observed in the current trial are drawn from the steady state on first
/// query. reset() is O(1).
class NetworkState {
 public:
  NetworkState(const GridSpec& spec, const LinkParams& params, EvolutionMode mode = EvolutionMode::lazy);

  const GridSpec& spec() const noexcept { return spec_; }
  const LinkParams& params() const noexcept { return params_; }

  void reset();

  template <Uniform64Generator G>
  LinkState observe(std::size_t link, std::int64_t t, G& rng) {
    if (epoch_[link] != current_epoch_) {
      epoch_[link] = current_epoch_;
      last_time_[link] = t;
      state_[link] = sample_steady_state(params_, rng);
      return state_[link];
    }
    const std::int64_t k = t - last_time_[link];
    if (k < 0) throw std::logic_error("link queried backwards in time");
    if (mode_ == EvolutionMode::lazy) {
      state_[link] = sample_k_steps(params_, state_[link], k, rng);
    } else {
      for (std::int64_t i = 0; i < k; ++i) state_[link] = sample_next(params_, state_[link], rng);
    }
    last_time_[link] = t;
    return state_[link];
  }

  template <Uniform64Generator G>
  LinkState observe(const DirectedLink& link, std::int64_t t, G& rng) {
    return observe(link_index(spec_, link), t, rng);
  }

 private:
  GridSpec spec_;
  LinkParams params_;
  EvolutionMode mode_;
  std::vector<LinkState> state_;
  std::vector<std::int64_t> last_time_;
  std::vector<std::uint32_t> epoch_;
  std::uint32_t current_epoch_ = 0;
};

struct TrialOutcome {
  bool success = false;
  /// Slots from departure to arrival; present iff success.
  std::optional<std::int64_t> delay;
  int path_len = 0;
  /// GR only: number of moves until the first boundary node, min(tau_x, tau_y).
  std::optional<int> hit_boundary_at;
};

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

/// Ties broken toward the dimension with more remaining hops, fair coin when equal.
struct DeterministicTie {};

using GrTieRule = std::variant<TieBreak, DeterministicTie>;

struct ScprTrialConfig {
  GridSpec spec;
  LinkParams params;
  std::int64_t t_c = 0;
  NodeCoord src;
  NodeCoord dst{0, 0};
  bool buffered = false;
  EvolutionMode mode = EvolutionMode::lazy;
};

struct GrTrialConfig {
  GridSpec spec;
  LinkParams params;
  NodeCoord src;
  NodeCoord dst{0, 0};
  bool buffered = false;
  GrTieRule tie = TieBreak{0.5};
  EvolutionMode mode = EvolutionMode::lazy;
};

/// One abstract path of `path_len` links, all ON at t = 0, entered at t_c.
struct StylizedPathConfig {
  LinkParams params;
  int path_len = 1;
  std::int64_t t_c = 0;
  bool buffered = false;
};

using SimulationConfig = std::variant<ScprTrialConfig, GrTrialConfig, StylizedPathConfig>;

enum class Metric { throughput, delay, boundary_hit };

namespace detail {

/// Advances `t` until `link` is usable and crosses it. Returns false on a drop.
template <typename Observe>
bool traverse(Observe&& observe, std::int64_t& t, bool buffered) {
  if (!is_on(observe(t))) {
    if (!buffered) return false;
    do {
      ++t;
    } while (!is_on(observe(t)));
  }
  ++t;
  return true;
}

}  // namespace detail

/// SCPR trial. The controller snapshot is at t = 0, the packet departs the
/// source at t_c along the shortest path connected in the snapshot (a random
/// shortest path if none exists). Delay excludes t_c.
template <Uniform64Generator G>
TrialOutcome run_scpr_trial(NetworkState& state, BfsWorkspace& ws, const ScprTrialConfig& cfg, G& rng) {
  state.reset();
  const GridSpec& spec = state.spec();
  auto path = shortest_connected_path(
      spec, [&](const DirectedLink& l) { return is_on(state.observe(l, 0, rng)); }, cfg.src, cfg.dst, ws);
  if (!path) path = random_shortest_path(spec, cfg.src, cfg.dst, rng);

  TrialOutcome out;
  out.path_len = static_cast<int>(path->length());
  std::int64_t t = cfg.t_c;
  for (const auto& hop : path->hops) {
    const std::size_t idx = link_index(spec, hop);
    if (!detail::traverse([&](std::int64_t now) { return state.observe(idx, now, rng); }, t, cfg.buffered)) {
      return out;
    }
  }
  out.success = true;
  out.delay = t - cfg.t_c;
  return out;
}

/// GR trial. At each slot the packet sees only the (one or two) outgoing
/// links that reduce its distance to the destination.
template <Uniform64Generator G>
TrialOutcome run_gr_trial(NetworkState& state, const GrTrialConfig& cfg, G& rng) {
  state.reset();
  const GridSpec& spec = state.spec();
  const NodeCoord dst = spec.normalize(cfg.dst);
  NodeCoord cur = spec.normalize(cfg.src);

  TrialOutcome out;
  std::int64_t t = 0;
  int moves = 0;
  auto on_boundary = [](NodeCoord rel) { return rel.x == 0 || rel.y == 0; };
  if (on_boundary(spec.displacement(dst, cur))) out.hit_boundary_at = 0;

  while (!(cur == dst)) {
    const NodeCoord rel = spec.displacement(dst, cur);
    const bool has_h = rel.x != 0;
    const bool has_v = rel.y != 0;
    const Direction hdir = rel.x > 0 ? Direction::left : Direction::right;
    const Direction vdir = rel.y > 0 ? Direction::down : Direction::up;
    const bool h_on = has_h && is_on(state.observe(link_index(spec, cur, hdir), t, rng));
    const bool v_on = has_v && is_on(state.observe(link_index(spec, cur, vdir), t, rng));

    if (!h_on && !v_on) {
      if (!cfg.buffered) {
        out.path_len = moves;
        return out;
      }
      ++t;
      continue;
    }
    bool vertical = v_on;
    if (h_on && v_on) {
      if (const auto* tb = std::get_if<TieBreak>(&cfg.tie)) {
        vertical = bernoulli(rng, tb->u);
      } else {
        const int ax = rel.x < 0 ? -rel.x : rel.x;
        const int ay = rel.y < 0 ? -rel.y : rel.y;
        vertical = ay > ax || (ay == ax && bernoulli(rng, 0.5));
      }
    }
    cur = spec.neighbor(cur, vertical ? vdir : hdir);
    ++t;
    ++moves;
    if (!out.hit_boundary_at && on_boundary(spec.displacement(dst, cur))) out.hit_boundary_at = moves;
  }
  out.success = true;
  out.delay = t;
  out.path_len = moves;
  return out;
}

template <Uniform64Generator G>
TrialOutcome run_stylized_path_trial(const StylizedPathConfig& cfg, G& rng) {
  TrialOutcome out;
  out.path_len = cfg.path_len;
  std::int64_t t = cfg.t_c;
  for (int i = 0; i < cfg.path_len; ++i) {
    // The link was last seen ON at t = 0.
    LinkState s = LinkState::on;
    std::int64_t seen = 0;
    auto observe = [&](std::int64_t now) {
      s = sample_k_steps(cfg.params, s, now - seen, rng);
      seen = now;
      return s;
    };
    if (!detail::traverse(observe, t, cfg.buffered)) return out;
  }
  out.success = true;
  out.delay = t - cfg.t_c;
  return out;
}

/// Runs trials with per-trial streams trial_seed(master_seed, index). The
/// result is identical for any thread count; threads = 0 uses all cores.
std::vector<TrialOutcome> run_trials(const SimulationConfig& config, std::uint64_t trials,
                                     std::uint64_t master_seed, unsigned threads = 0);

/// Throughput: success indicator over all trials. Delay: mean over the
/// successful trials (trials = success count). Boundary hit: mean of
/// hit_boundary_at over trials that recorded one.
Estimate summarize(const std::vector<TrialOutcome>& outcomes, Metric metric, std::uint64_t seed);

Estimate estimate(const SimulationConfig& config, Metric metric, std::uint64_t trials, std::uint64_t master_seed,
                  unsigned threads = 0);

Estimate run_stylized_scpr_path(const LinkParams& params, int path_len, std::int64_t t_c, bool buffered,
                                std::uint64_t trials, std::uint64_t seed, unsigned threads = 0);

}  // namespace satroute
