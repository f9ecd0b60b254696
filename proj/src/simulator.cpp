#include "satroute/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace satroute {

NetworkState::NetworkState(const GridSpec& spec, const LinkParams& params, EvolutionMode mode)
    : spec_{spec},
      params_{params},
      mode_{mode},
      state_(spec.link_count(), LinkState::off),
      last_time_(spec.link_count(), 0),
      epoch_(spec.link_count(), 0) {}

void NetworkState::reset() {
  if (++current_epoch_ == 0) {
    std::fill(epoch_.begin(), epoch_.end(), 0);
    current_epoch_ = 1;
  }
}

namespace {

// Worker-local scratch, built lazily for the config type in use.
class TrialRunner {
 public:
  explicit TrialRunner(const SimulationConfig& config) : config_{config} {
    if (const auto* s = std::get_if<ScprTrialConfig>(&config_)) {
      state_.emplace(s->spec, s->params, s->mode);
      bfs_.emplace(s->spec);
    } else if (const auto* g = std::get_if<GrTrialConfig>(&config_)) {
      state_.emplace(g->spec, g->params, g->mode);
    }
  }

  TrialOutcome run(std::uint64_t seed) {
    TrialRng rng{seed};
    return std::visit(
        [&](const auto& cfg) -> TrialOutcome {
          using T = std::decay_t<decltype(cfg)>;
          if constexpr (std::is_same_v<T, ScprTrialConfig>) {
            return run_scpr_trial(*state_, *bfs_, cfg, rng);
          } else if constexpr (std::is_same_v<T, GrTrialConfig>) {
            return run_gr_trial(*state_, cfg, rng);
          } else {
            return run_stylized_path_trial(cfg, rng);
          }
        },
        config_);
  }

 private:
  const SimulationConfig& config_;
  std::optional<NetworkState> state_;
  std::optional<BfsWorkspace> bfs_;
};

}  // namespace

std::vector<TrialOutcome> run_trials(const SimulationConfig& config, std::uint64_t trials,
                                     std::uint64_t master_seed, unsigned threads) {
  if (trials == 0) throw std::invalid_argument("at least one trial is required");
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, trials));

  std::vector<TrialOutcome> outcomes(trials);
  auto work = [&](std::uint64_t begin, std::uint64_t end) {
    TrialRunner runner{config};
    for (std::uint64_t i = begin; i < end; ++i) outcomes[i] = runner.run(trial_seed(master_seed, i));
  };
  if (threads == 1) {
    work(0, trials);
    return outcomes;
  }
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  const std::uint64_t chunk = (trials + threads - 1) / threads;
  for (unsigned w = 0; w < threads; ++w) {
    const std::uint64_t begin = std::min(trials, w * chunk);
    const std::uint64_t end = std::min(trials, begin + chunk);
    if (begin < end) pool.emplace_back(work, begin, end);
  }
  return outcomes;
}

Estimate summarize(const std::vector<TrialOutcome>& outcomes, Metric metric, std::uint64_t seed) {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::uint64_t n = 0;
  auto add = [&](double v) {
    sum += v;
    sum_sq += v * v;
    ++n;
  };
  for (const auto& o : outcomes) {
    switch (metric) {
      case Metric::throughput: add(o.success ? 1.0 : 0.0); break;
      case Metric::delay:
        if (o.delay) add(static_cast<double>(*o.delay));
        break;
      case Metric::boundary_hit:
        if (o.hit_boundary_at) add(static_cast<double>(*o.hit_boundary_at));
        break;
    }
  }
  if (n == 0) throw std::runtime_error("no trials contributed to the requested metric");
  Estimate e;
  e.trials = n;
  e.seed = seed;
  e.mean = sum / static_cast<double>(n);
  if (n > 1) {
    const double var = std::max(0.0, (sum_sq - sum * e.mean) / static_cast<double>(n - 1));
    e.std_error = std::sqrt(var / static_cast<double>(n));
  }
  return e;
}

Estimate estimate(const SimulationConfig& config, Metric metric, std::uint64_t trials, std::uint64_t master_seed,
                  unsigned threads) {
  return summarize(run_trials(config, trials, master_seed, threads), metric, master_seed);
}

Estimate run_stylized_scpr_path(const LinkParams& params, int path_len, std::int64_t t_c, bool buffered,
                                std::uint64_t trials, std::uint64_t seed, unsigned threads) {
  const StylizedPathConfig cfg{params, path_len, t_c, buffered};
  return estimate(cfg, buffered ? Metric::delay : Metric::throughput, trials, seed, threads);
}

}  // namespace satroute
