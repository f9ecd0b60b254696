#pragma once

#include <concepts>
#include <cstdint>
#include <limits>

namespace satroute {

/// Any engine producing uniform 64-bit words. All stochastic code takes one
/// of these explicitly so every trial can be replayed from its seed.
template <typename G>
concept Uniform64Generator = requires(G g) {
  { g() } -> std::same_as<std::uint64_t>;
  requires G::min() == 0;
  requires G::max() == std::numeric_limits<std::uint64_t>::max();
};

constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Per-trial seed derived from (master_seed, trial_index).
constexpr std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial_index) noexcept {
  return splitmix64_mix(splitmix64_mix(master_seed) ^ splitmix64_mix(~trial_index));
}

/// SplitMix64 engine. 64 bits of state, so constructing one per trial is free.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_{seed} {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

using TrialRng = SplitMix64;

/// Uniform double in [0, 1) from the top 53 bits.
template <Uniform64Generator G>
double uniform01(G& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// True with probability `prob`. prob <= 0 never fires, prob >= 1 always does.
template <Uniform64Generator G>
bool bernoulli(G& rng, double prob) {
  return uniform01(rng) < prob;
}

}  // namespace satroute
