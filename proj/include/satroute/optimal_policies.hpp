#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "satroute/grid_topology.hpp"
#include "satroute/link_dynamics.hpp"

namespace satroute {

/// States of the four outgoing links of a node (left, down, right, up).
struct LinkQuad {
  std::array<LinkState, 4> links{};

  /// Bit d of `bits` is the state of direction d.
  static LinkQuad from_bits(unsigned bits);
  bool on(Direction d) const noexcept { return is_on(links[static_cast<std::size_t>(d)]); }
  int on_count() const noexcept;
  /// p^#ON (1-p)^(4-#ON) for i.i.d. steady-state links.
  double probability(double p) const;
};

enum class Action : std::uint8_t { stay, left, down, right, up };

/// Stay is always allowed; a move is allowed iff its link is ON.
std::vector<Action> allowed_actions(const LinkQuad& quad);

/// Minimum mean delays to (0, 0) on a torus with memoryless links.
class ValueTable {
 public:
  ValueTable(const GridSpec& spec, double p, Eigen::VectorXd d_bar);

  const GridSpec& spec() const noexcept { return spec_; }
  double p() const noexcept { return p_; }

  /// Unconditional minimum mean delay D(x, y).
  double d_bar(NodeCoord node) const { return d_bar_[static_cast<Eigen::Index>(spec_.node_index(spec_.normalize(node)))]; }
  /// Minimum mean delay given the current outgoing link states.
  double d_star(NodeCoord node, const LinkQuad& quad) const;
  /// Delay-to-go after taking `action` (1 + D of the next node), assuming it is allowed.
  double action_value(NodeCoord node, Action action) const;

  const Eigen::VectorXd& values() const noexcept { return d_bar_; }
  /// Row = plane index x - x_min, column = y - y_min.
  Eigen::MatrixXd as_matrix() const;

 private:
  GridSpec spec_;
  double p_;
  Eigen::VectorXd d_bar_;
};

struct ValueIterationResult {
  ValueTable table;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
  std::vector<double> residual_history;
};

/// Value iteration on D for buffered routing with mu = 0 (link states are
/// i.i.d. across slots, so p alone parameterizes the problem). Starts from the
/// hop distance and stops when the sup-norm change drops below tol.
ValueIterationResult value_iterate_delay(const GridSpec& spec, double p, double tol = 1e-12, int max_iters = 200000);

/// max over nodes of |D(s) - sum_quad P(quad) D*(s, quad)|.
double bellman_residual(const ValueTable& table);

/// Moves chosen by the diagonal-hugging greedy rule: toward-destination links
/// only, the farther dimension first when both are ON (either one on the
/// diagonal), stay when none is ON.
std::vector<Action> greedy_deterministic_actions(const GridSpec& spec, NodeCoord node, const LinkQuad& quad);

struct ArgminViolation {
  NodeCoord node;
  LinkQuad quad;
  double greedy_value = 0.0;
  double best_value = 0.0;
};

/// (node, quad) pairs where some greedy action is worse than the Bellman min by more than tol.
std::vector<ArgminViolation> check_greedy_attains_argmin(const ValueTable& table, double tol = 1e-9);

enum class OrderingScope {
  all_pairs,  ///< every node pair
  neighbors,  ///< adjacent nodes and equal-hop-sum pairs only
};

struct OrderingViolation {
  NodeCoord expected_lower;
  NodeCoord expected_higher;
  double d_lower = 0.0;
  double d_higher = 0.0;
};

/// Mean delay ordering: D(a) < D(b) (by more than tol) whenever |a| < |b| in
/// hop sum, or the hop sums tie and a is closer to the diagonal.
std::vector<OrderingViolation> check_mean_delay_ordering(const ValueTable& table, double tol = 1e-9,
                                                         OrderingScope scope = OrderingScope::all_pairs);

struct PathOrderingViolation {
  int shorter_len = 0;
  double shorter_prob = 0.0;
  double longer_prob = 0.0;
};

/// For paths connected at t = 0, success probability must strictly decrease
/// with length up to max_len. Steps whose factor p11 rounds to 1 only need
/// to be non-increasing.
std::vector<PathOrderingViolation> verify_connected_path_ordering(const LinkParams& params, std::int64_t t_c,
                                                                  int max_len);

enum class RouteMetric { throughput, delay };

struct Intermediate {
  NodeCoord node;
  /// Two-leg value (product of throughputs or sum of delays).
  double value = 0.0;
  double direct = 0.0;
};

/// Best intermediate relay (u, v) for two-leg GR routing from (x, y) to (0, 0).
/// Candidates span the source/destination box grown by window_margin hops on
/// every side; margin 0 is the box itself. Returns nullopt when no candidate
/// strictly beats the direct route. delay needs link parameters.
std::optional<Intermediate> find_best_intermediate(double p, int x, int y, RouteMetric metric,
                                                   const std::optional<LinkParams>& delay_params = std::nullopt,
                                                   int window_margin = 2);

/// The defining inequality of an intermediate, re-evaluated from scratch.
bool intermediate_improves(double p, int x, int y, RouteMetric metric, const std::optional<LinkParams>& delay_params,
                           NodeCoord candidate);

}  // namespace satroute
