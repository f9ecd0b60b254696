#include "satroute/optimal_policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "satroute/analytic_greedy.hpp"

namespace satroute {

LinkQuad LinkQuad::from_bits(unsigned bits) {
  if (bits > 15) throw std::invalid_argument("link quad bits must be below 16");
  LinkQuad q;
  for (std::size_t d = 0; d < 4; ++d) q.links[d] = to_state(((bits >> d) & 1u) != 0);
  return q;
}

int LinkQuad::on_count() const noexcept {
  return static_cast<int>(std::count(links.begin(), links.end(), LinkState::on));
}

double LinkQuad::probability(double p) const {
  const int on = on_count();
  return std::pow(p, on) * std::pow(1.0 - p, 4 - on);
}

namespace {

constexpr Action to_action(Direction d) noexcept { return static_cast<Action>(static_cast<int>(d) + 1); }
constexpr Direction to_direction(Action a) noexcept { return static_cast<Direction>(static_cast<int>(a) - 1); }

int abs_int(int v) noexcept { return v < 0 ? -v : v; }

}  // namespace

std::vector<Action> allowed_actions(const LinkQuad& quad) {
  std::vector<Action> out{Action::stay};
  for (Direction d : kDirections) {
    if (quad.on(d)) out.push_back(to_action(d));
  }
  return out;
}

ValueTable::ValueTable(const GridSpec& spec, double p, Eigen::VectorXd d_bar)
    : spec_{spec}, p_{p}, d_bar_{std::move(d_bar)} {
  if (d_bar_.size() != static_cast<Eigen::Index>(spec_.node_count())) {
    throw std::invalid_argument("value table size does not match the grid");
  }
}

double ValueTable::action_value(NodeCoord node, Action action) const {
  node = spec_.normalize(node);
  if (node == NodeCoord{0, 0}) return 0.0;
  if (action == Action::stay) return 1.0 + d_bar(node);
  return 1.0 + d_bar(spec_.neighbor(node, to_direction(action)));
}

double ValueTable::d_star(NodeCoord node, const LinkQuad& quad) const {
  node = spec_.normalize(node);
  if (node == NodeCoord{0, 0}) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (Action a : allowed_actions(quad)) best = std::min(best, action_value(node, a));
  return best;
}

Eigen::MatrixXd ValueTable::as_matrix() const {
  // node_index is x-major with stride N, i.e. row-major (M x N).
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      d_bar_.data(), spec_.m_planes(), spec_.n_per_plane());
}

ValueIterationResult value_iterate_delay(const GridSpec& spec, double p, double tol, int max_iters) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in (0, 1]");
  if (!(tol > 0.0) || max_iters < 1) throw std::invalid_argument("tolerance and iteration cap must be positive");

  const auto n = static_cast<Eigen::Index>(spec.node_count());
  const auto dst = static_cast<Eigen::Index>(spec.node_index({0, 0}));
  Eigen::Matrix<Eigen::Index, Eigen::Dynamic, 4> nbr(n, 4);
  Eigen::VectorXd d(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const NodeCoord c = spec.node_at(static_cast<std::size_t>(i));
    const auto ns = spec.neighbors(c);
    for (int k = 0; k < 4; ++k) nbr(i, k) = static_cast<Eigen::Index>(spec.node_index(ns[static_cast<std::size_t>(k)]));
    d[i] = hop_distance(spec, c, {0, 0});
  }

  ValueIterationResult result{ValueTable{spec, p, d}, 0, 0.0, false, {}};
  Eigen::VectorXd next(n);
  const double q = 1.0 - p;
  for (int it = 1; it <= max_iters; ++it) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == dst) {
        next[i] = 0.0;
        continue;
      }
      // With i.i.d. links, the min over ON neighbours and staying is the
      // smallest sorted candidate whose link is ON, else the current value.
      std::array<double, 4> c{d[nbr(i, 0)], d[nbr(i, 1)], d[nbr(i, 2)], d[nbr(i, 3)]};
      std::sort(c.begin(), c.end());
      const double stay = d[i];
      double acc = 0.0;
      double none_yet = 1.0;
      for (double v : c) {
        if (v >= stay) break;
        acc += none_yet * p * v;
        none_yet *= q;
      }
      next[i] = 1.0 + acc + none_yet * stay;
    }
    const double residual = (next - d).lpNorm<Eigen::Infinity>();
    d.swap(next);
    result.iterations = it;
    result.residual = residual;
    result.residual_history.push_back(residual);
    if (residual < tol) {
      result.converged = true;
      break;
    }
  }
  result.table = ValueTable{spec, p, std::move(d)};
  return result;
}

double bellman_residual(const ValueTable& table) {
  const GridSpec& spec = table.spec();
  double worst = 0.0;
  for (std::size_t i = 0; i < spec.node_count(); ++i) {
    const NodeCoord c = spec.node_at(i);
    if (c == NodeCoord{0, 0}) {
      worst = std::max(worst, std::abs(table.d_bar(c)));
      continue;
    }
    double expected = 0.0;
    for (unsigned bits = 0; bits < 16; ++bits) {
      const LinkQuad quad = LinkQuad::from_bits(bits);
      expected += quad.probability(table.p()) * table.d_star(c, quad);
    }
    worst = std::max(worst, std::abs(table.d_bar(c) - expected));
  }
  return worst;
}

std::vector<Action> greedy_deterministic_actions(const GridSpec& spec, NodeCoord node, const LinkQuad& quad) {
  const NodeCoord rel = spec.displacement({0, 0}, spec.normalize(node));
  const bool h_on = rel.x != 0 && quad.on(rel.x > 0 ? Direction::left : Direction::right);
  const bool v_on = rel.y != 0 && quad.on(rel.y > 0 ? Direction::down : Direction::up);
  const Action h = to_action(rel.x > 0 ? Direction::left : Direction::right);
  const Action v = to_action(rel.y > 0 ? Direction::down : Direction::up);
  if (h_on && v_on) {
    const int ax = abs_int(rel.x);
    const int ay = abs_int(rel.y);
    if (ax == ay) return {h, v};
    return {ay > ax ? v : h};
  }
  if (h_on) return {h};
  if (v_on) return {v};
  return {Action::stay};
}

std::vector<ArgminViolation> check_greedy_attains_argmin(const ValueTable& table, double tol) {
  const GridSpec& spec = table.spec();
  std::vector<ArgminViolation> out;
  for (std::size_t i = 0; i < spec.node_count(); ++i) {
    const NodeCoord c = spec.node_at(i);
    if (c == NodeCoord{0, 0}) continue;
    for (unsigned bits = 0; bits < 16; ++bits) {
      const LinkQuad quad = LinkQuad::from_bits(bits);
      const double best = table.d_star(c, quad);
      double greedy = -std::numeric_limits<double>::infinity();
      for (Action a : greedy_deterministic_actions(spec, c, quad)) greedy = std::max(greedy, table.action_value(c, a));
      if (greedy > best + tol) out.push_back({c, quad, greedy, best});
    }
  }
  return out;
}

namespace {

struct OrderKey {
  int sum;
  int skew;
};

OrderKey order_key(NodeCoord c) {
  const int ax = abs_int(c.x);
  const int ay = abs_int(c.y);
  return {ax + ay, abs_int(ax - ay)};
}

bool strictly_before(const OrderKey& a, const OrderKey& b) {
  return a.sum < b.sum || (a.sum == b.sum && a.skew < b.skew);
}

}  // namespace

std::vector<OrderingViolation> check_mean_delay_ordering(const ValueTable& table, double tol, OrderingScope scope) {
  const GridSpec& spec = table.spec();
  std::vector<OrderingViolation> out;
  auto check = [&](NodeCoord a, NodeCoord b) {
    const OrderKey ka = order_key(a);
    const OrderKey kb = order_key(b);
    if (strictly_before(kb, ka)) std::swap(a, b);
    else if (!strictly_before(ka, kb)) return;  // same key: symmetric nodes
    const double da = table.d_bar(a);
    const double db = table.d_bar(b);
    if (!(da + tol < db)) out.push_back({a, b, da, db});
  };

  const std::size_t n = spec.node_count();
  if (scope == OrderingScope::all_pairs) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) check(spec.node_at(i), spec.node_at(j));
    }
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const NodeCoord a = spec.node_at(i);
    for (Direction d : {Direction::right, Direction::up}) check(a, spec.neighbor(a, d));
    for (std::size_t j = i + 1; j < n; ++j) {
      const NodeCoord b = spec.node_at(j);
      if (order_key(a).sum == order_key(b).sum) check(a, b);
    }
  }
  return out;
}

std::vector<PathOrderingViolation> verify_connected_path_ordering(const LinkParams& params, std::int64_t t_c,
                                                                  int max_len) {
  if (t_c < 0 || max_len < 0) throw std::invalid_argument("t_c and max_len must be non-negative");
  std::vector<PathOrderingViolation> out;
  double prob = 1.0;
  for (int len = 0; len < max_len; ++len) {
    const double factor = on_probability(params, LinkState::on, t_c + len);
    const double longer = prob * factor;
    // A factor that rounds to 1 cannot decrease the product in floating point.
    const bool ok = factor < 1.0 ? longer < prob : longer <= prob;
    if (!ok) out.push_back({len, prob, longer});
    prob = longer;
  }
  return out;
}

namespace {

double leg_value(double p, int a, int b, RouteMetric metric, const std::optional<LinkParams>& params) {
  a = abs_int(a);
  b = abs_int(b);
  if (metric == RouteMetric::throughput) return gr_throughput_recommended(p, a, b);
  if (a + b == 0) return 0.0;
  const DirectionBias w = w_from_u(*params, recommended_u(a, b));
  return gr_delay_exact_component(*params, a, b, w.w);
}

void check_metric_inputs(double p, int x, int y, RouteMetric metric, const std::optional<LinkParams>& params) {
  if (x < 0 || y < 0 || x + y == 0) throw std::invalid_argument("source must be a non-negative offset other than the origin");
  if (metric == RouteMetric::delay) {
    if (!params) throw std::invalid_argument("delay metric needs link parameters");
    if (std::abs(params->p() - p) > 1e-12) throw std::invalid_argument("link parameters disagree with p");
  } else if (!(p > 0.0 && p <= 1.0)) {
    throw std::invalid_argument("p must lie in (0, 1]");
  }
}

double two_leg_value(double p, int x, int y, RouteMetric metric, const std::optional<LinkParams>& params,
                     NodeCoord c) {
  const double first = leg_value(p, x - c.x, y - c.y, metric, params);
  const double second = leg_value(p, c.x, c.y, metric, params);
  return metric == RouteMetric::throughput ? first * second : first + second;
}

bool beats(RouteMetric metric, double candidate, double direct) {
  // Relative slack keeps rounding noise from counting as an improvement.
  const double slack = 1e-12 * std::max(1.0, std::abs(direct));
  return metric == RouteMetric::throughput ? candidate > direct + slack : candidate < direct - slack;
}

}  // namespace

bool intermediate_improves(double p, int x, int y, RouteMetric metric, const std::optional<LinkParams>& delay_params,
                           NodeCoord candidate) {
  check_metric_inputs(p, x, y, metric, delay_params);
  if (candidate == NodeCoord{0, 0} || candidate == NodeCoord{x, y}) return false;
  return beats(metric, two_leg_value(p, x, y, metric, delay_params, candidate),
               leg_value(p, x, y, metric, delay_params));
}

std::optional<Intermediate> find_best_intermediate(double p, int x, int y, RouteMetric metric,
                                                   const std::optional<LinkParams>& delay_params, int window_margin) {
  check_metric_inputs(p, x, y, metric, delay_params);
  if (window_margin < 0) throw std::invalid_argument("window margin must be non-negative");

  const double direct = leg_value(p, x, y, metric, delay_params);
  std::optional<Intermediate> best;
  for (int u = -window_margin; u <= x + window_margin; ++u) {
    for (int v = -window_margin; v <= y + window_margin; ++v) {
      const NodeCoord c{u, v};
      if (c == NodeCoord{0, 0} || c == NodeCoord{x, y}) continue;
      const double value = two_leg_value(p, x, y, metric, delay_params, c);
      if (!beats(metric, value, direct)) continue;
      if (!best || beats(metric, value, best->value)) best = Intermediate{c, value, direct};
    }
  }
  if (best && !intermediate_improves(p, x, y, metric, delay_params, best->node)) {
    throw std::logic_error("intermediate failed re-verification");
  }
  return best;
}

}  // namespace satroute
