#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "satroute/rng.hpp"

namespace satroute {

/// Centered torus coordinate. x indexes orbital planes, y the position in a plane.
struct NodeCoord {
  int x = 0;
  int y = 0;

  friend constexpr bool operator==(NodeCoord, NodeCoord) = default;
};

enum class Direction : std::uint8_t { left = 0, down = 1, right = 2, up = 3 };

inline constexpr std::array<Direction, 4> kDirections{Direction::left, Direction::down, Direction::right,
                                                       Direction::up};

constexpr NodeCoord step_offset(Direction d) noexcept {
  switch (d) {
    case Direction::left: return {-1, 0};
    case Direction::down: return {0, -1};
    case Direction::right: return {1, 0};
    case Direction::up: return {0, 1};
  }
  return {0, 0};
}

constexpr Direction opposite(Direction d) noexcept {
  return static_cast<Direction>((static_cast<int>(d) + 2) % 4);
}

/// N x M toroidal mesh: N satellites per plane (y axis), M planes (x axis).
/// Both dimensions must be at least 3 so that the four neighbours are distinct.
class GridSpec {
 public:
  GridSpec(int n_per_plane, int m_planes);

  int n_per_plane() const noexcept { return n_; }
  int m_planes() const noexcept { return m_; }

  int x_min() const noexcept { return x_min_; }
  int x_max() const noexcept { return x_min_ + m_ - 1; }
  int y_min() const noexcept { return y_min_; }
  int y_max() const noexcept { return y_min_ + n_ - 1; }

  std::size_t node_count() const noexcept { return static_cast<std::size_t>(n_) * static_cast<std::size_t>(m_); }
  std::size_t link_count() const noexcept { return 4 * node_count(); }

  NodeCoord normalize(NodeCoord c) const noexcept;
  bool contains(NodeCoord c) const noexcept;

  /// Dense index of a normalized node; inverse of node_at.
  std::size_t node_index(NodeCoord c) const noexcept {
    return static_cast<std::size_t>(c.x - x_min_) * static_cast<std::size_t>(n_) +
           static_cast<std::size_t>(c.y - y_min_);
  }
  NodeCoord node_at(std::size_t index) const noexcept {
    return {static_cast<int>(index / static_cast<std::size_t>(n_)) + x_min_,
            static_cast<int>(index % static_cast<std::size_t>(n_)) + y_min_};
  }

  NodeCoord neighbor(NodeCoord c, Direction d) const noexcept {
    const NodeCoord o = step_offset(d);
    return normalize({c.x + o.x, c.y + o.y});
  }

  /// Left, down, right, up.
  std::array<NodeCoord, 4> neighbors(NodeCoord c) const noexcept;

  /// Signed shortest displacement from `from` to `to` along one axis, in the
  /// normalized range of that axis.
  NodeCoord displacement(NodeCoord from, NodeCoord to) const noexcept {
    return normalize({to.x - from.x, to.y - from.y});
  }

 private:
  int n_;
  int m_;
  int x_min_;
  int y_min_;
};

/// A directed link is identified by its tail node and outgoing direction;
/// (a -> b) and (b -> a) are different links.
struct DirectedLink {
  NodeCoord from;
  Direction dir = Direction::left;

  NodeCoord to(const GridSpec& spec) const noexcept { return spec.neighbor(from, dir); }

  friend constexpr bool operator==(const DirectedLink&, const DirectedLink&) = default;
};

inline std::size_t link_index(const GridSpec& spec, const DirectedLink& link) noexcept {
  return 4 * spec.node_index(link.from) + static_cast<std::size_t>(link.dir);
}

inline std::size_t link_index(const GridSpec& spec, NodeCoord from, Direction dir) noexcept {
  return 4 * spec.node_index(from) + static_cast<std::size_t>(dir);
}

struct Path {
  std::vector<DirectedLink> hops;

  std::size_t length() const noexcept { return hops.size(); }
  bool empty() const noexcept { return hops.empty(); }

  /// Source followed by the head of every hop.
  std::vector<NodeCoord> nodes(const GridSpec& spec) const;
};

/// Hops chain, no node repeats, and the path runs from src to dst.
bool is_valid_path(const GridSpec& spec, const Path& path, NodeCoord src, NodeCoord dst);

int hop_distance(const GridSpec& spec, NodeCoord a, NodeCoord b) noexcept;

/// Reusable BFS scratch space. Epoch stamps make reuse O(1) per search.
class BfsWorkspace {
 public:
  explicit BfsWorkspace(const GridSpec& spec);

 private:
  template <typename IsOn>
  friend std::optional<Path> shortest_connected_path(const GridSpec&, IsOn&&, NodeCoord, NodeCoord,
                                                     BfsWorkspace&);

  std::uint32_t begin_search();

  std::vector<std::uint32_t> visited_epoch_;
  std::vector<std::uint8_t> parent_dir_;
  std::vector<std::size_t> queue_;
  std::uint32_t epoch_ = 0;
};

/// Breadth-first search over links for which `is_on(DirectedLink)` holds.
/// Neighbours are expanded in left, down, right, up order and the first
/// parent found is kept, so the result is deterministic. Returns nullopt when
/// dst is unreachable.
template <typename IsOn>
std::optional<Path> shortest_connected_path(const GridSpec& spec, IsOn&& is_on, NodeCoord src, NodeCoord dst,
                                            BfsWorkspace& ws) {
  src = spec.normalize(src);
  dst = spec.normalize(dst);
  if (src == dst) return Path{};

  const std::uint32_t epoch = ws.begin_search();
  const std::size_t dst_index = spec.node_index(dst);
  std::size_t head = 0;
  ws.queue_.clear();
  ws.queue_.push_back(spec.node_index(src));
  ws.visited_epoch_[ws.queue_.front()] = epoch;

  bool found = false;
  while (head < ws.queue_.size() && !found) {
    const NodeCoord node = spec.node_at(ws.queue_[head++]);
    for (Direction d : kDirections) {
      const std::size_t next = spec.node_index(spec.neighbor(node, d));
      if (ws.visited_epoch_[next] == epoch) continue;
      if (!is_on(DirectedLink{node, d})) continue;
      ws.visited_epoch_[next] = epoch;
      ws.parent_dir_[next] = static_cast<std::uint8_t>(d);
      if (next == dst_index) {
        found = true;
        break;
      }
      ws.queue_.push_back(next);
    }
  }
  if (!found) return std::nullopt;

  Path path;
  NodeCoord cur = dst;
  while (!(cur == src)) {
    const auto dir = static_cast<Direction>(ws.parent_dir_[spec.node_index(cur)]);
    const NodeCoord prev = spec.neighbor(cur, opposite(dir));
    path.hops.push_back({prev, dir});
    cur = prev;
  }
  std::reverse(path.hops.begin(), path.hops.end());
  return path;
}

template <typename IsOn>
std::optional<Path> shortest_connected_path(const GridSpec& spec, IsOn&& is_on, NodeCoord src, NodeCoord dst) {
  BfsWorkspace ws{spec};
  return shortest_connected_path(spec, std::forward<IsOn>(is_on), src, dst, ws);
}

/// Uniform random monotone staircase among the shortest src -> dst paths.
/// The wrap direction on each axis is the shorter one; an exact tie (|d| ==
/// size/2) is broken by a fair coin.
template <Uniform64Generator G>
Path random_shortest_path(const GridSpec& spec, NodeCoord src, NodeCoord dst, G& rng) {
  src = spec.normalize(src);
  dst = spec.normalize(dst);
  const NodeCoord d = spec.displacement(src, dst);

  auto axis_direction = [&rng](int delta, int size, Direction neg, Direction pos) {
    if (2 * delta == size && bernoulli(rng, 0.5)) return neg;
    return delta > 0 ? pos : neg;
  };
  const Direction hdir = axis_direction(d.x, spec.m_planes(), Direction::left, Direction::right);
  const Direction vdir = axis_direction(d.y, spec.n_per_plane(), Direction::down, Direction::up);

  int h_left = d.x < 0 ? -d.x : d.x;
  int v_left = d.y < 0 ? -d.y : d.y;
  Path path;
  path.hops.reserve(static_cast<std::size_t>(h_left + v_left));
  NodeCoord cur = src;
  while (h_left + v_left > 0) {
    // Picking horizontal with probability h/(h+v) at every step yields each
    // interleaving with probability 1 / C(h+v, h).
    const bool horizontal =
        v_left == 0 || (h_left > 0 && uniform01(rng) * (h_left + v_left) < static_cast<double>(h_left));
    const Direction dir = horizontal ? hdir : vdir;
    path.hops.push_back({cur, dir});
    cur = spec.neighbor(cur, dir);
    (horizontal ? h_left : v_left) -= 1;
  }
  return path;
}

}  // namespace satroute
