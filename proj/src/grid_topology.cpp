#include "satroute/grid_topology.hpp"

#include <cstdlib>
#include <stdexcept>
#include <unordered_set>

namespace satroute {
namespace {

// floor(-size/2) + 1, the lowest centered coordinate on an axis of `size` nodes.
constexpr int axis_min(int size) noexcept { return -(size / 2) + (size % 2 == 0 ? 1 : 0); }

constexpr int wrap(int v, int lo, int size) noexcept {
  int r = (v - lo) % size;
  if (r < 0) r += size;
  return r + lo;
}

}  // namespace

GridSpec::GridSpec(int n_per_plane, int m_planes)
    : n_{n_per_plane}, m_{m_planes}, x_min_{axis_min(m_planes)}, y_min_{axis_min(n_per_plane)} {
  if (n_per_plane < 3 || m_planes < 3) {
    throw std::invalid_argument("torus dimensions must be at least 3x3");
  }
}

NodeCoord GridSpec::normalize(NodeCoord c) const noexcept {
  return {wrap(c.x, x_min_, m_), wrap(c.y, y_min_, n_)};
}

bool GridSpec::contains(NodeCoord c) const noexcept {
  return c.x >= x_min() && c.x <= x_max() && c.y >= y_min() && c.y <= y_max();
}

std::array<NodeCoord, 4> GridSpec::neighbors(NodeCoord c) const noexcept {
  return {neighbor(c, Direction::left), neighbor(c, Direction::down), neighbor(c, Direction::right),
          neighbor(c, Direction::up)};
}

int hop_distance(const GridSpec& spec, NodeCoord a, NodeCoord b) noexcept {
  const int dx = std::abs(spec.normalize(b).x - spec.normalize(a).x);
  const int dy = std::abs(spec.normalize(b).y - spec.normalize(a).y);
  return std::min(dx, spec.m_planes() - dx) + std::min(dy, spec.n_per_plane() - dy);
}

std::vector<NodeCoord> Path::nodes(const GridSpec& spec) const {
  std::vector<NodeCoord> out;
  if (hops.empty()) return out;
  out.reserve(hops.size() + 1);
  out.push_back(hops.front().from);
  for (const auto& hop : hops) out.push_back(hop.to(spec));
  return out;
}

bool is_valid_path(const GridSpec& spec, const Path& path, NodeCoord src, NodeCoord dst) {
  src = spec.normalize(src);
  dst = spec.normalize(dst);
  if (path.empty()) return src == dst;
  if (!(path.hops.front().from == src)) return false;
  for (std::size_t i = 0; i + 1 < path.hops.size(); ++i) {
    if (!(path.hops[i].to(spec) == path.hops[i + 1].from)) return false;
  }
  if (!(path.hops.back().to(spec) == dst)) return false;
  std::unordered_set<std::size_t> seen;
  for (NodeCoord n : path.nodes(spec)) {
    if (!seen.insert(spec.node_index(n)).second) return false;
  }
  return true;
}

BfsWorkspace::BfsWorkspace(const GridSpec& spec)
    : visited_epoch_(spec.node_count(), 0), parent_dir_(spec.node_count(), 0) {
  queue_.reserve(spec.node_count());
}

std::uint32_t BfsWorkspace::begin_search() {
  if (++epoch_ == 0) {
    std::fill(visited_epoch_.begin(), visited_epoch_.end(), 0);
    epoch_ = 1;
  }
  return epoch_;
}

}  // namespace satroute
