#pragma once

#include <optional>
#include <utility>

#include "satroute/link_dynamics.hpp"

namespace satroute {

/// Probability of moving vertically when both toward-destination links are ON.
struct TieBreak {
  double u = 0.5;

  static TieBreak of(double u);
  double u_bar() const noexcept { return 1.0 - u; }
};

/// Unconditional per-move probability of a vertical move in the buffered walk.
struct DirectionBias {
  double w = 0.5;

  static DirectionBias of(double w);
  double w_bar() const noexcept { return 1.0 - w; }
};

/// GR throughput from an interior source (x, y >= 1) without buffers.
/// Independent of mu: every observed link is fresh. u in {0, 1} uses the
/// algebraically cancelled form of the singular factor.
double gr_throughput(double p, int x, int y, TieBreak tie);

/// Throughput along a single boundary line of n hops: p^n.
double gr_throughput_boundary(double p, int n);

/// GR throughput from any (x, y) >= 0, using recommended_u in the interior.
double gr_throughput_recommended(double p, int x, int y);

/// u = y / (x + y): keeps the walk near the diagonal and makes the throughput
/// symmetric in (x, y).
TieBreak recommended_u(int x, int y);

/// Vertical-move probability induced by tie-break u in the buffered walk.
DirectionBias w_from_u(const LinkParams& params, TieBreak tie);

/// [w(u=0), w(u=1)], the w values any tie-break can produce.
std::pair<double, double> attainable_w_interval(const LinkParams& params);

/// Inverse of w_from_u; nullopt when w_target is not attainable.
std::optional<TieBreak> u_for_target_w(const LinkParams& params, double w_target);

/// Whether w = y/(x+y) is attainable: min(x,y)/(x+y) >= (1-p)(p + (1-p)(1-eps2)/(2-eps2)).
bool shape_condition_holds(const LinkParams& params, int x, int y);

/// E[min(tau_x, tau_y)] for a walk that moves vertically with probability w.
/// Arguments with x > y are handled by the swap (x, y, w) -> (y, x, 1-w).
double expected_min_tau(int x, int y, double w);

/// Buffered GR mean delay by Wald's identity, for an explicit w.
double gr_delay_exact_component(const LinkParams& params, int x, int y, double w);

struct GrDelayBound {
  double value = 0.0;
  /// w = y/(x+y), or the attainable endpoint it was clamped to.
  double w = 0.5;
  bool clamped = false;
};

/// Upper bound on buffered GR mean delay with w = y/(x+y). When the shape
/// condition fails, w is clamped to the nearest attainable endpoint and the
/// exact component at that w is reported instead.
GrDelayBound gr_delay_upper_bound(const LinkParams& params, int x, int y);

}  // namespace satroute
