#include "satroute/analytic_greedy.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "satroute/special_functions.hpp"

namespace satroute {
namespace {

// Below this the (1/u)^y style factor is evaluated in cancelled form.
constexpr double kSingularTieBreak = 1e-3;

void require_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0, 1]");
}

// p^b (p (1 - s p))^a sum_{k<b} C(k+a-1, k) (1 - q p)^k, i.e.
// p^b ((1 - s p)/q)^a I_{qp}(a, b) with the q^a factors cancelled (q = 1 - s).
double throughput_term_cancelled(double p, int a, int b, double s) {
  const double q = 1.0 - s;
  double sum = 0.0;
  double coeff = 1.0;
  const double ratio = 1.0 - q * p;
  double power = 1.0;
  for (int k = 0; k < b; ++k) {
    sum += coeff * power;
    coeff *= static_cast<double>(k + a) / static_cast<double>(k + 1);
    power *= ratio;
  }
  return std::pow(p, b) * std::pow(p * (1.0 - s * p), a) * sum;
}

double throughput_term(double p, int a, int b, double s) {
  const double q = 1.0 - s;
  if (q < kSingularTieBreak) return throughput_term_cancelled(p, a, b, s);
  return std::pow(p, b) * std::pow((1.0 - s * p) / q, a) * reg_inc_beta(q * p, a, b);
}

}  // namespace

TieBreak TieBreak::of(double u) {
  if (!(u >= 0.0 && u <= 1.0)) throw std::invalid_argument("tie-break u must lie in [0, 1]");
  return TieBreak{u};
}

DirectionBias DirectionBias::of(double w) {
  if (!(w >= 0.0 && w <= 1.0)) throw std::invalid_argument("direction bias w must lie in [0, 1]");
  return DirectionBias{w};
}

double gr_throughput(double p, int x, int y, TieBreak tie) {
  require_probability(p);
  if (x < 1 || y < 1) throw std::invalid_argument("gr_throughput needs an interior source (x, y >= 1)");
  const double u = tie.u;
  // First term: boundary x' = 0 reached first (horizontal moves exhausted).
  return throughput_term(p, x, y, u) + throughput_term(p, y, x, 1.0 - u);
}

double gr_throughput_boundary(double p, int n) {
  require_probability(p);
  if (n < 0) throw std::invalid_argument("hop count must be nonnegative");
  return std::pow(p, n);
}

double gr_throughput_recommended(double p, int x, int y) {
  if (x < 0 || y < 0) throw std::invalid_argument("hop offsets must be nonnegative");
  if (x == 0 || y == 0) return gr_throughput_boundary(p, x + y);
  return gr_throughput(p, x, y, recommended_u(x, y));
}

TieBreak recommended_u(int x, int y) {
  if (x < 0 || y < 0 || x + y == 0) throw std::invalid_argument("recommended_u needs x, y >= 0, x + y > 0");
  return TieBreak{static_cast<double>(y) / static_cast<double>(x + y)};
}

DirectionBias w_from_u(const LinkParams& params, TieBreak tie) {
  const double p = params.p();
  const double e2 = params.epsilon2();
  const double q = 1.0 - p;
  return DirectionBias{tie.u * p * p + p * q + q * q * (tie.u * e2 / (2.0 - e2) + (1.0 - e2) / (2.0 - e2))};
}

std::pair<double, double> attainable_w_interval(const LinkParams& params) {
  return {w_from_u(params, TieBreak{0.0}).w, w_from_u(params, TieBreak{1.0}).w};
}

std::optional<TieBreak> u_for_target_w(const LinkParams& params, double w_target) {
  const auto [lo, hi] = attainable_w_interval(params);
  constexpr double slack = 1e-12;
  if (w_target < lo - slack || w_target > hi + slack) return std::nullopt;
  const double u = (w_target - lo) / (hi - lo);
  return TieBreak{std::fmin(1.0, std::fmax(0.0, u))};
}

bool shape_condition_holds(const LinkParams& params, int x, int y) {
  if (x < 0 || y < 0 || x + y == 0) throw std::invalid_argument("shape condition needs x, y >= 0, x + y > 0");
  const double p = params.p();
  const double e2 = params.epsilon2();
  const double rhs = (1.0 - p) * (p + (1.0 - p) * (1.0 - e2) / (2.0 - e2));
  return static_cast<double>(std::min(x, y)) / static_cast<double>(x + y) >= rhs;
}

double expected_min_tau(int x, int y, double w) {
  if (x < 0 || y < 0) throw std::invalid_argument("hop offsets must be nonnegative");
  if (!(w >= 0.0 && w <= 1.0)) throw std::invalid_argument("w must lie in [0, 1]");
  if (x > y) return expected_min_tau(y, x, 1.0 - w);
  if (x == 0) return 0.0;
  // Degenerate walks: all-horizontal hits x' = 0 after x moves, all-vertical
  // hits y' = 0 after y moves.
  if (w == 0.0) return x;
  if (w == 1.0) return y;
  const double wb = 1.0 - w;
  return x / wb - std::pow(w, y - 1) * std::pow(wb, x - 1) / beta_fn(y, x) +
         (y / w - x / wb) * reg_inc_beta(w, y, x);
}

double gr_delay_exact_component(const LinkParams& params, int x, int y, double w) {
  if (x < 0 || y < 0) throw std::invalid_argument("hop offsets must be nonnegative");
  const double p = params.p();
  const double e2 = params.epsilon2();
  const double hops = x + y;
  const double boundary_wait = (1.0 - p) / e2;
  if (x == 0 || y == 0) return hops * (1.0 + boundary_wait);
  const double interior_wait = (1.0 - p) * (1.0 - p) / (2.0 * e2 - e2 * e2);
  const double e_min = expected_min_tau(x, y, w);
  return hops + interior_wait * e_min + boundary_wait * (hops - e_min);
}

GrDelayBound gr_delay_upper_bound(const LinkParams& params, int x, int y) {
  if (x < 0 || y < 0 || x + y == 0) throw std::invalid_argument("gr_delay_upper_bound needs x, y >= 0, x + y > 0");
  if (x == 0 || y == 0) {
    return {gr_delay_exact_component(params, x, y, x == 0 ? 1.0 : 0.0), x == 0 ? 1.0 : 0.0, false};
  }
  const double hops = x + y;
  const double w = y / hops;
  if (!shape_condition_holds(params, x, y)) {
    const auto [lo, hi] = attainable_w_interval(params);
    const double w_clamped = w < lo ? lo : hi;
    return {gr_delay_exact_component(params, x, y, w_clamped), w_clamped, true};
  }
  const double p = params.p();
  const double e2 = params.epsilon2();
  const double denom = 2.0 * e2 - e2 * e2;
  const double linear = hops * (1.0 + (1.0 - p) * (1.0 - p) / denom);
  const double correction =
      (1.0 - p) * (1.0 - e2 + p) / denom * std::sqrt(hops / (2.0 * std::numbers::pi * w * (1.0 - w)));
  return {linear + correction, w, false};
}

}  // namespace satroute
