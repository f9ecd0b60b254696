#include "satroute/sweep.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "satroute/analytic_greedy.hpp"
#include "satroute/analytic_scpr.hpp"

namespace satroute {

TieSetting TieSetting::parse(const std::string& text) {
  if (text == "auto") return {Kind::recommended, 0.5};
  if (text == "deterministic") return {Kind::deterministic, 0.5};
  std::size_t used = 0;
  double u = 0.0;
  try {
    u = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty() || !(u >= 0.0 && u <= 1.0)) {
    throw std::invalid_argument("--u must be auto, deterministic or a number in [0, 1]");
  }
  return {Kind::fixed, u};
}

GrTieRule TieSetting::rule(int x, int y) const {
  switch (kind) {
    case Kind::fixed: return TieBreak{u};
    case Kind::deterministic: return DeterministicTie{};
    case Kind::recommended: break;
  }
  return recommended_u(x, y);
}

std::optional<TieBreak> TieSetting::analytic(int x, int y) const {
  if (kind == Kind::deterministic) return std::nullopt;
  return std::get<TieBreak>(rule(x, y));
}

std::vector<double> default_sweep_values(SweptParam param) {
  switch (param) {
    case SweptParam::mu: return {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99};
    case SweptParam::tc: {
      std::vector<double> v;
      for (int t = 0; t <= 50; t += 5) v.push_back(t);
      return v;
    }
    case SweptParam::x: {
      std::vector<double> v;
      for (int x = 1; x <= 20; ++x) v.push_back(x);
      return v;
    }
  }
  return {};
}

SweptParam parse_swept_param(const std::string& name) {
  if (name == "mu") return SweptParam::mu;
  if (name == "tc") return SweptParam::tc;
  if (name == "x") return SweptParam::x;
  throw std::invalid_argument("swept parameter must be mu, tc or x");
}

std::string to_string(SweptParam param) {
  switch (param) {
    case SweptParam::mu: return "mu";
    case SweptParam::tc: return "tc";
    case SweptParam::x: return "x";
  }
  return {};
}

Policy parse_policy(const std::string& name) {
  if (name == "scpr") return Policy::scpr;
  if (name == "gr") return Policy::gr;
  throw std::invalid_argument("policy must be scpr or gr");
}

std::string to_string(Policy policy) { return policy == Policy::scpr ? "scpr" : "gr"; }

std::vector<double> parse_value_list(const std::string& text) {
  auto number = [](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (s.empty() || used != s.size() || !std::isfinite(v)) throw std::invalid_argument("bad number '" + s + "'");
    return v;
  };

  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss{text};
    for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
    if (parts.size() != 3) throw std::invalid_argument("range must look like lo:step:hi");
    const double lo = number(parts[0]);
    const double step = number(parts[1]);
    const double hi = number(parts[2]);
    if (!(step > 0.0) || hi < lo) throw std::invalid_argument("range needs step > 0 and hi >= lo");
    // Index-based stepping, so 0:0.1:1 ends at exactly 1.
    const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    for (long i = 0; i <= count; ++i) out.push_back(lo + static_cast<double>(i) * step);
    return out;
  }
  std::stringstream ss{text};
  for (std::string part; std::getline(ss, part, ',');) out.push_back(number(part));
  if (out.empty()) throw std::invalid_argument("empty value list");
  return out;
}

std::string CsvRow::line() const {
  return fmt::format("{},{},{},{},{},{},{},{},{},{},{}", param, value, policy, regime, metric, kind, estimate,
                     std_error, trials, seed, claim);
}

namespace {

int as_integer(double v, const char* what, int min) {
  if (v != std::floor(v) || v < min || v > 1e6) {
    throw std::invalid_argument(fmt::format("{} values must be integers >= {}", what, min));
  }
  return static_cast<int>(v);
}

PointSpec make_point(const SweepConfig& cfg, double value) {
  switch (cfg.param) {
    case SweptParam::mu: return {LinkParams::from_p_mu(cfg.p, value), cfg.t_c, cfg.x, cfg.y};
    case SweptParam::tc: return {LinkParams::from_p_mu(cfg.p, cfg.mu), as_integer(value, "tc", 0), cfg.x, cfg.y};
    case SweptParam::x: {
      const int x = as_integer(value, "x", 1);
      return {LinkParams::from_p_mu(cfg.p, cfg.mu), cfg.t_c, x, x};
    }
  }
  throw std::logic_error("unknown swept parameter");
}

class RowMaker {
 public:
  RowMaker(const SweepConfig& cfg, Policy policy, std::vector<CsvRow>& out)
      : policy_{to_string(policy)}, regime_{cfg.buffered ? "buffered" : "bufferless"}, out_{out} {}

  void analytic(const char* metric, double estimate, const char* claim) const {
    out_.push_back({{}, {}, policy_, regime_, metric, "analytic", fmt::format("{}", estimate), {}, {}, {}, claim});
  }

  void mc(const char* metric, const Estimate& e) const {
    out_.push_back({{}, {}, policy_, regime_, metric, "mc", fmt::format("{}", e.mean), fmt::format("{}", e.std_error),
                    fmt::format("{}", e.trials), fmt::format("{}", e.seed), {}});
  }

 private:
  std::string policy_;
  std::string regime_;
  std::vector<CsvRow>& out_;
};

void validate(const SweepConfig& cfg) {
  if (cfg.policies.empty()) throw std::invalid_argument("at least one policy is required");
  if (cfg.x < 0 || cfg.y < 0 || cfg.x + cfg.y == 0) throw std::invalid_argument("x, y must be >= 0 with x + y > 0");
  if (cfg.t_c < 0) throw std::invalid_argument("tc must be non-negative");
}

}  // namespace

PointSpec fixed_point(const SweepConfig& cfg) {
  validate(cfg);
  return {LinkParams::from_p_mu(cfg.p, cfg.mu), cfg.t_c, cfg.x, cfg.y};
}

std::vector<CsvRow> evaluate_point(const SweepConfig& cfg, const PointSpec& pt, bool analytic, bool mc) {
  const GridSpec spec{cfg.grid_n, cfg.grid_m};
  const NodeCoord src{pt.x, pt.y};
  if (mc && !spec.contains(src)) throw std::invalid_argument("source lies outside the grid's coordinate range");
  if (mc && cfg.trials == 0) throw std::invalid_argument("Monte Carlo needs at least one trial");

  std::vector<CsvRow> rows;
  for (Policy policy : cfg.policies) {
    const RowMaker row{cfg, policy, rows};
    if (policy == Policy::scpr) {
      if (analytic && cfg.buffered) {
        row.analytic("delay", scpr_delay_lower_bound(pt.params, pt.x, pt.y, pt.t_c), "claim2");
      } else if (analytic) {
        row.analytic("throughput", scpr_throughput_bound(pt.params, pt.x, pt.y, pt.t_c), "claim1");
      }
      if (mc) {
        const ScprTrialConfig sim{spec, pt.params, pt.t_c, src, {0, 0}, cfg.buffered};
        row.mc(cfg.buffered ? "delay" : "throughput",
               estimate(sim, cfg.buffered ? Metric::delay : Metric::throughput, cfg.trials, cfg.seed, cfg.threads));
      }
      continue;
    }

    const std::optional<TieBreak> tie = cfg.tie.analytic(pt.x, pt.y);
    const bool interior = pt.x > 0 && pt.y > 0;
    if (analytic && cfg.buffered) {
      row.analytic("delay", gr_delay_upper_bound(pt.params, pt.x, pt.y).value, "claim4");
      if (tie) {
        const double w = w_from_u(pt.params, *tie).w;
        row.analytic("delay", gr_delay_exact_component(pt.params, pt.x, pt.y, w), "eq23");
        if (interior) row.analytic("boundary_hit", expected_min_tau(pt.x, pt.y, w), "eqEK");
      }
    } else if (analytic && tie) {
      const double t = interior ? gr_throughput(pt.params.p(), pt.x, pt.y, *tie)
                                : gr_throughput_boundary(pt.params.p(), pt.x + pt.y);
      row.analytic("throughput", t, "claim3");
    }
    if (mc) {
      const GrTrialConfig sim{spec, pt.params, src, {0, 0}, cfg.buffered, cfg.tie.rule(pt.x, pt.y)};
      const auto outcomes = run_trials(sim, cfg.trials, cfg.seed, cfg.threads);
      if (cfg.buffered) {
        row.mc("delay", summarize(outcomes, Metric::delay, cfg.seed));
        if (interior) row.mc("boundary_hit", summarize(outcomes, Metric::boundary_hit, cfg.seed));
      } else {
        row.mc("throughput", summarize(outcomes, Metric::throughput, cfg.seed));
      }
    }
  }
  return rows;
}

std::string run_sweep(const SweepConfig& cfg) {
  validate(cfg);
  if (cfg.param == SweptParam::x && cfg.x != cfg.y) throw std::invalid_argument("an x sweep requires x = y");
  const std::vector<double> values = cfg.values.empty() ? default_sweep_values(cfg.param) : cfg.values;

  std::string out = kCsvHeader;
  out += '\n';
  for (double value : values) {
    const std::string shown = cfg.param == SweptParam::mu ? fmt::format("{}", value)
                                                          : fmt::format("{}", static_cast<long long>(value));
    for (CsvRow& r : evaluate_point(cfg, make_point(cfg, value), true, cfg.trials > 0)) {
      r.param = to_string(cfg.param);
      r.value = shown;
      out += r.line();
      out += '\n';
    }
  }
  return out;
}

double crossover_gr_value(RouteMetric metric, const LinkParams& params, int x, int y) {
  if (metric == RouteMetric::throughput) return gr_throughput_recommended(params.p(), x, y);
  const double w = w_from_u(params, recommended_u(x, y)).w;
  return gr_delay_exact_component(params, x, y, w);
}

double crossover_scpr_value(RouteMetric metric, const LinkParams& params, int x, int y, std::int64_t t_c) {
  return metric == RouteMetric::throughput ? scpr_throughput_bound(params, x, y, t_c)
                                           : scpr_delay_lower_bound(params, x, y, t_c);
}

std::optional<std::int64_t> find_crossover(RouteMetric metric, const LinkParams& params, int x, int y,
                                           std::int64_t lo, std::int64_t hi) {
  if (lo < 0 || hi < lo) throw std::invalid_argument("search range needs 0 <= lo <= hi");
  const double gr = crossover_gr_value(metric, params, x, y);
  auto gr_wins = [&](std::int64_t t_c) {
    const double scpr = crossover_scpr_value(metric, params, x, y, t_c);
    return metric == RouteMetric::throughput ? gr >= scpr : gr <= scpr;
  };

  // The SCPR value is monotone in t_c, so the predicate flips at most once.
  if (!gr_wins(hi)) {
    for (std::int64_t t = lo; t < hi; ++t) {
      if (gr_wins(t)) return t;
    }
    return std::nullopt;
  }
  std::int64_t a = lo;
  std::int64_t b = hi;
  while (a < b) {
    const std::int64_t mid = a + (b - a) / 2;
    if (gr_wins(mid)) b = mid;
    else a = mid + 1;
  }
  if (a == lo || !gr_wins(a - 1)) return a;
  // Not monotone after all: fall back to a scan.
  for (std::int64_t t = lo; t < a; ++t) {
    if (gr_wins(t)) return t;
  }
  return a;
}

}  // namespace satroute
