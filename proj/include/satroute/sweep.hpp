#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "satroute/grid_topology.hpp"
#include "satroute/link_dynamics.hpp"
#include "satroute/optimal_policies.hpp"
#include "satroute/simulator.hpp"

namespace satroute {

enum class Policy { scpr, gr };
enum class SweptParam { mu, tc, x };

/// GR tie-break as given on the command line.
struct TieSetting {
  enum class Kind { fixed, recommended, deterministic };
  Kind kind = Kind::recommended;
  double u = 0.5;

  /// "auto", "deterministic" or a number in [0, 1].
  static TieSetting parse(const std::string& text);
  /// The simulator rule for source offset (x, y).
  GrTieRule rule(int x, int y) const;
  /// The analytic tie-break, absent for the deterministic rule.
  std::optional<TieBreak> analytic(int x, int y) const;
};

struct SweepConfig {
  SweptParam param = SweptParam::mu;
  /// Empty means the default grid for `param`.
  std::vector<double> values;
  double p = 0.9;
  double mu = 0.99;
  std::int64_t t_c = 5;
  int x = 5;
  int y = 5;
  int grid_n = 100;
  int grid_m = 100;
  std::vector<Policy> policies{Policy::scpr, Policy::gr};
  bool buffered = false;
  TieSetting tie;
  /// 0 writes analytic rows only.
  std::uint64_t trials = 2000;
  std::uint64_t seed = 1;
  unsigned threads = 0;
};

std::vector<double> default_sweep_values(SweptParam param);

SweptParam parse_swept_param(const std::string& name);
std::string to_string(SweptParam param);
Policy parse_policy(const std::string& name);
std::string to_string(Policy policy);

/// Parses "a,b,c" or "lo:step:hi" (inclusive, step > 0).
std::vector<double> parse_value_list(const std::string& text);

inline constexpr const char* kCsvHeader = "param,value,policy,regime,metric,kind,estimate,stderr,trials,seed,claim";

/// One CSV record; fields that do not apply stay empty.
struct CsvRow {
  std::string param;
  std::string value;
  std::string policy;
  std::string regime;
  std::string metric;
  std::string kind;
  std::string estimate;
  std::string std_error;
  std::string trials;
  std::string seed;
  std::string claim;

  std::string line() const;
};

/// A fully resolved parameter point.
struct PointSpec {
  LinkParams params;
  std::int64_t t_c = 0;
  int x = 0;
  int y = 0;
};

/// The config's fixed parameters, with the swept parameter ignored.
PointSpec fixed_point(const SweepConfig& config);

/// Analytic and/or Monte Carlo rows for every configured policy at one
/// point. param and value are left empty.
std::vector<CsvRow> evaluate_point(const SweepConfig& config, const PointSpec& point, bool analytic, bool mc);

/// One analytic row per formula and one mc row per metric at every grid
/// point. Output is a pure function of the config, whatever `threads` is.
std::string run_sweep(const SweepConfig& config);

/// Smallest t_c in [lo, hi] at which GR beats SCPR analytically.
/// Throughput: GR formula >= SCPR bound. Delay: GR exact component (w from
/// the recommended tie-break) <= SCPR recursion. Absent if never in range.
std::optional<std::int64_t> find_crossover(RouteMetric metric, const LinkParams& params, int x, int y,
                                           std::int64_t lo, std::int64_t hi);

/// Analytic GR value used by find_crossover.
double crossover_gr_value(RouteMetric metric, const LinkParams& params, int x, int y);
/// Analytic SCPR value used by find_crossover.
double crossover_scpr_value(RouteMetric metric, const LinkParams& params, int x, int y, std::int64_t t_c);

}  // namespace satroute
