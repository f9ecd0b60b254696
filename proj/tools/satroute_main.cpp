#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "satroute/sweep.hpp"
#include "satroute/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitBadArgs = 2;

struct Options {
  double p = 0.9;
  double mu = 0.99;
  long long tc = 5;
  int x = 5;
  int y = 5;
  std::string grid = "100x100";
  std::string policy;
  std::string buffered = "false";
  std::string u = "auto";
  unsigned long long trials = 2000;
  unsigned long long seed = 1;
  unsigned threads = 0;
  std::string out;

  std::string param = "mu";
  std::string values;
  std::string metric = "throughput";
  std::string range = "0:200";
  std::string suite = "all";
};

void parse_grid(const std::string& text, int& n, int& m) {
  const auto sep = text.find('x');
  std::size_t used_n = 0;
  std::size_t used_m = 0;
  try {
    if (sep == std::string::npos) throw std::invalid_argument("");
    n = std::stoi(text.substr(0, sep), &used_n);
    m = std::stoi(text.substr(sep + 1), &used_m);
  } catch (const std::exception&) {
    throw std::invalid_argument("--grid must look like NxM");
  }
  if (used_n != sep || used_m != text.size() - sep - 1) throw std::invalid_argument("--grid must look like NxM");
}

satroute::SweepConfig to_config(const Options& o) {
  satroute::SweepConfig cfg;
  cfg.param = satroute::parse_swept_param(o.param);
  if (!o.values.empty()) cfg.values = satroute::parse_value_list(o.values);
  cfg.p = o.p;
  cfg.mu = o.mu;
  cfg.t_c = o.tc;
  cfg.x = o.x;
  cfg.y = o.y;
  parse_grid(o.grid, cfg.grid_n, cfg.grid_m);
  if (!o.policy.empty()) cfg.policies = {satroute::parse_policy(o.policy)};
  cfg.buffered = o.buffered == "true";
  cfg.tie = satroute::TieSetting::parse(o.u);
  cfg.trials = o.trials;
  cfg.seed = o.seed;
  cfg.threads = o.threads;
  return cfg;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f{path, std::ios::binary};
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << text;
  if (!f) throw std::runtime_error("failed writing " + path);
}

std::string rows_to_csv(const std::vector<satroute::CsvRow>& rows) {
  std::string csv = satroute::kCsvHeader;
  csv += '\n';
  for (const auto& r : rows) csv += r.line() + '\n';
  return csv;
}

int cmd_point(const Options& o, bool analytic) {
  const satroute::SweepConfig cfg = to_config(o);
  const auto rows = satroute::evaluate_point(cfg, satroute::fixed_point(cfg), analytic, !analytic);
  if (!o.out.empty()) write_output(o.out, rows_to_csv(rows));
  for (const auto& r : rows) {
    if (analytic) {
      fmt::print("{:<5} {:<10} {:<12} {:<7} {}\n", r.policy, r.regime, r.metric, r.claim, r.estimate);
    } else {
      fmt::print("{:<5} {:<10} {:<12} {} +- {} (trials {}, seed {})\n", r.policy, r.regime, r.metric, r.estimate,
                 r.std_error, r.trials, r.seed);
    }
  }
  return kExitOk;
}

int cmd_sweep(const Options& o) {
  write_output(o.out, satroute::run_sweep(to_config(o)));
  return kExitOk;
}

int cmd_crossover(const Options& o) {
  const satroute::SweepConfig cfg = to_config(o);
  const satroute::PointSpec pt = satroute::fixed_point(cfg);
  const auto metric =
      o.metric == "delay" ? satroute::RouteMetric::delay : satroute::RouteMetric::throughput;
  long long lo = 0;
  long long hi = 0;
  {
    const auto sep = o.range.find(':');
    std::size_t used_lo = 0;
    std::size_t used_hi = 0;
    try {
      if (sep == std::string::npos) throw std::invalid_argument("");
      lo = std::stoll(o.range.substr(0, sep), &used_lo);
      hi = std::stoll(o.range.substr(sep + 1), &used_hi);
    } catch (const std::exception&) {
      used_lo = std::string::npos;
    }
    if (used_lo != sep || used_hi != o.range.size() - sep - 1 || lo < 0 || hi < lo) {
      throw std::invalid_argument("--range must be lo:hi with integers 0 <= lo <= hi");
    }
  }
  const auto t = satroute::find_crossover(metric, pt.params, pt.x, pt.y, lo, hi);
  const double gr = satroute::crossover_gr_value(metric, pt.params, pt.x, pt.y);
  if (t) {
    fmt::print("{} crossover t_c = {} (gr {}, scpr {})\n", o.metric, *t, gr,
               satroute::crossover_scpr_value(metric, pt.params, pt.x, pt.y, *t));
  } else {
    fmt::print("{} crossover: none in [{}, {}] (gr {})\n", o.metric, lo, hi, gr);
  }
  return kExitOk;
}

int cmd_verify(const Options& o) {
  const auto results = satroute::run_verify(o.suite, o.threads);
  int failures = 0;
  for (const auto& r : results) {
    fmt::print("{} {}/{}: {}\n", r.passed ? "PASS" : "FAIL", r.suite, r.name, r.detail);
    failures += r.passed ? 0 : 1;
  }
  fmt::print("{} checks, {} failed\n", results.size(), failures);
  return failures == 0 ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Routing simulator and analytic engine for toroidal satellite grids with Markov ON/OFF links"};
  app.name("satroute");
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value file; command-line flags take precedence");

  Options o;
  app.add_option("--p", o.p, "steady-state ON probability")->check(CLI::Range(0.0, 1.0));
  app.add_option("--mu", o.mu, "link memory 1 - eps1 - eps2")->check(CLI::Range(0.0, 1.0));
  app.add_option("--tc", o.tc, "controller staleness in slots")->check(CLI::NonNegativeNumber);
  app.add_option("--x", o.x, "source x offset (orbital planes)");
  app.add_option("--y", o.y, "source y offset (position in plane)");
  app.add_option("--grid", o.grid, "torus size NxM (N per plane, M planes)");
  app.add_option("--policy", o.policy, "scpr or gr (default: both)")->check(CLI::IsMember({"scpr", "gr"}));
  app.add_option("--buffered", o.buffered, "true for the buffered (delay) regime")
      ->check(CLI::IsMember({"true", "false"}));
  app.add_option("--u", o.u, "GR tie-break: a number in [0,1], auto (y/(x+y)) or deterministic");
  app.add_option("--trials", o.trials, "Monte Carlo trials");
  app.add_option("--seed", o.seed, "master seed");
  app.add_option("--threads", o.threads, "worker threads, 0 = all cores");
  app.add_option("--out", o.out, "write CSV here instead of stdout");
  app.add_option("--param", o.param, "swept parameter for sweep")->check(CLI::IsMember({"mu", "tc", "x"}));
  app.add_option("--values", o.values, "sweep grid, a,b,c or lo:step:hi");
  app.add_option("--metric", o.metric, "crossover metric")->check(CLI::IsMember({"throughput", "delay"}));
  app.add_option("--range", o.range, "crossover search range lo:hi");

  auto* analytic = app.add_subcommand("analytic", "evaluate the closed forms at one parameter point")->fallthrough();
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimate at one parameter point")->fallthrough();
  auto* sweep = app.add_subcommand("sweep", "sweep mu, tc or x and write CSV")->fallthrough();
  auto* crossover = app.add_subcommand("crossover", "smallest t_c at which GR beats SCPR")->fallthrough();
  auto* verify = app.add_subcommand("verify", "run built-in consistency suites")->fallthrough();
  verify->add_option("suite", o.suite, "suite name or all");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitBadArgs;
  }

  try {
    if (analytic->parsed()) return cmd_point(o, true);
    if (simulate->parsed()) return cmd_point(o, false);
    if (sweep->parsed()) return cmd_sweep(o);
    if (crossover->parsed()) return cmd_crossover(o);
    if (verify->parsed()) return cmd_verify(o);
  } catch (const std::invalid_argument& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitBadArgs;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitVerifyFailed;
  }
  return kExitBadArgs;
}
