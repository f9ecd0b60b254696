// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.
// Usage: acceptance [path-to-satroute]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "oracles.hpp"
#include "satroute/analytic_greedy.hpp"
#include "satroute/analytic_scpr.hpp"
#include "satroute/dual.hpp"
#include "satroute/optimal_policies.hpp"
#include "satroute/simulator.hpp"
#include "satroute/special_functions.hpp"
#include "satroute/sweep.hpp"

using namespace satroute;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

// Collects sub-check results; the first failures are kept for the summary line.
class Checks {
 public:
  void require(bool ok, const std::string& what) {
    ++total_;
    if (ok) return;
    ++failed_;
    if (failures_.size() < 3) failures_.push_back(what);
  }
  bool ok() const { return failed_ == 0; }
  std::string failures() const {
    std::string s = fmt::format("{}/{} sub-checks failed", failed_, total_);
    for (const auto& f : failures_) s += "; " + f;
    return s;
  }
  int total() const { return total_; }

 private:
  int total_ = 0;
  int failed_ = 0;
  std::vector<std::string> failures_;
};

bool within(const Estimate& e, double want, double k = 3.0) { return std::abs(e.mean - want) <= k * e.std_error; }

std::string mc_text(const Estimate& e, double want) {
  return fmt::format("mc {:.6g}+-{:.2g} vs {:.6g}", e.mean, e.std_error, want);
}

const GridSpec kPaperGrid{100, 100};
constexpr double kP = 0.9;
const std::vector<double> kMuSweep{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99};

Verdict c1_claim3_oracle() {
  double worst = 0.0;
  for (double p : {0.3, 0.6, 0.9}) {
    for (int x = 1; x <= 8; ++x) {
      for (int y = 1; y <= 8; ++y) {
        for (double u : {0.2, 0.5, 0.8, static_cast<double>(y) / (x + y)}) {
          worst = std::max(worst, std::abs(gr_throughput(p, x, y, TieBreak{u}) - oracle::gr_throughput_dp(p, x, y, u)));
        }
      }
    }
  }
  return {worst <= 1e-9, fmt::format("max |formula - DP| = {:.3g}", worst)};
}

Verdict c2_hand_value() {
  const double v = gr_throughput(0.9, 1, 1, TieBreak{0.5});
  return {std::abs(v - 0.891) <= 1e-12, fmt::format("T = {:.15g}", v)};
}

Verdict c3_min_tau() {
  double worst = 0.0;
  for (int x = 1; x <= 12; ++x) {
    for (int y = x; y <= 12; ++y) {
      for (int i = 1; i <= 9; ++i) {
        const double w = i / 10.0;
        worst = std::max(worst, std::abs(expected_min_tau(x, y, w) - oracle::min_tau_recursion(x, y, w)));
      }
    }
  }
  const double unit = expected_min_tau(1, 1, 0.5);
  return {worst <= 1e-9 && unit == 1.0, fmt::format("max |closed - direct| = {:.3g}, E(1,1,0.5) = {}", worst, unit)};
}

Verdict c4_claim1(std::uint64_t seed) {
  Checks c;
  for (double mu : {0.0, 0.9, 0.99}) {
    const auto lp = LinkParams::from_p_mu(kP, mu);
    for (int tc : {0, 5}) {
      for (int len : {2, 10}) {
        const Estimate e = run_stylized_scpr_path(lp, len, tc, false, 1000000, seed++);
        const double want = scpr_path_success_prob(lp, len, tc);
        c.require(within(e, want), fmt::format("stylized mu={} tc={} len={}: {}", mu, tc, len, mc_text(e, want)));
      }
    }
  }
  auto network = [&](double mu, int tc, int x) {
    const auto lp = LinkParams::from_p_mu(kP, mu);
    const Estimate e = estimate(ScprTrialConfig{kPaperGrid, lp, tc, {x, x}}, Metric::throughput, 2000, seed++);
    const double bound = scpr_throughput_bound(lp, x, x, tc);
    c.require(e.mean <= bound + 3.0 * e.std_error, fmt::format("network mu={} tc={} x={}: {}", mu, tc, x, mc_text(e, bound)));
  };
  for (double mu : kMuSweep) network(mu, 5, 5);
  for (int tc = 0; tc <= 50; tc += 5) network(0.99, tc, 5);
  for (int x = 1; x <= 20; ++x) network(0.99, 5, x);
  return {c.ok(), c.ok() ? fmt::format("{} points within 3 sigma / under bound", c.total()) : c.failures()};
}

Verdict c5_claim2(std::uint64_t seed) {
  Checks c;
  for (double mu : {0.5, 0.9, 0.99}) {
    const auto lp = LinkParams::from_p_mu(kP, mu);
    for (int tc : {0, 5}) {
      const Estimate e = run_stylized_scpr_path(lp, 10, tc, true, 1000000, seed++);
      const double want = scpr_delay_lower_bound(lp, 5, 5, tc);
      c.require(within(e, want), fmt::format("mu={} tc={}: {}", mu, tc, mc_text(e, want)));
    }
  }
  const auto memoryless = LinkParams::from_p_mu(kP, 0.0);
  const double closed = 10.0 * (1.0 + (1.0 - kP) / memoryless.epsilon2());
  const Estimate e0 = run_stylized_scpr_path(memoryless, 10, 5, true, 1000000, seed++);
  c.require(within(e0, closed), fmt::format("mu=0 closed form: {}", mc_text(e0, closed)));
  c.require(std::abs(scpr_delay_lower_bound(memoryless, 5, 5, 5) - closed) < 1e-12, "mu=0 bound != closed form");

  double worst = 0.0;
  for (double mu : {0.5, 0.9, 0.99}) {
    const auto lp = LinkParams::from_p_mu(kP, mu);
    for (int tc : {0, 5}) {
      const Dual t = Dual::variable(0.0);
      const double h = 1e-6;
      auto fa = [&](double s) { return mgf_coeff_a(lp, s); };
      auto fb = [&](double s) { return mgf_coeff_b(lp, tc, s); };
      worst = std::max(worst, std::abs(mgf_coeff_a(lp, t).deriv - oracle::central_difference(fa, 0.0, h)));
      worst = std::max(worst, std::abs(mgf_coeff_b(lp, tc, t).deriv - oracle::central_difference(fb, 0.0, h)));
    }
  }
  c.require(worst < 1e-6, fmt::format("dual vs central difference {:.3g}", worst));
  return {c.ok(), c.ok() ? fmt::format("{} checks; dual vs FD max {:.2g}", c.total(), worst) : c.failures()};
}

Verdict c6_claim4(std::uint64_t seed) {
  Checks c;
  auto point = [&](double mu, int x) {
    const auto lp = LinkParams::from_p_mu(kP, mu);
    const GrDelayBound bound = gr_delay_upper_bound(lp, x, x);
    const GrTrialConfig cfg{kPaperGrid, lp, {x, x}, {0, 0}, true, recommended_u(x, x)};
    const Estimate e = estimate(cfg, Metric::delay, 2000, seed++);
    c.require(bound.value >= e.mean - 3.0 * e.std_error, fmt::format("mu={} x={}: bound {:.6g} {}", mu, x, bound.value, mc_text(e, bound.value)));
    c.require(bound.value >= gr_delay_exact_component(lp, x, x, bound.w) - 1e-12,
              fmt::format("mu={} x={}: bound below exact component", mu, x));
  };
  for (double mu : kMuSweep) point(mu, 5);
  for (int x = 1; x <= 20; ++x) point(0.99, x);
  // Exact-component dominance over a wider lattice.
  for (double p : {0.5, 0.7, 0.9}) {
    for (double mu : {0.0, 0.5, 0.9, 0.99}) {
      const auto lp = LinkParams::from_p_mu(p, mu);
      for (int x = 1; x <= 20; ++x) {
        for (int y = 1; y <= 20; ++y) {
          const GrDelayBound b = gr_delay_upper_bound(lp, x, y);
          c.require(b.value >= gr_delay_exact_component(lp, x, y, b.w) - 1e-12,
                    fmt::format("p={} mu={} ({},{}) bound below exact", p, mu, x, y));
        }
      }
    }
  }
  return {c.ok(), c.ok() ? fmt::format("{} comparisons hold", c.total()) : c.failures()};
}

Verdict c7_mu_independence(std::uint64_t seed) {
  const double want = gr_throughput(kP, 5, 5, TieBreak{0.5});
  const Estimate a = estimate(GrTrialConfig{kPaperGrid, LinkParams::from_p_mu(kP, 0.0), {5, 5}}, Metric::throughput, 100000, seed);
  const Estimate b =
      estimate(GrTrialConfig{kPaperGrid, LinkParams::from_p_mu(kP, 0.99), {5, 5}}, Metric::throughput, 100000, seed + 1);
  const bool joint = std::abs(a.mean - b.mean) <= 3.0 * std::hypot(a.std_error, b.std_error);
  return {joint && within(a, want) && within(b, want),
          fmt::format("mu=0 {:.5f}+-{:.1g}, mu=0.99 {:.5f}+-{:.1g}, formula {:.5f}", a.mean, a.std_error, b.mean,
                      b.std_error, want)};
}

Verdict c8_crossovers() {
  const auto lp = LinkParams::from_p_mu(kP, 0.99);
  const auto t = find_crossover(RouteMetric::throughput, lp, 5, 5, 0, 200);
  const auto d = find_crossover(RouteMetric::delay, lp, 5, 5, 0, 200);
  const bool t_ok = t && *t >= 33 && *t <= 38;
  const bool d_ok = d && *d >= 29 && *d <= 35;
  auto show = [](const std::optional<std::int64_t>& v) { return v ? std::to_string(*v) : std::string{"none"}; };
  std::string detail = fmt::format("throughput t_c = {} (want [33,38]{}), delay t_c = {} (want [29,35]{})", show(t),
                                   t_ok ? "" : " MISS", show(d), d_ok ? "" : " MISS");
  if (!d_ok && d) {
    detail += fmt::format("; GR exact {:.4f} vs SCPR recursion {:.4f} at t_c = {}",
                          crossover_gr_value(RouteMetric::delay, lp, 5, 5),
                          crossover_scpr_value(RouteMetric::delay, lp, 5, 5, *d), *d);
  }
  return {t_ok && d_ok, detail};
}

Verdict c9_mu0_optimality(std::uint64_t seed) {
  Checks c;
  std::string ordering;
  for (int size : {9, 11}) {
    const GridSpec g{size, size};
    for (double p : {0.3, 0.6, 0.9}) {
      const auto vi = value_iterate_delay(g, p, 1e-12);
      const std::string tag = fmt::format("{}x{} p={}", size, size, p);
      c.require(vi.converged && vi.residual < 1e-12, tag + " value iteration did not converge");

      int argmin_bad = 0;
      for (const auto& v : check_greedy_attains_argmin(vi.table)) {
        if (v.node.y >= v.node.x) ++argmin_bad;
      }
      c.require(argmin_bad == 0, fmt::format("{} greedy misses argmin at {} (node, quad) pairs", tag, argmin_bad));

      const auto viol = check_mean_delay_ordering(vi.table);
      if (!viol.empty()) {
        const auto& v = viol.front();
        c.require(false, fmt::format("{} ordering: {} violations, e.g. D({},{})={:.4f} > D({},{})={:.4f}", tag,
                                     viol.size(), v.expected_lower.x, v.expected_lower.y, v.d_lower,
                                     v.expected_higher.x, v.expected_higher.y, v.d_higher));
      } else {
        c.require(true, "");
      }

      const GrTrialConfig cfg{g, LinkParams::from_p_mu(p, 0.0), {3, 4}, {0, 0}, true, DeterministicTie{}};
      const Estimate e = estimate(cfg, Metric::delay, 100000, seed++);
      const double want = vi.table.d_bar({3, 4});
      c.require(within(e, want), fmt::format("{} MC from (3,4): {}", tag, mc_text(e, want)));
    }
  }
  return {c.ok(), c.ok() ? fmt::format("{} checks hold", c.total()) : c.failures()};
}

Verdict c10_path_lemma() {
  int bad = 0;
  for (double p : {0.5, 0.9}) {
    for (double mu : {0.1, 0.9}) {
      for (std::int64_t tc : {0, 5}) bad += static_cast<int>(verify_connected_path_ordering(LinkParams::from_p_mu(p, mu), tc, 20).size());
    }
  }
  return {bad == 0, fmt::format("{} violations over 8 parameter sets", bad)};
}

Verdict c11_special() {
  double sym = 0.0;
  double pascal = 0.0;
  for (int a = 1; a <= 30; ++a) {
    for (int b = 1; b <= 30; ++b) {
      for (int i = 0; i <= 100; ++i) {
        const double v = i / 100.0;
        sym = std::max(sym, std::abs(reg_inc_beta(v, a, b) + reg_inc_beta(1.0 - v, b, a) - 1.0));
        if (a > 1 && b > 1) {
          pascal = std::max(pascal,
                            std::abs(reg_inc_beta(v, a, b) - v * reg_inc_beta(v, a - 1, b) - (1.0 - v) * reg_inc_beta(v, a, b - 1)));
        }
      }
    }
  }
  const bool exact = beta_fn(2, 3) == 1.0 / 12.0;
  return {sym <= 1e-12 && pascal <= 1e-12 && exact,
          fmt::format("symmetry {:.2g}, Pascal {:.2g}, B(2,3) == 1/12: {}", sym, pascal, exact)};
}

Verdict c12_intermediate() {
  Checks c;
  for (int n = 2; n <= 8; ++n) {
    const auto r = find_best_intermediate(kP, n, n, RouteMetric::throughput);
    c.require(!r, fmt::format("x=y={} returned ({},{})", n, r ? r->node.x : 0, r ? r->node.y : 0));
  }
  const auto best = find_best_intermediate(0.7, 1, 10, RouteMetric::throughput);
  c.require(best.has_value(), "(1,10) at p=0.7: no improver");
  if (best) {
    c.require(intermediate_improves(0.7, 1, 10, RouteMetric::throughput, std::nullopt, best->node),
              "(1,10) improver fails re-verification");
  }
  return {c.ok(), best ? fmt::format("x=y absent; (1,10) relay ({},{}): {:.5f} > direct {:.5f}", best->node.x,
                                     best->node.y, best->value, best->direct)
                       : c.failures()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f{p, std::ios::binary};
  return {std::istreambuf_iterator<char>{f}, std::istreambuf_iterator<char>{}};
}

Verdict c13_cli_determinism(const std::string& cli) {
  if (cli.empty()) return {false, "path to satroute not given"};
  const auto dir = std::filesystem::temp_directory_path() / "satroute_acceptance";
  std::filesystem::create_directories(dir);
  std::vector<std::string> outputs;
  for (int threads : {1, 1, 8, 8}) {
    const auto out = dir / fmt::format("sweep_{}_{}.csv", threads, outputs.size());
    const std::string cmd = fmt::format(
        "\"{}\" sweep --param mu --values 0,0.5,0.9,0.99 --grid 50x50 --trials 1000 --seed 7 --buffered true "
        "--threads {} --out \"{}\"",
        cli, threads, out.string());
    if (std::system(cmd.c_str()) != 0) return {false, "sweep command failed: " + cmd};
    outputs.push_back(slurp(out));
  }
  const bool same = !outputs[0].empty() && outputs[0] == outputs[1] && outputs[0] == outputs[2] && outputs[0] == outputs[3];
  return {same, fmt::format("4 runs, {} bytes each, identical: {}", outputs[0].size(), same)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "GR throughput vs DP oracle", 60, c1_claim3_oracle},
      {2, "GR throughput hand value", 60, c2_hand_value},
      {3, "E[min(tau_x, tau_y)] closed form", 60, c3_min_tau},
      {4, "SCPR success product", 60, [] { return c4_claim1(4000); }},
      {5, "SCPR delay recursion", 60, [] { return c5_claim2(5000); }},
      {6, "GR delay bound dominance", 60, [] { return c6_claim4(6000); }},
      {7, "GR throughput independent of mu", 60, [] { return c7_mu_independence(7000); }},
      {8, "crossover reproduction", 5, c8_crossovers},
      {9, "mu = 0 optimality", 30, [] { return c9_mu0_optimality(9000); }},
      {10, "connected-path lemma", 60, c10_path_lemma},
      {11, "special functions", 60, c11_special},
      {12, "intermediate relay", 60, c12_intermediate},
      {13, "CLI sweep determinism", 60, [&cli] { return c13_cli_determinism(cli); }},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string{"exception: "} + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.limit_s;
    const bool pass = v.pass && in_time;
    failed += pass ? 0 : 1;
    fmt::print("{} [{:>2}] {}: {} ({:.2f} s{})\n", pass ? "PASS" : "FAIL", c.id, c.name, v.detail, secs,
               in_time ? "" : fmt::format(", over the {} s limit", c.limit_s));
    std::fflush(stdout);
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
  return failed == 0 ? 0 : 1;
}
