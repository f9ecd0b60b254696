#include "satroute/analytic_scpr.hpp"

#include <limits>
#include <stdexcept>

namespace satroute {
namespace {

constexpr double kMaxMu = 1.0 - 1e-9;

void require_nonnegative(int x, int y) {
  if (x < 0 || y < 0) throw std::invalid_argument("hop offsets must be nonnegative");
}

// mu = 0: link i is reached at t_c + S_i with S_i >= i, so only the first
// link can still carry the t = 0 observation (when t_c = 0).
double path_delay_memoryless(const LinkParams& params, int path_len, std::int64_t t_c) {
  if (path_len == 0) return 0.0;
  const double per_link = 1.0 + (1.0 - params.p()) / params.epsilon2();
  const double first_link = t_c == 0 ? 1.0 : per_link;
  return first_link + (path_len - 1) * per_link;
}

}  // namespace

double scpr_path_success_prob(const LinkParams& params, int path_len, std::int64_t t_c) {
  if (path_len < 0) throw std::invalid_argument("path length must be nonnegative");
  if (t_c < 0) throw std::invalid_argument("t_c must be nonnegative");
  double prob = 1.0;
  for (int i = 0; i < path_len; ++i) prob *= on_probability(params, LinkState::on, t_c + i);
  return prob;
}

double scpr_throughput_bound(const LinkParams& params, int x, int y, std::int64_t t_c) {
  require_nonnegative(x, y);
  if (x + y < 1) throw std::invalid_argument("source must differ from the destination");
  return scpr_path_success_prob(params, x + y, t_c);
}

MgfEvaluator::MgfEvaluator(const LinkParams& params, std::int64_t t_c, int depth) : depth_{depth} {
  if (depth < 0) throw std::invalid_argument("MGF depth must be nonnegative");
  if (t_c < 0) throw std::invalid_argument("t_c must be nonnegative");
  if (!(params.mu() > 0.0 && params.mu() <= kMaxMu)) {
    throw std::invalid_argument("MGF recursion needs 0 < mu <= 1 - 1e-9");
  }
  log_mu_ = std::log(params.mu());
  raw_ = raw_mgf_table(params, t_c, depth, Dual::variable(0.0));
}

double MgfEvaluator::value(int i, int j) const {
  if (i < 0 || i > depth_ || j < 0 || j > depth_ - i) throw std::out_of_range("MGF table index");
  return raw_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].value / log_mu_;
}

double MgfEvaluator::derivative(int i, int j) const {
  if (i < 0 || i > depth_ || j < 0 || j > depth_ - i) throw std::out_of_range("MGF table index");
  return raw_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].deriv / log_mu_;
}

MgfTable mgf_table(const MgfEvaluator& evaluator) {
  const int n = evaluator.depth() + 1;
  MgfTable table{Eigen::ArrayXXd::Constant(n, n, std::numeric_limits<double>::quiet_NaN()),
                 Eigen::ArrayXXd::Constant(n, n, std::numeric_limits<double>::quiet_NaN())};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n - i; ++j) {
      table.value(i, j) = evaluator.value(i, j);
      table.derivative(i, j) = evaluator.derivative(i, j);
    }
  }
  return table;
}

double scpr_path_delay(const LinkParams& params, int path_len, std::int64_t t_c) {
  if (path_len < 0) throw std::invalid_argument("path length must be nonnegative");
  if (path_len == 0) return 0.0;
  if (params.mu() == 0.0) return path_delay_memoryless(params, path_len, t_c);
  return MgfEvaluator{params, t_c, path_len}.mean_delay(path_len);
}

double scpr_delay_lower_bound(const LinkParams& params, int x, int y, std::int64_t t_c) {
  require_nonnegative(x, y);
  return scpr_path_delay(params, x + y, t_c);
}

}  // namespace satroute
