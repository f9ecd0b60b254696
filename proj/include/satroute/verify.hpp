#pragma once

#include <string>
#include <vector>

namespace satroute {

struct CheckResult {
  std::string suite;
  std::string name;
  bool passed = false;
  std::string detail;
};

/// link, special, scpr, greedy, optimal, determinism.
std::vector<std::string> verify_suite_names();

/// Runs one named suite, or every suite for "all". Throws
/// std::invalid_argument for an unknown name.
std::vector<CheckResult> run_verify(const std::string& suite, unsigned threads = 0);

}  // namespace satroute
