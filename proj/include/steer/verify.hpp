#pragma once

// Property suites run by `steer verify`. Each check records the measured
// residual next to the threshold it was held to.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace steer::verify {

struct Check {
  std::string module;
  std::string property;
  double residual = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

struct Report {
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  std::vector<Check> checks;

  bool passed() const;
};

/// Two-sided Kolmogorov-Smirnov statistic of `samples` against `cdf`.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

Report run_all(std::uint64_t seed, std::size_t samples);

}  // namespace steer::verify
