#pragma once

#include <cstddef>
#include <span>
#include <utility>

namespace uwsn::stats {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares y = slope * x + intercept.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

/// Slope of log(y) against log(x).
LinearFit log_log_fit(std::span<const double> x, std::span<const double> y);

/// Wilson score interval for a binomial proportion, z = 1.96 by default.
std::pair<double, double> wilson_interval(std::size_t successes, std::size_t trials, double z = 1.959963984540054);

/// One-sided Fisher exact test. Returns P(X >= successes_b) for the count in
/// sample b under the null of equal proportions, conditional on the margins.
/// Small values are evidence that sample b has the larger proportion.
double fisher_greater(std::size_t successes_a, std::size_t trials_a, std::size_t successes_b,
                      std::size_t trials_b);

/// Two-sided Fisher exact test (sum of tables no more likely than observed).
double fisher_two_sided(std::size_t successes_a, std::size_t trials_a, std::size_t successes_b,
                        std::size_t trials_b);

double mean(std::span<const double> values);
double stddev(std::span<const double> values);  // sample standard deviation

}  // namespace uwsn::stats
