#include "uwsn/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace uwsn::stats {

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("linear_fit: need >= 2 paired points");
  const double mx = mean(x);
  const double my = mean(y);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit fit;
  if (sxx == 0.0) throw std::invalid_argument("linear_fit: x has zero variance");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

LinearFit log_log_fit(std::span<const double> x, std::span<const double> y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] <= 0.0 || y[i] <= 0.0) throw std::invalid_argument("log_log_fit: values must be positive");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  return linear_fit(lx, ly);
}

std::pair<double, double> wilson_interval(std::size_t successes, std::size_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double centre = (p + z2 / (2 * n)) / (1 + z2 / n);
  const double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / (1 + z2 / n);
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

namespace {

double log_choose(std::size_t n, std::size_t k) {
  return std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(k) + 1) -
         std::lgamma(static_cast<double>(n - k) + 1);
}

// Hypergeometric pmf of drawing k successes into sample b (size nb) when the
// pooled successes are total and the pooled size is na + nb.
struct Hypergeometric {
  std::size_t na, nb, total;

  std::size_t lo() const { return total > na ? total - na : 0; }
  std::size_t hi() const { return std::min(total, nb); }

  double log_pmf(std::size_t k) const {
    return log_choose(nb, k) + log_choose(na, total - k) - log_choose(na + nb, total);
  }
};

void check(std::size_t s, std::size_t n) {
  if (s > n) throw std::invalid_argument("fisher: successes exceed trials");
}

}  // namespace

double fisher_greater(std::size_t successes_a, std::size_t trials_a, std::size_t successes_b,
                      std::size_t trials_b) {
  check(successes_a, trials_a);
  check(successes_b, trials_b);
  const Hypergeometric h{trials_a, trials_b, successes_a + successes_b};
  double p = 0.0;
  for (std::size_t k = successes_b; k <= h.hi(); ++k) p += std::exp(h.log_pmf(k));
  return std::min(1.0, p);
}

double fisher_two_sided(std::size_t successes_a, std::size_t trials_a, std::size_t successes_b,
                        std::size_t trials_b) {
  check(successes_a, trials_a);
  check(successes_b, trials_b);
  const Hypergeometric h{trials_a, trials_b, successes_a + successes_b};
  const double observed = h.log_pmf(successes_b);
  double p = 0.0;
  for (std::size_t k = h.lo(); k <= h.hi(); ++k) {
    const double lp = h.log_pmf(k);
    if (lp <= observed + 1e-7) p += std::exp(lp);
  }
  return std::min(1.0, p);
}

double mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double stddev(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double m = mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

}  // namespace uwsn::stats
