#pragma once

#include <cstdint>
#include <vector>

namespace theon::stats {

// Survival function of the chi-square distribution (regularized upper
// incomplete gamma).
double chisq_sf(double x, double df);

// One-sample Kolmogorov-Smirnov test against the uniform CDF on [0,1).
struct KsResult {
  double d = 0.0;
  double p_value = 1.0;
};
KsResult ks_uniform(std::vector<double> values);

// Goodness of fit of counts against expected proportions (already scaled to
// the same total); classes with tiny expectation should be merged upstream.
struct ChiSqResult {
  double statistic = 0.0;
  double df = 0.0;
  double p_value = 1.0;
};
ChiSqResult chisq_gof(const std::vector<double>& observed,
                      const std::vector<double>& expected);

// Equal-cell uniformity helper.
ChiSqResult chisq_uniform(const std::vector<std::uint64_t>& counts);

struct Interval {
  double low = 0.0, high = 1.0;
};
// 99% by default (z = 2.5758...).
Interval wilson_ci(std::uint64_t successes, std::uint64_t n, double z = 2.5758293035489004);

}  // namespace theon::stats
