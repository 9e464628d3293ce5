#include "theon/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace theon::stats {

namespace {

// Regularized incomplete gamma, series and continued-fraction forms.
double gamma_p_series(double a, double x) {
  double sum = 1.0 / a;
  double term = sum;
  for (int n = 1; n < 1000; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * 1e-15) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 1000; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-15) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double chisq_sf(double x, double df) {
  if (x <= 0) return 1.0;
  double a = df / 2.0, h = x / 2.0;
  double q = (h < a + 1.0) ? 1.0 - gamma_p_series(a, h) : gamma_q_cf(a, h);
  return std::clamp(q, 0.0, 1.0);
}

KsResult ks_uniform(std::vector<double> values) {
  const std::size_t n = values.size();
  if (n == 0) return {};
  std::sort(values.begin(), values.end());
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double lo = static_cast<double>(i) / n;
    double hi = static_cast<double>(i + 1) / n;
    d = std::max({d, std::fabs(values[i] - lo), std::fabs(hi - values[i])});
  }
  double sq = std::sqrt(static_cast<double>(n));
  double lambda = (sq + 0.12 + 0.11 / sq) * d;
  double p = 0.0;
  for (int j = 1; j <= 100; ++j) {
    double term = 2.0 * ((j % 2) ? 1.0 : -1.0) * std::exp(-2.0 * j * j * lambda * lambda);
    p += term;
    if (std::fabs(term) < 1e-12) break;
  }
  return {d, std::clamp(p, 0.0, 1.0)};
}

ChiSqResult chisq_gof(const std::vector<double>& observed,
                      const std::vector<double>& expected) {
  if (observed.size() != expected.size())
    throw std::invalid_argument("chisq_gof: size mismatch");
  double stat = 0.0;
  int classes = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (expected[i] <= 0) continue;
    double diff = observed[i] - expected[i];
    stat += diff * diff / expected[i];
    ++classes;
  }
  if (classes < 2) return {0.0, 0.0, 1.0};
  double df = classes - 1;
  return {stat, df, chisq_sf(stat, df)};
}

ChiSqResult chisq_uniform(const std::vector<std::uint64_t>& counts) {
  double total = 0;
  for (auto c : counts) total += static_cast<double>(c);
  std::vector<double> obs(counts.begin(), counts.end());
  std::vector<double> exp_(counts.size(), total / counts.size());
  return chisq_gof(obs, exp_);
}

Interval wilson_ci(std::uint64_t successes, std::uint64_t n, double z) {
  if (n == 0) return {};
  double phat = static_cast<double>(successes) / n;
  double z2 = z * z;
  double denom = 1.0 + z2 / n;
  double center = (phat + z2 / (2.0 * n)) / denom;
  double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

}  // namespace theon::stats
