#ifndef SDEMC_DIAGNOSTICS_HPP
#define SDEMC_DIAGNOSTICS_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace sdemc {

struct EssResult {
  double ess = 0.0;
  bool zero_variance = false;
};

/// Effective sample size with Geyer's initial monotone positive-pair
/// truncation of the empirical autocorrelations. Constant series report
/// ess = n with the zero-variance flag set. Negative autocorrelation can
/// push the estimate above n; it is not capped.
inline EssResult ess(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 10) throw std::invalid_argument("ess: needs at least 10 samples");
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  double gamma0 = 0.0;
  for (double v : x) gamma0 += (v - mean) * (v - mean);
  gamma0 /= static_cast<double>(n);
  if (!(gamma0 > 1e-28 * std::max(1.0, mean * mean)))
    return {static_cast<double>(n), true};

  const auto acov = [&](std::size_t lag) {
    double s = 0.0;
    for (std::size_t i = 0; i + lag < n; ++i)
      s += (x[i] - mean) * (x[i + lag] - mean);
    return s / static_cast<double>(n);
  };

  // pair sums Gamma_m = rho_{2m} + rho_{2m+1}, truncated at the first
  // nonpositive pair and forced monotone nonincreasing
  double pair_sum_total = 0.0;
  double prev_pair = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; 2 * m + 1 < n; ++m) {
    double pair = (acov(2 * m) + acov(2 * m + 1)) / gamma0;
    if (pair <= 0.0) break;
    pair = std::min(pair, prev_pair);
    pair_sum_total += pair;
    prev_pair = pair;
  }
  double tau = 2.0 * pair_sum_total - 1.0;
  tau = std::max(tau, 1.0 / static_cast<double>(n));
  return {static_cast<double>(n) / tau, false};
}

/// Complementary CDF of the Kolmogorov distribution, Q(lambda) = P(K > lambda).
inline double kolmogorov_q(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 1.18) {
    // theta-function form converges fast for small arguments
    const double v = std::numbers::pi * std::numbers::pi / (8.0 * lambda * lambda);
    double cdf = 0.0;
    for (int k = 1; k <= 21; k += 2) cdf += std::exp(-static_cast<double>(k) * k * v);
    cdf *= std::sqrt(2.0 * std::numbers::pi) / lambda;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double q = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    q += (k % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-16) break;
  }
  return std::clamp(q, 0.0, 1.0);
}

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value at
/// effective size n*m/(n+m).
inline KsResult ks_two_sample(std::span<const double> a,
                              std::span<const double> b) {
  if (a.size() < 20 || b.size() < 20)
    throw std::invalid_argument("ks_two_sample: both samples need size >= 20");
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < sa.size() && j < sb.size()) {
    const double v = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] <= v) ++i;
    while (j < sb.size() && sb[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na -
                             static_cast<double>(j) / nb));
  }
  const double n_eff = na * nb / (na + nb);
  return {d, kolmogorov_q(std::sqrt(n_eff) * d)};
}

}  // namespace sdemc

#endif
