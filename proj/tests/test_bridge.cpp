#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "sdemc/bridge.hpp"
#include "sdemc/diagnostics.hpp"
#include "sdemc/models.hpp"
#include "support/oracles.hpp"

using sdemc::BridgeSpec;
using sdemc::bridge_moments;
using sdemc::log_bridge_density;
using sdemc::RngStream;
using sdemc::sample_bridge;
using sdemc::sample_h_endpoint;

TEST(BridgeMoments, SymmetricMidpoint) {
  const auto m = bridge_moments({0.0, 0.0, 2.0, 2.0}, 1.0);
  EXPECT_DOUBLE_EQ(m.mean, 1.0);
  EXPECT_DOUBLE_EQ(m.variance, 0.5);
}

TEST(BridgeMoments, PinnedEndpointLimit) {
  const auto m = bridge_moments({0.0, 0.0, 1.0, 0.0}, 1e-12);
  EXPECT_LT(m.variance, 1e-10);
  EXPECT_NEAR(m.mean, 0.0, 1e-12);
}

TEST(BridgeMoments, ShiftedSpec) {
  const auto m = bridge_moments({1.0, 3.0, 5.0, -1.0}, 2.0);
  EXPECT_DOUBLE_EQ(m.mean, 2.0);
  EXPECT_DOUBLE_EQ(m.variance, 0.75);
}

TEST(BridgeMoments, OutsideIntervalThrows) {
  EXPECT_THROW(bridge_moments({0.0, 0.0, 1.0, 0.0}, 0.0), std::invalid_argument);
  EXPECT_THROW(bridge_moments({0.0, 0.0, 1.0, 0.0}, 1.0), std::invalid_argument);
  EXPECT_THROW(bridge_moments({0.0, 0.0, 1.0, 0.0}, 1.5), std::invalid_argument);
}

TEST(BridgeMoments, VarianceSymmetricUnderTimeReversal) {
  const BridgeSpec fwd{0.5, 1.0, 4.0, -2.0};
  const BridgeSpec rev{0.5, -2.0, 4.0, 1.0};
  for (double t : {0.7, 1.3, 2.2, 3.9}) {
    const double v1 = bridge_moments(fwd, t).variance;
    const double v2 = bridge_moments(rev, 0.5 + 4.0 - t).variance;
    EXPECT_NEAR(v1, v2, 1e-12);
  }
}

TEST(SampleBridge, EmptyTimesGiveEmptyOutput) {
  RngStream rng(1);
  EXPECT_TRUE(sample_bridge({0.0, 0.0, 2.0, 2.0}, {}, rng).empty());
}

TEST(SampleBridge, MarginalMatchesMoments) {
  RngStream rng(2);
  const int n = 100000;
  const std::vector<double> times = {1.0};
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = sample_bridge({0.0, 0.0, 2.0, 2.0}, times, rng)[0];
    s += x;
    s2 += x * x;
  }
  const double mean = s / n;
  const double var = (s2 - n * mean * mean) / (n - 1);
  EXPECT_NEAR(mean, 1.0, 3.0 * std::sqrt(0.5 / n));
  EXPECT_NEAR(var, 0.5, 0.05 * 0.5);
}

TEST(SampleBridge, JointCovarianceMatchesBrownianBridge) {
  // cov(X_s, X_t) = s (T - t) / T for s < t on a pinned-at-zero bridge
  RngStream rng(3);
  const int n = 100000;
  const std::vector<double> times = {1.0, 2.0};
  double s1 = 0.0, s2 = 0.0, s12 = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto v = sample_bridge({0.0, 0.0, 3.0, 0.0}, times, rng);
    s1 += v[0];
    s2 += v[1];
    s12 += v[0] * v[1];
  }
  const double cov = s12 / n - (s1 / n) * (s2 / n);
  EXPECT_NEAR(cov, 1.0 / 3.0, 0.05 * (1.0 / 3.0));
}

TEST(SampleBridge, RejectsBadTimes) {
  RngStream rng(4);
  const std::vector<double> unsorted = {1.5, 1.0};
  EXPECT_THROW(sample_bridge({0.0, 0.0, 2.0, 0.0}, unsorted, rng),
               std::invalid_argument);
  const std::vector<double> outside = {2.5};
  EXPECT_THROW(sample_bridge({0.0, 0.0, 2.0, 0.0}, outside, rng),
               std::invalid_argument);
}

TEST(LogBridgeDensity, EmptyProductIsZero) {
  EXPECT_EQ(log_bridge_density({0.0, 0.0, 2.0, 2.0}, {}, {}), 0.0);
}

TEST(LogBridgeDensity, SinglePointClosedForm) {
  const std::vector<double> t = {1.0}, v = {1.0};
  EXPECT_NEAR(log_bridge_density({0.0, 0.0, 2.0, 2.0}, t, v),
              -0.5 * std::log(std::numbers::pi), 1e-12);
}

TEST(LogBridgeDensity, FactorizationOrderInvariance) {
  const BridgeSpec spec{0.0, 0.4, 3.0, -1.1};
  const std::vector<double> times = {0.3, 0.9, 1.4, 2.2, 2.8};
  const std::vector<double> values = {0.2, -0.1, 0.7, -0.9, -1.0};
  const double ltr = log_bridge_density(spec, times, values);
  // right-to-left: condition each point on the left endpoint and the
  // previously handled point to its right
  double rtl = 0.0;
  double t_r = spec.t_right, x_r = spec.x_right;
  for (std::size_t i = times.size(); i-- > 0;) {
    const auto m = bridge_moments({spec.t_left, spec.x_left, t_r, x_r}, times[i]);
    rtl += oracles::normal_log_pdf(values[i], m.mean, m.variance);
    t_r = times[i];
    x_r = values[i];
  }
  EXPECT_NEAR(ltr, rtl, 1e-10);
}

TEST(LogBridgeDensity, SizeMismatchThrows) {
  const std::vector<double> t = {1.0}, v = {};
  EXPECT_THROW(log_bridge_density({0.0, 0.0, 2.0, 2.0}, t, v),
               std::invalid_argument);
}

namespace {

// chi-square comparison of sampler draws against the quadrature-normalized
// biased endpoint density
void check_h_endpoint_distribution(const sdemc::Ea1Model& model, double x0,
                                   double T, unsigned seed) {
  const auto h_tilde = [&](double u) {
    return std::exp(model.A(u) - (u - x0) * (u - x0) / (2.0 * T));
  };
  const double z = oracles::simpson(h_tilde, -10.0, 10.0, 10000);

  const int n_bins = 40;
  const double lo = -4.0, hi = 4.0;
  std::vector<double> edges;
  for (int b = 0; b <= n_bins; ++b)
    edges.push_back(lo + (hi - lo) * b / n_bins);

  std::vector<double> expected(n_bins + 2, 0.0);
  expected[0] = oracles::simpson(h_tilde, -10.0, lo, 2000) / z;
  for (int b = 0; b < n_bins; ++b)
    expected[b + 1] = oracles::simpson(h_tilde, edges[b], edges[b + 1], 200) / z;
  expected.back() = oracles::simpson(h_tilde, hi, 10.0, 2000) / z;

  RngStream rng(seed);
  const int n = 100000;
  std::vector<double> observed(expected.size(), 0.0);
  for (int i = 0; i < n; ++i) {
    const double u = sample_h_endpoint(model, x0, T, rng);
    int b = static_cast<int>(std::floor((u - lo) / (hi - lo) * n_bins));
    const int idx = u < lo ? 0 : (u >= hi ? n_bins + 1 : b + 1);
    observed[idx] += 1.0;
  }
  for (double& e : expected) e *= n;
  const auto res = oracles::chi_square_gof(observed, expected);
  EXPECT_GT(res.p_value, 0.01) << model.name;
}

}  // namespace

TEST(HEndpoint, ConstantPhiReducesToGaussian) {
  const auto model = sdemc::constant_phi_model(0.5, 1.0);
  RngStream rng(5);
  const double x0 = 0.7, T = 2.0;
  std::vector<double> draws;
  for (int i = 0; i < 10000; ++i)
    draws.push_back(sample_h_endpoint(model, x0, T, rng));
  const double d = oracles::ks_statistic_vs_cdf(draws, [&](double u) {
    return oracles::normal_cdf((u - x0) / std::sqrt(T));
  });
  const double p = sdemc::kolmogorov_q(std::sqrt(10000.0) * d);
  EXPECT_GT(p, 0.01);
}

TEST(HEndpoint, HyperbolicMatchesQuadrature) {
  check_h_endpoint_distribution(sdemc::hyperbolic_model(1.0), 0.0, 1.0, 6);
}

TEST(HEndpoint, SineMatchesQuadrature) {
  check_h_endpoint_distribution(sdemc::sine_model(0.0), 0.0, 1.0, 7);
}

TEST(HEndpoint, AcceptanceRateMatchesQuadrature) {
  const auto model = sdemc::hyperbolic_model(1.0);
  const double x0 = 0.3, T = 2.0;
  const auto h_tilde = [&](double u) {
    return std::exp(model.A(u) - (u - x0) * (u - x0) / (2.0 * T));
  };
  const double z = oracles::simpson(h_tilde, -12.0, 12.0, 20000);
  const double expected =
      z / (std::sqrt(2.0 * std::numbers::pi * T) * std::exp(model.sup_A));
  sdemc::HEndpointStats stats;
  RngStream rng(8);
  for (int i = 0; i < 100000; ++i)
    sample_h_endpoint(model, x0, T, rng, &stats);
  const double p_emp = stats.acceptance_rate();
  const double se = std::sqrt(expected * (1.0 - expected) /
                              static_cast<double>(stats.proposals));
  EXPECT_NEAR(p_emp, expected, 3.0 * se);
}

TEST(HEndpoint, UnboundedAThrows) {
  auto model = sdemc::constant_phi_model(0.0, 1.0);
  model.sup_A = std::numeric_limits<double>::infinity();
  RngStream rng(9);
  EXPECT_THROW(sample_h_endpoint(model, 0.0, 1.0, rng),
               sdemc::unsupported_model_error);
}
