#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "sdemc/random.hpp"
#include "support/oracles.hpp"

using sdemc::PointSet;
using sdemc::RngStream;
using sdemc::sample_poisson_process;
using sdemc::thin;

TEST(PoissonProcess, ZeroRateIsEmpty) {
  RngStream rng(1);
  const PointSet p = sample_poisson_process(0.0, 0.0, 10.0, rng);
  EXPECT_TRUE(p.empty());
}

TEST(PoissonProcess, MeanCountMatchesRateTimesLength) {
  RngStream rng(2);
  const int n = 100000;
  double total = 0.0;
  for (int i = 0; i < n; ++i)
    total += static_cast<double>(sample_poisson_process(2.0, 0.0, 5.0, rng).size());
  const double mean = total / n;
  const double se = std::sqrt(10.0) / std::sqrt(static_cast<double>(n));
  EXPECT_NEAR(mean, 10.0, 3.0 * se);
}

TEST(PoissonProcess, EmptyIntervalThrows) {
  RngStream rng(3);
  EXPECT_THROW(sample_poisson_process(1.0, 3.0, 3.0, rng), std::invalid_argument);
  EXPECT_THROW(sample_poisson_process(-1.0, 0.0, 1.0, rng), std::invalid_argument);
}

TEST(PoissonProcess, SortedAndInsideInterval) {
  RngStream rng(4);
  for (int i = 0; i < 100; ++i) {
    const PointSet p = sample_poisson_process(3.0, 1.5, 4.5, rng);
    EXPECT_TRUE(sdemc::strictly_increasing(p.times));
    for (double t : p.times) {
      EXPECT_GT(t, 1.5);
      EXPECT_LT(t, 4.5);
    }
  }
}

TEST(Thin, KeepAllIsIdentity) {
  RngStream rng(5);
  const PointSet p = sample_poisson_process(2.0, 0.0, 10.0, rng);
  const PointSet kept = thin(p, [](double) { return 1.0; }, rng);
  EXPECT_EQ(kept.times, p.times);
}

TEST(Thin, KeepNoneIsEmpty) {
  RngStream rng(6);
  const PointSet p = sample_poisson_process(2.0, 0.0, 10.0, rng);
  const PointSet kept = thin(p, [](double) { return 0.0; }, rng);
  EXPECT_TRUE(kept.empty());
}

TEST(Thin, ConstantThinningMatchesReducedRate) {
  RngStream rng(7);
  const int n = 100000;
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const PointSet p = sample_poisson_process(2.0, 0.0, 10.0, rng);
    total += static_cast<double>(thin(p, [](double) { return 0.25; }, rng).size());
  }
  const double mean = total / n;
  const double se = std::sqrt(5.0) / std::sqrt(static_cast<double>(n));
  EXPECT_NEAR(mean, 5.0, 3.0 * se);
}

TEST(Thin, OutOfRangeProbabilityIsContractViolation) {
  RngStream rng(8);
  PointSet p;
  p.times = {1.0, 2.0};
  EXPECT_THROW(thin(p, [](double) { return 1.5; }, rng), sdemc::contract_error);
  EXPECT_THROW(thin(p, [](double) { return -0.1; }, rng), sdemc::contract_error);
}

TEST(Thin, ThinnedCountsPassChiSquareAgainstPoisson) {
  // constant keep probability p turns PP(M) into PP(pM)
  RngStream rng(9);
  const int n = 100000;
  const double mean = 0.25 * 2.0 * 10.0;
  std::vector<double> observed(31, 0.0);
  for (int i = 0; i < n; ++i) {
    const PointSet p = sample_poisson_process(2.0, 0.0, 10.0, rng);
    const auto k = thin(p, [](double) { return 0.25; }, rng).size();
    observed[std::min<std::size_t>(k, observed.size() - 1)] += 1.0;
  }
  std::vector<double> expected(observed.size(), 0.0);
  double pmf = std::exp(-mean);
  double rest = 1.0;
  for (std::size_t k = 0; k + 1 < expected.size(); ++k) {
    expected[k] = n * pmf;
    rest -= pmf;
    pmf *= mean / static_cast<double>(k + 1);
  }
  expected.back() = n * std::max(0.0, rest);
  const auto res = oracles::chi_square_gof(observed, expected);
  EXPECT_GT(res.p_value, 0.01);
}

TEST(Scalars, GaussianMeanCltOracle) {
  RngStream rng(10);
  const int n = 100000;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += rng.gaussian(3.0, 1.0);
  EXPECT_NEAR(s / n, 3.0, 3.0 / std::sqrt(static_cast<double>(n)));
}

TEST(Scalars, UniformMeanCltOracle) {
  RngStream rng(11);
  const int n = 100000;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += rng.uniform(0.0, 1.0);
  const double se = (1.0 / std::sqrt(12.0)) / std::sqrt(static_cast<double>(n));
  EXPECT_NEAR(s / n, 0.5, 3.0 * se);
}

TEST(Scalars, ExponentialMeanCltOracle) {
  RngStream rng(12);
  const int n = 100000;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += rng.exponential(2.0);
  EXPECT_NEAR(s / n, 0.5, 3.0 * 0.5 / std::sqrt(static_cast<double>(n)));
}

TEST(Scalars, InvalidParametersThrow) {
  RngStream rng(13);
  EXPECT_THROW(rng.gaussian(0.0, 0.0), std::invalid_argument);
  EXPECT_THROW(rng.exponential(0.0), std::invalid_argument);
  EXPECT_THROW(rng.uniform(2.0, 1.0), std::invalid_argument);
  EXPECT_THROW(rng.poisson(-1.0), std::invalid_argument);
}

TEST(RngStream, SameSeedSameStreamIsBitwiseEqual) {
  RngStream a(42, 7), b(42, 7);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_EQ(a.uniform(), b.uniform());
    EXPECT_EQ(a.std_normal(), b.std_normal());
  }
  const PointSet pa = sample_poisson_process(1.5, 0.0, 4.0, a);
  const PointSet pb = sample_poisson_process(1.5, 0.0, 4.0, b);
  EXPECT_EQ(pa.times, pb.times);
}

TEST(RngStream, DistinctStreamsDiffer) {
  RngStream a(42, 0), b(42, 1);
  bool any_diff = false;
  for (int i = 0; i < 16 && !any_diff; ++i) any_diff = a.raw() != b.raw();
  EXPECT_TRUE(any_diff);
}

TEST(RngStream, StateRoundTripResumesExactly) {
  RngStream a(99, 3);
  for (int i = 0; i < 57; ++i) a.uniform();
  const std::string saved = a.save_state();
  std::vector<double> expect;
  for (int i = 0; i < 20; ++i) expect.push_back(a.uniform());
  RngStream b;
  b.restore_state(saved);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(b.uniform(), expect[i]);
}

TEST(Campbell, ProductOverPoissonGridMatchesExponentialIntegral) {
  // E prod_{t in Psi}(1 - c/M) = exp(-cT) for Psi ~ PP(M)
  RngStream rng(14);
  const double c = 0.5, M = 1.0, T = 2.0;
  const int n = 100000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const PointSet psi = sample_poisson_process(M, 0.0, T, rng);
    const double prod = std::pow(1.0 - c / M, static_cast<double>(psi.size()));
    sum += prod;
    sum2 += prod * prod;
  }
  const double mean = sum / n;
  const double var = (sum2 - n * mean * mean) / (n - 1);
  const double se = std::sqrt(var / n);
  EXPECT_NEAR(mean, std::exp(-c * T), 3.0 * se);
}
