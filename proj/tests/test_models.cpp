#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "sdemc/models.hpp"
#include "support/oracles.hpp"

using sdemc::Ea1Model;

namespace {

std::vector<double> probe_grid(double lo, double hi, int n) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i)
    g.push_back(lo + (hi - lo) * static_cast<double>(i) / (n - 1));
  return g;
}

void check_derivative_chain(const Ea1Model& m) {
  const double h = 1e-6;
  for (double x : probe_grid(-8.0, 8.0, 33)) {
    const double fd_alpha = (m.A(x + h) - m.A(x - h)) / (2.0 * h);
    EXPECT_NEAR(fd_alpha, m.alpha(x), 1e-5 * std::max(1.0, std::abs(m.alpha(x))))
        << m.name << " A' vs alpha at x=" << x;
    const double fd_aprime = (m.alpha(x + h) - m.alpha(x - h)) / (2.0 * h);
    EXPECT_NEAR(fd_aprime, m.alpha_prime(x),
                1e-5 * std::max(1.0, std::abs(m.alpha_prime(x))))
        << m.name << " alpha' at x=" << x;
    const double fd_phi = (m.phi(x + h) - m.phi(x - h)) / (2.0 * h);
    EXPECT_NEAR(fd_phi, m.phi_prime(x),
                1e-5 * std::max(1.0, std::abs(m.phi_prime(x))))
        << m.name << " phi' at x=" << x;
  }
}

void check_phi_bounds(const Ea1Model& m) {
  for (double x : probe_grid(-20.0, 20.0, 1000)) {
    const double phi = m.phi(x);
    EXPECT_GE(phi, 0.0) << m.name << " at x=" << x;
    EXPECT_LE(phi, m.M + 1e-12) << m.name << " at x=" << x;
  }
}

}  // namespace

TEST(Hyperbolic, BoundsAtThetaOne) {
  const Ea1Model m = sdemc::hyperbolic_model(1.0);
  EXPECT_DOUBLE_EQ(m.M, 1.0);
  EXPECT_DOUBLE_EQ(m.L, -0.5);
}

TEST(Hyperbolic, AnchorValues) {
  const Ea1Model m = sdemc::hyperbolic_model(1.0);
  EXPECT_DOUBLE_EQ(m.A(0.0), 0.0);
  EXPECT_NEAR(m.phi(0.0), 0.0, 1e-15);
}

TEST(Hyperbolic, PhiMatchesDefinitionAndLimit) {
  const Ea1Model m = sdemc::hyperbolic_model(1.0);
  const double x = 10.0;
  const double direct =
      0.5 * (m.alpha(x) * m.alpha(x) + m.alpha_prime(x)) - m.L;
  EXPECT_NEAR(m.phi(x), direct, 1e-12);
  EXPECT_NEAR(m.phi(1e6), 1.0, 1e-5);
}

TEST(Hyperbolic, RejectsNonpositiveTheta) {
  EXPECT_THROW(sdemc::hyperbolic_model(0.0), std::invalid_argument);
  EXPECT_THROW(sdemc::hyperbolic_model(-1.0), std::invalid_argument);
}

TEST(Sine, PhiVanishesAtPi) {
  const Ea1Model m = sdemc::sine_model(0.0);
  EXPECT_NEAR(m.phi(std::numbers::pi), 0.0, 1e-15);
}

TEST(Sine, AntiderivativeVanishesAtZero) {
  const Ea1Model m = sdemc::sine_model(0.7);
  EXPECT_DOUBLE_EQ(m.A(0.0), 0.0);
}

TEST(Sine, GridMaximumOfPhiIsNineEighths) {
  const Ea1Model m = sdemc::sine_model(0.3);
  double mx = 0.0;
  for (double x : probe_grid(-10.0, 10.0, 2000001)) mx = std::max(mx, m.phi(x));
  EXPECT_NEAR(mx, 9.0 / 8.0, 1e-6);
  EXPECT_DOUBLE_EQ(m.M, 9.0 / 8.0);
}

TEST(Sine, SymmetryAtThetaZeroIsExact) {
  const Ea1Model m = sdemc::sine_model(0.0);
  for (double x : probe_grid(0.1, 15.0, 57)) {
    EXPECT_EQ(m.phi(-x), m.phi(x));
    EXPECT_EQ(m.A(-x), m.A(x));
    EXPECT_EQ(m.alpha(-x), -m.alpha(x));
  }
}

TEST(TemperedSine, FullTemperatureMatchesSineModel) {
  const Ea1Model t = sdemc::tempered_sine_model(1.0);
  const Ea1Model s = sdemc::sine_model(0.0);
  for (double x : probe_grid(-6.0, 6.0, 41)) {
    EXPECT_NEAR(t.alpha(x), s.alpha(x), 1e-15);
    EXPECT_NEAR(t.A(x), s.A(x), 1e-15);
    EXPECT_NEAR(t.phi(x), s.phi(x), 1e-15);
  }
  EXPECT_DOUBLE_EQ(t.M, 9.0 / 8.0);
}

TEST(TemperedSine, ZeroTemperatureIsBrownianMotion) {
  const Ea1Model t = sdemc::tempered_sine_model(0.0);
  for (double x : probe_grid(-6.0, 6.0, 41)) {
    EXPECT_EQ(t.alpha(x), 0.0);
    EXPECT_EQ(t.A(x), 0.0);
    EXPECT_EQ(t.phi(x), 0.0);
  }
  EXPECT_DOUBLE_EQ(t.M, 1.0 / 8.0);
}

TEST(TemperedSine, HalfTemperatureValueAndBound) {
  const Ea1Model t = sdemc::tempered_sine_model(0.5);
  EXPECT_NEAR(t.phi(0.0), 0.5, 1e-15);
  EXPECT_DOUBLE_EQ(t.M, 0.5);
  double mx = 0.0;
  for (double x : probe_grid(-10.0, 10.0, 200001)) mx = std::max(mx, t.phi(x));
  EXPECT_LE(mx, t.M + 1e-12);
}

TEST(TemperedSine, RejectsOutOfRangeTemperature) {
  EXPECT_THROW(sdemc::tempered_sine_model(-0.1), std::invalid_argument);
  EXPECT_THROW(sdemc::tempered_sine_model(1.1), std::invalid_argument);
}

TEST(ConstantPhi, FixtureShape) {
  const Ea1Model m = sdemc::constant_phi_model(0.5, 1.0);
  EXPECT_EQ(m.alpha(3.0), 0.0);
  EXPECT_EQ(m.A(3.0), 0.0);
  EXPECT_EQ(m.phi(-7.0), 0.5);
  EXPECT_EQ(m.L, 0.0);
  EXPECT_EQ(m.M, 1.0);
}

TEST(ConstantPhi, RejectsBadArguments) {
  EXPECT_THROW(sdemc::constant_phi_model(-0.1, 1.0), std::invalid_argument);
  EXPECT_THROW(sdemc::constant_phi_model(2.0, 1.0), std::invalid_argument);
}

TEST(AllModels, PhiStaysWithinBounds) {
  check_phi_bounds(sdemc::hyperbolic_model(1.0));
  check_phi_bounds(sdemc::hyperbolic_model(2.5));
  check_phi_bounds(sdemc::sine_model(0.0));
  check_phi_bounds(sdemc::sine_model(-1.2));
  check_phi_bounds(sdemc::tempered_sine_model(0.2));
  check_phi_bounds(sdemc::tempered_sine_model(0.8));
  check_phi_bounds(sdemc::constant_phi_model(0.5, 1.0));
}

TEST(AllModels, FiniteDifferenceConsistency) {
  check_derivative_chain(sdemc::hyperbolic_model(1.0));
  check_derivative_chain(sdemc::hyperbolic_model(0.4));
  check_derivative_chain(sdemc::sine_model(0.0));
  check_derivative_chain(sdemc::sine_model(2.1));
  check_derivative_chain(sdemc::tempered_sine_model(0.6));
  check_derivative_chain(sdemc::constant_phi_model(0.3, 0.9));
}

TEST(GaussianLikelihood, MatchesNormalLogDensityAndFactorizes) {
  const sdemc::GaussianLikelihood lik{0.2};
  EXPECT_NEAR(lik.log_density(1.3, 1.0), oracles::normal_log_pdf(1.3, 1.0, 0.04),
              1e-12);
  sdemc::ObservationSet obs;
  obs.times = {1.0, 2.0};
  obs.values = {0.5, -0.3};
  obs.sigma_y = 0.2;
  const double joint = lik.log_density(0.5, 0.1) + lik.log_density(-0.3, 0.2);
  EXPECT_NEAR(joint,
              oracles::normal_log_pdf(0.5, 0.1, 0.04) +
                  oracles::normal_log_pdf(-0.3, 0.2, 0.04),
              1e-12);
}

TEST(ObservationSet, Validation) {
  sdemc::ObservationSet obs;
  obs.times = {1.0, 0.5};
  obs.values = {0.0, 0.0};
  EXPECT_THROW(obs.validate(2.0), std::invalid_argument);
  obs.times = {0.5, 1.0};
  EXPECT_NO_THROW(obs.validate(2.0));
  obs.sigma_y = 0.0;
  EXPECT_THROW(obs.validate(2.0), std::invalid_argument);
  obs.sigma_y = 0.2;
  obs.times = {0.5, 3.0};
  EXPECT_THROW(obs.validate(2.0), std::invalid_argument);
}

TEST(ThetaPrior, DensitiesAndSupport) {
  const auto expo = sdemc::ThetaPrior::exponential(1.0);
  EXPECT_NEAR(expo.log_density(2.0), -2.0, 1e-15);
  EXPECT_EQ(expo.log_density(-0.5), sdemc::kNegInf);
  const auto unif = sdemc::ThetaPrior::uniform(-std::numbers::pi, std::numbers::pi);
  EXPECT_TRUE(unif.in_support(3.0));
  EXPECT_FALSE(unif.in_support(4.0));
  sdemc::RngStream rng(1);
  EXPECT_THROW(sdemc::ThetaPrior::flat().sample(rng),
               sdemc::unsupported_model_error);
}
