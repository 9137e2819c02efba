#ifndef SDEMC_MODELS_HPP
#define SDEMC_MODELS_HPP

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "sdemc/errors.hpp"
#include "sdemc/random.hpp"

namespace sdemc {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Distribution of the diffusion's initial value X_0.
struct InitialDistribution {
  enum class Kind { point, gaussian };

  Kind kind = Kind::point;
  double value = 0.0;     // point mass location
  double mean = 0.0;      // gaussian
  double variance = 1.0;  // gaussian

  static InitialDistribution point(double v) {
    InitialDistribution d;
    d.kind = Kind::point;
    d.value = v;
    return d;
  }

  static InitialDistribution normal(double mean, double variance) {
    if (!(variance > 0.0))
      throw std::invalid_argument("InitialDistribution: variance must be > 0");
    InitialDistribution d;
    d.kind = Kind::gaussian;
    d.mean = mean;
    d.variance = variance;
    return d;
  }

  bool degenerate() const noexcept { return kind == Kind::point; }

  bool symmetric() const noexcept {
    return kind == Kind::point ? value == 0.0 : mean == 0.0;
  }

  double sample(RngStream& rng) const {
    return kind == Kind::point ? value : rng.gaussian(mean, variance);
  }

  double log_density(double x) const {
    if (kind == Kind::point) return x == value ? 0.0 : kNegInf;
    const double d = x - mean;
    return -0.5 * d * d / variance -
           0.5 * std::log(2.0 * std::numbers::pi * variance);
  }
};

/// Prior over the drift parameter theta.
struct ThetaPrior {
  enum class Kind { exponential, uniform, point, flat };

  Kind kind = Kind::flat;
  double rate = 1.0;  // exponential
  double lo = 0.0, hi = 1.0;  // uniform
  double value = 0.0;  // point

  static ThetaPrior exponential(double rate) {
    if (!(rate > 0.0))
      throw std::invalid_argument("ThetaPrior: exponential rate must be > 0");
    ThetaPrior p;
    p.kind = Kind::exponential;
    p.rate = rate;
    return p;
  }

  static ThetaPrior uniform(double lo, double hi) {
    if (!(hi > lo))
      throw std::invalid_argument("ThetaPrior: uniform requires hi > lo");
    ThetaPrior p;
    p.kind = Kind::uniform;
    p.lo = lo;
    p.hi = hi;
    return p;
  }

  static ThetaPrior point(double v) {
    ThetaPrior p;
    p.kind = Kind::point;
    p.value = v;
    return p;
  }

  static ThetaPrior flat() { return ThetaPrior{}; }

  bool in_support(double theta) const {
    switch (kind) {
      case Kind::exponential: return theta >= 0.0;
      case Kind::uniform: return theta >= lo && theta <= hi;
      case Kind::point: return theta == value;
      case Kind::flat: return true;
    }
    return false;
  }

  double log_density(double theta) const {
    if (!in_support(theta)) return kNegInf;
    switch (kind) {
      case Kind::exponential: return std::log(rate) - rate * theta;
      case Kind::uniform: return -std::log(hi - lo);
      case Kind::point: return 0.0;
      case Kind::flat: return 0.0;
    }
    return kNegInf;
  }

  double sample(RngStream& rng) const {
    switch (kind) {
      case Kind::exponential: return rng.exponential(rate);
      case Kind::uniform: return rng.uniform(lo, hi);
      case Kind::point: return value;
      case Kind::flat:
        throw unsupported_model_error("ThetaPrior: cannot sample a flat prior");
    }
    return 0.0;
  }
};

/// A unit-diffusion SDE dX = alpha(X) dt + dB whose shifted hazard
/// phi = (alpha^2 + alpha')/2 - L is bounded in [0, M]. Bundles the drift,
/// its antiderivative and derivatives, the bounds, the initial distribution
/// and the theta prior. Immutable after construction; share freely.
struct Ea1Model {
  std::string name;
  double theta = 0.0;
  double c = 1.0;  // inverse temperature, used by the tempered family

  std::function<double(double)> alpha;
  std::function<double(double)> alpha_prime;
  std::function<double(double)> alpha_second;
  std::function<double(double)> A;          // antiderivative of alpha, A(0) = 0
  std::function<double(double)> phi;
  std::function<double(double)> phi_prime;  // alpha*alpha' + alpha''/2

  double L = 0.0;
  double M = 0.0;
  double sup_A = 0.0;  // sup_u A(u), used by the endpoint rejection sampler

  InitialDistribution init;
  ThetaPrior theta_prior;
  bool sign_symmetric = false;  // path law invariant under x -> -x
};

/// Drift -theta * x / sqrt(1 + x^2); pulls toward zero with bounded force.
inline Ea1Model hyperbolic_model(double theta) {
  if (!(theta > 0.0))
    throw std::invalid_argument("hyperbolic_model: theta must be > 0");
  Ea1Model m;
  m.name = "hyperbolic";
  m.theta = theta;
  m.alpha = [theta](double x) { return -theta * x / std::sqrt(1.0 + x * x); };
  m.alpha_prime = [theta](double x) {
    const double s = 1.0 + x * x;
    return -theta / (s * std::sqrt(s));
  };
  m.alpha_second = [theta](double x) {
    const double s = 1.0 + x * x;
    return 3.0 * theta * x / (s * s * std::sqrt(s));
  };
  m.A = [theta](double x) { return theta - theta * std::sqrt(1.0 + x * x); };
  m.L = -0.5 * theta;
  m.M = 0.5 * theta * theta + 0.5 * theta;
  m.phi = [theta](double x) {
    const double s = 1.0 + x * x;
    return 0.5 * (theta * theta * x * x / s - theta / (s * std::sqrt(s))) +
           0.5 * theta;
  };
  m.phi_prime = [theta](double x) {
    const double s = 1.0 + x * x;
    const double s2 = s * s;
    return theta * theta * x / s2 + 1.5 * theta * x / (s2 * std::sqrt(s));
  };
  m.sup_A = 0.0;  // A peaks at x = 0
  m.init = InitialDistribution::point(0.0);
  m.theta_prior = ThetaPrior::exponential(1.0);
  m.sign_symmetric = true;
  return m;
}

/// Periodic drift sin(x - theta); bimodal around zero when theta = 0.
inline Ea1Model sine_model(double theta) {
  Ea1Model m;
  m.name = "sine";
  m.theta = theta;
  m.alpha = [theta](double x) { return std::sin(x - theta); };
  m.alpha_prime = [theta](double x) { return std::cos(x - theta); };
  m.alpha_second = [theta](double x) { return -std::sin(x - theta); };
  m.A = [theta](double x) { return std::cos(theta) - std::cos(x - theta); };
  m.L = -0.5;
  m.M = 9.0 / 8.0;
  m.phi = [theta](double x) {
    const double s = std::sin(x - theta);
    return 0.5 * s * s + 0.5 * std::cos(x - theta) + 0.5;
  };
  m.phi_prime = [theta](double x) {
    const double s = std::sin(x - theta);
    return s * std::cos(x - theta) - 0.5 * s;
  };
  m.sup_A = std::cos(theta) + 1.0;
  m.init = InitialDistribution::point(0.0);
  m.theta_prior = ThetaPrior::uniform(-std::numbers::pi, std::numbers::pi);
  m.sign_symmetric = theta == 0.0;
  return m;
}

/// Sine drift scaled by an inverse temperature c in [0,1]; c = 0 is Brownian
/// motion, c = 1 recovers sine_model(0). M_c is the tempering family's fixed
/// bound (c^2 + c)/2 + 1/8, which dominates sup phi_c for every c.
inline Ea1Model tempered_sine_model(double c) {
  if (!(c >= 0.0 && c <= 1.0))
    throw std::invalid_argument("tempered_sine_model: c must lie in [0,1]");
  Ea1Model m;
  m.name = "tempered_sine";
  m.theta = 0.0;
  m.c = c;
  m.alpha = [c](double x) { return c * std::sin(x); };
  m.alpha_prime = [c](double x) { return c * std::cos(x); };
  m.alpha_second = [c](double x) { return -c * std::sin(x); };
  m.A = [c](double x) { return c - c * std::cos(x); };
  m.L = -0.5 * c;
  m.M = 0.5 * (c * c + c) + 1.0 / 8.0;
  m.phi = [c](double x) {
    const double s = std::sin(x);
    return 0.5 * c * c * s * s + 0.5 * c * std::cos(x) + 0.5 * c;
  };
  m.phi_prime = [c](double x) {
    const double s = std::sin(x);
    return c * c * s * std::cos(x) - 0.5 * c * s;
  };
  m.sup_A = 2.0 * c;
  m.init = InitialDistribution::point(0.0);
  m.theta_prior = ThetaPrior::point(0.0);
  m.sign_symmetric = true;
  return m;
}

/// Analytic fixture: zero drift but a constant hazard phi = c below bound M,
/// so thinning counts, acceptance rates and product identities have closed
/// forms. Note phi is deliberately decoupled from the drift here (L = 0).
inline Ea1Model constant_phi_model(double c, double M) {
  if (!(c >= 0.0)) throw std::invalid_argument("constant_phi_model: c must be >= 0");
  if (!(M >= c)) throw std::invalid_argument("constant_phi_model: requires M >= c");
  Ea1Model m;
  m.name = "constant_phi";
  m.theta = 0.0;
  m.alpha = [](double) { return 0.0; };
  m.alpha_prime = [](double) { return 0.0; };
  m.alpha_second = [](double) { return 0.0; };
  m.A = [](double) { return 0.0; };
  m.L = 0.0;
  m.M = M;
  m.phi = [c](double) { return c; };
  m.phi_prime = [](double) { return 0.0; };
  m.sup_A = 0.0;
  m.init = InitialDistribution::point(0.0);
  m.theta_prior = ThetaPrior::flat();
  m.sign_symmetric = true;
  return m;
}

/// A theta-indexed family of models sharing one construction recipe.
struct ModelFamily {
  std::string name;
  std::function<Ea1Model(double)> make;

  Ea1Model operator()(double theta) const { return make(theta); }
};

inline ModelFamily hyperbolic_family() {
  return {"hyperbolic", [](double theta) { return hyperbolic_model(theta); }};
}

inline ModelFamily sine_family() {
  return {"sine", [](double theta) { return sine_model(theta); }};
}

/// Constant-phi family with fixed hazard c0 and bound M = theta; the theta
/// posterior is then a shifted gamma, handy for conjugacy-style checks.
inline ModelFamily constant_phi_family(double c0) {
  return {"constant_phi",
          [c0](double theta) { return constant_phi_model(c0, theta); }};
}

/// Additive Gaussian measurement noise with fixed scale.
struct GaussianLikelihood {
  double sigma_y = 0.2;

  double log_density(double y, double x) const {
    const double d = (y - x) / sigma_y;
    return -0.5 * d * d - std::log(sigma_y) -
           0.5 * std::log(2.0 * std::numbers::pi);
  }
};

/// Noisy observations y_o = X_o + N(0, sigma_y^2) at strictly increasing
/// times in [0, T]. May be empty (prior simulation).
struct ObservationSet {
  std::vector<double> times;
  std::vector<double> values;
  double sigma_y = 0.2;

  std::size_t size() const noexcept { return times.size(); }
  bool empty() const noexcept { return times.empty(); }

  GaussianLikelihood likelihood() const { return GaussianLikelihood{sigma_y}; }

  void validate(double T) const {
    if (times.size() != values.size())
      throw std::invalid_argument("ObservationSet: times/values size mismatch");
    if (!strictly_increasing(times))
      throw std::invalid_argument("ObservationSet: times must be strictly increasing");
    if (!times.empty() && (times.front() < 0.0 || times.back() > T))
      throw std::invalid_argument("ObservationSet: times must lie in [0, T]");
    if (!(sigma_y > 0.0))
      throw std::invalid_argument("ObservationSet: sigma_y must be > 0");
  }
};

}  // namespace sdemc

#endif
