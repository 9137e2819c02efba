#ifndef SDEMC_BASELINES_HPP
#define SDEMC_BASELINES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "sdemc/bridge.hpp"
#include "sdemc/errors.hpp"
#include "sdemc/models.hpp"
#include "sdemc/params.hpp"
#include "sdemc/random.hpp"

namespace sdemc {

struct EulerConfig {
  double dt = 0.01;

  void validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("EulerConfig: dt must be > 0");
  }
};

/// Regular grid {0, dt, 2dt, ..., T}; the final step may be partial.
inline std::vector<double> euler_grid(double T, double dt) {
  if (!(T > 0.0) || !(dt > 0.0))
    throw std::invalid_argument("euler_grid: requires T > 0 and dt > 0");
  const auto n = static_cast<std::size_t>(std::ceil(T / dt - 1e-9));
  std::vector<double> g;
  g.reserve(n + 1);
  g.push_back(0.0);
  for (std::size_t i = 1; i < n; ++i) g.push_back(static_cast<double>(i) * dt);
  g.push_back(T);
  return g;
}

namespace detail {

/// Euler-Maruyama propagation from (t0, x) to t1 with unit diffusion,
/// appending the values at each sub-step (t0 excluded, t1 included).
inline double euler_segment(const Ea1Model& model, double x, double t0,
                            double t1, double dt, RngStream& rng,
                            std::vector<double>* out = nullptr) {
  const auto n = static_cast<std::size_t>(std::ceil((t1 - t0) / dt - 1e-9));
  double t = t0;
  for (std::size_t i = 1; i <= n; ++i) {
    const double t_next = (i == n) ? t1 : t0 + static_cast<double>(i) * dt;
    const double step = t_next - t;
    x += model.alpha(x) * step + std::sqrt(step) * rng.std_normal();
    if (out) out->push_back(x);
    t = t_next;
  }
  return x;
}

}  // namespace detail

/// Simulates the SDE on the regular grid; X_0 drawn from the model's
/// initial distribution. Approximate: bias is O(dt).
inline std::vector<double> euler_simulate(const Ea1Model& model, double T,
                                          double dt, RngStream& rng) {
  const std::vector<double> grid = euler_grid(T, dt);
  std::vector<double> values;
  values.reserve(grid.size());
  double x = model.init.sample(rng);
  values.push_back(x);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double step = grid[i] - grid[i - 1];
    x += model.alpha(x) * step + std::sqrt(step) * rng.std_normal();
    values.push_back(x);
  }
  return values;
}

/// Output of one particle filter pass: full per-particle path histories on
/// `times`, and the usual product-of-mean-weights likelihood estimate.
struct ParticleFilterResult {
  std::vector<double> times;
  std::vector<std::vector<double>> paths;  // one history per particle
  double log_lik = 0.0;
};

namespace detail {

inline std::vector<std::size_t> multinomial_resample(
    const std::vector<double>& weights, RngStream& rng) {
  const std::size_t n = weights.size();
  std::vector<double> cum(n);
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    acc += weights[k];
    cum[k] = acc;
  }
  std::vector<std::size_t> idx(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double u = rng.uniform() * acc;
    idx[k] = static_cast<std::size_t>(
        std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
    if (idx[k] >= n) idx[k] = n - 1;
  }
  return idx;
}

/// Normalizes log weights in place; returns log of their mean. Throws when
/// every weight is zero.
inline double normalize_log_weights(std::vector<double>& lw, std::size_t step) {
  const double mx = *std::max_element(lw.begin(), lw.end());
  if (!std::isfinite(mx))
    throw degenerate_filter_error(
        "particle filter: all weights vanished at observation " +
            std::to_string(step),
        step);
  double sum = 0.0;
  for (double& w : lw) {
    w = std::exp(w - mx);
    sum += w;
  }
  for (double& w : lw) w /= sum;
  return mx + std::log(sum / static_cast<double>(lw.size()));
}

}  // namespace detail

/// Bootstrap particle filter on the Euler discretization: propagate between
/// observation times, weight by the likelihood, resample full path histories
/// multinomially. Resampling every step follows the textbook scheme and
/// causes early-path degeneracy; fine for filtering statistics.
inline ParticleFilterResult bootstrap_pf(const Ea1Model& model,
                                         const ObservationSet& obs, double T,
                                         int n_particles, double dt,
                                         RngStream& rng) {
  if (n_particles <= 0)
    throw std::invalid_argument("bootstrap_pf: n_particles must be > 0");
  obs.validate(T);
  if (obs.empty()) throw std::invalid_argument("bootstrap_pf: no observations");
  const GaussianLikelihood lik = obs.likelihood();
  const auto n = static_cast<std::size_t>(n_particles);

  ParticleFilterResult res;
  res.times.push_back(0.0);
  res.paths.assign(n, {});
  std::vector<double> x(n);
  for (std::size_t k = 0; k < n; ++k) {
    x[k] = model.init.sample(rng);
    res.paths[k].push_back(x[k]);
  }

  std::vector<double> boundaries = obs.times;
  if (boundaries.back() < T) boundaries.push_back(T);
  std::vector<double> lw(n);
  double t_prev = 0.0;
  for (std::size_t i = 0; i < boundaries.size(); ++i) {
    const double t_next = boundaries[i];
    if (t_next > t_prev) {
      // the segment sub-grid is shared by all particles; record it once
      const auto steps =
          static_cast<std::size_t>(std::ceil((t_next - t_prev) / dt - 1e-9));
      for (std::size_t s = 1; s < steps; ++s)
        res.times.push_back(t_prev + static_cast<double>(s) * dt);
      res.times.push_back(t_next);
      for (std::size_t k = 0; k < n; ++k)
        x[k] = detail::euler_segment(model, x[k], t_prev, t_next, dt, rng,
                                     &res.paths[k]);
    }
    const bool observed = i < obs.times.size();
    if (observed) {
      for (std::size_t k = 0; k < n; ++k)
        lw[k] = lik.log_density(obs.values[i], x[k]);
      res.log_lik += detail::normalize_log_weights(lw, i);
      const auto idx = detail::multinomial_resample(lw, rng);
      std::vector<std::vector<double>> new_paths(n);
      std::vector<double> new_x(n);
      for (std::size_t k = 0; k < n; ++k) {
        new_paths[k] = res.paths[idx[k]];
        new_x[k] = x[idx[k]];
      }
      res.paths = std::move(new_paths);
      x = std::move(new_x);
    }
    t_prev = t_next;
  }
  return res;
}

/// Discretization-free particle filter. Segments propose plain Brownian
/// increments; the weight carries the likelihood times the unbiased
/// Girsanov estimator exp(A(x1) - A(x0) - L*dt) * prod(1 - phi/M) over a
/// rate-M Poisson grid bridged through the segment. Path histories hold the
/// values at {0} union observation times (and T when unobserved).
inline ParticleFilterResult random_weight_pf(const Ea1Model& model,
                                             const ObservationSet& obs,
                                             double T, int n_particles,
                                             RngStream& rng) {
  if (n_particles <= 0)
    throw std::invalid_argument("random_weight_pf: n_particles must be > 0");
  obs.validate(T);
  if (obs.empty())
    throw std::invalid_argument("random_weight_pf: no observations");
  const GaussianLikelihood lik = obs.likelihood();
  const auto n = static_cast<std::size_t>(n_particles);

  ParticleFilterResult res;
  res.times.push_back(0.0);
  res.paths.assign(n, {});
  std::vector<double> x(n);
  for (std::size_t k = 0; k < n; ++k) {
    x[k] = model.init.sample(rng);
    res.paths[k].push_back(x[k]);
  }

  std::vector<double> boundaries = obs.times;
  if (boundaries.back() < T) boundaries.push_back(T);
  std::vector<double> lw(n);
  double t_prev = 0.0;
  for (std::size_t i = 0; i < boundaries.size(); ++i) {
    const double t_next = boundaries[i];
    const double span = t_next - t_prev;
    if (span > 0.0) res.times.push_back(t_next);
    for (std::size_t k = 0; k < n; ++k) {
      double w = 0.0;
      if (span > 0.0) {
        const double x_new = x[k] + std::sqrt(span) * rng.std_normal();
        w = model.A(x_new) - model.A(x[k]) - model.L * span;
        const PointSet grid =
            sample_poisson_process(model.M, t_prev, t_next, rng);
        const auto vals =
            sample_bridge({t_prev, x[k], t_next, x_new}, grid.times, rng);
        for (double v : vals) {
          const double keep = checked_probability(
              1.0 - model.phi(v) / model.M, "random_weight_pf");
          w += (keep > 0.0) ? std::log(keep) : kNegInf;
        }
        x[k] = x_new;
        res.paths[k].push_back(x_new);
      }
      if (i < obs.times.size()) w += lik.log_density(obs.values[i], x[k]);
      lw[k] = w;
    }
    res.log_lik += detail::normalize_log_weights(lw, i);
    const auto idx = detail::multinomial_resample(lw, rng);
    std::vector<std::vector<double>> new_paths(n);
    std::vector<double> new_x(n);
    for (std::size_t k = 0; k < n; ++k) {
      new_paths[k] = res.paths[idx[k]];
      new_x[k] = x[idx[k]];
    }
    res.paths = std::move(new_paths);
    x = std::move(new_x);
    t_prev = t_next;
  }
  return res;
}

struct PfConfig {
  enum class Algo { euler, random_weight };
  Algo algo = Algo::euler;
  int n_particles = 50;
  double dt = 0.01;
};

inline ParticleFilterResult run_pf(const Ea1Model& model,
                                   const ObservationSet& obs, double T,
                                   const PfConfig& cfg, RngStream& rng) {
  return cfg.algo == PfConfig::Algo::euler
             ? bootstrap_pf(model, obs, T, cfg.n_particles, cfg.dt, rng)
             : random_weight_pf(model, obs, T, cfg.n_particles, rng);
}

/// Current state of a particle-marginal chain: parameter, one adopted
/// particle path, and the likelihood estimate it came with.
struct PimhState {
  double theta = 0.0;
  std::vector<double> times;
  std::vector<double> path;
  double log_lik = -std::numeric_limits<double>::infinity();
};

struct PimhConfig {
  PfConfig pf;
  bool infer_theta = false;
  ThetaProposal proposal;
};

inline PimhState pimh_init(const Ea1Model& model, const ObservationSet& obs,
                           double T, const PfConfig& cfg, RngStream& rng) {
  auto pf = run_pf(model, obs, T, cfg, rng);
  PimhState st;
  st.theta = model.theta;
  st.times = std::move(pf.times);
  const auto pick = static_cast<std::size_t>(
      rng.uniform(0.0, static_cast<double>(pf.paths.size())));
  st.path = std::move(pf.paths[std::min(pick, pf.paths.size() - 1)]);
  st.log_lik = pf.log_lik;
  return st;
}

/// Particle-independent Metropolis-Hastings step: optionally propose a new
/// theta, rerun the filter, and accept the (theta, path, estimate) triple
/// with the usual pseudo-marginal ratio.
inline bool pimh_step(PimhState& state, const ModelFamily& family,
                      const ObservationSet& obs, double T,
                      const PimhConfig& cfg, RngStream& rng) {
  double theta_star = state.theta;
  double log_prior_ratio = 0.0;
  double log_hastings = 0.0;
  if (cfg.infer_theta) {
    const ThetaPrior prior = family(state.theta).theta_prior;
    if (cfg.proposal.kind == ThetaProposal::Kind::prior) {
      theta_star = prior.sample(rng);
      log_hastings =
          prior.log_density(state.theta) - prior.log_density(theta_star);
    } else {
      theta_star = state.theta + cfg.proposal.rw_scale * rng.std_normal();
    }
    if (!prior.in_support(theta_star)) return false;
    log_prior_ratio =
        prior.log_density(theta_star) - prior.log_density(state.theta);
  }
  const Ea1Model proposed_model = family(theta_star);
  auto pf = run_pf(proposed_model, obs, T, cfg.pf, rng);
  const double log_ratio =
      pf.log_lik - state.log_lik + log_prior_ratio + log_hastings;
  if (std::log(rng.uniform()) < log_ratio) {
    const auto pick = static_cast<std::size_t>(
        rng.uniform(0.0, static_cast<double>(pf.paths.size())));
    state.theta = theta_star;
    state.times = std::move(pf.times);
    state.path = std::move(pf.paths[std::min(pick, pf.paths.size() - 1)]);
    state.log_lik = pf.log_lik;
    return true;
  }
  return false;
}

}  // namespace sdemc

#endif
