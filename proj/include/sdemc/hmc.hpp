#ifndef SDEMC_HMC_HPP
#define SDEMC_HMC_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "sdemc/errors.hpp"
#include "sdemc/models.hpp"
#include "sdemc/random.hpp"
#include "sdemc/skeleton.hpp"

namespace sdemc {

struct HmcConfig {
  double step_size = 0.2;
  int n_leapfrog = 5;
  double mass = 100.0;  // mass matrix is mass * identity

  void validate() const {
    if (!(step_size > 0.0)) throw std::invalid_argument("HmcConfig: step_size must be > 0");
    if (n_leapfrog <= 0) throw std::invalid_argument("HmcConfig: n_leapfrog must be > 0");
    if (!(mass > 0.0)) throw std::invalid_argument("HmcConfig: mass must be > 0");
  }
};

/// Conditional path distribution on the fixed times psi* union obs anchors.
/// The log density is taken in the Wiener-reference form: initial density,
/// drift-antiderivative endpoint terms A(X_T) - A(X_0), the Gaussian
/// increment chain, the observation likelihood, and the thinning terms
/// log(1 - phi/M) on the Poisson grid. A point-mass initial distribution
/// freezes the first coordinate.
struct PathTarget {
  const Ea1Model* model = nullptr;
  const ObservationSet* obs = nullptr;  // may be null
  double T = 1.0;
  std::vector<double> times;            // sorted, times.front()=0, back()=T
  std::vector<std::uint8_t> is_psi;     // thinning term applies
  std::vector<int> obs_index;           // index into obs->values, or -1
  bool freeze_x0 = true;

  std::size_t dim() const noexcept { return times.size(); }

  static PathTarget from_skeleton(const Skeleton& skel, const Ea1Model& model,
                                  const ObservationSet* obs) {
    PathTarget t;
    t.model = &model;
    t.obs = obs;
    t.T = skel.T;
    t.freeze_x0 = model.init.degenerate();
    auto merged = skel.merged();
    t.times = std::move(merged.times);
    t.is_psi = std::move(merged.from_psi);
    t.obs_index.assign(t.times.size(), -1);
    if (obs) {
      std::size_t j = 0;
      for (std::size_t k = 0; k < t.times.size() && j < obs->times.size(); ++k) {
        if (!t.is_psi[k] && t.times[k] == obs->times[j]) t.obs_index[k] = static_cast<int>(j++);
      }
      if (j != obs->times.size())
        throw std::invalid_argument("PathTarget: observation times missing from skeleton");
    }
    return t;
  }
};

/// Log density of the path values q (up to an additive constant).
/// Returns -inf when a thinning factor vanishes; throws contract_error if
/// phi exceeds its bound, which indicates a broken model.
inline double log_target(std::span<const double> q, const PathTarget& target) {
  const Ea1Model& m = *target.model;
  const std::size_t n = q.size();
  if (n != target.times.size())
    throw std::invalid_argument("log_target: dimension mismatch");
  double lp = 0.0;
  if (!target.freeze_x0) lp += m.init.log_density(q[0]);
  lp += m.A(q[n - 1]) - m.A(q[0]);
  for (std::size_t i = 1; i < n; ++i) {
    const double dt = target.times[i] - target.times[i - 1];
    const double d = q[i] - q[i - 1];
    lp += -0.5 * d * d / dt - 0.5 * std::log(2.0 * std::numbers::pi * dt);
  }
  const GaussianLikelihood lik =
      target.obs ? target.obs->likelihood() : GaussianLikelihood{};
  for (std::size_t i = 0; i < n; ++i) {
    if (target.obs_index[i] >= 0)
      lp += lik.log_density(target.obs->values[target.obs_index[i]], q[i]);
    if (target.is_psi[i]) {
      const double phi = m.phi(q[i]);
      if (phi > m.M * (1.0 + 1e-9) + 1e-12)
        throw contract_error("log_target: phi exceeds bound M");
      if (phi >= m.M) return kNegInf;
      lp += std::log1p(-phi / m.M);
    }
  }
  return lp;
}

/// Exact gradient of log_target. The Gaussian chain contributes a
/// tridiagonal form, so the whole gradient costs linear time.
inline void grad_log_target(std::span<const double> q, const PathTarget& target,
                            std::span<double> out) {
  const Ea1Model& m = *target.model;
  const std::size_t n = q.size();
  if (n != target.times.size() || out.size() != n)
    throw std::invalid_argument("grad_log_target: dimension mismatch");
  for (auto& g : out) g = 0.0;
  if (!target.freeze_x0 && m.init.kind == InitialDistribution::Kind::gaussian)
    out[0] += -(q[0] - m.init.mean) / m.init.variance;
  out[n - 1] += m.alpha(q[n - 1]);
  out[0] -= m.alpha(q[0]);
  for (std::size_t i = 1; i < n; ++i) {
    const double dt = target.times[i] - target.times[i - 1];
    const double d = (q[i] - q[i - 1]) / dt;
    out[i - 1] += d;
    out[i] -= d;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (target.obs_index[i] >= 0) {
      const double y = target.obs->values[target.obs_index[i]];
      const double s2 = target.obs->sigma_y * target.obs->sigma_y;
      out[i] += (y - q[i]) / s2;
    }
    if (target.is_psi[i])
      out[i] -= m.phi_prime(q[i]) / (m.M - m.phi(q[i]));
  }
  if (target.freeze_x0) out[0] = 0.0;
}

/// One leapfrog trajectory (half-kick, drifts and kicks, half-kick) in place.
inline void leapfrog(std::vector<double>& q, std::vector<double>& p,
                     const PathTarget& target, double step_size, int n_steps,
                     double mass) {
  std::vector<double> g(q.size());
  grad_log_target(q, target, g);
  for (std::size_t i = 0; i < q.size(); ++i) p[i] += 0.5 * step_size * g[i];
  for (int s = 0; s < n_steps; ++s) {
    for (std::size_t i = 0; i < q.size(); ++i) q[i] += step_size * p[i] / mass;
    grad_log_target(q, target, g);
    const double kick = (s + 1 < n_steps) ? step_size : 0.5 * step_size;
    for (std::size_t i = 0; i < q.size(); ++i) p[i] += kick * g[i];
  }
  if (target.freeze_x0) p[0] = 0.0;
}

/// One HMC update of the path vector. Non-finite Hamiltonians at the
/// proposal reject rather than throw. Returns whether the move was accepted.
inline bool hmc_step(std::vector<double>& q, const PathTarget& target,
                     const HmcConfig& cfg, RngStream& rng) {
  cfg.validate();
  const std::size_t n = q.size();
  std::vector<double> p(n, 0.0);
  const std::size_t first = target.freeze_x0 ? 1 : 0;
  for (std::size_t i = first; i < n; ++i) p[i] = rng.gaussian(0.0, cfg.mass);

  const double lp0 = log_target(q, target);
  double kin0 = 0.0;
  for (double pi : p) kin0 += pi * pi;
  kin0 /= 2.0 * cfg.mass;
  const double h0 = -lp0 + kin0;

  std::vector<double> q_new = q;
  leapfrog(q_new, p, target, cfg.step_size, cfg.n_leapfrog, cfg.mass);

  bool finite = true;
  for (double v : q_new)
    if (!std::isfinite(v)) finite = false;
  for (double v : p)
    if (!std::isfinite(v)) finite = false;
  if (!finite) return false;

  const double lp1 = log_target(q_new, target);
  double kin1 = 0.0;
  for (double pi : p) kin1 += pi * pi;
  kin1 /= 2.0 * cfg.mass;
  const double h1 = -lp1 + kin1;
  if (!std::isfinite(h1)) return false;

  // a non-finite current Hamiltonian can only arise from a zero-density
  // initial state; any finite proposal is then an improvement
  const double log_ratio = std::isfinite(h0)
                               ? h0 - h1
                               : std::numeric_limits<double>::infinity();
  if (std::log(rng.uniform()) < log_ratio) {
    q = std::move(q_new);
    return true;
  }
  return false;
}

}  // namespace sdemc

#endif
