#ifndef SDEMC_PARAMS_HPP
#define SDEMC_PARAMS_HPP

#include <cmath>
#include <stdexcept>
#include <string>

#include "sdemc/models.hpp"
#include "sdemc/random.hpp"
#include "sdemc/skeleton.hpp"

namespace sdemc {

struct ThetaProposal {
  enum class Kind { prior, random_walk };
  Kind kind = Kind::prior;
  double rw_scale = 0.5;

  void validate() const {
    if (kind == Kind::random_walk && !(rw_scale > 0.0))
      throw std::invalid_argument("ThetaProposal: rw_scale must be > 0");
  }
};

/// Log posterior of theta given the skeleton, up to theta-free constants:
/// prior + likelihood + A_theta endpoint terms - (M_theta + L_theta) T
/// + sum over psi of log(M_theta - phi_theta(X_g)). The skeleton's Poisson
/// grid is measured against a theta-free unit-rate reference, so changing
/// theta requires no re-thinning here.
inline double log_theta_posterior(double theta, const Skeleton& skel,
                                  const ModelFamily& family,
                                  const ObservationSet* obs) {
  const Ea1Model probe = family(theta);
  if (!probe.theta_prior.in_support(theta)) return kNegInf;
  double lp = probe.theta_prior.log_density(theta);
  if (obs && !obs->empty()) {
    const GaussianLikelihood lik = obs->likelihood();
    std::size_t j = 0;
    for (std::size_t k = 0; k < skel.obs_times.size() && j < obs->times.size();
         ++k) {
      if (skel.obs_times[k] == obs->times[j])
        lp += lik.log_density(obs->values[j++], skel.x_obs[k]);
    }
    if (j != obs->times.size())
      throw std::invalid_argument(
          "log_theta_posterior: observation times missing from skeleton");
  }
  lp += probe.A(skel.xT()) - probe.A(skel.x0());
  lp += -(probe.M + probe.L) * skel.T;
  for (double x : skel.x_psi) {
    const double gap = probe.M - probe.phi(x);
    if (!(gap > 0.0)) return kNegInf;
    lp += std::log(gap);
  }
  return lp;
}

/// Metropolis-Hastings update of theta given the current skeleton. On
/// acceptance the bound model is rebuilt at the new theta (preserving the
/// caller's initial-distribution choice). Returns whether it moved.
inline bool theta_step(double& theta, Ea1Model& model, const Skeleton& skel,
                       const ModelFamily& family, const ObservationSet* obs,
                       const ThetaProposal& proposal, RngStream& rng) {
  proposal.validate();
  double theta_star = 0.0;
  double log_hastings = 0.0;
  if (proposal.kind == ThetaProposal::Kind::prior) {
    theta_star = model.theta_prior.sample(rng);
    if (model.theta_prior.kind == ThetaPrior::Kind::point) return false;
    // q = prior, so the Hastings ratio cancels the prior densities
    log_hastings = model.theta_prior.log_density(theta) -
                   model.theta_prior.log_density(theta_star);
  } else {
    theta_star = theta + proposal.rw_scale * rng.std_normal();
  }

  const double lp_new = log_theta_posterior(theta_star, skel, family, obs);
  if (lp_new == kNegInf) return false;
  const double lp_old = log_theta_posterior(theta, skel, family, obs);
  if (std::log(rng.uniform()) < lp_new - lp_old + log_hastings) {
    const InitialDistribution init = model.init;
    theta = theta_star;
    model = family(theta_star);
    model.init = init;
    return true;
  }
  return false;
}

}  // namespace sdemc

#endif
