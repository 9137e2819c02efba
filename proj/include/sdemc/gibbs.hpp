#ifndef SDEMC_GIBBS_HPP
#define SDEMC_GIBBS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "sdemc/bridge.hpp"
#include "sdemc/errors.hpp"
#include "sdemc/hmc.hpp"
#include "sdemc/models.hpp"
#include "sdemc/params.hpp"
#include "sdemc/random.hpp"
#include "sdemc/skeleton.hpp"

namespace sdemc {

struct Counters {
  std::uint64_t hmc_attempts = 0;
  std::uint64_t hmc_accepts = 0;
  std::uint64_t flip_attempts = 0;
  std::uint64_t flip_accepts = 0;
  std::uint64_t theta_attempts = 0;
  std::uint64_t theta_accepts = 0;
  std::vector<std::uint32_t> psi_history;

  static double rate(std::uint64_t accepts, std::uint64_t attempts) {
    return attempts == 0 ? 0.0
                         : static_cast<double>(accepts) /
                               static_cast<double>(attempts);
  }
};

/// One MCMC chain: skeleton, parameter, private RNG stream and acceptance
/// counters. Exclusively owned by a single thread.
struct ChainState {
  Skeleton skeleton;
  double theta = 0.0;
  RngStream rng;
  Counters counters;
};

struct SamplerConfig {
  HmcConfig hmc;
  bool flip_move = false;
  bool infer_theta = false;
  ThetaProposal theta_proposal;
};

struct SweepOutcome {
  bool hmc_accepted = false;
  bool flip_accepted = false;
  bool theta_accepted = false;
  std::size_t n_psi = 0;
};

/// Resamples the Poisson grid given the path: draw a rate-M grid, uncover the
/// path on it by bridging between the current anchors, keep each point with
/// probability 1 - phi/M, and replace the old grid with the survivors.
/// Values at the observation anchors are untouched.
inline void refresh_grid(Skeleton& skel, const Ea1Model& model,
                         RngStream& rng) {
  const PointSet gamma = sample_poisson_process(model.M, 0.0, skel.T, rng);
  const Skeleton::Merged anchors = skel.merged();

  std::vector<double> new_psi;
  std::vector<double> new_values;
  new_psi.reserve(gamma.size());
  new_values.reserve(gamma.size());

  std::size_t seg = 0;
  std::size_t k = 0;
  std::vector<double> seg_times;
  while (k < gamma.times.size()) {
    const double t = gamma.times[k];
    while (seg + 1 < anchors.times.size() && anchors.times[seg + 1] <= t) ++seg;
    if (anchors.times[seg] == t) {  // collision with an anchor: drop the point
      ++k;
      continue;
    }
    seg_times.clear();
    std::size_t k2 = k;
    while (k2 < gamma.times.size() && gamma.times[k2] < anchors.times[seg + 1]) {
      seg_times.push_back(gamma.times[k2]);
      ++k2;
    }
    const BridgeSpec spec{anchors.times[seg], anchors.values[seg],
                          anchors.times[seg + 1], anchors.values[seg + 1]};
    const std::vector<double> vals = sample_bridge(spec, seg_times, rng);
    for (std::size_t i = 0; i < seg_times.size(); ++i) {
      const double keep = checked_probability(
          1.0 - model.phi(vals[i]) / model.M, "refresh_grid");
      if (rng.uniform() < keep) {
        new_psi.push_back(seg_times[i]);
        new_values.push_back(vals[i]);
      }
    }
    k = k2;
  }
  skel.psi = std::move(new_psi);
  skel.x_psi = std::move(new_values);
}

/// HMC update of the path values on the fixed times psi* union obs anchors.
inline bool update_path(ChainState& state, const Ea1Model& model,
                        const ObservationSet* obs, const HmcConfig& cfg) {
  const PathTarget target = PathTarget::from_skeleton(state.skeleton, model, obs);
  Skeleton::Merged merged = state.skeleton.merged();
  const bool accepted = hmc_step(merged.values, target, cfg, state.rng);
  if (accepted) state.skeleton.scatter(merged);
  ++state.counters.hmc_attempts;
  if (accepted) ++state.counters.hmc_accepts;
  return accepted;
}

/// Proposes negating the whole trajectory, valid when the path law is
/// symmetric under x -> -x. The Metropolis correction involves only the
/// initial density and the likelihood; with neither, it always accepts.
inline bool sign_flip_move(ChainState& state, const Ea1Model& model,
                           const ObservationSet* obs) {
  if (!model.sign_symmetric)
    throw config_error("sign_flip_move: model '" + model.name +
                       "' is not symmetric under x -> -x");
  if (!model.init.symmetric())
    throw config_error("sign_flip_move: initial distribution is not symmetric");
  ++state.counters.flip_attempts;

  double log_ratio = model.init.log_density(-state.skeleton.x0()) -
                     model.init.log_density(state.skeleton.x0());
  if (model.init.degenerate()) log_ratio = 0.0;  // point mass at 0: -0 == 0
  if (obs && !obs->empty()) {
    const GaussianLikelihood lik = obs->likelihood();
    std::size_t j = 0;
    for (std::size_t k = 0;
         k < state.skeleton.obs_times.size() && j < obs->times.size(); ++k) {
      if (state.skeleton.obs_times[k] == obs->times[j]) {
        const double x = state.skeleton.x_obs[k];
        const double y = obs->values[j++];
        log_ratio += lik.log_density(y, -x) - lik.log_density(y, x);
      }
    }
  }
  if (std::log(state.rng.uniform()) < log_ratio) {
    for (double& v : state.skeleton.x_psi) v = -v;
    for (double& v : state.skeleton.x_obs) v = -v;
    ++state.counters.flip_accepts;
    return true;
  }
  return false;
}

/// One Gibbs sweep: grid refresh, path update, then the optional sign-flip
/// and theta moves. `model` is rebound in place when theta moves.
inline SweepOutcome gibbs_sweep(ChainState& state, Ea1Model& model,
                                const ModelFamily* family,
                                const ObservationSet* obs,
                                const SamplerConfig& cfg) {
  SweepOutcome out;
  refresh_grid(state.skeleton, model, state.rng);
  out.hmc_accepted = update_path(state, model, obs, cfg.hmc);
  if (cfg.flip_move) out.flip_accepted = sign_flip_move(state, model, obs);
  if (cfg.infer_theta) {
    if (!family)
      throw config_error("gibbs_sweep: theta inference needs a model family");
    ++state.counters.theta_attempts;
    out.theta_accepted = theta_step(state.theta, model, state.skeleton, *family,
                                    obs, cfg.theta_proposal, state.rng);
    if (out.theta_accepted) ++state.counters.theta_accepts;
  }
  out.n_psi = state.skeleton.psi.size();
  state.counters.psi_history.push_back(
      static_cast<std::uint32_t>(out.n_psi));
  return out;
}

/// A valid but arbitrary starting state: empty Poisson grid, anchor values
/// pinned at the initial draw. Burn-in moves it into the typical set.
inline ChainState make_initial_state(const Ea1Model& model, double T,
                                     const std::vector<double>& anchor_times,
                                     RngStream rng) {
  ChainState state;
  state.theta = model.theta;
  state.skeleton.T = T;
  state.skeleton.obs_times = anchor_times;
  if (state.skeleton.obs_times.empty() || state.skeleton.obs_times.front() != 0.0)
    state.skeleton.obs_times.insert(state.skeleton.obs_times.begin(), 0.0);
  if (state.skeleton.obs_times.back() != T)
    state.skeleton.obs_times.push_back(T);
  state.rng = rng;
  const double x0 = model.init.sample(state.rng);
  state.skeleton.x_obs.assign(state.skeleton.obs_times.size(), x0);
  state.skeleton.validate();
  return state;
}

}  // namespace sdemc

#endif
