#ifndef SDEMC_TEMPERING_HPP
#define SDEMC_TEMPERING_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sdemc/gibbs.hpp"
#include "sdemc/models.hpp"
#include "sdemc/random.hpp"
#include "sdemc/skeleton.hpp"

namespace sdemc {

/// Log probability of a skeleton under the inverse-temperature-c model:
/// the rate-M_c Poisson grid density, the thinning factors, and the
/// endpoint drift bias. Terms shared across temperatures (initial density,
/// Gaussian increments, likelihood) cancel in swap ratios and are omitted.
inline double log_skeleton_density(const Skeleton& skel, const Ea1Model& model) {
  double lp = -model.M * skel.T;
  if (!skel.psi.empty()) lp += static_cast<double>(skel.psi.size()) * std::log(model.M);
  for (double x : skel.x_psi) {
    const double phi = model.phi(x);
    if (phi >= model.M) return kNegInf;
    lp += std::log1p(-phi / model.M);
  }
  lp += model.A(skel.xT()) - model.A(skel.x0());
  return lp;
}

/// K parallel chains at increasing inverse temperatures, the last at c = 1.
struct Ladder {
  std::vector<double> c_values;
  std::vector<Ea1Model> models;
  std::vector<ChainState> states;
  RngStream swap_rng;
  std::uint64_t swap_attempts = 0;
  std::uint64_t swap_accepts = 0;

  std::size_t size() const noexcept { return states.size(); }

  static Ladder build(const std::vector<double>& c_values,
                      const std::function<Ea1Model(double)>& tempered_model,
                      double T, const std::vector<double>& anchor_times,
                      std::uint64_t seed, std::uint64_t stream_base = 0) {
    if (c_values.empty())
      throw std::invalid_argument("Ladder: needs at least one temperature");
    if (!strictly_increasing(c_values) || c_values.back() != 1.0)
      throw std::invalid_argument("Ladder: c values must increase and end at 1");
    Ladder ladder;
    ladder.c_values = c_values;
    ladder.swap_rng = RngStream(seed, stream_base);
    for (std::size_t i = 0; i < c_values.size(); ++i) {
      ladder.models.push_back(tempered_model(c_values[i]));
      ladder.states.push_back(make_initial_state(
          ladder.models[i], T, {0.0, T}, RngStream(seed, stream_base + 1 + i)));
    }
    return ladder;
  }
};

/// Proposes exchanging the skeletons of a uniformly chosen adjacent pair.
/// Returns the lower index of the swapped pair if accepted.
inline std::optional<std::size_t> swap_step(Ladder& ladder) {
  if (ladder.size() < 2)
    throw std::invalid_argument("swap_step: ladder needs at least two chains");
  const std::size_t i = static_cast<std::size_t>(
      ladder.swap_rng.uniform(0.0, static_cast<double>(ladder.size() - 1)));
  const std::size_t j = i + 1;
  ++ladder.swap_attempts;

  const Skeleton& si = ladder.states[i].skeleton;
  const Skeleton& sj = ladder.states[j].skeleton;
  const double log_ratio =
      log_skeleton_density(sj, ladder.models[i]) +
      log_skeleton_density(si, ladder.models[j]) -
      log_skeleton_density(si, ladder.models[i]) -
      log_skeleton_density(sj, ladder.models[j]);
  if (std::log(ladder.swap_rng.uniform()) < log_ratio) {
    std::swap(ladder.states[i].skeleton, ladder.states[j].skeleton);
    ++ladder.swap_accepts;
    return i;
  }
  return std::nullopt;
}

/// One tempering iteration: a Gibbs sweep per temperature, then one swap
/// proposal. Returns the c = 1 chain's sweep outcome.
inline SweepOutcome tempered_sweep(Ladder& ladder, const ObservationSet* obs,
                                   const SamplerConfig& cfg) {
  SweepOutcome top;
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    const SweepOutcome out =
        gibbs_sweep(ladder.states[i], ladder.models[i], nullptr, obs, cfg);
    if (i + 1 == ladder.size()) top = out;
  }
  swap_step(ladder);
  top.n_psi = ladder.states.back().skeleton.psi.size();
  return top;
}

}  // namespace sdemc

#endif
