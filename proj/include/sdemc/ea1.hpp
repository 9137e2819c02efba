#ifndef SDEMC_EA1_HPP
#define SDEMC_EA1_HPP

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sdemc/bridge.hpp"
#include "sdemc/models.hpp"
#include "sdemc/random.hpp"
#include "sdemc/skeleton.hpp"

namespace sdemc {

struct Ea1Result {
  Skeleton skeleton;
  std::vector<double> grid_values;  // aligned with the requested grid
  std::uint64_t attempts = 0;
};

/// Exact prior draw from an EA1 SDE on [0, T] by rejection. Each attempt
/// proposes a rate-M Poisson grid, endpoints (X_0 from the initial
/// distribution, X_T from the biased endpoint density), bridge values on the
/// grid, and accepts when every grid point survives u > phi/M. The optional
/// grid is imputed only after acceptance.
inline Ea1Result ea1_simulate(const Ea1Model& model, double T, RngStream& rng,
                              std::span<const double> grid = {},
                              std::uint64_t max_attempts = 1'000'000) {
  if (!(T > 0.0)) throw std::invalid_argument("ea1_simulate: T must be > 0");
  if (!(model.M >= 0.0))
    throw std::invalid_argument("ea1_simulate: model bound M must be >= 0");

  for (std::uint64_t attempt = 1; attempt <= max_attempts; ++attempt) {
    PointSet psi = sample_poisson_process(model.M, 0.0, T, rng);
    const double x0 = model.init.sample(rng);
    const double xT = sample_h_endpoint(model, x0, T, rng);
    std::vector<double> values =
        sample_bridge({0.0, x0, T, xT}, psi.times, rng);

    bool accept = true;
    for (double v : values) {
      const double ratio =
          checked_probability(model.phi(v) / model.M, "ea1_simulate");
      if (rng.uniform() <= ratio) {
        accept = false;
        break;
      }
    }
    if (!accept) continue;

    Ea1Result res;
    res.skeleton.T = T;
    res.skeleton.psi = std::move(psi.times);
    res.skeleton.x_psi = std::move(values);
    res.skeleton.obs_times = {0.0, T};
    res.skeleton.x_obs = {x0, xT};
    res.attempts = attempt;
    if (!grid.empty()) res.grid_values = res.skeleton.impute(grid, rng);
    return res;
  }
  throw budget_error("ea1_simulate: no acceptance within " +
                     std::to_string(max_attempts) + " attempts");
}

}  // namespace sdemc

#endif
