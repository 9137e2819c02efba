#ifndef SDEMC_SKELETON_HPP
#define SDEMC_SKELETON_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "sdemc/bridge.hpp"
#include "sdemc/random.hpp"

namespace sdemc {

/// Finite sufficient statistic of an exact SDE draw on [0, T]: Poisson times
/// psi with path values, plus values at the observation anchors (obs_times
/// always contains 0 and T). Everything else is retrievable by bridging.
struct Skeleton {
  double T = 1.0;
  std::vector<double> psi;
  std::vector<double> x_psi;
  std::vector<double> obs_times;
  std::vector<double> x_obs;

  void validate() const {
    if (!(T > 0.0)) throw std::invalid_argument("Skeleton: T must be > 0");
    if (psi.size() != x_psi.size())
      throw std::invalid_argument("Skeleton: psi/x_psi size mismatch");
    if (obs_times.size() != x_obs.size())
      throw std::invalid_argument("Skeleton: obs_times/x_obs size mismatch");
    if (obs_times.size() < 2 || obs_times.front() != 0.0 ||
        obs_times.back() != T)
      throw std::invalid_argument("Skeleton: obs_times must start at 0 and end at T");
    if (!strictly_increasing(obs_times))
      throw std::invalid_argument("Skeleton: obs_times must be strictly increasing");
    if (!strictly_increasing(psi))
      throw std::invalid_argument("Skeleton: psi must be strictly increasing");
    if (!psi.empty() && (psi.front() <= 0.0 || psi.back() >= T))
      throw std::invalid_argument("Skeleton: psi must lie strictly inside (0, T)");
    for (double t : psi)
      if (std::binary_search(obs_times.begin(), obs_times.end(), t))
        throw std::invalid_argument("Skeleton: psi and obs_times must be disjoint");
  }

  /// Sorted union of psi and obs_times with aligned values and a flag per
  /// entry marking Poisson-grid membership.
  struct Merged {
    std::vector<double> times;
    std::vector<double> values;
    std::vector<std::uint8_t> from_psi;
  };

  Merged merged() const {
    Merged m;
    const std::size_t n = psi.size() + obs_times.size();
    m.times.reserve(n);
    m.values.reserve(n);
    m.from_psi.reserve(n);
    std::size_t i = 0, j = 0;
    while (i < psi.size() || j < obs_times.size()) {
      if (j >= obs_times.size() || (i < psi.size() && psi[i] < obs_times[j])) {
        m.times.push_back(psi[i]);
        m.values.push_back(x_psi[i]);
        m.from_psi.push_back(1);
        ++i;
      } else {
        m.times.push_back(obs_times[j]);
        m.values.push_back(x_obs[j]);
        m.from_psi.push_back(0);
        ++j;
      }
    }
    return m;
  }

  /// Writes merged-order values back into psi/obs storage.
  void scatter(const Merged& m) {
    std::size_t i = 0, j = 0;
    for (std::size_t k = 0; k < m.times.size(); ++k) {
      if (m.from_psi[k])
        x_psi[i++] = m.values[k];
      else
        x_obs[j++] = m.values[k];
    }
  }

  /// Joint draw of the path at sorted grid times, segment-wise between the
  /// skeleton anchors. Grid times coinciding with anchors return the stored
  /// value. Does not modify the skeleton.
  std::vector<double> impute(std::span<const double> grid,
                             RngStream& rng) const {
    const Merged m = merged();
    std::vector<double> out;
    out.reserve(grid.size());
    std::size_t seg = 0;  // anchor index with m.times[seg] <= t
    std::vector<double> seg_times;
    std::size_t k = 0;
    while (k < grid.size()) {
      const double t = grid[k];
      if (!(t >= 0.0 && t <= T))
        throw std::invalid_argument("Skeleton::impute: grid time outside [0, T]");
      if (k > 0 && !(t > grid[k - 1]))
        throw std::invalid_argument("Skeleton::impute: grid must be strictly increasing");
      while (seg + 1 < m.times.size() && m.times[seg + 1] <= t) ++seg;
      if (m.times[seg] == t) {
        out.push_back(m.values[seg]);
        ++k;
        continue;
      }
      // collect every grid time inside this segment and bridge them jointly
      seg_times.clear();
      std::size_t k2 = k;
      while (k2 < grid.size() && grid[k2] < m.times[seg + 1]) {
        seg_times.push_back(grid[k2]);
        ++k2;
      }
      const BridgeSpec spec{m.times[seg], m.values[seg], m.times[seg + 1],
                            m.values[seg + 1]};
      const auto vals = sample_bridge(spec, seg_times, rng);
      out.insert(out.end(), vals.begin(), vals.end());
      k = k2;
    }
    return out;
  }

  double impute_one(double t, RngStream& rng) const {
    const double g[1] = {t};
    return impute(std::span<const double>(g, 1), rng).front();
  }

  double x0() const { return x_obs.front(); }
  double xT() const { return x_obs.back(); }
};

}  // namespace sdemc

#endif
