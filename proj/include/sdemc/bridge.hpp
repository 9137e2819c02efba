#ifndef SDEMC_BRIDGE_HPP
#define SDEMC_BRIDGE_HPP

#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sdemc/errors.hpp"
#include "sdemc/models.hpp"
#include "sdemc/random.hpp"

namespace sdemc {

/// Endpoints pinning a Brownian bridge.
struct BridgeSpec {
  double t_left = 0.0;
  double x_left = 0.0;
  double t_right = 1.0;
  double x_right = 0.0;

  void validate() const {
    if (!(t_right > t_left))
      throw std::invalid_argument("BridgeSpec: requires t_right > t_left");
    if (!std::isfinite(x_left) || !std::isfinite(x_right))
      throw std::invalid_argument("BridgeSpec: endpoint values must be finite");
  }
};

struct BridgeMoments {
  double mean = 0.0;
  double variance = 0.0;
};

/// Conditional mean and variance of the bridge at an interior time t.
inline BridgeMoments bridge_moments(const BridgeSpec& spec, double t) {
  spec.validate();
  if (!(t > spec.t_left && t < spec.t_right))
    throw std::invalid_argument("bridge_moments: t must lie strictly inside the interval");
  const double ti = t - spec.t_left;
  const double tj = spec.t_right - spec.t_left;
  return {((tj - ti) * spec.x_left + ti * spec.x_right) / tj,
          (tj - ti) * ti / tj};
}

namespace detail {

inline void check_interior_times(const BridgeSpec& spec,
                                 std::span<const double> times) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > spec.t_left && times[i] < spec.t_right))
      throw std::invalid_argument("bridge: time outside the open interval");
    if (i > 0 && !(times[i] > times[i - 1]))
      throw std::invalid_argument("bridge: times must be strictly increasing");
  }
}

}  // namespace detail

/// Joint draw of the bridge at the given sorted interior times. Walks left to
/// right, conditioning each value on the previously drawn point and the right
/// endpoint; the Markov property makes this the exact joint distribution.
inline std::vector<double> sample_bridge(const BridgeSpec& spec,
                                         std::span<const double> times,
                                         RngStream& rng) {
  spec.validate();
  detail::check_interior_times(spec, times);
  std::vector<double> out;
  out.reserve(times.size());
  double t_prev = spec.t_left;
  double x_prev = spec.x_left;
  for (double t : times) {
    const auto mom =
        bridge_moments({t_prev, x_prev, spec.t_right, spec.x_right}, t);
    const double x = mom.mean + std::sqrt(mom.variance) * rng.std_normal();
    out.push_back(x);
    t_prev = t;
    x_prev = x;
  }
  return out;
}

/// Log density of the given interior values under the bridge, via the same
/// sequential factorization as sample_bridge. Empty times give 0.
inline double log_bridge_density(const BridgeSpec& spec,
                                 std::span<const double> times,
                                 std::span<const double> values) {
  spec.validate();
  if (times.size() != values.size())
    throw std::invalid_argument("log_bridge_density: times/values size mismatch");
  detail::check_interior_times(spec, times);
  double lp = 0.0;
  double t_prev = spec.t_left;
  double x_prev = spec.x_left;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto mom =
        bridge_moments({t_prev, x_prev, spec.t_right, spec.x_right}, times[i]);
    const double d = values[i] - mom.mean;
    lp += -0.5 * d * d / mom.variance -
          0.5 * std::log(2.0 * std::numbers::pi * mom.variance);
    t_prev = times[i];
    x_prev = values[i];
  }
  return lp;
}

struct HEndpointStats {
  std::uint64_t proposals = 0;
  std::uint64_t accepts = 0;

  double acceptance_rate() const {
    return proposals == 0 ? 0.0
                          : static_cast<double>(accepts) /
                                static_cast<double>(proposals);
  }
};

/// Exact draw of the biased endpoint X_T with density proportional to
/// exp(A(u) - (u - x0)^2 / 2T). Rejection from Normal(x0, T) with envelope
/// exp(sup A); needs A bounded above.
inline double sample_h_endpoint(const Ea1Model& model, double x0, double T,
                                RngStream& rng,
                                HEndpointStats* stats = nullptr,
                                std::uint64_t max_attempts = 100'000'000) {
  if (!(T > 0.0)) throw std::invalid_argument("sample_h_endpoint: T must be > 0");
  if (!std::isfinite(model.sup_A))
    throw unsupported_model_error(
        "sample_h_endpoint: model '" + model.name +
        "' has unbounded A; supply a custom endpoint sampler");
  const double sd = std::sqrt(T);
  for (std::uint64_t attempt = 0; attempt < max_attempts; ++attempt) {
    const double u = x0 + sd * rng.std_normal();
    const double log_acc = model.A(u) - model.sup_A;
    const bool accept = std::log(rng.uniform()) < log_acc;
    if (stats) {
      ++stats->proposals;
      if (accept) ++stats->accepts;
    }
    if (accept) return u;
  }
  throw budget_error("sample_h_endpoint: exceeded " +
                     std::to_string(max_attempts) + " proposals");
}

}  // namespace sdemc

#endif
