#ifndef SDEMC_RUNNER_HPP
#define SDEMC_RUNNER_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <vector>

#include <json.hpp>

#include "sdemc/gibbs.hpp"
#include "sdemc/tempering.hpp"
#include "sdemc/trace.hpp"

namespace sdemc {

inline double quantile(std::vector<double> v, double p) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const double pos = p * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return v[lo] * (1.0 - frac) + v[hi] * frac;
}

inline double mean_of(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v;
  return x.empty() ? 0.0 : s / static_cast<double>(x.size());
}

inline double variance_of(const std::vector<double>& x) {
  if (x.size() < 2) return 0.0;
  const double m = mean_of(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

inline nlohmann::ordered_json series_summary(const std::vector<double>& x) {
  nlohmann::ordered_json j;
  j["n"] = x.size();
  j["mean"] = mean_of(x);
  j["sd"] = std::sqrt(variance_of(x));
  j["q05"] = quantile(x, 0.05);
  j["q50"] = quantile(x, 0.50);
  j["q95"] = quantile(x, 0.95);
  return j;
}

/// Accumulates wall-clock seconds around the sampling loop only.
class StopWatch {
 public:
  void start() {
    t0_ = std::chrono::steady_clock::now();
    running_ = true;
  }
  void stop() {
    if (!running_) return;
    total_ += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_)
                  .count();
    running_ = false;
  }
  double seconds() const {
    double s = total_;
    if (running_)
      s += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_)
               .count();
    return s;
  }

 private:
  std::chrono::steady_clock::time_point t0_{};
  double total_ = 0.0;
  bool running_ = false;
};

/// Knobs for one Gibbs chain run; band_times may be empty.
struct GibbsRunSpec {
  double T = 1.0;
  std::uint64_t iters = 10000;
  std::uint64_t burnin = 1000;
  std::uint64_t thin = 1;
  SamplerConfig sampler;
  std::vector<double> monitor_times;
  std::vector<double> band_times;
  std::uint64_t snapshot_every = 0;  // 0: no snapshots
  std::ostream* snapshot_sink = nullptr;
};

struct GibbsRunResult {
  Trace trace;
  std::vector<double> x_mid;              // every iteration, monitor_times[0]
  std::vector<double> theta;              // every iteration
  std::vector<std::vector<double>> band;  // [band_time][post-burnin thinned]
  ChainState state;
  double sampling_seconds = 0.0;
};

namespace detail {

inline std::vector<double> tail(const std::vector<double>& x,
                                std::uint64_t burnin, std::uint64_t thin = 1) {
  std::vector<double> out;
  for (std::size_t i = burnin; i < x.size(); i += thin) out.push_back(x[i]);
  return out;
}

}  // namespace detail

/// Runs a Gibbs chain from the given state, recording the trace and the
/// monitored/banded path values. Monitored times not on the skeleton are
/// imputed freshly from the bridge each sweep.
inline GibbsRunResult run_gibbs_chain(ChainState state, Ea1Model model,
                                      const ModelFamily* family,
                                      const ObservationSet* obs,
                                      const GibbsRunSpec& spec) {
  GibbsRunResult res;
  res.trace.rows.reserve(spec.iters);
  res.band.assign(spec.band_times.size(), {});
  const std::vector<double> monitors =
      spec.monitor_times.empty() ? std::vector<double>{spec.T / 2.0}
                                 : spec.monitor_times;
  StopWatch clock;
  clock.start();
  for (std::uint64_t it = 0; it < spec.iters; ++it) {
    const SweepOutcome out = gibbs_sweep(state, model, family, obs, spec.sampler);
    const double x_mid = state.skeleton.impute_one(monitors[0], state.rng);
    const bool keep = it >= spec.burnin && (it - spec.burnin) % spec.thin == 0;
    if (keep && !spec.band_times.empty()) {
      const auto vals = state.skeleton.impute(spec.band_times, state.rng);
      for (std::size_t b = 0; b < vals.size(); ++b)
        res.band[b].push_back(vals[b]);
    }
    TraceRow row;
    row.iter = it;
    row.x_mid = x_mid;
    row.n_psi = static_cast<std::uint32_t>(out.n_psi);
    row.theta = state.theta;
    row.hmc_accept = out.hmc_accepted ? 1 : 0;
    row.flip_accept = out.flip_accepted ? 1 : 0;
    row.theta_accept = out.theta_accepted ? 1 : 0;
    row.wall_clock_s = clock.seconds();
    res.trace.rows.push_back(row);
    res.x_mid.push_back(x_mid);
    res.theta.push_back(state.theta);
    if (spec.snapshot_sink && spec.snapshot_every > 0 &&
        (it + 1) % spec.snapshot_every == 0) {
      clock.stop();  // snapshots are I/O, not sampling
      append_snapshot(*spec.snapshot_sink, {it, state.skeleton, state.theta});
      clock.start();
    }
  }
  clock.stop();
  res.sampling_seconds = clock.seconds();
  res.state = std::move(state);
  return res;
}

/// Same loop over a tempering ladder; the trace follows the c = 1 chain.
inline GibbsRunResult run_tempered_chain(Ladder ladder,
                                         const ObservationSet* obs,
                                         const GibbsRunSpec& spec) {
  GibbsRunResult res;
  res.band.assign(spec.band_times.size(), {});
  const std::vector<double> monitors =
      spec.monitor_times.empty() ? std::vector<double>{spec.T / 2.0}
                                 : spec.monitor_times;
  StopWatch clock;
  clock.start();
  for (std::uint64_t it = 0; it < spec.iters; ++it) {
    const SweepOutcome out = tempered_sweep(ladder, obs, spec.sampler);
    ChainState& top = ladder.states.back();
    const double x_mid = top.skeleton.impute_one(monitors[0], top.rng);
    const bool keep = it >= spec.burnin && (it - spec.burnin) % spec.thin == 0;
    if (keep && !spec.band_times.empty()) {
      const auto vals = top.skeleton.impute(spec.band_times, top.rng);
      for (std::size_t b = 0; b < vals.size(); ++b)
        res.band[b].push_back(vals[b]);
    }
    TraceRow row;
    row.iter = it;
    row.x_mid = x_mid;
    row.n_psi = static_cast<std::uint32_t>(out.n_psi);
    row.theta = top.theta;
    row.hmc_accept = out.hmc_accepted ? 1 : 0;
    row.flip_accept = out.flip_accepted ? 1 : 0;
    row.theta_accept = out.theta_accepted ? 1 : 0;
    row.wall_clock_s = clock.seconds();
    res.trace.rows.push_back(row);
    res.x_mid.push_back(x_mid);
    res.theta.push_back(top.theta);
  }
  clock.stop();
  res.sampling_seconds = clock.seconds();
  res.state = std::move(ladder.states.back());
  return res;
}

}  // namespace sdemc

#endif
