#ifndef SDEMC_BENCHMARK_HPP
#define SDEMC_BENCHMARK_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "sdemc/baselines.hpp"
#include "sdemc/runner.hpp"
#include "sdemc/trace.hpp"

namespace sdemc {

/// Posterior statistics of the path at the last observation time, plus the
/// wall clock the estimator actually consumed.
struct FilterEstimates {
  double mean = 0.0;
  double var = 0.0;
  double exp_mean = 0.0;  // E[exp(X)]
  double wall_clock_s = 0.0;
};

inline FilterEstimates estimates_from_samples(const std::vector<double>& x,
                                              double seconds) {
  FilterEstimates e;
  e.mean = mean_of(x);
  e.var = variance_of(x);
  double s = 0.0;
  for (double v : x) s += std::exp(v);
  e.exp_mean = x.empty() ? 0.0 : s / static_cast<double>(x.size());
  e.wall_clock_s = seconds;
  return e;
}

/// Gibbs sampler run until the wall-clock budget is spent; estimates use the
/// post-burn-in anchor values at the last observation time.
inline FilterEstimates gibbs_filter_estimates(const Ea1Model& model,
                                              const ObservationSet& obs,
                                              double T, double budget_s,
                                              const SamplerConfig& sampler,
                                              std::uint64_t seed) {
  ChainState state = make_initial_state(model, T, obs.times, RngStream(seed, 1));
  Ea1Model m = model;
  const double t_last = obs.times.back();
  std::size_t anchor = 0;
  for (std::size_t k = 0; k < state.skeleton.obs_times.size(); ++k)
    if (state.skeleton.obs_times[k] == t_last) anchor = k;

  std::vector<double> series;
  StopWatch clock;
  clock.start();
  std::uint64_t it = 0;
  while (clock.seconds() < budget_s || it < 50) {
    gibbs_sweep(state, m, nullptr, &obs, sampler);
    series.push_back(state.skeleton.x_obs[anchor]);
    ++it;
  }
  clock.stop();
  const auto kept = detail::tail(series, series.size() / 10);
  return estimates_from_samples(kept, clock.seconds());
}

/// Random-weight particle filter sized to the budget via a pilot run;
/// estimates use the final (post-resampling, equally weighted) particles.
inline FilterEstimates rwpf_filter_estimates(const Ea1Model& model,
                                             const ObservationSet& obs,
                                             double T, double budget_s,
                                             std::uint64_t seed) {
  StopWatch pilot_clock;
  pilot_clock.start();
  RngStream pilot_rng(seed, 2);
  const int n_pilot = 50;
  (void)random_weight_pf(model, obs, T, n_pilot, pilot_rng);
  pilot_clock.stop();
  const double rate = static_cast<double>(n_pilot) /
                      std::max(1e-6, pilot_clock.seconds());
  const int n = static_cast<int>(
      std::clamp(rate * budget_s, 25.0, 2'000'000.0));

  StopWatch clock;
  clock.start();
  RngStream rng(seed, 3);
  const ParticleFilterResult pf = random_weight_pf(model, obs, T, n, rng);
  clock.stop();
  std::vector<double> last(pf.paths.size());
  for (std::size_t k = 0; k < pf.paths.size(); ++k) {
    // value at the last observation time (paths may extend to T beyond it)
    const std::size_t idx =
        obs.times.back() < T ? pf.paths[k].size() - 2 : pf.paths[k].size() - 1;
    last[k] = pf.paths[k][idx];
  }
  return estimates_from_samples(last, clock.seconds());
}

/// Long Euler-discretized pMCMC run used as the reference answer.
inline FilterEstimates eulpmcmc_reference(const Ea1Model& model,
                                          const ModelFamily& family,
                                          const ObservationSet& obs, double T,
                                          std::uint64_t iters, int n_particles,
                                          double dt, std::uint64_t seed) {
  RngStream rng(seed, 4);
  PimhConfig cfg;
  cfg.pf = PfConfig{PfConfig::Algo::euler, n_particles, dt};
  cfg.infer_theta = false;
  PimhState st = pimh_init(model, obs, T, cfg.pf, rng);
  const double t_last = obs.times.back();
  StopWatch clock;
  clock.start();
  std::vector<double> series;
  series.reserve(iters);
  for (std::uint64_t it = 0; it < iters; ++it) {
    pimh_step(st, family, obs, T, cfg, rng);
    const auto idx = static_cast<std::size_t>(
        std::lower_bound(st.times.begin(), st.times.end(), t_last) -
        st.times.begin());
    series.push_back(st.path[std::min(idx, st.path.size() - 1)]);
  }
  clock.stop();
  const auto kept = detail::tail(series, series.size() / 10);
  return estimates_from_samples(kept, clock.seconds());
}

struct BenchRow {
  std::string method;
  std::string setting;
  double budget_s = 0.0;
  double wall_clock_s = 0.0;
  std::string metric;
  double value = 0.0;
};

inline void append_error_rows(std::vector<BenchRow>& rows,
                              const std::string& method,
                              const std::string& setting, double budget,
                              const FilterEstimates& est,
                              const FilterEstimates& ref) {
  rows.push_back({method, setting, budget, est.wall_clock_s, "err_mean",
                  std::abs(est.mean - ref.mean)});
  rows.push_back({method, setting, budget, est.wall_clock_s, "err_var",
                  std::abs(est.var - ref.var)});
  rows.push_back({method, setting, budget, est.wall_clock_s, "err_exp",
                  std::abs(est.exp_mean - ref.exp_mean)});
}

inline void write_bench_csv(const std::vector<BenchRow>& rows,
                            const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_bench_csv: cannot open " + path);
  os << "method,setting,budget,wall_clock_s,metric,value\n";
  for (const auto& r : rows) {
    os << r.method << ',' << r.setting << ',' << detail::fmt_double(r.budget_s)
       << ',' << detail::fmt_double(r.wall_clock_s) << ',' << r.metric << ','
       << detail::fmt_double(r.value) << '\n';
  }
}

struct FilterBenchResult {
  std::vector<BenchRow> rows;
  FilterEstimates reference;
  // per budget index: median over seeds of the err_var rows
  std::vector<double> gibbs_median_err_var;
  std::vector<double> rwpf_median_err_var;
};

/// The filtering comparison: one synthetic task, a long discretized pMCMC
/// reference, then both estimators at each wall-clock budget over several
/// seeds. Errors are |estimate - reference| for the posterior mean, variance
/// and E[exp(X)] at the last observation.
inline FilterBenchResult run_filtering_benchmark(
    const Ea1Model& model, const ModelFamily& family, const ObservationSet& obs,
    double T, const std::vector<double>& budgets_s, int n_seeds,
    std::uint64_t reference_iters, int reference_particles, double reference_dt,
    const SamplerConfig& sampler, std::uint64_t seed) {
  FilterBenchResult out;
  out.reference = eulpmcmc_reference(model, family, obs, T, reference_iters,
                                     reference_particles, reference_dt, seed);
  const std::string setting = model.name + "_T" + std::to_string(static_cast<int>(T)) +
                              "_n" + std::to_string(obs.size());
  for (std::size_t b = 0; b < budgets_s.size(); ++b) {
    std::vector<double> g_err, p_err;
    for (int s = 0; s < n_seeds; ++s) {
      const std::uint64_t run_seed = seed + 1000 * (s + 1);
      const FilterEstimates g = gibbs_filter_estimates(
          model, obs, T, budgets_s[b], sampler, run_seed);
      const FilterEstimates p =
          rwpf_filter_estimates(model, obs, T, budgets_s[b], run_seed + 17);
      append_error_rows(out.rows, "aux_gibbs", setting, budgets_s[b], g,
                        out.reference);
      append_error_rows(out.rows, "random_weight_pf", setting, budgets_s[b], p,
                        out.reference);
      g_err.push_back(std::abs(g.var - out.reference.var));
      p_err.push_back(std::abs(p.var - out.reference.var));
    }
    out.gibbs_median_err_var.push_back(quantile(g_err, 0.5));
    out.rwpf_median_err_var.push_back(quantile(p_err, 0.5));
  }
  return out;
}

}  // namespace sdemc

#endif
