#ifndef SDEMC_EXPERIMENT_HPP
#define SDEMC_EXPERIMENT_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sdemc/baselines.hpp"
#include "sdemc/benchmark.hpp"
#include "sdemc/config.hpp"
#include "sdemc/data.hpp"
#include "sdemc/diagnostics.hpp"
#include "sdemc/ea1.hpp"
#include "sdemc/gibbs.hpp"
#include "sdemc/runner.hpp"
#include "sdemc/tempering.hpp"
#include "sdemc/trace.hpp"

namespace sdemc {

enum class Mode { prior, posterior, params, baseline, filter_bench, stocks };

inline const char* mode_name(Mode m) {
  switch (m) {
    case Mode::prior: return "prior";
    case Mode::posterior: return "posterior";
    case Mode::params: return "params";
    case Mode::baseline: return "baseline";
    case Mode::filter_bench: return "filter-bench";
    case Mode::stocks: return "stocks";
  }
  return "?";
}

namespace detail {

inline void write_bands_csv(const std::string& path,
                            const std::vector<double>& times,
                            const std::vector<std::vector<double>>& band) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_bands_csv: cannot open " + path);
  os << "time,q05,q50,q95\n";
  for (std::size_t b = 0; b < times.size(); ++b) {
    os << fmt_double(times[b]) << ',' << fmt_double(quantile(band[b], 0.05))
       << ',' << fmt_double(quantile(band[b], 0.50)) << ','
       << fmt_double(quantile(band[b], 0.95)) << '\n';
  }
}

inline ObservationSet resolve_observations(const ExperimentConfig& cfg,
                                           const Ea1Model& model,
                                           nlohmann::ordered_json* truth_out) {
  if (cfg.has_observations) {
    ObservationSet obs{cfg.obs_times, cfg.obs_values, cfg.sigma_y};
    obs.validate(cfg.T);
    return obs;
  }
  if (!cfg.synthetic)
    throw config_error("config: this mode needs an observation block");
  const std::uint64_t seed =
      cfg.synthetic_seed != 0 ? cfg.synthetic_seed : cfg.seed + 777;
  RngStream rng(seed, 900);
  SyntheticData data =
      generate_synthetic(model, cfg.T, cfg.synthetic_n_obs, cfg.sigma_y, rng);
  if (truth_out) {
    (*truth_out)["times"] = data.obs.times;
    (*truth_out)["truth"] = data.truth_at_obs;
    (*truth_out)["values"] = data.obs.values;
  }
  return data.obs;
}

inline void add_chain_summary(nlohmann::ordered_json& summary,
                              const ExperimentConfig& cfg,
                              const GibbsRunResult& run,
                              std::uint64_t burnin) {
  const auto kept = tail(run.x_mid, burnin, cfg.thin);
  const EssResult e = ess(kept);
  summary["iters"] = cfg.iters;
  summary["burnin"] = burnin;
  summary["acceptance"]["hmc"] = Counters::rate(
      run.state.counters.hmc_accepts, run.state.counters.hmc_attempts);
  if (cfg.flip_move)
    summary["acceptance"]["flip"] = Counters::rate(
        run.state.counters.flip_accepts, run.state.counters.flip_attempts);
  if (cfg.infer_theta) {
    summary["acceptance"]["theta"] = Counters::rate(
        run.state.counters.theta_accepts, run.state.counters.theta_attempts);
    const auto th = tail(run.theta, burnin, cfg.thin);
    summary["posterior"]["theta"] = series_summary(th);
    double above1 = 0.0;
    for (double t : th)
      if (t > 1.0) above1 += 1.0;
    summary["posterior"]["theta"]["mass_above_1"] =
        above1 / std::max<std::size_t>(1, th.size());
  }
  summary["ess_x_mid"] = e.ess;
  summary["zero_variance_x_mid"] = e.zero_variance;
  summary["posterior"]["x_mid"] = series_summary(kept);
  double n_psi_sum = 0.0;
  for (const auto& r : run.trace.rows) n_psi_sum += r.n_psi;
  summary["mean_n_psi"] =
      n_psi_sum / std::max<std::size_t>(1, run.trace.rows.size());
  summary["timing"]["sampling_s"] = run.sampling_seconds;
  summary["timing"]["ess_per_s"] = e.ess / std::max(1e-12, run.sampling_seconds);
}

}  // namespace detail

inline GibbsRunSpec spec_from_config(const ExperimentConfig& cfg) {
  GibbsRunSpec spec;
  spec.T = cfg.T;
  spec.iters = cfg.iters;
  spec.burnin = cfg.effective_burnin();
  spec.thin = cfg.thin;
  spec.sampler.hmc = cfg.hmc;
  spec.sampler.flip_move = cfg.flip_move;
  spec.sampler.infer_theta = cfg.infer_theta;
  spec.sampler.theta_proposal = cfg.theta_proposal;
  spec.monitor_times = cfg.effective_monitor_times();
  spec.snapshot_every = cfg.snapshot_every;
  return spec;
}

/// Runs the configured experiment and writes trace.csv, snapshots.jsonl,
/// summary.json (plus bands.csv / bench.csv / truth.json where meaningful)
/// under the configured output directory. On failure the partial outputs are
/// left in place next to a FAILED.json marker, and the error propagates.
inline nlohmann::ordered_json run_experiment(Mode mode, ExperimentConfig cfg) {
  namespace fs = std::filesystem;
  cfg.validate();
  fs::create_directories(cfg.output_dir);
  const auto path = [&](const char* name) {
    return (fs::path(cfg.output_dir) / name).string();
  };

  nlohmann::ordered_json summary;
  summary["mode"] = mode_name(mode);
  summary["model"] = cfg.model_name;
  summary["seed"] = cfg.seed;

  try {
    if (mode == Mode::params) {
      cfg.infer_theta = true;
      mode = Mode::posterior;
    }

    if (mode == Mode::prior) {
      Ea1Model model = cfg.make_model();
      const std::vector<double> monitors = cfg.effective_monitor_times();
      if (cfg.method == "ea1") {
        Trace trace;
        std::uint64_t attempts = 0;
        std::vector<double> x_mid;
        StopWatch clock;
        clock.start();
        RngStream rng(cfg.seed, 1);
        for (std::uint64_t it = 0; it < cfg.iters; ++it) {
          const Ea1Result draw = ea1_simulate(
              model, cfg.T, rng, std::span<const double>(monitors));
          attempts += draw.attempts;
          TraceRow row;
          row.iter = it;
          row.x_mid = draw.grid_values[0];
          row.n_psi = static_cast<std::uint32_t>(draw.skeleton.psi.size());
          row.theta = model.theta;
          row.hmc_accept = 1;
          row.wall_clock_s = clock.seconds();
          trace.rows.push_back(row);
          x_mid.push_back(row.x_mid);
        }
        clock.stop();
        write_trace_csv(trace, path("trace.csv"));
        const EssResult e = ess(x_mid);
        summary["method"] = "ea1";
        summary["iters"] = cfg.iters;
        summary["attempts"] = attempts;
        summary["acceptance"]["ea1"] =
            static_cast<double>(cfg.iters) / static_cast<double>(attempts);
        summary["ess_x_mid"] = e.ess;
        summary["posterior"]["x_mid"] = series_summary(x_mid);
        summary["timing"]["sampling_s"] = clock.seconds();
        summary["timing"]["ess_per_s"] = e.ess / std::max(1e-12, clock.seconds());
      } else {
        GibbsRunSpec spec = spec_from_config(cfg);
        std::ofstream snap(path("snapshots.jsonl"));
        spec.snapshot_sink = &snap;
        GibbsRunResult run;
        if (cfg.tempering_enabled) {
          if (!(cfg.model_name == "sine" && cfg.theta == 0.0) &&
              cfg.model_name != "tempered_sine")
            throw config_error(
                "config: tempering is defined for the sine family at theta = 0");
          Ladder ladder = Ladder::build(
              cfg.ladder, [](double c) { return tempered_sine_model(c); },
              cfg.T, {0.0, cfg.T}, cfg.seed);
          run = run_tempered_chain(std::move(ladder), nullptr, spec);
          summary["tempering"]["ladder"] = cfg.ladder;
        } else {
          ChainState state = make_initial_state(model, cfg.T, {0.0, cfg.T},
                                                RngStream(cfg.seed, 1));
          run = run_gibbs_chain(std::move(state), model, nullptr, nullptr, spec);
        }
        write_trace_csv(run.trace, path("trace.csv"));
        summary["method"] = "gibbs";
        detail::add_chain_summary(summary, cfg, run, spec.burnin);
      }
    } else if (mode == Mode::posterior) {
      Ea1Model model = cfg.make_model();
      nlohmann::ordered_json truth;
      ObservationSet obs = detail::resolve_observations(cfg, model, &truth);
      if (!truth.empty()) {
        std::ofstream os(path("truth.json"));
        os << truth.dump(2) << '\n';
      }
      GibbsRunSpec spec = spec_from_config(cfg);
      spec.band_times = obs.times;
      std::ofstream snap(path("snapshots.jsonl"));
      spec.snapshot_sink = &snap;

      ModelFamily family;
      const ModelFamily* family_ptr = nullptr;
      if (cfg.infer_theta) {
        family = cfg.make_family();
        family_ptr = &family;
      }
      ChainState state =
          make_initial_state(model, cfg.T, obs.times, RngStream(cfg.seed, 1));
      GibbsRunResult run =
          run_gibbs_chain(std::move(state), model, family_ptr, &obs, spec);
      write_trace_csv(run.trace, path("trace.csv"));
      detail::write_bands_csv(path("bands.csv"), spec.band_times, run.band);
      summary["n_obs"] = obs.size();
      detail::add_chain_summary(summary, cfg, run, spec.burnin);

      if (!truth.empty()) {
        const auto truth_vals = truth["truth"].get<std::vector<double>>();
        std::size_t covered = 0;
        for (std::size_t b = 0; b < spec.band_times.size(); ++b) {
          const double lo = quantile(run.band[b], 0.05);
          const double hi = quantile(run.band[b], 0.95);
          if (truth_vals[b] >= lo && truth_vals[b] <= hi) ++covered;
        }
        summary["band_coverage_truth"] =
            static_cast<double>(covered) /
            std::max<std::size_t>(1, spec.band_times.size());
      }
    } else if (mode == Mode::baseline) {
      Ea1Model model = cfg.make_model();
      summary["algo"] = cfg.baseline_algo;
      if (cfg.baseline_algo == "euler") {
        const std::vector<double> monitors = cfg.effective_monitor_times();
        const auto grid = euler_grid(cfg.T, cfg.euler_dt);
        const auto mid_idx = static_cast<std::size_t>(
            std::lower_bound(grid.begin(), grid.end(), monitors[0]) -
            grid.begin());
        Trace trace;
        std::vector<double> x_mid;
        StopWatch clock;
        clock.start();
        RngStream rng(cfg.seed, 1);
        for (std::uint64_t it = 0; it < cfg.iters; ++it) {
          const auto vals = euler_simulate(model, cfg.T, cfg.euler_dt, rng);
          TraceRow row;
          row.iter = it;
          row.x_mid = vals[std::min(mid_idx, vals.size() - 1)];
          row.theta = model.theta;
          row.hmc_accept = 1;
          row.wall_clock_s = clock.seconds();
          trace.rows.push_back(row);
          x_mid.push_back(row.x_mid);
        }
        clock.stop();
        write_trace_csv(trace, path("trace.csv"));
        summary["iters"] = cfg.iters;
        summary["euler_dt"] = cfg.euler_dt;
        summary["posterior"]["x_mid"] = series_summary(x_mid);
        summary["ess_x_mid"] = ess(x_mid).ess;
        summary["timing"]["sampling_s"] = clock.seconds();
      } else {
        nlohmann::ordered_json truth;
        ObservationSet obs = detail::resolve_observations(cfg, model, &truth);
        if (!truth.empty()) {
          std::ofstream os(path("truth.json"));
          os << truth.dump(2) << '\n';
        }
        if (cfg.baseline_algo == "pf" || cfg.baseline_algo == "rwpf") {
          StopWatch clock;
          clock.start();
          RngStream rng(cfg.seed, 1);
          const PfConfig pf_cfg{cfg.baseline_algo == "pf"
                                    ? PfConfig::Algo::euler
                                    : PfConfig::Algo::random_weight,
                                cfg.n_particles, cfg.euler_dt};
          const ParticleFilterResult pf = run_pf(model, obs, cfg.T, pf_cfg, rng);
          clock.stop();
          std::vector<double> last(pf.paths.size());
          for (std::size_t k = 0; k < pf.paths.size(); ++k)
            last[k] = pf.paths[k].back();
          std::ofstream os(path("particles.csv"));
          os << "particle,x_last\n";
          for (std::size_t k = 0; k < last.size(); ++k)
            os << k << ',' << detail::fmt_double(last[k]) << '\n';
          summary["n_particles"] = cfg.n_particles;
          summary["log_marginal_lik"] = pf.log_lik;
          summary["filtered_last"] = series_summary(last);
          summary["timing"]["sampling_s"] = clock.seconds();
        } else {
          // pmcmc: path proposals only; pimh: theta proposed alongside
          PimhConfig pimh_cfg;
          pimh_cfg.pf =
              PfConfig{PfConfig::Algo::euler, cfg.n_particles, cfg.euler_dt};
          pimh_cfg.infer_theta = cfg.baseline_algo == "pimh";
          pimh_cfg.proposal = cfg.theta_proposal;
          ModelFamily family = cfg.make_family();
          const std::vector<double> monitors = cfg.effective_monitor_times();
          RngStream rng(cfg.seed, 1);
          StopWatch clock;
          clock.start();
          PimhState st =
              pimh_init(family(cfg.theta), obs, cfg.T, pimh_cfg.pf, rng);
          Trace trace;
          std::vector<double> x_mid, theta_series;
          for (std::uint64_t it = 0; it < cfg.iters; ++it) {
            const bool acc = pimh_step(st, family, obs, cfg.T, pimh_cfg, rng);
            const auto idx = static_cast<std::size_t>(
                std::lower_bound(st.times.begin(), st.times.end(), monitors[0]) -
                st.times.begin());
            TraceRow row;
            row.iter = it;
            row.x_mid = st.path[std::min(idx, st.path.size() - 1)];
            row.theta = st.theta;
            row.hmc_accept = acc ? 1 : 0;
            row.theta_accept = (pimh_cfg.infer_theta && acc) ? 1 : 0;
            row.wall_clock_s = clock.seconds();
            trace.rows.push_back(row);
            x_mid.push_back(row.x_mid);
            theta_series.push_back(st.theta);
          }
          clock.stop();
          write_trace_csv(trace, path("trace.csv"));
          const auto kept = detail::tail(x_mid, cfg.effective_burnin(), cfg.thin);
          summary["iters"] = cfg.iters;
          summary["n_particles"] = cfg.n_particles;
          summary["euler_dt"] = cfg.euler_dt;
          summary["posterior"]["x_mid"] = series_summary(kept);
          summary["ess_x_mid"] = ess(kept).ess;
          if (pimh_cfg.infer_theta)
            summary["posterior"]["theta"] = series_summary(
                detail::tail(theta_series, cfg.effective_burnin(), cfg.thin));
          summary["timing"]["sampling_s"] = clock.seconds();
        }
      }
    } else if (mode == Mode::filter_bench) {
      Ea1Model model = cfg.make_model();
      nlohmann::ordered_json truth;
      ObservationSet obs = detail::resolve_observations(cfg, model, &truth);
      SamplerConfig sampler;
      sampler.hmc = cfg.hmc;
      sampler.flip_move = cfg.flip_move;
      ModelFamily family = cfg.make_family();
      const FilterBenchResult bench = run_filtering_benchmark(
          model, family, obs, cfg.T, cfg.bench_budgets_s, cfg.bench_seeds,
          cfg.bench_reference_iters, cfg.n_particles, cfg.euler_dt, sampler,
          cfg.seed);
      write_bench_csv(bench.rows, path("bench.csv"));
      summary["budgets_s"] = cfg.bench_budgets_s;
      summary["seeds"] = cfg.bench_seeds;
      summary["reference"]["mean"] = bench.reference.mean;
      summary["reference"]["var"] = bench.reference.var;
      summary["reference"]["exp_mean"] = bench.reference.exp_mean;
      summary["median_err_var"]["aux_gibbs"] = bench.gibbs_median_err_var;
      summary["median_err_var"]["random_weight_pf"] = bench.rwpf_median_err_var;
      int wins = 0;
      for (std::size_t b = 0; b < bench.gibbs_median_err_var.size(); ++b)
        if (bench.gibbs_median_err_var[b] <= bench.rwpf_median_err_var[b])
          ++wins;
      summary["gibbs_wins"] = wins;
    } else if (mode == Mode::stocks) {
      if (cfg.stocks_csv.empty())
        throw config_error("config: stocks.csv is required for stocks mode");
      const StockSeries series =
          ingest_stock_csv(cfg.stocks_csv, cfg.stocks_detrend);
      summary["n_rows"] = series.prices.size();
      summary["n_train"] = series.n_train;
      summary["n_test"] = series.n_test;

      ExperimentConfig run_cfg = cfg;
      run_cfg.T = 10.0;
      ObservationSet obs;
      obs.sigma_y = cfg.sigma_y;
      obs.times.assign(series.times.begin(),
                       series.times.begin() + series.n_train);
      obs.values.assign(series.values.begin(),
                        series.values.begin() + series.n_train);
      obs.validate(run_cfg.T);

      Ea1Model model = run_cfg.make_model();
      GibbsRunSpec spec = spec_from_config(run_cfg);
      spec.band_times = series.times;
      std::ofstream snap(path("snapshots.jsonl"));
      spec.snapshot_sink = &snap;
      ModelFamily family;
      const ModelFamily* family_ptr = nullptr;
      if (cfg.infer_theta) {
        family = run_cfg.make_family();
        family_ptr = &family;
      }
      ChainState state = make_initial_state(model, run_cfg.T, obs.times,
                                            RngStream(cfg.seed, 1));
      GibbsRunResult run =
          run_gibbs_chain(std::move(state), model, family_ptr, &obs, spec);
      write_trace_csv(run.trace, path("trace.csv"));
      detail::write_bands_csv(path("bands.csv"), spec.band_times, run.band);
      detail::add_chain_summary(summary, run_cfg, run, spec.burnin);

      std::size_t covered = 0;
      for (std::size_t b = 0; b < series.n_train; ++b) {
        const double lo = quantile(run.band[b], 0.05);
        const double hi = quantile(run.band[b], 0.95);
        if (series.values[b] >= lo && series.values[b] <= hi) ++covered;
      }
      summary["band_coverage_train"] =
          static_cast<double>(covered) / static_cast<double>(series.n_train);
    }
  } catch (...) {
    std::ofstream marker(path("FAILED.json"));
    marker << summary.dump(2) << '\n';
    throw;
  }

  std::ofstream os(path("summary.json"));
  os << summary.dump(2) << '\n';
  return summary;
}

}  // namespace sdemc

#endif
