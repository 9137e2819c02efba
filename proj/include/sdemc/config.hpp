#ifndef SDEMC_CONFIG_HPP
#define SDEMC_CONFIG_HPP

#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "sdemc/baselines.hpp"
#include "sdemc/errors.hpp"
#include "sdemc/gibbs.hpp"
#include "sdemc/models.hpp"

namespace sdemc {

/// Everything an experiment run needs, loaded from a JSON file. Unknown keys
/// are rejected so typos cannot silently fall back to defaults.
struct ExperimentConfig {
  // model
  std::string model_name = "hyperbolic";
  double theta = 1.0;
  double c = 1.0;  // tempered_sine temperature / constant_phi hazard
  double constant_phi_bound = 1.0;

  double T = 0.0;

  // initial distribution; empty kind means "pick by mode": point mass at 0
  // for prior simulation, Normal(0,1) otherwise
  std::string init_kind;
  double init_value = 0.0;
  double init_mean = 0.0;
  double init_var = 1.0;

  // observations: explicit, synthetic, or none (prior simulation)
  bool has_observations = false;
  std::vector<double> obs_times;
  std::vector<double> obs_values;
  bool synthetic = false;
  int synthetic_n_obs = 20;
  std::uint64_t synthetic_seed = 0;  // 0: derive from the main seed
  double sigma_y = 0.2;

  // sampler
  std::string method = "gibbs";  // gibbs | ea1
  std::uint64_t iters = 10000;
  std::int64_t burnin = -1;  // -1: 10% of iters
  std::uint64_t thin = 1;
  bool flip_move = false;

  HmcConfig hmc;

  // parameter inference
  bool infer_theta = false;
  ThetaProposal theta_proposal;

  // tempering
  bool tempering_enabled = false;
  std::vector<double> ladder = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};

  // baselines
  std::string baseline_algo = "euler";  // euler | pf | rwpf | pmcmc | pimh
  int n_particles = 50;
  double euler_dt = 0.01;

  // monitoring and output
  std::vector<double> monitor_times;  // empty: {T/2}
  std::string output_dir = "out";
  std::uint64_t snapshot_every = 1000;

  // stock pipeline
  std::string stocks_csv;
  std::string stocks_detrend = "multiplicative";  // or additive

  // filtering benchmark
  std::vector<double> bench_budgets_s = {0.05, 0.1, 0.2, 0.4, 0.8};
  int bench_seeds = 10;
  std::uint64_t bench_reference_iters = 50000;

  std::uint64_t seed = 12345;

  std::uint64_t effective_burnin() const {
    return burnin >= 0 ? static_cast<std::uint64_t>(burnin) : iters / 10;
  }

  std::vector<double> effective_monitor_times() const {
    return monitor_times.empty() ? std::vector<double>{T / 2.0} : monitor_times;
  }

  Ea1Model make_model() const {
    Ea1Model m;
    if (model_name == "hyperbolic")
      m = hyperbolic_model(theta);
    else if (model_name == "sine")
      m = sine_model(theta);
    else if (model_name == "tempered_sine")
      m = tempered_sine_model(c);
    else if (model_name == "constant_phi")
      m = constant_phi_model(c, constant_phi_bound);
    else
      throw config_error("config: unknown model.name '" + model_name + "'");
    m.init = make_init();
    return m;
  }

  ModelFamily make_family() const {
    ModelFamily family;
    if (model_name == "hyperbolic")
      family = hyperbolic_family();
    else if (model_name == "sine")
      family = sine_family();
    else if (model_name == "constant_phi")
      family = constant_phi_family(c);
    else
      throw config_error("config: model.name '" + model_name +
                         "' has no parameter family");
    const InitialDistribution init = make_init();
    const auto base = family.make;
    family.make = [base, init](double th) {
      Ea1Model m = base(th);
      m.init = init;
      return m;
    };
    return family;
  }

  InitialDistribution make_init() const {
    std::string kind = init_kind;
    if (kind.empty()) kind = prior_mode() ? "point" : "gaussian";
    if (kind == "point") return InitialDistribution::point(init_value);
    if (kind == "gaussian")
      return InitialDistribution::normal(init_mean, init_var);
    throw config_error("config: unknown init.kind '" + kind + "'");
  }

  bool prior_mode() const {
    return !has_observations && !synthetic;
  }

  void validate() const {
    if (!(T > 0.0)) throw config_error("config: T must be > 0");
    if (method != "gibbs" && method != "ea1")
      throw config_error("config: mcmc.method must be 'gibbs' or 'ea1'");
    if (iters == 0) throw config_error("config: mcmc.iters must be > 0");
    if (effective_burnin() >= iters)
      throw config_error("config: mcmc.burnin must be smaller than mcmc.iters");
    if (thin == 0) throw config_error("config: mcmc.thin must be > 0");
    if (!(sigma_y > 0.0))
      throw config_error("config: observations.sigma_y must be > 0");
    if (has_observations && obs_times.size() != obs_values.size())
      throw config_error("config: observations.times/values length mismatch");
    if (synthetic && synthetic_n_obs < 1)
      throw config_error("config: observations.synthetic.n_obs must be >= 1");
    if (n_particles <= 0) throw config_error("config: pf.n_particles must be > 0");
    if (!(euler_dt > 0.0)) throw config_error("config: euler.dt must be > 0");
    if (tempering_enabled) {
      if (ladder.size() < 2 || !strictly_increasing(ladder) ||
          ladder.back() != 1.0 || ladder.front() < 0.0)
        throw config_error(
            "config: tempering.ladder must increase within [0,1] and end at 1");
    }
    if (infer_theta && theta_proposal.kind == ThetaProposal::Kind::random_walk &&
        !(theta_proposal.rw_scale > 0.0))
      throw config_error("config: params.rw_scale must be > 0");
    if (baseline_algo != "euler" && baseline_algo != "pf" &&
        baseline_algo != "rwpf" && baseline_algo != "pmcmc" &&
        baseline_algo != "pimh")
      throw config_error("config: unknown baseline.algo '" + baseline_algo + "'");
    if (stocks_detrend != "multiplicative" && stocks_detrend != "additive")
      throw config_error("config: stocks.detrend must be 'multiplicative' or 'additive'");
    hmc.validate();
  }
};

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& j,
                                const std::set<std::string>& allowed,
                                const std::string& scope) {
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key))
      throw config_error("config: unknown key '" +
                         (scope.empty() ? key : scope + "." + key) + "'");
  }
}

template <class T>
void read_if(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace detail

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  using detail::read_if;
  ExperimentConfig cfg;
  detail::reject_unknown_keys(
      j,
      {"model", "T", "init", "observations", "mcmc", "hmc", "params",
       "tempering", "pf", "euler", "baseline", "monitor", "output", "stocks",
       "bench", "seed"},
      "");
  if (j.contains("model")) {
    const auto& m = j.at("model");
    detail::reject_unknown_keys(m, {"name", "theta", "c", "phi_bound"}, "model");
    read_if(m, "name", cfg.model_name);
    read_if(m, "theta", cfg.theta);
    read_if(m, "c", cfg.c);
    read_if(m, "phi_bound", cfg.constant_phi_bound);
  }
  read_if(j, "T", cfg.T);
  if (j.contains("init")) {
    const auto& b = j.at("init");
    detail::reject_unknown_keys(b, {"kind", "value", "mean", "var"}, "init");
    read_if(b, "kind", cfg.init_kind);
    read_if(b, "value", cfg.init_value);
    read_if(b, "mean", cfg.init_mean);
    read_if(b, "var", cfg.init_var);
  }
  if (j.contains("observations")) {
    const auto& o = j.at("observations");
    detail::reject_unknown_keys(o, {"times", "values", "sigma_y", "synthetic"},
                                "observations");
    read_if(o, "sigma_y", cfg.sigma_y);
    if (o.contains("synthetic")) {
      const auto& s = o.at("synthetic");
      detail::reject_unknown_keys(s, {"n_obs", "seed"},
                                  "observations.synthetic");
      cfg.synthetic = true;
      read_if(s, "n_obs", cfg.synthetic_n_obs);
      read_if(s, "seed", cfg.synthetic_seed);
    }
    if (o.contains("times")) {
      cfg.obs_times = o.at("times").get<std::vector<double>>();
      cfg.obs_values = o.at("values").get<std::vector<double>>();
      cfg.has_observations = true;
      if (cfg.synthetic)
        throw config_error(
            "config: observations cannot be both explicit and synthetic");
    }
  }
  if (j.contains("mcmc")) {
    const auto& m = j.at("mcmc");
    detail::reject_unknown_keys(
        m, {"method", "iters", "burnin", "thin", "flip_move"}, "mcmc");
    read_if(m, "method", cfg.method);
    read_if(m, "iters", cfg.iters);
    read_if(m, "burnin", cfg.burnin);
    read_if(m, "thin", cfg.thin);
    read_if(m, "flip_move", cfg.flip_move);
  }
  if (j.contains("hmc")) {
    const auto& h = j.at("hmc");
    detail::reject_unknown_keys(h, {"step_size", "n_leapfrog", "mass"}, "hmc");
    read_if(h, "step_size", cfg.hmc.step_size);
    read_if(h, "n_leapfrog", cfg.hmc.n_leapfrog);
    read_if(h, "mass", cfg.hmc.mass);
  }
  if (j.contains("params")) {
    const auto& p = j.at("params");
    detail::reject_unknown_keys(p, {"infer", "proposal", "rw_scale"}, "params");
    read_if(p, "infer", cfg.infer_theta);
    std::string prop = "prior";
    read_if(p, "proposal", prop);
    if (prop == "prior")
      cfg.theta_proposal.kind = ThetaProposal::Kind::prior;
    else if (prop == "random_walk")
      cfg.theta_proposal.kind = ThetaProposal::Kind::random_walk;
    else
      throw config_error("config: params.proposal must be 'prior' or 'random_walk'");
    read_if(p, "rw_scale", cfg.theta_proposal.rw_scale);
  }
  if (j.contains("tempering")) {
    const auto& t = j.at("tempering");
    detail::reject_unknown_keys(t, {"enabled", "ladder"}, "tempering");
    read_if(t, "enabled", cfg.tempering_enabled);
    read_if(t, "ladder", cfg.ladder);
  }
  if (j.contains("pf")) {
    const auto& p = j.at("pf");
    detail::reject_unknown_keys(p, {"n_particles"}, "pf");
    read_if(p, "n_particles", cfg.n_particles);
  }
  if (j.contains("euler")) {
    const auto& e = j.at("euler");
    detail::reject_unknown_keys(e, {"dt"}, "euler");
    read_if(e, "dt", cfg.euler_dt);
  }
  if (j.contains("baseline")) {
    const auto& b = j.at("baseline");
    detail::reject_unknown_keys(b, {"algo"}, "baseline");
    read_if(b, "algo", cfg.baseline_algo);
  }
  if (j.contains("monitor")) {
    const auto& m = j.at("monitor");
    detail::reject_unknown_keys(m, {"times"}, "monitor");
    read_if(m, "times", cfg.monitor_times);
  }
  if (j.contains("output")) {
    const auto& o = j.at("output");
    detail::reject_unknown_keys(o, {"dir", "snapshot_every"}, "output");
    read_if(o, "dir", cfg.output_dir);
    read_if(o, "snapshot_every", cfg.snapshot_every);
  }
  if (j.contains("stocks")) {
    const auto& s = j.at("stocks");
    detail::reject_unknown_keys(s, {"csv", "detrend"}, "stocks");
    read_if(s, "csv", cfg.stocks_csv);
    read_if(s, "detrend", cfg.stocks_detrend);
  }
  if (j.contains("bench")) {
    const auto& b = j.at("bench");
    detail::reject_unknown_keys(b, {"budgets_s", "seeds", "reference_iters"},
                                "bench");
    read_if(b, "budgets_s", cfg.bench_budgets_s);
    read_if(b, "seeds", cfg.bench_seeds);
    read_if(b, "reference_iters", cfg.bench_reference_iters);
  }
  read_if(j, "seed", cfg.seed);
  cfg.validate();
  return cfg;
}

inline nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::ordered_json j;
  j["model"]["name"] = cfg.model_name;
  j["model"]["theta"] = cfg.theta;
  j["model"]["c"] = cfg.c;
  j["model"]["phi_bound"] = cfg.constant_phi_bound;
  j["T"] = cfg.T;
  if (!cfg.init_kind.empty()) {
    j["init"]["kind"] = cfg.init_kind;
    j["init"]["value"] = cfg.init_value;
    j["init"]["mean"] = cfg.init_mean;
    j["init"]["var"] = cfg.init_var;
  }
  if (cfg.has_observations) {
    j["observations"]["times"] = cfg.obs_times;
    j["observations"]["values"] = cfg.obs_values;
    j["observations"]["sigma_y"] = cfg.sigma_y;
  } else if (cfg.synthetic) {
    j["observations"]["synthetic"]["n_obs"] = cfg.synthetic_n_obs;
    j["observations"]["synthetic"]["seed"] = cfg.synthetic_seed;
    j["observations"]["sigma_y"] = cfg.sigma_y;
  }
  j["mcmc"]["method"] = cfg.method;
  j["mcmc"]["iters"] = cfg.iters;
  j["mcmc"]["burnin"] = cfg.burnin;
  j["mcmc"]["thin"] = cfg.thin;
  j["mcmc"]["flip_move"] = cfg.flip_move;
  j["hmc"]["step_size"] = cfg.hmc.step_size;
  j["hmc"]["n_leapfrog"] = cfg.hmc.n_leapfrog;
  j["hmc"]["mass"] = cfg.hmc.mass;
  j["params"]["infer"] = cfg.infer_theta;
  j["params"]["proposal"] =
      cfg.theta_proposal.kind == ThetaProposal::Kind::prior ? "prior"
                                                            : "random_walk";
  j["params"]["rw_scale"] = cfg.theta_proposal.rw_scale;
  j["tempering"]["enabled"] = cfg.tempering_enabled;
  j["tempering"]["ladder"] = cfg.ladder;
  j["pf"]["n_particles"] = cfg.n_particles;
  j["euler"]["dt"] = cfg.euler_dt;
  j["baseline"]["algo"] = cfg.baseline_algo;
  if (!cfg.monitor_times.empty()) j["monitor"]["times"] = cfg.monitor_times;
  j["output"]["dir"] = cfg.output_dir;
  j["output"]["snapshot_every"] = cfg.snapshot_every;
  if (!cfg.stocks_csv.empty()) {
    j["stocks"]["csv"] = cfg.stocks_csv;
    j["stocks"]["detrend"] = cfg.stocks_detrend;
  }
  j["bench"]["budgets_s"] = cfg.bench_budgets_s;
  j["bench"]["seeds"] = cfg.bench_seeds;
  j["bench"]["reference_iters"] = cfg.bench_reference_iters;
  j["seed"] = cfg.seed;
  return j;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw config_error("load_config: cannot open " + path);
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw config_error("load_config: malformed JSON in " + path + ": " +
                       e.what());
  }
  try {
    return config_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw config_error("load_config: bad value in " + path + ": " + e.what());
  }
}

inline void save_config(const ExperimentConfig& cfg, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw config_error("save_config: cannot open " + path);
  os << config_to_json(cfg).dump(2) << '\n';
}

}  // namespace sdemc

#endif
