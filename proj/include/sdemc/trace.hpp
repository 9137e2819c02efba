#ifndef SDEMC_TRACE_HPP
#define SDEMC_TRACE_HPP

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sdemc/gibbs.hpp"
#include "sdemc/skeleton.hpp"

namespace sdemc {

inline constexpr const char* kTraceHeader =
    "iter,x_mid,n_psi,theta,hmc_accept,flip_accept,theta_accept,wall_clock_s";

struct TraceRow {
  std::uint64_t iter = 0;
  double x_mid = 0.0;
  std::uint32_t n_psi = 0;
  double theta = 0.0;
  int hmc_accept = 0;
  int flip_accept = 0;
  int theta_accept = 0;
  double wall_clock_s = 0.0;
};

/// Per-iteration sampler records with fixed, versioned CSV columns.
struct Trace {
  std::vector<TraceRow> rows;

  void validate() const {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].iter != i)
        throw std::invalid_argument("Trace: iteration indices must be contiguous from 0");
      if (i > 0 && rows[i].wall_clock_s < rows[i - 1].wall_clock_s)
        throw std::invalid_argument("Trace: timestamps must be nondecreasing");
    }
  }
};

namespace detail {

// shortest round-trip formatting for doubles
inline std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

inline void write_trace_csv(const Trace& trace, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_trace_csv: cannot open " + path);
  os << kTraceHeader << '\n';
  for (const auto& r : trace.rows) {
    os << r.iter << ',' << detail::fmt_double(r.x_mid) << ',' << r.n_psi << ','
       << detail::fmt_double(r.theta) << ',' << r.hmc_accept << ','
       << r.flip_accept << ',' << r.theta_accept << ','
       << detail::fmt_double(r.wall_clock_s) << '\n';
  }
}

inline Trace read_trace_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("read_trace_csv: cannot open " + path);
  std::string line;
  if (!std::getline(is, line) || line != kTraceHeader)
    throw std::runtime_error("read_trace_csv: unexpected header in " + path);
  Trace trace;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string field;
    TraceRow r;
    auto next = [&]() {
      if (!std::getline(ls, field, ','))
        throw std::runtime_error("read_trace_csv: short row in " + path);
      return field;
    };
    r.iter = std::stoull(next());
    r.x_mid = std::stod(next());
    r.n_psi = static_cast<std::uint32_t>(std::stoul(next()));
    r.theta = std::stod(next());
    r.hmc_accept = std::stoi(next());
    r.flip_accept = std::stoi(next());
    r.theta_accept = std::stoi(next());
    r.wall_clock_s = std::stod(next());
    trace.rows.push_back(r);
  }
  return trace;
}

struct SkeletonSnapshot {
  std::uint64_t iter = 0;
  Skeleton skeleton;
  double theta = 0.0;
};

inline nlohmann::ordered_json snapshot_to_json(const SkeletonSnapshot& s) {
  nlohmann::ordered_json j;
  j["iter"] = s.iter;
  j["psi"] = s.skeleton.psi;
  j["x_psi"] = s.skeleton.x_psi;
  j["obs_times"] = s.skeleton.obs_times;
  j["x_obs"] = s.skeleton.x_obs;
  j["theta"] = s.theta;
  return j;
}

inline SkeletonSnapshot snapshot_from_json(const nlohmann::json& j, double T) {
  SkeletonSnapshot s;
  s.iter = j.at("iter").get<std::uint64_t>();
  s.skeleton.T = T;
  s.skeleton.psi = j.at("psi").get<std::vector<double>>();
  s.skeleton.x_psi = j.at("x_psi").get<std::vector<double>>();
  s.skeleton.obs_times = j.at("obs_times").get<std::vector<double>>();
  s.skeleton.x_obs = j.at("x_obs").get<std::vector<double>>();
  s.theta = j.at("theta").get<double>();
  s.skeleton.validate();
  return s;
}

/// Appends one snapshot as a single JSONL line.
inline void append_snapshot(std::ostream& os, const SkeletonSnapshot& s) {
  os << snapshot_to_json(s).dump() << '\n';
}

inline std::vector<SkeletonSnapshot> read_snapshots(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("read_snapshots: cannot open " + path);
  std::vector<SkeletonSnapshot> out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    const auto obs_times = j.at("obs_times").get<std::vector<double>>();
    out.push_back(snapshot_from_json(j, obs_times.back()));
  }
  return out;
}

/// Full chain checkpoint, including the RNG stream state, so a run can be
/// resumed bit-exactly.
inline nlohmann::ordered_json checkpoint_to_json(const ChainState& state,
                                                 std::uint64_t iter) {
  nlohmann::ordered_json j;
  j["iter"] = iter;
  j["theta"] = state.theta;
  j["skeleton"]["T"] = state.skeleton.T;
  j["skeleton"]["psi"] = state.skeleton.psi;
  j["skeleton"]["x_psi"] = state.skeleton.x_psi;
  j["skeleton"]["obs_times"] = state.skeleton.obs_times;
  j["skeleton"]["x_obs"] = state.skeleton.x_obs;
  j["rng"] = state.rng.save_state();
  j["counters"]["hmc_attempts"] = state.counters.hmc_attempts;
  j["counters"]["hmc_accepts"] = state.counters.hmc_accepts;
  j["counters"]["flip_attempts"] = state.counters.flip_attempts;
  j["counters"]["flip_accepts"] = state.counters.flip_accepts;
  j["counters"]["theta_attempts"] = state.counters.theta_attempts;
  j["counters"]["theta_accepts"] = state.counters.theta_accepts;
  return j;
}

inline std::pair<ChainState, std::uint64_t> checkpoint_from_json(
    const nlohmann::json& j) {
  ChainState state;
  const auto& sk = j.at("skeleton");
  state.skeleton.T = sk.at("T").get<double>();
  state.skeleton.psi = sk.at("psi").get<std::vector<double>>();
  state.skeleton.x_psi = sk.at("x_psi").get<std::vector<double>>();
  state.skeleton.obs_times = sk.at("obs_times").get<std::vector<double>>();
  state.skeleton.x_obs = sk.at("x_obs").get<std::vector<double>>();
  state.skeleton.validate();
  state.theta = j.at("theta").get<double>();
  state.rng.restore_state(j.at("rng").get<std::string>());
  const auto& c = j.at("counters");
  state.counters.hmc_attempts = c.at("hmc_attempts").get<std::uint64_t>();
  state.counters.hmc_accepts = c.at("hmc_accepts").get<std::uint64_t>();
  state.counters.flip_attempts = c.at("flip_attempts").get<std::uint64_t>();
  state.counters.flip_accepts = c.at("flip_accepts").get<std::uint64_t>();
  state.counters.theta_attempts = c.at("theta_attempts").get<std::uint64_t>();
  state.counters.theta_accepts = c.at("theta_accepts").get<std::uint64_t>();
  return {std::move(state), j.at("iter").get<std::uint64_t>()};
}

}  // namespace sdemc

#endif
