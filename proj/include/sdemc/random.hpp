#ifndef SDEMC_RANDOM_HPP
#define SDEMC_RANDOM_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sdemc/errors.hpp"

namespace sdemc {

/// Seeded random stream. Distinct (seed, stream_id) pairs give independent
/// streams, so chains and particles can draw concurrently without sharing
/// state. Distributions are constructed per call; the only mutable state is
/// the engine, which keeps checkpointing simple.
class RngStream {
 public:
  RngStream() : RngStream(0, 0) {}
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0)
      : seed_(seed), stream_id_(stream_id), engine_(derive(seed, stream_id)) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  /// Uniform on [0,1).
  double uniform() {
    return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
  }

  double uniform(double a, double b) {
    if (!(b > a)) throw std::invalid_argument("uniform: requires b > a");
    return std::uniform_real_distribution<double>(a, b)(engine_);
  }

  double std_normal() {
    return std::normal_distribution<double>(0.0, 1.0)(engine_);
  }

  double gaussian(double mean, double variance) {
    if (!(variance > 0.0))
      throw std::invalid_argument("gaussian: requires variance > 0");
    return mean + std::sqrt(variance) * std_normal();
  }

  double exponential(double rate) {
    if (!(rate > 0.0))
      throw std::invalid_argument("exponential: requires rate > 0");
    return std::exponential_distribution<double>(rate)(engine_);
  }

  std::int64_t poisson(double mean) {
    if (!(mean >= 0.0))
      throw std::invalid_argument("poisson: requires mean >= 0");
    if (mean == 0.0) return 0;
    return std::poisson_distribution<std::int64_t>(mean)(engine_);
  }

  bool bernoulli(double p) { return uniform() < p; }

  std::uint64_t raw() { return engine_(); }

  std::string save_state() const {
    std::ostringstream os;
    os << seed_ << ' ' << stream_id_ << ' ' << engine_;
    return os.str();
  }

  void restore_state(const std::string& s) {
    std::istringstream is(s);
    is >> seed_ >> stream_id_ >> engine_;
    if (!is) throw std::invalid_argument("RngStream: malformed saved state");
  }

 private:
  static std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream_id) {
    return mix64(mix64(seed) ^ mix64(stream_id ^ 0xDA942042E4DD58B5ULL));
  }

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

/// A finite, strictly increasing set of times inside some interval.
struct PointSet {
  std::vector<double> times;

  std::size_t size() const noexcept { return times.size(); }
  bool empty() const noexcept { return times.empty(); }
};

inline bool strictly_increasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] > v[i - 1])) return false;
  return true;
}

/// Homogeneous Poisson process on (t0, t1): draw the count, then drop
/// uniform points and sort.
inline PointSet sample_poisson_process(double rate, double t0, double t1,
                                       RngStream& rng) {
  if (!(rate >= 0.0))
    throw std::invalid_argument("sample_poisson_process: rate must be >= 0");
  if (!(t1 > t0))
    throw std::invalid_argument("sample_poisson_process: requires t1 > t0");
  PointSet out;
  const std::int64_t n = rng.poisson(rate * (t1 - t0));
  out.times.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) out.times.push_back(rng.uniform(t0, t1));
  std::sort(out.times.begin(), out.times.end());
  // ties have probability zero; drop them rather than ship a non-strict set
  out.times.erase(std::unique(out.times.begin(), out.times.end()),
                  out.times.end());
  return out;
}

/// Clamps a probability that is within rounding slop of [0,1] back into the
/// interval; anything further out means a broken bound upstream.
inline double checked_probability(double p, const char* where) {
  constexpr double kSlop = 1e-9;
  if (p >= 0.0 && p <= 1.0) return p;
  if (p < 0.0 && p >= -kSlop) return 0.0;
  if (p > 1.0 && p <= 1.0 + kSlop) return 1.0;
  throw contract_error(std::string(where) + ": probability outside [0,1]: " +
                       std::to_string(p));
}

/// Independent thinning: keep each point with probability keep_prob(t).
/// A probability outside [0,1] means a broken bound upstream.
template <class F>
PointSet thin(const PointSet& points, F&& keep_prob, RngStream& rng) {
  PointSet out;
  out.times.reserve(points.size());
  for (double t : points.times) {
    const double p = keep_prob(t);
    if (!(p >= 0.0 && p <= 1.0))
      throw contract_error("thin: keep probability outside [0,1] at t=" +
                           std::to_string(t));
    if (rng.uniform() < p) out.times.push_back(t);
  }
  return out;
}

}  // namespace sdemc

#endif
