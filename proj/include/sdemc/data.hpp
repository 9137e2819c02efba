#ifndef SDEMC_DATA_HPP
#define SDEMC_DATA_HPP

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sdemc/ea1.hpp"
#include "sdemc/errors.hpp"
#include "sdemc/models.hpp"
#include "sdemc/random.hpp"

namespace sdemc {

struct SyntheticData {
  ObservationSet obs;
  Skeleton truth_skeleton;
  std::vector<double> truth_at_obs;
};

/// Simulates a ground-truth path exactly and observes it with Gaussian noise
/// at n equally spaced, endpoint-inclusive times {T/n, 2T/n, ..., T}.
/// sigma_y = 0 is allowed here so tests can observe the truth directly.
inline SyntheticData generate_synthetic(const Ea1Model& model, double T,
                                        int n_obs, double sigma_y,
                                        RngStream& rng) {
  if (n_obs < 1)
    throw std::invalid_argument("generate_synthetic: n_obs must be >= 1");
  if (sigma_y < 0.0)
    throw std::invalid_argument("generate_synthetic: sigma_y must be >= 0");
  SyntheticData data;
  data.obs.sigma_y = sigma_y;
  for (int i = 1; i <= n_obs; ++i)
    data.obs.times.push_back(T * static_cast<double>(i) /
                             static_cast<double>(n_obs));
  data.obs.times.back() = T;  // guard against rounding drift at the endpoint

  // grid values at interior observation times; the endpoint is the skeleton's
  std::vector<double> interior(data.obs.times.begin(),
                               data.obs.times.end() - 1);
  Ea1Result draw = ea1_simulate(model, T, rng, interior);
  data.truth_at_obs = std::move(draw.grid_values);
  data.truth_at_obs.push_back(draw.skeleton.xT());
  data.truth_skeleton = std::move(draw.skeleton);

  data.obs.values.reserve(data.obs.times.size());
  for (double x : data.truth_at_obs)
    data.obs.values.push_back(sigma_y > 0.0 ? x + sigma_y * rng.std_normal()
                                            : x);
  return data;
}

/// Weekly price series after the standard preprocessing: fit a linear trend
/// by least squares over the row index, detrend, take logs, and rescale the
/// time axis to [0, 10]. The first 146 of 179 rows are training data.
struct StockSeries {
  std::vector<std::string> dates;
  std::vector<double> prices;   // raw
  std::vector<double> times;    // rescaled to [0, 10]
  std::vector<double> values;   // transformed series S_t
  std::size_t n_train = 0;
  std::size_t n_test = 0;

  double train_end_time() const { return times.at(n_train - 1); }
};

inline StockSeries ingest_stock_csv(const std::string& path,
                                    const std::string& detrend = "multiplicative") {
  if (detrend != "multiplicative" && detrend != "additive")
    throw std::invalid_argument("ingest_stock_csv: unknown detrend mode '" +
                                detrend + "'");
  std::ifstream is(path);
  if (!is) throw ingest_error("ingest_stock_csv: cannot open " + path);
  std::string line;
  if (!std::getline(is, line))
    throw ingest_error("ingest_stock_csv: empty file " + path);
  if (line != "date,price")
    throw ingest_error("ingest_stock_csv: expected header 'date,price'");

  StockSeries s;
  long row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw ingest_error("ingest_stock_csv: malformed row " + std::to_string(row), row);
    const std::string date = line.substr(0, comma);
    double price = 0.0;
    try {
      price = std::stod(line.substr(comma + 1));
    } catch (const std::exception&) {
      throw ingest_error("ingest_stock_csv: bad price at row " + std::to_string(row), row);
    }
    if (!(price > 0.0))
      throw ingest_error("ingest_stock_csv: nonpositive price at row " +
                             std::to_string(row),
                         row);
    s.dates.push_back(date);
    s.prices.push_back(price);
  }
  const std::size_t n = s.prices.size();
  if (n < 2) throw ingest_error("ingest_stock_csv: need at least 2 rows");

  // ordinary least squares of price on the row index
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = static_cast<double>(i);
    sx += xi;
    sy += s.prices[i];
    sxx += xi * xi;
    sxy += xi * s.prices[i];
  }
  const double nn = static_cast<double>(n);
  const double slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / nn;

  s.values.reserve(n);
  s.times.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double fitted = intercept + slope * static_cast<double>(i);
    double v = 0.0;
    if (detrend == "multiplicative") {
      if (!(fitted > 0.0))
        throw ingest_error("ingest_stock_csv: nonpositive fitted trend at row " +
                               std::to_string(i + 2),
                           static_cast<long>(i + 2));
      v = std::log(s.prices[i] / fitted);
    } else {
      const double resid = s.prices[i] - fitted;
      if (!(resid > 0.0))
        throw ingest_error(
            "ingest_stock_csv: additive detrending hit a nonpositive value at row " +
                std::to_string(i + 2),
            static_cast<long>(i + 2));
      v = std::log(resid);
    }
    s.values.push_back(v);
    s.times.push_back(10.0 * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  if (n == 179) {
    s.n_train = 146;
  } else {
    s.n_train = static_cast<std::size_t>(
        std::floor(static_cast<double>(n) * 146.0 / 179.0));
    if (s.n_train < 1) s.n_train = 1;
  }
  s.n_test = n - s.n_train;
  return s;
}

}  // namespace sdemc

#endif
