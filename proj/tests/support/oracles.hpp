// Test-only reference implementations: independent oracles the unit and
// acceptance suites check the library against. Nothing here may call the
// code paths under test.
#ifndef SDEMC_TESTS_ORACLES_HPP
#define SDEMC_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace oracles {

// ---------------------------------------------------------------- gamma / chi2

inline double lgamma_safe(double x) { return std::lgamma(x); }

// regularized lower incomplete gamma P(a, x) by series expansion
inline double gamma_p_series(double a, double x) {
  double sum = 1.0 / a;
  double term = sum;
  for (int n = 1; n < 500; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-15) break;
  }
  return sum * std::exp(-x + a * std::log(x) - lgamma_safe(a));
}

// regularized upper incomplete gamma Q(a, x) by continued fraction
inline double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15) break;
  }
  return h * std::exp(-x + a * std::log(x) - lgamma_safe(a));
}

inline double gamma_q(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_q: bad args");
  if (x == 0.0) return 1.0;
  return (x < a + 1.0) ? 1.0 - gamma_p_series(a, x) : gamma_q_cf(a, x);
}

// upper-tail p-value of a chi-square statistic
inline double chi_square_p(double stat, double df) {
  return gamma_q(df / 2.0, stat / 2.0);
}

// Pearson chi-square test of observed counts against expected probabilities;
// bins with tiny expectation get merged into their neighbor.
struct ChiSquareResult {
  double statistic = 0.0;
  double df = 0.0;
  double p_value = 1.0;
};

inline ChiSquareResult chi_square_gof(const std::vector<double>& observed,
                                      const std::vector<double>& expected) {
  if (observed.size() != expected.size())
    throw std::invalid_argument("chi_square_gof: size mismatch");
  std::vector<double> obs, exp;
  double carry_o = 0.0, carry_e = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    carry_o += observed[i];
    carry_e += expected[i];
    if (carry_e >= 5.0) {
      obs.push_back(carry_o);
      exp.push_back(carry_e);
      carry_o = carry_e = 0.0;
    }
  }
  if (carry_e > 0.0 && !exp.empty()) {
    obs.back() += carry_o;
    exp.back() += carry_e;
  }
  ChiSquareResult r;
  for (std::size_t i = 0; i < obs.size(); ++i)
    r.statistic += (obs[i] - exp[i]) * (obs[i] - exp[i]) / exp[i];
  r.df = static_cast<double>(obs.size()) - 1.0;
  if (r.df < 1.0) r.df = 1.0;
  r.p_value = chi_square_p(r.statistic, r.df);
  return r;
}

// ------------------------------------------------------------------- normals

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

inline double normal_log_pdf(double x, double mean, double var) {
  const double d = x - mean;
  return -0.5 * d * d / var - 0.5 * std::log(2.0 * std::numbers::pi * var);
}

// one-sample KS statistic against a given CDF
inline double ks_statistic_vs_cdf(std::vector<double> x,
                                  const std::function<double(double)>& cdf) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max(d, std::max(f - static_cast<double>(i) / n,
                             static_cast<double>(i + 1) / n - f));
  }
  return d;
}

// ----------------------------------------------------------------- quadrature

// composite Simpson rule on [a, b]
inline double simpson(const std::function<double(double)>& f, double a,
                      double b, int n_intervals) {
  if (n_intervals % 2 != 0) ++n_intervals;
  const double h = (b - a) / n_intervals;
  double s = f(a) + f(b);
  for (int i = 1; i < n_intervals; ++i)
    s += f(a + i * h) * ((i % 2 == 1) ? 4.0 : 2.0);
  return s * h / 3.0;
}

// --------------------------------------------------------------------- kalman

// Exact log marginal likelihood for Brownian motion observed with Gaussian
// noise: X_0 = x0 known, X_{t+dt} = X_t + N(0, dt), y = x + N(0, r).
inline double kalman_log_lik_bm(double x0, const std::vector<double>& times,
                                const std::vector<double>& values, double sigma_y) {
  const double r = sigma_y * sigma_y;
  double m = x0, p = 0.0, t_prev = 0.0, ll = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double q = times[i] - t_prev;
    const double p_pred = p + q;
    const double s = p_pred + r;
    ll += normal_log_pdf(values[i], m, s);
    const double k = p_pred / s;
    m += k * (values[i] - m);
    p = (1.0 - k) * p_pred;
    t_prev = times[i];
  }
  return ll;
}

}  // namespace oracles

#endif
