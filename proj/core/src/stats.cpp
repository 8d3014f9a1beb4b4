#include "shu/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace shu::stats {

double MeanAcc::stddev() const { return std::sqrt(variance()); }

double MeanAcc::sem() const {
  return n_ > 0 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
}

void MomentAcc::add(double x) {
  // One-pass update of central moments (Pebay's formulas).
  const uint64_t n1 = n_;
  n_ += 1;
  const double delta = x - mean_;
  const double dn = delta / static_cast<double>(n_);
  const double dn2 = dn * dn;
  const double term1 = delta * dn * static_cast<double>(n1);
  mean_ += dn;
  m4_ += term1 * dn2 * (double(n_) * n_ - 3.0 * n_ + 3.0) + 6.0 * dn2 * m2_ - 4.0 * dn * m3_;
  m3_ += term1 * dn * (double(n_) - 2.0) - 3.0 * dn * m2_;
  m2_ += term1;
}

double MomentAcc::mean_se() const {
  return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
}

double MomentAcc::variance_se() const {
  if (n_ < 2) return 0.0;
  const double v = variance();
  const double spread = fourth_central() - v * v;
  return spread > 0 ? std::sqrt(spread / static_cast<double>(n_)) : 0.0;
}

ChiSquareResult chi_square_gof(const std::vector<double>& observed,
                               const std::vector<double>& expected,
                               double min_expected) {
  if (observed.size() != expected.size() || observed.empty()) {
    throw std::invalid_argument("chi_square_gof: size mismatch");
  }
  const double obs_total = std::accumulate(observed.begin(), observed.end(), 0.0);
  const double exp_total = std::accumulate(expected.begin(), expected.end(), 0.0);
  if (obs_total <= 0.0 || exp_total <= 0.0) {
    throw std::invalid_argument("chi_square_gof: empty totals");
  }
  const double scale = obs_total / exp_total;

  // Pool left to right; a trailing underfull cell merges backwards.
  std::vector<double> obs_pooled, exp_pooled;
  double o_acc = 0.0, e_acc = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    o_acc += observed[i];
    e_acc += expected[i] * scale;
    if (e_acc >= min_expected) {
      obs_pooled.push_back(o_acc);
      exp_pooled.push_back(e_acc);
      o_acc = e_acc = 0.0;
    }
  }
  if (e_acc > 0.0) {
    if (exp_pooled.empty()) {
      obs_pooled.push_back(o_acc);
      exp_pooled.push_back(e_acc);
    } else {
      obs_pooled.back() += o_acc;
      exp_pooled.back() += e_acc;
    }
  }
  if (obs_pooled.size() < 2) {
    throw std::invalid_argument("chi_square_gof: fewer than two cells after pooling");
  }

  double stat = 0.0;
  for (std::size_t i = 0; i < obs_pooled.size(); ++i) {
    const double d = obs_pooled[i] - exp_pooled[i];
    stat += d * d / exp_pooled[i];
  }
  const unsigned df = static_cast<unsigned>(obs_pooled.size() - 1);
  // Upper tail of chi-square(df) = Q(df/2, stat/2).
  const double p = boost::math::gamma_q(df / 2.0, stat / 2.0);
  return {stat, df, p, static_cast<unsigned>(obs_pooled.size())};
}

namespace {

// Asymptotic Kolmogorov survival K(x) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 x^2).
double kolmogorov_survival(double x) {
  if (x <= 0.0) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = 2.0 * std::exp(-2.0 * k * k * x * x);
    sum += (k % 2 == 1) ? term : -term;
    if (term < 1e-16) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

}  // namespace

KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::invalid_argument("ks_test: no samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
  }
  return {d, kolmogorov_survival(std::sqrt(n) * d)};
}

double normal_cdf(double z) {
  static const boost::math::normal_distribution<double> dist;
  return boost::math::cdf(dist, z);
}

double gamma_cdf(double x, double shape, double rate) {
  if (x <= 0.0) return 0.0;
  return boost::math::gamma_p(shape, rate * x);
}

LinearFit least_squares(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw std::invalid_argument("least_squares: need >= 2 points");
  }
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("least_squares: degenerate x");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

double pearson_correlation(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw std::invalid_argument("pearson_correlation: size mismatch");
  }
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

namespace {

// Slope of -log(survival) vs log(value) over the upper `decile` fraction.
// Distinct values only, so heavy ties cannot flatten the regression.
double tail_slope(const std::vector<double>& sorted, double decile) {
  const std::size_t n = sorted.size();
  const auto start = static_cast<std::size_t>(static_cast<double>(n) * (1.0 - decile));
  std::vector<double> lx, ly;
  for (std::size_t i = start; i < n; ++i) {
    if (i + 1 < n && sorted[i + 1] == sorted[i]) continue;  // keep last of a tie run
    const double survival = static_cast<double>(n - (i + 1)) / static_cast<double>(n);
    if (survival <= 0.0 || sorted[i] <= 0.0) continue;
    lx.push_back(std::log(sorted[i]));
    ly.push_back(-std::log(survival));
  }
  if (lx.size() < 2) throw std::invalid_argument("fit_tail_exponent: tail too short");
  return least_squares(lx, ly).slope;
}

}  // namespace

TailFit fit_tail_exponent(const std::vector<double>& samples, double decile,
                          unsigned bootstrap, rng::Stream& stream) {
  if (samples.size() < 100) throw std::invalid_argument("fit_tail_exponent: too few samples");
  std::vector<double> sorted = samples;
  std::sort(sorted.begin(), sorted.end());
  const double point = tail_slope(sorted, decile);

  std::vector<double> estimates;
  estimates.reserve(bootstrap);
  std::vector<double> resample(samples.size());
  for (unsigned b = 0; b < bootstrap; ++b) {
    for (auto& v : resample) v = samples[stream.below(samples.size())];
    std::sort(resample.begin(), resample.end());
    estimates.push_back(tail_slope(resample, decile));
  }
  std::sort(estimates.begin(), estimates.end());
  const auto quantile = [&](double q) {
    const auto idx = static_cast<std::size_t>(q * static_cast<double>(estimates.size() - 1));
    return estimates[idx];
  };
  const std::size_t start = static_cast<std::size_t>(static_cast<double>(sorted.size()) * (1.0 - decile));
  return {point, quantile(0.025), quantile(0.975), sorted.size() - start};
}

}  // namespace shu::stats
