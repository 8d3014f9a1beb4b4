#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "shu/rng.hpp"

namespace shu::stats {

/// Streaming mean/variance (Welford). Numerically stable for long runs.
class MeanAcc {
 public:
  void add(double x) {
    ++n_;
    const double d = x - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (x - mean_);
  }

  uint64_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
  double stddev() const;
  /// Standard error of the mean.
  double sem() const;

 private:
  uint64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Streaming central moments up to order four; feeds standard errors for
/// variance estimates (SE^2 = (m4 - var^2)/n).
class MomentAcc {
 public:
  void add(double x);

  uint64_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
  double second_moment() const { return variance() * (n_ > 0 ? double(n_ - 1) / n_ : 0.0) + mean_ * mean_; }
  double fourth_central() const { return n_ > 0 ? m4_ / static_cast<double>(n_) : 0.0; }
  double mean_se() const;
  double variance_se() const;

 private:
  uint64_t n_ = 0;
  double mean_ = 0.0, m2_ = 0.0, m3_ = 0.0, m4_ = 0.0;
};

struct ChiSquareResult {
  double statistic;
  unsigned df;
  double p_value;
  unsigned cells_used;  // after pooling
};

/// Pearson chi-square test of observed counts against expected counts.
/// Adjacent cells are pooled until every expected count is >= min_expected;
/// expected totals are rescaled to the observed total first.
ChiSquareResult chi_square_gof(const std::vector<double>& observed,
                               const std::vector<double>& expected,
                               double min_expected = 5.0);

struct KsResult {
  double statistic;
  double p_value;  // asymptotic Kolmogorov distribution
};

/// One-sample Kolmogorov-Smirnov test against a continuous cdf.
KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf);

double normal_cdf(double z);
/// Regularized lower incomplete gamma: P(shape, rate * x).
double gamma_cdf(double x, double shape, double rate);

struct LinearFit {
  double slope;
  double intercept;
};

LinearFit least_squares(const std::vector<double>& xs, const std::vector<double>& ys);

double pearson_correlation(const std::vector<double>& xs, const std::vector<double>& ys);

struct TailFit {
  double exponent;  // point estimate (positive means survival ~ x^-exponent)
  double lo;        // bootstrap 95% interval
  double hi;
  std::size_t points_used;
};

/// Power-law tail exponent from the upper `decile` fraction of the sample,
/// by least squares on the log-log empirical survival curve. The interval
/// comes from a percentile bootstrap with `bootstrap` resamples.
TailFit fit_tail_exponent(const std::vector<double>& samples, double decile,
                          unsigned bootstrap, rng::Stream& stream);

}  // namespace shu::stats
