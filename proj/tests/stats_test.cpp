#include "shu/stats.hpp"

#include <cmath>
#include <vector>

#include "shu/rng.hpp"

#include "doctest.h"

using namespace shu;

TEST_SUITE("stats") {

TEST_CASE("welford matches closed forms") {
  stats::MeanAcc acc;
  for (int i = 1; i <= 100; ++i) acc.add(i);
  CHECK(acc.count() == 100);
  CHECK(acc.mean() == doctest::Approx(50.5));
  // sample variance of 1..100 is n(n+1)/12 = 841.666...
  CHECK(acc.variance() == doctest::Approx(841.6666666667));
}

TEST_CASE("chi-square gof: exact small case") {
  // Observed 60/40 against a fair split: stat = 2*10^2/50 = 4, df=1,
  // p = P(chi2_1 > 4) = erfc(sqrt(2)) = 0.0455...
  const auto r = stats::chi_square_gof({60, 40}, {1, 1});
  CHECK(r.statistic == doctest::Approx(4.0));
  CHECK(r.df == 1);
  CHECK(r.p_value == doctest::Approx(0.04550026).epsilon(1e-5));
}

TEST_CASE("chi-square gof pools sparse cells") {
  // the three tiny trailing cells merge backwards into the second cell
  const auto r = stats::chi_square_gof({50, 49, 1, 0, 1}, {50, 50, 0.5, 0.3, 0.2});
  CHECK(r.cells_used == 2);
  CHECK(r.p_value > 0.1);
}

TEST_CASE("ks test against the true and a wrong cdf") {
  rng::Stream s(5, 11);
  std::vector<double> xs;
  for (int i = 0; i < 20000; ++i) xs.push_back(s.next_unit());
  const auto right = stats::ks_test(xs, [](double x) { return x; });
  CHECK(right.p_value > 1e-3);
  const auto wrong = stats::ks_test(xs, [](double x) { return x * x; });
  CHECK(wrong.p_value < 1e-10);
}

TEST_CASE("normal and gamma cdfs") {
  CHECK(stats::normal_cdf(0.0) == doctest::Approx(0.5));
  CHECK(stats::normal_cdf(1.959963985) == doctest::Approx(0.975).epsilon(1e-6));
  // Gamma(shape=1, rate=2) is Exp(2)
  CHECK(stats::gamma_cdf(1.0, 1.0, 2.0) == doctest::Approx(1.0 - std::exp(-2.0)));
  // Gamma(shape=2, rate=1) cdf at 3: 1 - e^-3(1+3)
  CHECK(stats::gamma_cdf(3.0, 2.0, 1.0) == doctest::Approx(1.0 - std::exp(-3.0) * 4.0));
  CHECK(stats::gamma_cdf(-1.0, 2.0, 1.0) == 0.0);
}

TEST_CASE("least squares recovers a line") {
  std::vector<double> xs, ys;
  for (int i = 0; i < 10; ++i) {
    xs.push_back(i);
    ys.push_back(3.0 * i - 7.0);
  }
  const auto fit = stats::least_squares(xs, ys);
  CHECK(fit.slope == doctest::Approx(3.0));
  CHECK(fit.intercept == doctest::Approx(-7.0));
}

TEST_CASE("pearson correlation sign and scale") {
  std::vector<double> xs = {1, 2, 3, 4, 5};
  std::vector<double> up = {2, 4, 6, 8, 10};
  std::vector<double> down = {5, 4, 3, 2, 1};
  CHECK(stats::pearson_correlation(xs, up) == doctest::Approx(1.0));
  CHECK(stats::pearson_correlation(xs, down) == doctest::Approx(-1.0));
}

TEST_CASE("tail exponent recovers a pareto index") {
  // Pareto(alpha=2): survival x^-2 for x >= 1, sampled by inversion.
  rng::Stream s(77, 3);
  std::vector<double> xs;
  for (int i = 0; i < 40000; ++i) xs.push_back(1.0 / std::sqrt(s.next_unit()));
  rng::Stream boot(77, 4);
  const auto fit = stats::fit_tail_exponent(xs, 0.10, 200, boot);
  CHECK(fit.exponent == doctest::Approx(2.0).epsilon(0.10));
  CHECK(fit.lo <= 2.0);
  CHECK(fit.hi >= 2.0);
  CHECK(fit.points_used >= 3900);
}

}  // TEST_SUITE
