#include "shu/renewal.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

#include <doctest.h>

#include "shu/exact.hpp"
#include "shu/precision.hpp"
#include "shu/rng.hpp"
#include "shu/stats.hpp"

using namespace shu;
using namespace shu::renewal;

namespace {

rng::Stream renewal_stream(uint64_t replica) {
  return rng::make_stream(20240817, rng::Tag::renewal, replica);
}

}  // namespace

TEST_CASE("expected count equals e^t before the first integer") {
  PrecisionGuard guard(128);
  CHECK(renewal_function_exact(0.0) == 1);
  for (double t : {0.1, 0.3, 0.5, 0.7, 0.9, 1.0}) {
    Real diff = abs(renewal_function_exact(t) - exp(Real(t)));
    CHECK(diff < 1e-25);
  }
}

TEST_CASE("expected count settles onto the linear asymptote") {
  PrecisionGuard guard(128);
  Real f10 = renewal_function_exact(10.0);
  Real target = Real(62) / 3;
  CHECK(abs(f10 - target) < 1e-8);
}

TEST_CASE("expected count satisfies the delay differential equation") {
  // d/dt E[N(t)] = E[N(t)] - E[N(t-1)] away from integers; probe with a
  // central difference.
  PrecisionGuard guard(192);
  const double h = 1e-6;
  for (double t : {1.5, 3.7, 12.2}) {
    Real lhs = (renewal_function_exact(t + h) - renewal_function_exact(t - h)) / (2 * h);
    Real rhs = renewal_function_exact(t) - renewal_function_exact(t - 1.0);
    CHECK(abs(lhs - rhs) < 1e-4);
  }
}

TEST_CASE("expected count is strictly increasing") {
  PrecisionGuard guard(128);
  Real prev = renewal_function_exact(0.0);
  for (int k = 1; k <= 60; ++k) {
    Real cur = renewal_function_exact(0.25 * k);
    CHECK(cur > prev);
    prev = cur;
  }
}

TEST_CASE("characteristic roots: location, residuals, ordering") {
  auto roots = char_roots(8);
  REQUIRE(roots.size() == 8);

  PrecisionGuard guard(192);
  CHECK(abs(roots[0].re - Real("-2.088843")) < 1e-5);
  CHECK(abs(roots[0].im - Real("7.461489")) < 1e-5);

  const Real pi = boost::math::constants::pi<Real>();
  CHECK(abs(roots[1].im - 4.5 * pi) < 1);

  for (size_t i = 0; i < roots.size(); ++i) {
    CHECK(roots[i].residual < 1e-12);
    CHECK(roots[i].re < 0);
    CHECK(roots[i].im > 0);
    if (i > 0) CHECK(roots[i].im > roots[i - 1].im);
    for (size_t j = 0; j < i; ++j) {
      Real dx = roots[i].re - roots[j].re;
      Real dy = roots[i].im - roots[j].im;
      CHECK(sqrt(dx * dx + dy * dy) > 1);
    }
  }

  // The strip |Im| < (2K + 1/2) pi + 1 holds exactly K upper-half roots.
  for (unsigned k = 1; k <= 6; ++k) {
    Real bound = (2 * Real(k) + Real(1) / 2) * pi + 1;
    unsigned inside = 0;
    for (const auto& r : roots)
      if (r.im < bound) ++inside;
    CHECK(inside == k);
  }
}

TEST_CASE("pole expansion agrees with the exact series") {
  PrecisionGuard guard(192);
  for (double t : {5.0, 10.0, 20.0, 30.0}) {
    Real exact = renewal_function_exact(t);
    Real asym = renewal_function_asymptotic(t, 40);
    CHECK(abs(exact - asym) < 1e-9);
  }
}

TEST_CASE("leading oscillatory correction carries the predicted sign") {
  auto gamma1 = char_roots(1).at(0);
  PrecisionGuard guard(192);
  Real correction = renewal_function_exact(5.0) - (Real(10) + Real(2) / 3);
  Real predictor = gamma1.re * cos(gamma1.im * 5) + gamma1.im * sin(gamma1.im * 5);
  CHECK(correction != 0);
  CHECK((correction > 0) == (predictor > 0));
}

TEST_CASE("uniform increment mgf obeys the sub-gamma bounds") {
  // E[e^{lu}] = (e^l - 1)/l for u ~ U(0,1); both one-sided log-mgf bounds
  // l/2 + l^2/24 hold on (0, 50].
  PrecisionGuard guard(256);
  for (double lam : {1e-3, 0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 35.0, 50.0}) {
    Real l(lam);
    Real cap = l * l / 24;
    Real log_phi_pos = log((exp(l) - 1) / l);
    Real log_phi_neg = log((1 - exp(-l)) / l);
    CHECK(log_phi_pos <= l / 2 + cap);
    CHECK(log_phi_neg <= -l / 2 + cap);
    // Same content in symmetric form.
    CHECK(2 * sinh(l / 2) <= l * exp(cap));
  }
}

TEST_CASE("count sampler floor and zero-time behaviour") {
  auto rng = renewal_stream(0);
  for (int i = 0; i < 2000; ++i) CHECK(sample_renewal_count(0.0, rng) == 1);
  for (double t : {0.5, 3.2, 7.9}) {
    const auto floor_plus_one = static_cast<uint64_t>(std::floor(t)) + 1;
    for (int i = 0; i < 2000; ++i) CHECK(sample_renewal_count(t, rng) >= floor_plus_one);
  }
}

TEST_CASE("excess count over an integer horizon matches the hitting law") {
  // N(n) - n has exactly the one-traversal law from height n.
  const unsigned n = 5;
  const uint64_t samples = 1'000'000;
  auto row = exact::transition_row(n, 1e-9);

  std::vector<double> observed(row.m_max + 1, 0.0);
  auto rng = renewal_stream(1);
  for (uint64_t i = 0; i < samples; ++i) {
    uint64_t excess = sample_renewal_count(double(n), rng) - n;
    size_t idx = excess <= row.m_max ? excess - 1 : row.m_max;
    observed[idx] += 1;
  }

  std::vector<double> expected(row.m_max + 1, 0.0);
  double mass = 0;
  for (unsigned m = 1; m <= row.m_max; ++m) {
    expected[m - 1] = static_cast<double>(to_real(row.probs[m - 1]) * samples);
    mass += expected[m - 1];
  }
  expected[row.m_max] = static_cast<double>(samples) - mass;

  auto gof = stats::chi_square_gof(observed, expected);
  CHECK(gof.p_value > 1e-3);
}

TEST_CASE("count moments match the asymptotic mean, variance and square") {
  auto rng = renewal_stream(2);

  auto m10 = count_moments_mc(10.0, 1'000'000, rng);
  PrecisionGuard guard(128);
  double f10 = static_cast<double>(renewal_function_exact(10.0));
  CHECK(std::abs(m10.mean - f10) <= 3 * m10.mean_se);

  auto m40 = count_moments_mc(40.0, 1'000'000, rng);
  const double var_target = 2.0 / 3.0 * 40 + 2.0 / 9.0;
  const double sq_target = 4.0 * 40 * 40 + 10.0 / 3.0 * 40 + 2.0 / 3.0;
  CHECK(std::abs(m40.variance - var_target) <= 3 * m40.variance_se);
  CHECK(std::abs(m40.second_moment - sq_target) <= 3 * m40.second_moment_se);
}
