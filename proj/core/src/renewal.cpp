#include "shu/renewal.hpp"

#include <boost/math/constants/constants.hpp>

#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "shu/bignum.hpp"
#include "shu/stats.hpp"

namespace shu::renewal {

uint64_t sample_renewal_count(double t, rng::Stream& rng) {
  if (t < 0 || !std::isfinite(t)) throw std::invalid_argument("renewal: t must be finite and >= 0");
  double sum = 0.0;
  uint64_t i = 0;
  do {
    sum += rng.next_unit();
    ++i;
  } while (sum <= t);
  return i;
}

namespace {

// Series evaluated at the ambient working precision.  t enters as an exact
// double so every escalation step sees the same argument.
Real renewal_series(double t) {
  const Real tr(t);
  const auto imax = static_cast<unsigned long>(std::floor(t));
  Real sum(0);
  for (unsigned long i = 0; i <= imax; ++i) {
    Real base = Real(i) - tr;
    // 0^0 = 1 keeps the i = 0 term equal to e^t; at integer t >= 1 the top
    // term vanishes on its own.
    Real p = (i == 0) ? Real(1) : pow(base, static_cast<int>(i));
    sum += p * exp(tr - Real(i)) / to_real(factorial(i));
  }
  return sum;
}

}  // namespace

Real renewal_function_exact(double t, const PrecisionConfig& cfg) {
  if (t < 0 || !std::isfinite(t)) throw std::invalid_argument("renewal: t must be finite and >= 0");
  PrecisionConfig local = cfg;
  if (t > 1) {
    const auto floor_bits = static_cast<unsigned>(64 + std::ceil(t * std::log2(t)));
    if (local.bits < floor_bits) local.bits = floor_bits;
  }
  return escalate(local, [t](unsigned) { return renewal_series(t); });
}

namespace {

// Complex scratch pair over Real; only the handful of operations Newton needs.
struct CReal {
  Real re, im;
};

CReal cexp_neg(const CReal& z) {  // exp(-z)
  Real mag = exp(-z.re);
  return {mag * cos(z.im), -mag * sin(z.im)};
}

CReal cdiv(const CReal& a, const CReal& b) {
  Real d = b.re * b.re + b.im * b.im;
  return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}

Real cabs(const CReal& z) { return sqrt(z.re * z.re + z.im * z.im); }

}  // namespace

std::vector<CharRoot> char_roots(unsigned count, const PrecisionConfig& cfg) {
  PrecisionGuard guard(std::max(cfg.bits, 192u));
  const Real pi = boost::math::constants::pi<Real>();
  std::vector<CharRoot> roots;
  roots.reserve(count);
  for (unsigned n = 1; n <= count; ++n) {
    CReal z{-log(2 * pi * n), (2 * Real(n) + Real(1) / 2) * pi};
    Real res(1);
    bool ok = false;
    for (int iter = 0; iter < 200; ++iter) {
      CReal e = cexp_neg(z);
      CReal g{z.re - 1 + e.re, z.im + e.im};
      res = cabs(g);
      if (res < 1e-13) {
        ok = true;
        break;
      }
      CReal gp{1 - e.re, -e.im};  // d/dz (z - 1 + e^{-z})
      CReal step = cdiv(g, gp);
      z.re -= step.re;
      z.im -= step.im;
    }
    if (!ok || z.im <= 0) throw std::runtime_error("char_roots: Newton failed to converge");
    roots.push_back({n, z.re, z.im, res});
  }
  for (size_t i = 0; i < roots.size(); ++i) {
    if (i > 0 && roots[i].im <= roots[i - 1].im)
      throw std::runtime_error("char_roots: roots out of order");
    for (size_t j = 0; j < i; ++j) {
      Real dx = roots[i].re - roots[j].re;
      Real dy = roots[i].im - roots[j].im;
      if (sqrt(dx * dx + dy * dy) <= 1)
        throw std::runtime_error("char_roots: seeds collapsed to one root");
    }
  }
  return roots;
}

Real renewal_function_asymptotic(double t, unsigned pole_pairs, const PrecisionConfig& cfg) {
  auto roots = char_roots(pole_pairs, cfg);
  PrecisionGuard guard(std::max(cfg.bits, 192u));
  const Real tr(t);
  Real sum = 2 * tr + Real(2) / 3;
  for (const auto& r : roots) {
    // Each conjugate pair of simple poles contributes twice the real part of
    // e^{lambda t} / lambda.
    Real mag2 = r.re * r.re + r.im * r.im;
    sum += 2 * exp(r.re * tr) * (r.re * cos(r.im * tr) + r.im * sin(r.im * tr)) / mag2;
  }
  return sum;
}

CountMoments count_moments_mc(double t, uint64_t replicas, rng::Stream& rng) {
  stats::MomentAcc count_acc;
  stats::MomentAcc square_acc;
  for (uint64_t r = 0; r < replicas; ++r) {
    const auto n = static_cast<double>(sample_renewal_count(t, rng));
    count_acc.add(n);
    square_acc.add(n * n);
  }
  CountMoments out;
  out.replicas = replicas;
  out.mean = count_acc.mean();
  out.mean_se = count_acc.mean_se();
  out.second_moment = square_acc.mean();
  out.second_moment_se = square_acc.mean_se();
  out.variance = count_acc.variance();
  out.variance_se = count_acc.variance_se();
  return out;
}

}  // namespace shu::renewal
