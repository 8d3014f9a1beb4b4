#include "shu/embed.hpp"

#include <cmath>
#include <stdexcept>

#include "shu/bignum.hpp"
#include "shu/lattice.hpp"
#include "shu/stats.hpp"

namespace shu::embed {

using lattice::sgn;

FastResult simulate_fast(int64_t a0, int64_t b0, rng::Stream& rng, const FastStop& stop) {
  if (a0 == 0 && b0 == 0) throw std::invalid_argument("simulate_fast: origin has no dynamics");
  FastResult out;
  CtmcState s{a0, b0, 0.0};
  if (stop.record_path) out.path.push_back(s);
  if (stop.stop_on_axis && s.a == 0) {
    out.state = s;
    out.hit_axis = true;
    out.tau_f = 0;
    return out;
  }
  while (true) {
    const auto rate = static_cast<double>(std::abs(s.a) + std::abs(s.b));
    const double wait = rng.exponential() / rate;
    if (s.t + wait >= stop.horizon) {
      s.t = stop.horizon;
      out.state = s;
      out.hit_axis = false;
      return out;
    }
    s.t += wait;
    const double u = rng.next_unit();
    if (u * rate < static_cast<double>(std::abs(s.b))) {
      s.a -= sgn(s.b);
    } else {
      s.b += sgn(s.a);
    }
    out.events += 1;
    if (stop.record_path) out.path.push_back(s);
    if (stop.stop_on_axis && s.a == 0) {
      out.state = s;
      out.hit_axis = true;
      out.tau_f = s.t;
      return out;
    }
    if (out.events >= stop.event_cap)
      throw std::runtime_error("simulate_fast: event cap exceeded");
  }
}

RotationResidual martingale_residual(int64_t a0, int64_t b0, double t,
                                     uint64_t replicas, rng::Stream& rng) {
  RotationResidual out;
  out.replicas = replicas;
  out.target_re = a0 * std::cos(t) - b0 * std::sin(t);
  out.target_im = a0 * std::sin(t) + b0 * std::cos(t);
  stats::MeanAcc re_acc, im_acc;
  FastStop stop;
  stop.horizon = t;
  stop.stop_on_axis = false;
  for (uint64_t r = 0; r < replicas; ++r) {
    auto res = simulate_fast(a0, b0, rng, stop);
    re_acc.add(static_cast<double>(res.state.a));
    im_acc.add(static_cast<double>(res.state.b));
  }
  out.mean_re = re_acc.mean();
  out.mean_im = im_acc.mean();
  out.se_re = re_acc.sem();
  out.se_im = im_acc.sem();
  return out;
}

SlowResult simulate_slow(int64_t z, rng::Stream& rng) {
  if (z < 1) throw std::invalid_argument("simulate_slow: start must be >= 1");
  SlowResult out;
  int64_t u = z, v = 1;
  double t = 0;
  out.jump_chain.emplace_back(u, v);
  while (u > 0) {
    // Superposed clocks: total rate 1/u + 1/v, and the death side wins with
    // probability (1/u) / (1/u + 1/v) = v / (u + v).
    const double rate = 1.0 / static_cast<double>(u) + 1.0 / static_cast<double>(v);
    t += rng.exponential() / rate;
    const double pick = rng.next_unit();
    if (pick * static_cast<double>(u + v) < static_cast<double>(v)) {
      u -= 1;
    } else {
      v += 1;
    }
    out.jump_chain.emplace_back(u, v);
  }
  out.final_v = v;
  out.extinction_time = t;
  return out;
}

namespace {

// Exact rational coefficient of (e^i - partial exponential sum) in the
// degree-n traversal-time polynomial; area_shift = 1 gives the swept-area
// variant (exponent n-2i+j instead of n-2i+j-1).
BigRational poly_coefficient(unsigned n, unsigned i, int area_shift) {
  BigRational inner(0);
  for (unsigned j = 0; j < i; ++j) {
    long e = static_cast<long>(n) - 2 * static_cast<long>(i) + static_cast<long>(j) - 1 +
             area_shift;
    inner += powq(BigInt(i), e) / BigRational(factorial(j));
  }
  BigRational lead = BigRational(factorial(i)) / BigRational(factorial(n - i));
  if ((n - i) % 2 == 1) lead = -lead;
  return lead * inner;
}

Real poly_value(unsigned n, int area_shift) {
  Real sum(0);
  for (unsigned i = 1; i <= n; ++i) {
    // Transcendental factor e^i minus its truncated series, kept separate
    // from the rational coefficient so cancellation happens once, here.
    BigRational partial(0);
    for (unsigned k = 0; k < i; ++k) partial += powq(BigInt(i), static_cast<long>(k)) / BigRational(factorial(k));
    Real ei = exp(Real(i)) - to_real(partial);
    sum += to_real(poly_coefficient(n, i, area_shift)) * ei;
  }
  return sum;
}

}  // namespace

Real tau_f_poly_exact(unsigned n, const PrecisionConfig& cfg) {
  if (n < 1) throw std::invalid_argument("tau_f_poly_exact: n >= 1 required");
  PrecisionConfig local = cfg;
  // Coefficients reach roughly n! before cancelling down to O(1).
  const auto floor_bits = static_cast<unsigned>(64 + std::ceil(n * std::log2(std::max(2u, n))));
  if (local.bits < floor_bits) local.bits = floor_bits;
  return escalate(local, [n](unsigned) { return poly_value(n, 0); });
}

Real area_poly_exact(unsigned n, const PrecisionConfig& cfg) {
  if (n < 1) throw std::invalid_argument("area_poly_exact: n >= 1 required");
  PrecisionConfig local = cfg;
  const auto floor_bits = static_cast<unsigned>(64 + std::ceil(n * std::log2(std::max(2u, n))));
  if (local.bits < floor_bits) local.bits = floor_bits;
  Real direct = escalate(local, [n](unsigned) { return poly_value(n, 1); });

  // The swept area decomposes over traversal legs, so the direct polynomial
  // must reproduce sum_m m * (time polynomial at m). Guard against any
  // coefficient slip; evaluation error is far below this tolerance.
  Real recombined(0);
  for (unsigned m = 1; m <= n; ++m) recombined += m * tau_f_poly_exact(m, cfg);
  if (abs(direct - recombined) > 1e-10 * (1 + abs(direct)))
    throw std::logic_error("area_poly_exact: leg decomposition identity failed");
  return direct;
}

}  // namespace shu::embed
