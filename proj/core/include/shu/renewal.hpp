#pragma once

#include <cstdint>
#include <vector>

#include "shu/precision.hpp"
#include "shu/rng.hpp"

namespace shu::renewal {

/// Number of i.i.d. Uniform(0,1) arrivals needed for the running sum to
/// exceed t, i.e. N(t) = min{ i >= 1 : U_1 + ... + U_i > t }.
///
/// Always >= floor(t) + 1 because each summand is below one.  N(0) = 1.
uint64_t sample_renewal_count(double t, rng::Stream& rng);

/// E[N(t)] as a finite alternating series,
///     f(t) = sum_{i=0}^{floor(t)} (i - t)^i e^{t - i} / i!,
/// with 0^0 = 1 so that f(0) = 1.  The terms grow before they cancel, so the
/// sum is evaluated in extended precision: the working precision starts at
/// 64 + ceil(t log2 t) bits and doubles until two successive evaluations
/// agree within cfg.target_tol.
Real renewal_function_exact(double t, const PrecisionConfig& cfg = {});

/// A nonzero root of lambda - 1 + exp(-lambda) in the upper half plane,
/// index n = 1, 2, ... ordered by increasing imaginary part.
struct CharRoot {
  unsigned index = 0;
  Real re;
  Real im;
  Real residual;  ///< |lambda - 1 + exp(-lambda)| at the returned point
};

/// The first `count` upper-half-plane roots of lambda - 1 + exp(-lambda),
/// found by Newton iteration from the seeds
///     lambda_n^(0) = -log(2 pi n) + (2n + 1/2) pi i.
/// Each returned root has residual below 1e-12; roots are pairwise distinct
/// and sorted by imaginary part.
std::vector<CharRoot> char_roots(unsigned count, const PrecisionConfig& cfg = {});

/// Pole expansion of the renewal function,
///     f(t) ~ 2t + 2/3 + sum_n 2 e^{a_n t} (a_n cos(b_n t) + b_n sin(b_n t)) / (a_n^2 + b_n^2),
/// truncated after `pole_pairs` conjugate pairs (a_n + i b_n the n-th root
/// from char_roots).  Converges rapidly in t because a_n < 0.
Real renewal_function_asymptotic(double t, unsigned pole_pairs,
                                 const PrecisionConfig& cfg = {});

/// Monte Carlo summary of N(t) over independent replicas.
struct CountMoments {
  uint64_t replicas = 0;
  double mean = 0.0;
  double mean_se = 0.0;
  double second_moment = 0.0;
  double second_moment_se = 0.0;
  double variance = 0.0;
  double variance_se = 0.0;
};

CountMoments count_moments_mc(double t, uint64_t replicas, rng::Stream& rng);

}  // namespace shu::renewal
