#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "shu/bignum.hpp"
#include "shu/lattice.hpp"
#include "shu/rng.hpp"
#include "shu/stats.hpp"

namespace shu::lamperti {

/// The post-jump height chain Z_k, viewed through W = sqrt(Z), is a random
/// walk whose increment moments at height x decide recurrence: the drift
/// decays like (1/3 - E[kappa]) / (2x) against a variance of about 1/6, so
/// everything hinges on 2x mu1(x) - mu2(x) as x grows.
struct MomentPoint {
  double x = 0.0;
  uint64_t samples = 0;
  double mu1 = 0.0, mu1_se = 0.0;  ///< mean W-increment and its standard error
  double mu2 = 0.0, mu2_se = 0.0;  ///< mean squared W-increment and its SE
  /// 2x mu1 - mu2 with a conservative 3-sigma half-width (SEs added, not
  /// pooled, since the two estimates share samples).
  double drift_stat() const { return 2.0 * x * mu1 - mu2; }
  double drift_band() const { return 3.0 * (2.0 * x * mu1_se + mu2_se); }
};

struct MomentProfile {
  std::string kappa_name;
  std::vector<MomentPoint> points;
};

/// Estimates increment moments of W at each grid height: every sample runs
/// one quadrant traversal from Z = round(x^2), applies the overshoot clamp,
/// and records sqrt(Z') - x. Grid heights must be >= 4 so the clamp at 1
/// stays out of the bulk. Requires kappa.mgf_ok().
MomentProfile increment_moments(const lattice::KappaSpec& kappa,
                                const std::vector<double>& x_grid,
                                uint64_t samples_per_point, rng::Stream& stream);

/// One embedded step z -> max(1, Z' - kappa). Heights at or below
/// exact_threshold traverse the quadrant step by step; above it the raw
/// landing height is drawn from a Gaussian surrogate with the limiting
/// traversal moments (mean z + 2/3, variance 2z/3 + 2/9), rounded. The
/// surrogate cannot reach 1 from above the threshold (a 15-sigma excursion),
/// so hitting times of height 1 keep their exact law.
int64_t embedded_step(int64_t z, const lattice::KappaSpec& kappa,
                      rng::Stream& stream, int64_t exact_threshold);

enum class Verdict { transient, null_recurrent, positive_recurrent };

const char* to_string(Verdict v);

struct ClassifyBudget {
  uint64_t return_paths = 10'000;
  int64_t return_start = 100;      ///< probe paths start at this post-jump height
  int64_t escape_height = 100'000; ///< crossing this counts as escape
  int64_t exact_threshold = 200;   ///< exact legs at or below, surrogate above
  uint64_t drift_samples = 150'000;
  double drift_x = 30.0;
  /// Decision bands for the return fraction, calibrated by pilot runs of the
  /// two point-mass references (kappa = 0 returns almost never, kappa = 1
  /// escapes almost never); both sit far from their bound.
  double transient_max_return = 0.90;
  double positive_min_return = 0.99;
  /// |E[kappa] - boundary| below this flags the verdict as near-critical.
  double threshold_band = 0.02;
};

struct ClassificationReport {
  std::string kappa_name;
  BigRational kappa_mean;       ///< exact
  Verdict verdict;              ///< from the exact mean against 1/3 and 2/3
  bool inconclusive = false;    ///< exact mean within threshold_band of a boundary
  double return_fraction = 0.0; ///< probe paths hitting height 1 before escaping
  uint64_t return_paths = 0;
  bool return_consistent = true;
  double drift_minus = 0.0;     ///< 2x mu1 - mu2 at drift_x; limit 1/3 - E[kappa]
  double drift_minus_band = 0.0;
  double drift_plus = 0.0;      ///< 2x mu1 + mu2 at drift_x; limit 2/3 - E[kappa]
  double drift_plus_band = 0.0;
  bool drift_consistent = true; ///< sign agreement whenever the minus band excludes 0
  ClassifyBudget budget;        ///< echo of the run parameters
};

/// Recurrence verdict from the exact overshoot mean (transient below 1/3,
/// positive recurrent above 2/3, null recurrent between, boundaries
/// included), corroborated by two Monte Carlo diagnostics: the drift
/// statistic at drift_x and the fraction of probe paths that fall back to
/// height 1 before escaping. The verdict itself never depends on the draws;
/// the consistency flags report whether the data backs it.
ClassificationReport classify(const lattice::KappaSpec& kappa,
                              const ClassifyBudget& budget, rng::Stream& stream);

struct DiffusionReport {
  uint64_t k = 0;  ///< embedded index at which the marginal is read
  uint64_t samples = 0;
  double gamma_shape = 0.0;  ///< 2 - 3 E[kappa]
  double gamma_rate = 3.0;
  double ks_statistic = 0.0;
  double ks_p_value = 0.0;
  double sample_mean = 0.0;  ///< of Z_k / k; limit (2 - 3 E[kappa]) / 3
  double sample_mean_se = 0.0;
};

/// Kolmogorov-Smirnov test of Z_k / k against the Gamma(2 - 3 E[kappa], 3)
/// limit, for E[kappa] < 2/3 and k >= 1000. Paths start at height 1 and by
/// default take every leg exactly; pass a finite exact_threshold to switch
/// the high legs to the Gaussian surrogate when speed matters more than an
/// exact pathwise law.
DiffusionReport diffusion_marginal_test(
    const lattice::KappaSpec& kappa, uint64_t k, uint64_t samples,
    rng::Stream& stream,
    int64_t exact_threshold = std::numeric_limits<int64_t>::max());

struct TailReport {
  uint64_t samples = 0;
  uint64_t censored = 0;        ///< paths cut by the step cap (excluded from fits)
  stats::TailFit tau_q_fit;     ///< quadrant count at the return to height 1
  stats::TailFit tau_fit;       ///< step count at that return
  stats::TailFit area_fit;      ///< swept area; an exponent below 1 shows E[area] = inf
  double predicted_tau_q = 0.0; ///< 3 E[kappa] - 1
  double predicted_tau = 0.0;   ///< (3 E[kappa] - 1) / 2
  double area_mean_early = 0.0; ///< swept-area mean over the first tenth
  double area_mean_full = 0.0;  ///< and over everything; keeps growing (no limit)
};

/// Survival-tail exponents of the return time to height 1 from height 2, in
/// quadrants and in steps, each fitted on the upper decile of the uncensored
/// sample with a 500-resample bootstrap interval. Requires E[kappa] >= 1/3
/// (else the return time has positive mass at infinity) and at least 1e5
/// samples; throws if more than 1% of paths are censored.
TailReport tail_exponent_tau_q(const lattice::KappaSpec& kappa, uint64_t samples,
                               rng::Stream& stream);

}  // namespace shu::lamperti
