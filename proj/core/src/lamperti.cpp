#include "shu/lamperti.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace shu::lamperti {

namespace {

double rational_to_double(const BigRational& q) { return q.convert_to<double>(); }

/// Raw landing height of one quadrant traversal from z, before the overshoot.
int64_t raw_landing(int64_t z, rng::Stream& stream) {
  return lattice::traverse_quadrant(z, stream).z_next;
}

/// Gaussian surrogate for the raw landing height, using the limiting
/// traversal moments. Only valid well above height 1.
int64_t surrogate_landing(int64_t z, rng::Stream& stream) {
  const double zd = static_cast<double>(z);
  const double sd = std::sqrt(2.0 * zd / 3.0 + 2.0 / 9.0);
  const int64_t raw = z + static_cast<int64_t>(std::llround(2.0 / 3.0 + sd * stream.normal()));
  return std::max<int64_t>(1, raw);
}

}  // namespace

MomentProfile increment_moments(const lattice::KappaSpec& kappa,
                                const std::vector<double>& x_grid,
                                uint64_t samples_per_point, rng::Stream& stream) {
  if (!kappa.mgf_ok()) throw std::invalid_argument("increment_moments: kappa lacks exponential moments");
  if (x_grid.empty()) throw std::invalid_argument("increment_moments: empty grid");
  if (samples_per_point == 0) throw std::invalid_argument("increment_moments: zero samples");
  for (double x : x_grid) {
    if (!(x >= 4.0)) throw std::invalid_argument("increment_moments: grid heights must be >= 4");
  }

  MomentProfile profile;
  profile.kappa_name = kappa.name();
  for (double x_req : x_grid) {
    const int64_t z = std::llround(x_req * x_req);
    const double x = std::sqrt(static_cast<double>(z));  // anchor of the rounded height
    stats::MeanAcc first, second;
    for (uint64_t s = 0; s < samples_per_point; ++s) {
      const int64_t raw = raw_landing(z, stream);
      const int64_t kap = kappa.sample(stream);
      const int64_t znext = std::max<int64_t>(1, raw - kap);
      const double w = std::sqrt(static_cast<double>(znext)) - x;
      first.add(w);
      second.add(w * w);
    }
    MomentPoint point;
    point.x = x;
    point.samples = first.count();
    point.mu1 = first.mean();
    point.mu1_se = first.sem();
    point.mu2 = second.mean();
    point.mu2_se = second.sem();
    profile.points.push_back(point);
  }
  return profile;
}

int64_t embedded_step(int64_t z, const lattice::KappaSpec& kappa,
                      rng::Stream& stream, int64_t exact_threshold) {
  if (z < 1) throw std::domain_error("embedded_step: height must be >= 1");
  const int64_t raw =
      z <= exact_threshold ? raw_landing(z, stream) : surrogate_landing(z, stream);
  const int64_t kap = kappa.sample(stream);
  return std::max<int64_t>(1, raw - kap);
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::transient: return "transient";
    case Verdict::null_recurrent: return "null-recurrent";
    case Verdict::positive_recurrent: return "positive-recurrent";
  }
  return "unknown";
}

ClassificationReport classify(const lattice::KappaSpec& kappa,
                              const ClassifyBudget& budget, rng::Stream& stream) {
  if (!kappa.mgf_ok()) throw std::invalid_argument("classify: kappa lacks exponential moments");
  if (budget.return_start < 2 || budget.escape_height <= budget.return_start) {
    throw std::invalid_argument("classify: need 2 <= return_start < escape_height");
  }

  ClassificationReport report;
  report.kappa_name = kappa.name();
  report.kappa_mean = kappa.mean();
  report.budget = budget;

  const BigRational third(1, 3), two_thirds(2, 3);
  if (kappa.mean() < third) {
    report.verdict = Verdict::transient;
  } else if (kappa.mean() <= two_thirds) {
    report.verdict = Verdict::null_recurrent;
  } else {
    report.verdict = Verdict::positive_recurrent;
  }
  const double mean_d = rational_to_double(kappa.mean());
  report.inconclusive = std::abs(mean_d - 1.0 / 3.0) < budget.threshold_band ||
                        std::abs(mean_d - 2.0 / 3.0) < budget.threshold_band;

  // Return-frequency probe. Legs from above 4x the exact threshold are taken
  // in blocks of z/32 with the per-leg mean and variance aggregated into one
  // Gaussian; a block's spread is about 0.14 z, so its endpoint sits several
  // sigmas above the exact region and returns are only ever detected through
  // exact legs (block endpoints are clamped to 2).
  const double kappa_mean = mean_d;
  const double kappa_var = rational_to_double(kappa.variance());
  uint64_t returned = 0;
  for (uint64_t p = 0; p < budget.return_paths; ++p) {
    int64_t z = budget.return_start;
    while (z != 1 && z <= budget.escape_height) {
      if (z / 4 > budget.exact_threshold) {
        const double legs = static_cast<double>(z) / 32.0;
        const double mean_shift = legs * (2.0 / 3.0 - kappa_mean);
        const double var =
            legs * (2.0 * static_cast<double>(z) / 3.0 + 2.0 / 9.0 + kappa_var);
        const int64_t shift =
            static_cast<int64_t>(std::llround(mean_shift + std::sqrt(var) * stream.normal()));
        z = std::max<int64_t>(2, z + shift);
      } else {
        z = embedded_step(z, kappa, stream, budget.exact_threshold);
      }
    }
    if (z == 1) ++returned;
  }
  report.return_paths = budget.return_paths;
  report.return_fraction =
      budget.return_paths == 0 ? 0.0
                               : static_cast<double>(returned) / static_cast<double>(budget.return_paths);
  if (report.verdict == Verdict::transient) {
    report.return_consistent = report.return_fraction <= budget.transient_max_return;
  } else if (report.verdict == Verdict::positive_recurrent) {
    report.return_consistent = report.return_fraction >= budget.positive_min_return;
  } else {
    report.return_consistent = true;
  }

  // Drift cross-check at a single height.
  if (budget.drift_samples > 0) {
    const MomentProfile profile =
        increment_moments(kappa, {budget.drift_x}, budget.drift_samples, stream);
    const MomentPoint& pt = profile.points.front();
    report.drift_minus = pt.drift_stat();
    report.drift_minus_band = pt.drift_band();
    report.drift_plus = 2.0 * pt.x * pt.mu1 + pt.mu2;
    report.drift_plus_band = pt.drift_band();
    const bool excludes_zero = std::abs(report.drift_minus) > report.drift_minus_band;
    if (excludes_zero) {
      const bool says_transient = report.drift_minus > 0;
      report.drift_consistent = says_transient == (report.verdict == Verdict::transient);
    }
  }
  return report;
}

DiffusionReport diffusion_marginal_test(const lattice::KappaSpec& kappa, uint64_t k,
                                        uint64_t samples, rng::Stream& stream,
                                        int64_t exact_threshold) {
  if (!(kappa.mean() < BigRational(2, 3))) {
    throw std::invalid_argument("diffusion_marginal_test: needs E[kappa] < 2/3");
  }
  if (k < 1000) throw std::invalid_argument("diffusion_marginal_test: horizon must be >= 1000");
  if (samples == 0) throw std::invalid_argument("diffusion_marginal_test: zero samples");

  DiffusionReport report;
  report.k = k;
  report.samples = samples;
  report.gamma_shape = 2.0 - 3.0 * rational_to_double(kappa.mean());
  report.gamma_rate = 3.0;

  std::vector<double> scaled;
  scaled.reserve(samples);
  stats::MeanAcc mean;
  for (uint64_t s = 0; s < samples; ++s) {
    int64_t z = 1;
    for (uint64_t j = 0; j < k; ++j) z = embedded_step(z, kappa, stream, exact_threshold);
    const double value = static_cast<double>(z) / static_cast<double>(k);
    scaled.push_back(value);
    mean.add(value);
  }
  const double shape = report.gamma_shape;
  const auto ks = stats::ks_test(
      std::move(scaled), [shape](double x) { return stats::gamma_cdf(x, shape, 3.0); });
  report.ks_statistic = ks.statistic;
  report.ks_p_value = ks.p_value;
  report.sample_mean = mean.mean();
  report.sample_mean_se = mean.sem();
  return report;
}

TailReport tail_exponent_tau_q(const lattice::KappaSpec& kappa, uint64_t samples,
                               rng::Stream& stream) {
  if (!(kappa.mean() >= BigRational(1, 3))) {
    throw std::invalid_argument("tail_exponent_tau_q: needs E[kappa] >= 1/3");
  }
  if (samples < 100'000) {
    throw std::invalid_argument("tail_exponent_tau_q: needs at least 1e5 samples");
  }

  TailReport report;
  report.samples = samples;
  const double mean_d = rational_to_double(kappa.mean());
  report.predicted_tau_q = 3.0 * mean_d - 1.0;
  report.predicted_tau = report.predicted_tau_q / 2.0;

  lattice::SimOptions opts;
  opts.step_cap = 20'000'000;
  opts.record_z = false;

  std::vector<double> tau_q, tau, area;
  tau_q.reserve(samples);
  tau.reserve(samples);
  area.reserve(samples);
  stats::MeanAcc area_early, area_full;
  const uint64_t tenth = samples / 10;
  for (uint64_t s = 0; s < samples; ++s) {
    const lattice::PathRecord rec = lattice::simulate_noisy(2, kappa, stream, opts);
    if (rec.censored) {
      ++report.censored;
      continue;
    }
    tau_q.push_back(static_cast<double>(rec.tau_q));
    tau.push_back(static_cast<double>(rec.tau));
    const double a = static_cast<double>(rec.area_halves) / 2.0;
    area.push_back(a);
    area_full.add(a);
    if (s < tenth) area_early.add(a);
  }
  if (report.censored * 100 > samples) {
    throw std::runtime_error("tail_exponent_tau_q: insufficient uncensored mass");
  }
  report.area_mean_early = area_early.mean();
  report.area_mean_full = area_full.mean();
  report.tau_q_fit = stats::fit_tail_exponent(tau_q, 0.10, 500, stream);
  report.tau_fit = stats::fit_tail_exponent(tau, 0.10, 500, stream);
  report.area_fit = stats::fit_tail_exponent(area, 0.10, 500, stream);
  return report;
}

}  // namespace shu::lamperti
