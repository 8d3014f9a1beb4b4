#include "shu/quadrant.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "shu/stats.hpp"

namespace shu::quadrant {

IncrementLaw IncrementLaw::uniform01() {
  IncrementLaw law;
  law.kind_ = Kind::uniform01;
  law.name_ = "uniform01";
  law.mean_ = 0.5;
  law.variance_ = 1.0 / 12.0;
  return law;
}

IncrementLaw IncrementLaw::exponential() {
  IncrementLaw law;
  law.kind_ = Kind::exponential;
  law.name_ = "exponential";
  law.mean_ = 1.0;
  law.variance_ = 1.0;
  return law;
}

IncrementLaw IncrementLaw::erlang2() {
  IncrementLaw law;
  law.kind_ = Kind::erlang2;
  law.name_ = "erlang2";
  law.mean_ = 2.0;
  law.variance_ = 2.0;
  return law;
}

IncrementLaw IncrementLaw::sqrt_uniform() {
  IncrementLaw law;
  law.kind_ = Kind::sqrt_uniform;
  law.name_ = "sqrt-uniform";
  law.mean_ = 2.0 / 3.0;
  law.variance_ = 1.0 / 18.0;
  return law;
}

IncrementLaw IncrementLaw::custom(std::string name, double mean, double variance,
                                  std::function<double(rng::Stream&)> sampler,
                                  bool fourth_moment_ok) {
  if (!(mean > 0.0) || !(variance > 0.0)) {
    throw std::invalid_argument("IncrementLaw: mean and variance must be positive");
  }
  if (!sampler) throw std::invalid_argument("IncrementLaw: missing sampler");
  IncrementLaw law;
  law.kind_ = Kind::custom;
  law.name_ = std::move(name);
  law.mean_ = mean;
  law.variance_ = variance;
  law.fourth_moment_ok_ = fourth_moment_ok;
  law.sampler_ = std::move(sampler);
  return law;
}

IncrementLaw IncrementLaw::parse(const std::string& text) {
  if (text == "uniform01") return uniform01();
  if (text == "exponential") return exponential();
  if (text == "erlang2") return erlang2();
  if (text == "sqrt-uniform") return sqrt_uniform();
  throw std::invalid_argument("IncrementLaw: unknown law '" + text + "'");
}

double IncrementLaw::sample(rng::Stream& stream) const {
  switch (kind_) {
    case Kind::uniform01: return stream.next_unit();
    case Kind::exponential: return stream.exponential();
    case Kind::erlang2: return stream.exponential() + stream.exponential();
    case Kind::sqrt_uniform: return std::sqrt(stream.next_unit());
    case Kind::custom: return sampler_(stream);
  }
  throw std::logic_error("IncrementLaw: bad kind");
}

namespace {

/// One crossing from height a: T = first n with sum X'_i > a, R = sum of the
/// X_i over those same n steps.
Crossing cross_once(const IncrementLaw& law, double a, rng::Stream& stream) {
  Crossing c;
  double depleted = 0.0;
  do {
    depleted += law.sample(stream);
    c.restart += law.sample(stream);
    ++c.steps;
  } while (depleted <= a);
  return c;
}

}  // namespace

std::vector<Crossing> simulate_crossings(const IncrementLaw& law, double a0,
                                         uint64_t crossings, rng::Stream& stream) {
  if (!(a0 > 0.0)) throw std::invalid_argument("simulate_crossings: a0 must be positive");
  std::vector<Crossing> out;
  out.reserve(crossings);
  double height = a0;
  for (uint64_t k = 0; k < crossings; ++k) {
    out.push_back(cross_once(law, height, stream));
    height = out.back().restart;
  }
  return out;
}

DeltaMoments delta_moments(const IncrementLaw& law, double x, uint64_t samples,
                           rng::Stream& stream) {
  if (!(x > 0.0)) throw std::invalid_argument("delta_moments: x must be positive");
  if (samples == 0) throw std::invalid_argument("delta_moments: zero samples");
  if (!law.fourth_moment_ok()) {
    throw std::invalid_argument("delta_moments: law lacks a fourth moment");
  }
  stats::MeanAcc first, second;
  for (uint64_t s = 0; s < samples; ++s) {
    const Crossing c = cross_once(law, x, stream);
    const double delta = c.restart - x;
    first.add(delta);
    second.add(delta * delta);
  }
  DeltaMoments out;
  out.x = x;
  out.samples = samples;
  out.mean = first.mean();
  out.mean_se = first.sem();
  out.second = second.mean();
  out.second_se = second.sem();
  return out;
}

const char* to_string(QuadrantVerdict v) {
  switch (v) {
    case QuadrantVerdict::transient: return "transient";
    case QuadrantVerdict::recurrent: return "recurrent";
    case QuadrantVerdict::near_critical:
      return "critical/near-critical (empirical diagnostics only)";
  }
  return "unknown";
}

QuadrantReport classify_quadrant(const IncrementLaw& law, const QuadrantBudget& budget,
                                 rng::Stream& stream) {
  if (!law.fourth_moment_ok()) {
    throw std::invalid_argument("classify_quadrant: law lacks a fourth moment");
  }
  if (!(budget.drift_y > 0.0)) {
    throw std::invalid_argument("classify_quadrant: drift height must be positive");
  }

  QuadrantReport report;
  report.law_name = law.name();
  report.mu = law.mean();
  report.sigma2 = law.variance();
  report.budget = budget;

  const double mu2 = report.mu * report.mu;
  report.recurrent_side = mu2 <= report.sigma2;
  report.criticality = std::abs(mu2 - report.sigma2) / (mu2 + report.sigma2);
  if (report.criticality < budget.critical_ratio) {
    report.verdict = QuadrantVerdict::near_critical;
  } else {
    report.verdict =
        report.recurrent_side ? QuadrantVerdict::recurrent : QuadrantVerdict::transient;
  }

  if (budget.drift_samples > 0) {
    const double y = budget.drift_y;
    const double start = y * y;
    stats::MeanAcc first, second;
    for (uint64_t s = 0; s < budget.drift_samples; ++s) {
      const Crossing c = cross_once(law, start, stream);
      const double dv = std::sqrt(c.restart) - y;
      first.add(dv);
      second.add(dv * dv);
    }
    report.v_drift_stat = 2.0 * y * first.mean() - second.mean();
    report.v_drift_band = 3.0 * (2.0 * y * first.sem() + second.sem());
    if (report.verdict != QuadrantVerdict::near_critical &&
        std::abs(report.v_drift_stat) > report.v_drift_band) {
      const bool says_transient = report.v_drift_stat > 0;
      report.drift_consistent =
          says_transient == (report.verdict == QuadrantVerdict::transient);
    }
  }
  return report;
}

}  // namespace shu::quadrant
