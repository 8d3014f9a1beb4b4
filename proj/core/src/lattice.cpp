#include "shu/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace shu::lattice {

namespace {

int64_t iabs(int64_t v) { return v < 0 ? -v : v; }

LatticeState with_crossing(const LatticeState& prev, int64_t nx, int64_t ny) {
  LatticeState next{nx, ny, prev.quadrant_crossings};
  if (next.on_axis()) ++next.quadrant_crossings;
  return next;
}

}  // namespace

LatticeState step_simple(const LatticeState& state, double u) {
  if (state.x == 0 && state.y == 0) throw std::domain_error("step_simple: origin");
  const auto ax = static_cast<double>(iabs(state.x));
  const auto ay = static_cast<double>(iabs(state.y));
  if (u < ax / (ax + ay)) {
    return with_crossing(state, state.x, state.y + sgn(state.x));
  }
  return with_crossing(state, state.x - sgn(state.y), state.y);
}

LatticeState step_axis_noisy(const LatticeState& state, int64_t kappa) {
  if (!state.on_axis() || (state.x == 0 && state.y == 0)) {
    throw std::domain_error("step_axis_noisy: needs a non-origin axis state");
  }
  if (state.x == 0) {
    const int64_t h = std::max<int64_t>(1, iabs(state.y) - kappa);
    return with_crossing(state, -sgn(state.y), sgn(state.y) * h);
  }
  const int64_t h = std::max<int64_t>(1, iabs(state.x) - kappa);
  return with_crossing(state, sgn(state.x) * h, sgn(state.x));
}

LatticeState step_axis_leaky(const LatticeState& state) {
  if (!state.on_axis() || (state.x == 0 && state.y == 0)) {
    throw std::domain_error("step_axis_leaky: needs a non-origin axis state");
  }
  if (state.x == 0) return with_crossing(state, -sgn(state.y), state.y - sgn(state.y));
  return with_crossing(state, state.x - sgn(state.x), sgn(state.x));
}

uint64_t triangle_area_halves(const LatticeState& prev, const LatticeState& next) {
  const auto cross = static_cast<__int128>(prev.x) * next.y -
                     static_cast<__int128>(next.x) * prev.y;
  return static_cast<uint64_t>(cross < 0 ? -cross : cross);
}

BigRational leaky_invariant(int64_t x, int64_t y) {
  // Work in doubled coordinates so both terms are integers.
  const BigInt a = 2 * BigInt(x) + sgn(y) - (y == 0 ? sgn(x) : 0);
  const BigInt b = 2 * BigInt(y) - sgn(x) - (x == 0 ? sgn(y) : 0);
  return BigRational(a * a + b * b, 4);
}

KappaSpec KappaSpec::point(int64_t value) {
  KappaSpec spec;
  spec.kind_ = Kind::point;
  spec.a_ = value;
  spec.mean_ = BigRational(value);
  spec.name_ = "point:" + std::to_string(value);
  return spec;
}

KappaSpec KappaSpec::two_point(int64_t a, int64_t b, const BigRational& p_a) {
  if (p_a < 0 || p_a > 1) throw std::invalid_argument("KappaSpec: p_a outside [0,1]");
  KappaSpec spec;
  spec.kind_ = Kind::two_point;
  spec.a_ = a;
  spec.b_ = b;
  spec.p_a_ = p_a.convert_to<double>();
  spec.mean_ = p_a * a + (1 - p_a) * b;
  spec.variance_ = p_a * a * a + (1 - p_a) * b * b - spec.mean_ * spec.mean_;
  spec.name_ = "twopoint:" + std::to_string(a) + ":" + std::to_string(b) + ":" + to_string(p_a);
  return spec;
}

KappaSpec KappaSpec::geometric(const BigRational& p) {
  if (p <= 0 || p > 1) throw std::invalid_argument("KappaSpec: geometric needs 0 < p <= 1");
  KappaSpec spec;
  spec.kind_ = Kind::geometric;
  const double pd = p.convert_to<double>();
  spec.log1m_p_ = pd < 1.0 ? std::log1p(-pd) : 0.0;
  spec.mean_ = (1 - p) / p;
  spec.variance_ = (1 - p) / (p * p);
  spec.name_ = "geometric:" + to_string(p);
  return spec;
}

KappaSpec KappaSpec::from_pmf(std::vector<std::pair<int64_t, BigRational>> entries) {
  if (entries.empty()) throw std::invalid_argument("KappaSpec: empty pmf");
  BigRational total(0), mean(0), second(0);
  for (const auto& [value, prob] : entries) {
    if (prob < 0) throw std::invalid_argument("KappaSpec: negative probability");
    total += prob;
    mean += prob * value;
    second += prob * value * value;
  }
  if (total != 1) throw std::invalid_argument("KappaSpec: pmf must sum to 1");

  KappaSpec spec;
  spec.kind_ = Kind::pmf;
  spec.mean_ = mean;
  spec.variance_ = second - mean * mean;
  spec.name_ = "pmf";
  for (const auto& [value, prob] : entries) {
    spec.name_ += ":" + std::to_string(value) + ":" + to_string(prob);
    spec.values_.push_back(value);
  }

  // Walker/Vose alias table over the scaled weights.
  const std::size_t n = entries.size();
  std::vector<double> scaled(n);
  for (std::size_t i = 0; i < n; ++i) {
    scaled[i] = entries[i].second.convert_to<double>() * static_cast<double>(n);
  }
  spec.accept_.assign(n, 1.0);
  spec.alias_.assign(n, 0);
  std::vector<std::size_t> small, large;
  for (std::size_t i = 0; i < n; ++i) (scaled[i] < 1.0 ? small : large).push_back(i);
  while (!small.empty() && !large.empty()) {
    const std::size_t s = small.back(), l = large.back();
    small.pop_back();
    spec.accept_[s] = scaled[s];
    spec.alias_[s] = static_cast<uint32_t>(l);
    scaled[l] -= 1.0 - scaled[s];
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  return spec;
}

KappaSpec KappaSpec::parse(const std::string& text) {
  std::vector<std::string> tokens;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto pos = text.find(':', start);
    if (pos == std::string::npos) {
      tokens.push_back(text.substr(start));
      break;
    }
    tokens.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
  if (tokens.empty()) throw std::invalid_argument("KappaSpec: empty descriptor");
  const std::string& kind = tokens[0];
  try {
    if (kind == "point" && tokens.size() == 2) {
      return point(std::stoll(tokens[1]));
    }
    if (kind == "twopoint" && tokens.size() == 4) {
      return two_point(std::stoll(tokens[1]), std::stoll(tokens[2]), parse_rational(tokens[3]));
    }
    if (kind == "geometric" && tokens.size() == 2) {
      return geometric(parse_rational(tokens[1]));
    }
    if (kind == "pmf" && tokens.size() >= 3 && tokens.size() % 2 == 1) {
      std::vector<std::pair<int64_t, BigRational>> entries;
      for (std::size_t i = 1; i + 1 < tokens.size(); i += 2) {
        entries.emplace_back(std::stoll(tokens[i]), parse_rational(tokens[i + 1]));
      }
      return from_pmf(std::move(entries));
    }
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("KappaSpec: cannot parse '" + text + "'");
  }
  throw std::invalid_argument("KappaSpec: cannot parse '" + text + "'");
}

int64_t KappaSpec::sample(rng::Stream& stream) const {
  switch (kind_) {
    case Kind::point:
      return a_;
    case Kind::two_point:
      return stream.next_unit() < p_a_ ? a_ : b_;
    case Kind::geometric: {
      if (log1m_p_ == 0.0) return 0;  // p == 1
      const double draws = std::floor(std::log(stream.next_unit()) / log1m_p_);
      return static_cast<int64_t>(draws);
    }
    case Kind::pmf: {
      const double scaled = stream.next_unit() * static_cast<double>(values_.size());
      auto idx = static_cast<std::size_t>(scaled);
      if (idx >= values_.size()) idx = values_.size() - 1;
      const double frac = scaled - static_cast<double>(idx);
      return frac < accept_[idx] ? values_[idx] : values_[alias_[idx]];
    }
  }
  throw std::logic_error("KappaSpec: unreachable");
}

Traversal traverse_quadrant(int64_t z, rng::Stream& stream, uint64_t step_cap) {
  if (z < 1) throw std::domain_error("traverse_quadrant: z must be >= 1");
  Traversal t;
  int64_t x = z, y = 0;
  while (x > 0) {
    if (t.steps >= step_cap) throw Censored("traverse_quadrant: step cap reached");
    const auto ax = static_cast<double>(x), ay = static_cast<double>(y);
    if (stream.next_unit() < ax / (ax + ay)) {
      ++y;
      t.area_halves += static_cast<u128>(x);
    } else {
      --x;
      t.area_halves += static_cast<u128>(y);
    }
    ++t.steps;
  }
  t.z_next = y;
  return t;
}

PathRecord simulate_leaky_from(LatticeState state, rng::Stream& stream,
                               const SimOptions& opts) {
  if (state.x == 0 && state.y == 0) throw std::domain_error("simulate_leaky: origin");
  PathRecord rec;
  while (true) {
    if (rec.steps >= opts.step_cap) {
      rec.censored = true;
      return rec;
    }
    const LatticeState prev = state;
    state = state.on_axis() ? step_axis_leaky(state)
                            : step_simple(state, stream.next_unit());
    ++rec.steps;
    rec.area_halves += triangle_area_halves(prev, state);
    if (state.on_axis()) {
      ++rec.tau_q;
      if (opts.record_z) rec.z_sequence.push_back(state.ell1());
    }
    if (state.ell1() == 1) {
      rec.tau = rec.steps;
      return rec;
    }
  }
}

PathRecord simulate_leaky(int64_t z0, rng::Stream& stream, const SimOptions& opts) {
  if (z0 < 1) throw std::domain_error("simulate_leaky: z0 must be >= 1");
  PathRecord rec = simulate_leaky_from({z0, 1, 0}, stream, opts);
  if (opts.record_z) rec.z_sequence.insert(rec.z_sequence.begin(), z0);
  return rec;
}

PathRecord simulate_noisy(int64_t z0, const KappaSpec& kappa, rng::Stream& stream,
                          const SimOptions& opts) {
  if (z0 < 1) throw std::domain_error("simulate_noisy: z0 must be >= 1");
  PathRecord rec;
  if (opts.record_z) rec.z_sequence.push_back(z0);
  LatticeState state{z0, 1, 0};
  uint64_t hits = 0;
  while (true) {
    if (rec.steps >= opts.step_cap) {
      rec.censored = true;
      rec.tau = rec.steps;
      rec.tau_q = hits;
      return rec;
    }
    const LatticeState prev = state;
    if (state.on_axis()) {
      const int64_t z_raw = state.ell1();
      const int64_t kap = kappa.sample(stream);
      const int64_t ztilde = std::max<int64_t>(1, z_raw - kap);
      ++hits;
      if (opts.record_z) rec.z_sequence.push_back(ztilde);
      if (ztilde == 1) {
        // Stopping time: the hit itself, before the jump.
        rec.tau = rec.steps;
        rec.tau_q = hits;
        return rec;
      }
      state = step_axis_noisy(state, kap);
    } else {
      state = step_simple(state, stream.next_unit());
    }
    ++rec.steps;
    rec.area_halves += triangle_area_halves(prev, state);
  }
}

}  // namespace shu::lattice
