#pragma once

#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "shu/precision.hpp"
#include "shu/rng.hpp"

namespace shu::embed {

/// Continuous-time lattice state. Jumps arrive at rate |a| + |b|; each jump
/// moves a against sgn(b) with probability |b|/(|a|+|b|), else moves b with
/// sgn(a). The mean of A(t) + iB(t) rotates as e^{it}.
struct CtmcState {
  int64_t a = 0;
  int64_t b = 0;
  double t = 0.0;
};

struct FastStop {
  /// Absolute clock value at which the run is cut off.
  double horizon = std::numeric_limits<double>::infinity();
  /// Stop at the first jump that lands a on zero.
  bool stop_on_axis = true;
  uint64_t event_cap = 200'000'000;
  bool record_path = false;
};

struct FastResult {
  CtmcState state;   ///< where the run stopped
  bool hit_axis = false;
  double tau_f = 0;  ///< first time a = 0; meaningful only when hit_axis
  uint64_t events = 0;
  std::vector<CtmcState> path;  ///< filled when record_path is set
};

/// Event-driven run of the rotating chain from (a0, b0) != (0, 0). One
/// exponential and one categorical draw per event. hit_axis = false signals
/// the horizon was reached first (an error for axis-stop callers).
FastResult simulate_fast(int64_t a0, int64_t b0, rng::Stream& rng,
                         const FastStop& stop = {});

/// Empirical test of the rotation martingale: the mean of (A(t), B(t)) over
/// independent replicas against the exact target (a0 + i b0) e^{it}.
struct RotationResidual {
  uint64_t replicas = 0;
  double target_re = 0, target_im = 0;
  double mean_re = 0, mean_im = 0;
  double se_re = 0, se_im = 0;
  double residual_re() const { return mean_re - target_re; }
  double residual_im() const { return mean_im - target_im; }
};

RotationResidual martingale_residual(int64_t a0, int64_t b0, double t,
                                     uint64_t replicas, rng::Stream& rng);

/// One run of the paired death/birth chains: u starts at z with death rate
/// 1/u, v starts at 1 with birth rate 1/v, both independent; stops when u
/// hits zero. The embedded jump chain moves v with probability u/(u+v), so
/// final_v has the one-traversal hitting law from height z.
struct SlowResult {
  std::vector<std::pair<int64_t, int64_t>> jump_chain;  ///< (u, v) after each jump, start included
  int64_t final_v = 0;
  double extinction_time = 0;  ///< clock value when u reached zero
};

SlowResult simulate_slow(int64_t z, rng::Stream& rng);

/// Expected quadrant-traversal time of the rotating chain started at (n, 0),
/// in closed form: sum_{i=1}^n c_i (e^i - sum_{k<i} i^k/k!) with exact
/// rational c_i = (-1)^{n-i} (i!/(n-i)!) sum_{j=0}^{i-1} i^{n-2i+j-1} / j!.
/// The alternating coefficients cancel heavily, so evaluation escalates
/// precision until stable. Approaches pi/2 as n grows.
Real tau_f_poly_exact(unsigned n, const PrecisionConfig& cfg = {});

/// Expected area swept during that traversal; same shape with exponent
/// n-2i+j. Internally cross-checked against sum_{m<=n} m * tau_f_poly_exact(m),
/// which it must equal. Approaches pi n^2 / 4.
Real area_poly_exact(unsigned n, const PrecisionConfig& cfg = {});

}  // namespace shu::embed
