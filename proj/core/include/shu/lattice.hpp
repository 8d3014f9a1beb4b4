#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "shu/bignum.hpp"
#include "shu/rng.hpp"

namespace shu::lattice {

inline int64_t sgn(int64_t v) { return (v > 0) - (v < 0); }

/// A point of the punctured lattice plus winding bookkeeping.
struct LatticeState {
  int64_t x = 0;
  int64_t y = 0;
  uint64_t quadrant_crossings = 0;

  bool on_axis() const { return x == 0 || y == 0; }
  int64_t ell1() const { return (x < 0 ? -x : x) + (y < 0 ? -y : y); }
  bool operator==(const LatticeState& o) const { return x == o.x && y == o.y; }
};

/// Interior transition: with probability |x|/(|x|+|y|) the y coordinate moves
/// one unit in the direction of sgn x; otherwise the x coordinate moves one
/// unit against sgn y. The four quadrants are therefore swept anticlockwise.
/// quadrant_crossings increments whenever the new state lands on an axis.
LatticeState step_simple(const LatticeState& state, double u);

/// Axis transition with overshoot clamp: from (0,y) to
/// (-sgn y, sgn y * max(1, |y|-kappa)); from (x,0) to
/// (sgn x * max(1, |x|-kappa), sgn x). Rejects interior states.
LatticeState step_axis_noisy(const LatticeState& state, int64_t kappa);

/// Deterministic leaking axis transition: (0,y) -> (-sgn y, y - sgn y) and
/// (x,0) -> (x - sgn x, sgn x). Coincides with step_axis_noisy(kappa=1)
/// outside the four unit states, where it instead feeds the absorbing cycle.
LatticeState step_axis_leaky(const LatticeState& state);

/// Twice the area of the triangle (origin, prev, next): |x_p*y_n - x_n*y_p|.
/// Exact for every step shape, including diagonal axis jumps.
uint64_t triangle_area_halves(const LatticeState& prev, const LatticeState& next);

/// Exact quadratic that the leaking dynamics hold constant in one-step mean:
/// (x + s_y/2 - [y=0] s_x/2)^2 + (y - s_x/2 - [x=0] s_y/2)^2 with s = sgn.
BigRational leaky_invariant(int64_t x, int64_t y);

/// Distribution descriptor for the axis overshoot kappa. All supported kinds
/// have finite exponential moments, so mgf_ok() is an assertion, not a guess.
class KappaSpec {
 public:
  enum class Kind { point, two_point, geometric, pmf };

  static KappaSpec point(int64_t value);
  /// Takes value a with probability p_a, else b.
  static KappaSpec two_point(int64_t a, int64_t b, const BigRational& p_a);
  /// Support {0,1,2,...} with P(k) = p*(1-p)^k; mean (1-p)/p.
  static KappaSpec geometric(const BigRational& p);
  /// Finite support; probabilities must sum to exactly 1.
  static KappaSpec from_pmf(std::vector<std::pair<int64_t, BigRational>> entries);
  /// Grammar: point:c | twopoint:a:b:p_a | geometric:p | pmf:v1:p1:v2:p2:...
  /// Probabilities accept decimals ("0.25") or fractions ("1/4").
  static KappaSpec parse(const std::string& text);

  Kind kind() const { return kind_; }
  /// Canonical text form, round-trips through parse().
  const std::string& name() const { return name_; }
  const BigRational& mean() const { return mean_; }
  const BigRational& variance() const { return variance_; }
  bool mgf_ok() const { return true; }

  /// Point masses consume no randomness; the other kinds draw one uniform.
  int64_t sample(rng::Stream& stream) const;

 private:
  KappaSpec() = default;

  Kind kind_ = Kind::point;
  std::string name_;
  BigRational mean_;
  BigRational variance_;
  // point / two_point parameters
  int64_t a_ = 0, b_ = 0;
  double p_a_ = 1.0;
  // geometric parameter
  double log1m_p_ = 0.0;
  // alias table for explicit pmfs
  std::vector<int64_t> values_;
  std::vector<double> accept_;
  std::vector<uint32_t> alias_;
};

/// Thrown when a step cap trips before the stopping time.
struct Censored : std::runtime_error {
  explicit Censored(const std::string& what) : std::runtime_error(what) {}
};

struct SimOptions {
  uint64_t step_cap = 1'000'000'000;
  bool record_z = true;
};

/// One excursion's statistics. area_halves is exact (twice the swept area).
struct PathRecord {
  bool censored = false;
  uint64_t tau = 0;      // steps to the stopping time (steps so far if censored)
  uint64_t tau_q = 0;    // quadrant index of the stopping time
  uint64_t steps = 0;
  u128 area_halves = 0;
  std::vector<int64_t> z_sequence;  // post-jump heights, starting with z0
};

struct Traversal {
  int64_t z_next = 0;
  uint64_t steps = 0;    // equals z + z_next by construction
  u128 area_halves = 0;
};

/// One quadrant sweep in the canonical frame: from (z,0), first step forced
/// vertical, until the far axis is hit at (0, z_next). By rotation symmetry
/// this is the law of every quadrant traversal, and steps/area carry over.
Traversal traverse_quadrant(int64_t z, rng::Stream& stream,
                            uint64_t step_cap = 1'000'000'000);

/// Leaking walk from the given state until the four unit states absorb it.
/// Absorption is checked only after at least one step, so the degenerate
/// start (0,1) still takes its one step to (-1,0).
PathRecord simulate_leaky_from(LatticeState start, rng::Stream& stream,
                               const SimOptions& opts = {});

/// Leaking walk from (z0, 1), z0 >= 1.
PathRecord simulate_leaky(int64_t z0, rng::Stream& stream, const SimOptions& opts = {});

/// Noisy walk from (z0, 1). Each axis hit draws kappa, clamps the overshoot,
/// and jumps into the next quadrant. Stops at the first axis hit whose
/// post-jump height would be 1; that final jump is excluded from tau, steps
/// and area. z_sequence holds the post-jump heights (z0 first).
PathRecord simulate_noisy(int64_t z0, const KappaSpec& kappa, rng::Stream& stream,
                          const SimOptions& opts = {});

}  // namespace shu::lattice
