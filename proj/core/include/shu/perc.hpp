#pragma once

#include <cstddef>
#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "shu/rng.hpp"

namespace shu::perc {

/// Vertex of the oriented graph on the covering surface of the punctured
/// plane. winding counts net axis crossings (four per full turn) relative to
/// the starting sheet; it increments whenever a path lands on an axis.
struct CoverVertex {
  int64_t x = 0;
  int64_t y = 0;
  int64_t winding = 0;
  bool operator==(const CoverVertex&) const = default;
};

struct CoverVertexHash {
  size_t operator()(const CoverVertex& v) const noexcept;
};

/// Per-vertex out-edge choices, derived lazily from a counter-based function
/// of (seed, x, y, winding): reproducible, independent across vertices, and
/// immutable once queried. The memo only caches; it never changes a value.
class EdgeStore {
 public:
  explicit EdgeStore(uint64_t seed) : seed_(seed) {}
  uint64_t seed() const { return seed_; }

  /// True when the vertex routes to (x - sgn y, y); false means (x, y + sgn x).
  /// Axis vertices are forced: (x,0) always vertical, (0,y) always horizontal.
  bool horizontal_chosen(const CoverVertex& v);

  /// Head of the unique out-edge; winding increments when it lands on an axis.
  CoverVertex out_edge(const CoverVertex& v);

  size_t queried() const { return memo_.size(); }

 private:
  uint64_t seed_;
  std::unordered_map<CoverVertex, bool, CoverVertexHash> memo_;
};

struct CoalesceBudget {
  int64_t max_axis_crossings = 24;  ///< six full turns past the start sheet
  uint64_t max_steps = 10'000'000;  ///< total vertex visits across both paths
};

struct CoalesceResult {
  bool met = false;
  CoverVertex meeting;  ///< first vertex common to both paths, when met
  uint64_t steps_a = 0;
  uint64_t steps_b = 0;
};

/// Advances both oriented paths through a shared store until they hit a
/// common vertex, from which point they agree forever. The pointer with the
/// smaller angular position (winding, then in-sheet angle) moves first, so
/// the search needs no global path storage beyond the visited sets. A miss
/// within the budget is reported, not thrown: coalescence is almost sure but
/// admits no uniform bound.
CoalesceResult trace_and_coalesce(const CoverVertex& a, const CoverVertex& b,
                                  EdgeStore& store, const CoalesceBudget& budget = {});

/// Vertex of the dual graph, stored by the lower-left corner of its unit
/// square: the dual point itself is (cx + 1/2, cy + 1/2). winding decrements
/// as the dual path crosses quadrant boundaries (it runs clockwise).
struct DualVertex {
  int64_t cx = 0;
  int64_t cy = 0;
  int64_t winding = 0;
  bool operator==(const DualVertex&) const = default;
};

/// The lattice corner of d's square lying clockwise-nearest to the origin:
/// (p + 1/2 sgn q, q - 1/2 sgn p) for dual point (p, q). Its out-edge choice
/// drives the dual step.
std::pair<int64_t, int64_t> dual_anchor(const DualVertex& d);

/// Reflection of the anchor across the x axis: (c_x, -c_y). The image of a
/// dual path under this map runs the leaking walk.
std::pair<int64_t, int64_t> phi_map(const DualVertex& d);

/// Unique dual out-edge: the dual point moves horizontally by sgn q when the
/// anchor chose its horizontal edge, else vertically by -sgn p, crossing the
/// unit edge the anchor declined.
DualVertex dual_out_edge(const DualVertex& d, EdgeStore& store);

struct InGraphBudget {
  uint64_t max_vertices = 1'000'000;
  int64_t max_axis_crossings = 24;
};

struct InGraphResult {
  uint64_t size = 0;    ///< vertices whose path passes through the target, itself included
  bool censored = false;  ///< true when a budget pruned the backward search
};

/// Backward-reachability count in the quadrant-restricted model (sites with
/// x >= 0, y > 0, one sheet; I(x,0) = 0 for x > 0 by convention). The search
/// enumerates the at most two candidate predecessors of each vertex and asks
/// the store whether their edges point here.
InGraphResult in_graph_restricted(int64_t x, int64_t y, EdgeStore& store,
                                  uint64_t max_vertices = 1'000'000);

/// Same count on the full covering surface. In-graphs are almost surely
/// finite trees, but their size has no finite mean, so budgets matter here.
InGraphResult in_graph_cover(const CoverVertex& v, EdgeStore& store,
                             const InGraphBudget& budget = {});

/// Expected-time table T(x, y) for the quadrant walk absorbed at x = 0:
/// T(x,y) = 1/(x+y) + x/(x+y) T(x,y+1) + y/(x+y) T(x-1,y), T(0,y) = 0.
/// Solved by sweeping x upward with the y axis truncated at ceil(x_max/tol);
/// the dominated-sum bound T(x,y) <= x/y keeps the truncation error below
/// tol everywhere (the recurrence only averages errors, never grows them).
struct TTable {
  int64_t x_max = 0;
  double tolerance = 0;
  uint64_t truncation_rows = 0;           ///< y levels used internally
  std::vector<std::vector<double>> values;  ///< values[x][y] for y <= y_keep

  double at(int64_t x, int64_t y) const { return values.at(x).at(y); }
};

TTable solve_T(int64_t x_max, double tolerance, int64_t y_keep = 64);

}  // namespace shu::perc
