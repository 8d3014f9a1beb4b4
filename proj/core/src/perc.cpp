#include "shu/perc.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>
#include <unordered_set>

#include "shu/lattice.hpp"

namespace shu::perc {

using lattice::sgn;

namespace {

uint64_t mix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Quadrant arc index walked anticlockwise: the positive x axis opens arc 0,
/// the positive y axis arc 1, and so on. Within one sheet a path's (winding,
/// arc) pair never decreases.
int arc_of(int64_t x, int64_t y) {
  if (x > 0 && y >= 0) return 0;
  if (x <= 0 && y > 0) return 1;
  if (x < 0 && y <= 0) return 2;
  return 3;
}

/// -1, 0, +1 as a is angularly behind, level with, or ahead of b on the
/// cover. Valid for vertices reached by oriented paths (winding and arc move
/// together); within one arc the exact cross product decides.
int angular_compare(const CoverVertex& a, const CoverVertex& b) {
  if (a.winding != b.winding) return a.winding < b.winding ? -1 : 1;
  const int qa = arc_of(a.x, a.y), qb = arc_of(b.x, b.y);
  if (qa != qb) return qa < qb ? -1 : 1;
  const __int128 cross = static_cast<__int128>(a.x) * b.y - static_cast<__int128>(b.x) * a.y;
  if (cross > 0) return -1;
  if (cross < 0) return 1;
  return 0;
}

}  // namespace

size_t CoverVertexHash::operator()(const CoverVertex& v) const noexcept {
  uint64_t h = mix64(static_cast<uint64_t>(v.x));
  h = mix64(h ^ static_cast<uint64_t>(v.y));
  h = mix64(h ^ static_cast<uint64_t>(v.winding));
  return static_cast<size_t>(h);
}

bool EdgeStore::horizontal_chosen(const CoverVertex& v) {
  if (v.x == 0 && v.y == 0) throw std::invalid_argument("EdgeStore: origin has no out-edge");
  auto it = memo_.find(v);
  if (it != memo_.end()) return it->second;
  const double u = rng::vertex_unit(seed_, v.x, v.y, v.winding);
  const auto ax = static_cast<double>(v.x < 0 ? -v.x : v.x);
  const auto ay = static_cast<double>(v.y < 0 ? -v.y : v.y);
  const bool horizontal = u * (ax + ay) < ay;
  memo_.emplace(v, horizontal);
  return horizontal;
}

CoverVertex EdgeStore::out_edge(const CoverVertex& v) {
  CoverVertex head = v;
  if (horizontal_chosen(v)) {
    head.x -= sgn(v.y);
  } else {
    head.y += sgn(v.x);
  }
  if (head.x == 0 || head.y == 0) head.winding += 1;
  return head;
}

CoalesceResult trace_and_coalesce(const CoverVertex& a0, const CoverVertex& b0,
                                  EdgeStore& store, const CoalesceBudget& budget) {
  CoalesceResult out;
  if (a0 == b0) {
    out.met = true;
    out.meeting = a0;
    return out;
  }
  // Separate visited sets: the first vertex inserted by both paths is the
  // merge point, because unique out-edges make everything after it shared.
  std::unordered_set<CoverVertex, CoverVertexHash> seen_a, seen_b;
  seen_a.insert(a0);
  seen_b.insert(b0);
  CoverVertex a = a0, b = b0;
  const int64_t w_limit = std::max(a0.winding, b0.winding) + budget.max_axis_crossings;

  auto advance = [&](CoverVertex& cur, std::unordered_set<CoverVertex, CoverVertexHash>& own,
                     const std::unordered_set<CoverVertex, CoverVertexHash>& other,
                     uint64_t& steps) -> bool {
    cur = store.out_edge(cur);
    steps += 1;
    if (other.count(cur)) {
      out.met = true;
      out.meeting = cur;
      return true;
    }
    own.insert(cur);
    return false;
  };

  while (out.steps_a + out.steps_b < budget.max_steps) {
    if (std::min(a.winding, b.winding) > w_limit) break;
    const int cmp = angular_compare(a, b);
    if (cmp < 0) {
      if (advance(a, seen_a, seen_b, out.steps_a)) return out;
    } else if (cmp > 0) {
      if (advance(b, seen_b, seen_a, out.steps_b)) return out;
    } else {
      if (advance(a, seen_a, seen_b, out.steps_a)) return out;
      if (advance(b, seen_b, seen_a, out.steps_b)) return out;
    }
  }
  return out;  // budget exhausted, met = false
}

std::pair<int64_t, int64_t> dual_anchor(const DualVertex& d) {
  const int64_t sx = d.cx >= 0 ? 1 : -1;  // sign of the dual point's x = cx + 1/2
  const int64_t sy = d.cy >= 0 ? 1 : -1;
  return {d.cx + (sy > 0 ? 1 : 0), d.cy + (sx < 0 ? 1 : 0)};
}

std::pair<int64_t, int64_t> phi_map(const DualVertex& d) {
  auto [cx, cy] = dual_anchor(d);
  return {cx, -cy};
}

DualVertex dual_out_edge(const DualVertex& d, EdgeStore& store) {
  auto [ax, ay] = dual_anchor(d);
  if (ax == 0 && ay == 0) throw std::logic_error("dual_out_edge: anchor hit the origin");
  const int64_t sx = d.cx >= 0 ? 1 : -1;
  const int64_t sy = d.cy >= 0 ? 1 : -1;
  DualVertex next = d;
  if (store.horizontal_chosen({ax, ay, d.winding})) {
    next.cx += sy;  // the dual point crosses the anchor's declined vertical edge
  } else {
    next.cy -= sx;  // and vice versa
  }
  const int64_t nsx = next.cx >= 0 ? 1 : -1;
  const int64_t nsy = next.cy >= 0 ? 1 : -1;
  if (nsx != sx || nsy != sy) next.winding -= 1;  // clockwise quadrant crossing
  return next;
}

namespace {

struct InGraphSearch {
  EdgeStore& store;
  std::unordered_set<CoverVertex, CoverVertexHash> visited;
  std::deque<CoverVertex> frontier;
  InGraphResult result;

  explicit InGraphSearch(EdgeStore& s) : store(s) {}

  void seed(const CoverVertex& v) {
    visited.insert(v);
    frontier.push_back(v);
    result.size = 1;
  }

  // Unique out-edges make the in-graph a tree, so no vertex can be offered
  // twice; a duplicate would mean the predecessor enumeration is wrong.
  bool accept(const CoverVertex& v, uint64_t max_vertices) {
    if (!visited.insert(v).second)
      throw std::logic_error("in-graph: vertex reached along two paths");
    frontier.push_back(v);
    result.size += 1;
    if (result.size >= max_vertices) {
      result.censored = true;
      return false;
    }
    return true;
  }
};

}  // namespace

InGraphResult in_graph_restricted(int64_t x, int64_t y, EdgeStore& store,
                                  uint64_t max_vertices) {
  if (x < 0 || y < 0) throw std::invalid_argument("in_graph_restricted: quadrant model needs x,y >= 0");
  if (y == 0) return {0, false};  // axis rows carry no in-graph by convention

  InGraphSearch search(store);
  search.seed({x, y, 0});
  while (!search.frontier.empty()) {
    const CoverVertex t = search.frontier.front();
    search.frontier.pop_front();
    // Horizontal candidate: one step to the right, must have chosen to move left.
    if (search.store.horizontal_chosen({t.x + 1, t.y, 0})) {
      if (!search.accept({t.x + 1, t.y, 0}, max_vertices)) return search.result;
    }
    // Vertical candidate: one step below, must have chosen to move up; the
    // axis row y = 0 is outside the model.
    if (t.y >= 2 && !search.store.horizontal_chosen({t.x, t.y - 1, 0})) {
      if (!search.accept({t.x, t.y - 1, 0}, max_vertices)) return search.result;
    }
  }
  return search.result;
}

InGraphResult in_graph_cover(const CoverVertex& v, EdgeStore& store,
                             const InGraphBudget& budget) {
  if (v.x == 0 && v.y == 0) throw std::invalid_argument("in_graph_cover: origin is not a vertex");
  InGraphSearch search(store);
  search.seed(v);
  const int64_t w_floor = v.winding - budget.max_axis_crossings;

  auto offer = [&](const CoverVertex& cand, bool is_pred) -> bool {
    if (!is_pred) return true;
    if (cand.winding < w_floor) {
      search.result.censored = true;  // true in-graph may extend further back
      return true;
    }
    return search.accept(cand, budget.max_vertices);
  };

  while (!search.frontier.empty()) {
    const CoverVertex t = search.frontier.front();
    search.frontier.pop_front();
    if (t.x == 0) {
      // Only a horizontal hop lands on the y axis, from one sheet back.
      CoverVertex c{sgn(t.y), t.y, t.winding - 1};
      if (!offer(c, store.horizontal_chosen(c))) return search.result;
    } else if (t.y == 0) {
      CoverVertex c{t.x, -sgn(t.x), t.winding - 1};
      if (!offer(c, !store.horizontal_chosen(c))) return search.result;
    } else {
      CoverVertex h{t.x + sgn(t.y), t.y, t.winding};
      if (!offer(h, store.horizontal_chosen(h))) return search.result;
      CoverVertex u{t.x, t.y - sgn(t.x), t.winding};
      if (!offer(u, !store.horizontal_chosen(u))) return search.result;
    }
  }
  return search.result;
}

TTable solve_T(int64_t x_max, double tolerance, int64_t y_keep) {
  if (x_max < 1) throw std::invalid_argument("solve_T: x_max >= 1");
  if (tolerance <= 0 || tolerance >= 1) throw std::invalid_argument("solve_T: tolerance in (0,1)");
  const auto rows = static_cast<uint64_t>(std::ceil(static_cast<double>(x_max) / tolerance));

  TTable table;
  table.x_max = x_max;
  table.tolerance = tolerance;
  table.truncation_rows = rows;
  const auto keep = std::min(static_cast<size_t>(y_keep) + 1, static_cast<size_t>(rows + 1));

  std::vector<double> prev(rows + 2, 0.0);  // x = 0 column: absorbed, T = 0
  std::vector<double> cur(rows + 2, 0.0);
  table.values.emplace_back(keep, 0.0);
  for (int64_t x = 1; x <= x_max; ++x) {
    cur[rows + 1] = 0.0;  // tail cut: true value there is below x/rows <= tolerance
    for (int64_t y = static_cast<int64_t>(rows); y >= 0; --y) {
      const auto yy = static_cast<size_t>(y);
      cur[yy] = (1.0 + static_cast<double>(x) * cur[yy + 1] +
                 static_cast<double>(y) * prev[yy]) /
                static_cast<double>(x + y);
    }
    table.values.emplace_back(cur.begin(), cur.begin() + static_cast<long>(keep));
    std::swap(prev, cur);
  }
  return table;
}

}  // namespace shu::perc
