#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "rbindex/geometry.hpp"
#include "rbindex/validate.hpp"

namespace rbindex {

enum class OracleAnswer { GoLeft, GoRight, Found };

using Oracle = std::function<OracleAnswer(const CrossingRef&)>;

struct InconsistentOracle : std::runtime_error {
  explicit InconsistentOracle(int red_id)
      : std::runtime_error("oracle descent exhausted edge r" + std::to_string(red_id) +
                           " without Found") {}
};

// O(n^2) pairwise reference: every red-blue crossing, grouped per red edge
// and sorted along it. Ground truth for the sweep-based machinery; shares
// only the core predicates with it.
inline std::map<int, std::vector<CrossingRef>> naive_crossings(const SegmentSetPair& pair) {
  std::map<int, std::vector<CrossingRef>> out;
  for (const Segment& r : pair.reds) out[r.id];
  for (const Segment& r : pair.reds) {
    auto& list = out[r.id];
    for (const Segment& b : pair.blues) {
      if (auto q = crossing_point(r, b)) list.push_back({r.id, b.id, *q});
    }
    std::sort(list.begin(), list.end(),
              [](const CrossingRef& l, const CrossingRef& r2) { return l.point.x < r2.point.x; });
  }
  return out;
}

// The leftmost endpoint contained in the closed right wedge of a properly
// crossing red-blue pair: the wedge is the intersection of the closed
// halfplane bounded by r's line that contains b's continuation right of the
// crossing, and vice versa. r's right endpoint is always a member, so a
// witness exists.
inline Point witness(const Segment& r, const Segment& b, const std::vector<Point>& endpoints) {
  auto q = crossing_point(r, b);
  if (!q) throw InvalidInput("witness requires a properly crossing pair");
  // Side of line(r) containing b's rightward part: b.b lies strictly past
  // the crossing in x, so it is a point of that open side.
  Orientation r_side = orientation(r.a, r.b, b.b);
  Orientation b_side = orientation(b.a, b.b, r.b);
  std::optional<Point> best;
  for (const Point& p : endpoints) {
    Orientation o1 = orientation(r.a, r.b, p);
    if (o1 != Orientation::Collinear && o1 != r_side) continue;
    Orientation o2 = orientation(b.a, b.b, p);
    if (o2 != Orientation::Collinear && o2 != b_side) continue;
    if (p.x < q->x) continue;  // the wedge lies right of its apex
    if (!best || p.x < best->x) best = p;
  }
  if (!best) throw InvalidInput("no wedge member found; degenerate input");
  return *best;
}

inline std::vector<Point> all_endpoints(const SegmentSetPair& pair) {
  std::vector<Point> pts;
  for (const auto* list : {&pair.reds, &pair.blues})
    for (const Segment& s : *list) {
      pts.push_back(s.a);
      pts.push_back(s.b);
    }
  return pts;
}

// Reference oracle semantics: per edge, a plain binary search over the
// explicit sorted crossing list, driven by the same oracle.
inline std::vector<CrossingRef> naive_batched_search(const SegmentSetPair& pair,
                                                     const Oracle& oracle, bool strict = false) {
  auto per_edge = naive_crossings(pair);
  std::vector<CrossingRef> out;
  for (const Segment& r : pair.reds) {
    const auto& list = per_edge[r.id];
    std::size_t lo = 0, hi = list.size();
    bool found = false;
    while (lo < hi) {
      std::size_t mid = lo + (hi - lo) / 2;
      OracleAnswer a = oracle(list[mid]);
      if (a == OracleAnswer::Found) {
        out.push_back(list[mid]);
        found = true;
        break;
      }
      if (a == OracleAnswer::GoLeft)
        hi = mid;
      else
        lo = mid + 1;
    }
    if (!found && strict && !list.empty()) throw InconsistentOracle(r.id);
  }
  return out;
}

}  // namespace rbindex
