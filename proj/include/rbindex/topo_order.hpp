#pragma once

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <vector>

#include "rbindex/geometry.hpp"

namespace rbindex {

// Total order over one color's segments consistent with the below-above
// partial order: wherever two segments are cut by a common vertical line,
// the lower one precedes the higher one. Segments never crossing a common
// vertical line are ordered by a deterministic tie-break (segment id).
//
// Built by a mini-sweep over the color alone: an ordered set of active
// segments collects "immediately below" adjacencies at insertion time; the
// transitive closure of those adjacencies covers every comparable pair, so a
// topological sort of the adjacency DAG is a valid total order.
struct TopoOrder {
  std::vector<int> order;     // position -> index into the segment vector
  std::vector<int> position;  // segment index -> position (0-based)
};

inline TopoOrder topological_order(const std::vector<Segment>& segs) {
  const int n = static_cast<int>(segs.size());
  TopoOrder out;
  out.order.reserve(n);
  out.position.assign(n, -1);
  if (n == 0) return out;

  struct Ev {
    Rational x;
    int seg;
    bool left;
  };
  std::vector<Ev> events;
  events.reserve(2 * n);
  for (int i = 0; i < n; ++i) {
    events.push_back({segs[i].a.x, i, true});
    events.push_back({segs[i].b.x, i, false});
  }
  std::sort(events.begin(), events.end(), [&](const Ev& l, const Ev& r) {
    if (l.x != r.x) return l.x < r.x;
    return l.left < r.left;  // deletions before insertions at a shared point
  });

  auto below = [&](int i, int j) { return segment_below(segs[i], segs[j]); };
  std::set<int, decltype(below)> active(below);

  std::vector<std::vector<int>> succ(n);
  std::vector<int> indeg(n, 0);
  auto add_edge = [&](int lo, int hi) {
    succ[lo].push_back(hi);
    ++indeg[hi];
  };

  for (const Ev& ev : events) {
    if (!ev.left) {
      active.erase(ev.seg);
      continue;
    }
    auto [it, inserted] = active.insert(ev.seg);
    (void)inserted;
    if (it != active.begin()) add_edge(*std::prev(it), ev.seg);
    auto nx = std::next(it);
    if (nx != active.end()) add_edge(ev.seg, *nx);
  }

  // Kahn with an id-keyed heap for deterministic output.
  auto id_greater = [&](int l, int r) { return segs[l].id > segs[r].id; };
  std::priority_queue<int, std::vector<int>, decltype(id_greater)> ready(id_greater);
  for (int i = 0; i < n; ++i)
    if (indeg[i] == 0) ready.push(i);
  while (!ready.empty()) {
    int s = ready.top();
    ready.pop();
    out.position[s] = static_cast<int>(out.order.size());
    out.order.push_back(s);
    for (int t : succ[s])
      if (--indeg[t] == 0) ready.push(t);
  }
  if (static_cast<int>(out.order.size()) != n)
    throw InvalidInput("cycle in vertical order; same-color segments must not cross");
  return out;
}

}  // namespace rbindex
