#pragma once

#include "rbindex/rb_search.hpp"
#include "rbindex/terrain.hpp"

namespace rbindex {

namespace detail {

// Edge-edge candidates driven by the preprocessed index. Along a red edge
// the difference z_R - z_B is concave piecewise linear (linear minus convex
// envelope section), so its maximum over the edge's crossings is found by
// one oracle descent, and its minimum sits on the first or last crossing.
class TerrainEdgeSearch {
 public:
  TerrainEdgeSearch(const Terrain& r, const ConvexTerrain& b, const ProjectedPair& pp)
      : b_(b), pp_(pp) {
    (void)r;
  }

  void collect(const RBIndex& ix, SignedExtremes& se) const {
    Oracle oracle = [&](const CrossingRef& c) {
      auto [lo, hi] = slopes_at(c);
      Rational se_slope = edge_slope(c.red_id);
      if (se_slope - hi > 0) return OracleAnswer::GoRight;  // still ascending
      if (se_slope - lo < 0) return OracleAnswer::GoLeft;   // already descending
      return OracleAnswer::Found;
    };
    for (const CrossingRef& c : batched_search(ix, oracle))
      se.add(d_at(c), c.point, VDistCase::EdgeEdge);

    // First and last crossing of every edge: the concave minimum candidates.
    for (const Segment& red : pp_.pair.reds) {
      for (bool left : {true, false}) {
        auto node = tree_root(ix, red.id);
        if (!node) break;
        while (auto c = navigate_node(ix, *node,
                                      left ? NavMove::LeftChild : NavMove::RightChild))
          node = std::move(c);
        CrossingRef c = resolve(ix, *node);
        se.add(d_at(c), c.point, VDistCase::EdgeEdge);
      }
    }
  }

  Rational d_at(const CrossingRef& c) const {
    const Segment& red = pp_.pair.reds[c.red_id - 1];
    const RedEdgeInfo& info = pp_.red_info[c.red_id - 1];
    Rational z_red =
        info.z_a + (info.z_b - info.z_a) * (c.point.x - red.a.x) / (red.b.x - red.a.x);
    return z_red - b_.planes[pp_.blue_planes[c.blue_id - 1].first].at(c.point);
  }

 private:
  Rational edge_slope(int red_id) const {
    const Segment& red = pp_.pair.reds[red_id - 1];
    const RedEdgeInfo& info = pp_.red_info[red_id - 1];
    return (info.z_b - info.z_a) / (red.b.x - red.a.x);
  }

  // Slopes of z_B along the red edge on both sides of the probed crossing:
  // the two planes meeting there, differentiated along the edge direction.
  std::pair<Rational, Rational> slopes_at(const CrossingRef& c) const {
    const Segment& red = pp_.pair.reds[c.red_id - 1];
    Rational m = (red.b.y - red.a.y) / (red.b.x - red.a.x);
    auto [i, j] = pp_.blue_planes[c.blue_id - 1];
    Rational si = b_.planes[i].a + b_.planes[i].b * m;
    Rational sj = b_.planes[j].a + b_.planes[j].b * m;
    if (si > sj) std::swap(si, sj);
    return {si, sj};
  }

  const ConvexTerrain& b_;
  const ProjectedPair& pp_;
};

// Crossings of the few edges kept out of the sweep: the edges touching the
// vertical domain sides, plus the vertical sides themselves.
inline void boundary_scan(const ConvexTerrain& b, const ProjectedPair& pp, SignedExtremes& se) {
  for (std::size_t k = 0; k < pp.scan_reds.size(); ++k) {
    const Segment& red = pp.scan_reds[k];
    const RedEdgeInfo& info = pp.scan_info[k];
    for (std::size_t bi = 0; bi < pp.pair.blues.size(); ++bi) {
      auto q = crossing_point(red, pp.pair.blues[bi]);
      if (!q) continue;
      Rational z_red = info.z_a + (info.z_b - info.z_a) * (q->x - red.a.x) / (red.b.x - red.a.x);
      se.add(z_red - b.planes[pp.blue_planes[bi].first].at(*q), *q, VDistCase::EdgeEdge);
    }
  }
  for (const VerticalEdge& ve : pp.vertical) {
    for (std::size_t bi = 0; bi < pp.pair.blues.size(); ++bi) {
      const Segment& blue = pp.pair.blues[bi];
      if (ve.x < blue.a.x || blue.b.x < ve.x) continue;
      Rational y = y_at_x(blue, ve.x);
      if (y < ve.y_lo || ve.y_hi < y) continue;
      Point q{ve.x, y};
      Rational z_red = ve.z_lo + (ve.z_hi - ve.z_lo) * (y - ve.y_lo) / (ve.y_hi - ve.y_lo);
      se.add(z_red - b.planes[pp.blue_planes[bi].first].at(q), q, VDistCase::EdgeEdge);
    }
  }
}

inline VDistResult vertical_distance(const Terrain& r, const ConvexTerrain& b, VDistMode mode) {
  ProjectedPair pp = build_projected_pair(r, b);
  if (!pp.issues.ok())
    throw InvalidInput("terrain pair rejected: " + pp.issues.violations[0].message);

  SignedExtremes se;
  vertex_candidates(r, b, pp, se);
  boundary_scan(b, pp, se);

  RBIndex ix = preprocess(pp.pair);
  TerrainEdgeSearch search(r, b, pp);
  search.collect(ix, se);

  return finish_vdist(mode, se, r, b);
}

}  // namespace detail

inline VDistResult max_vertical_distance(const Terrain& r, const ConvexTerrain& b) {
  return detail::vertical_distance(r, b, VDistMode::Max);
}

inline VDistResult min_vertical_distance(const Terrain& r, const ConvexTerrain& b) {
  return detail::vertical_distance(r, b, VDistMode::Min);
}

}  // namespace rbindex
