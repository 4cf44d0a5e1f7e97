#pragma once

#include "rbindex/terrain.hpp"

namespace rbindex {

// Candidate-enumeration reference for the vertical distance: every vertex
// of each surface against the other, every projected edge-edge crossing by
// pairwise tests. No sweep machinery involved.
inline VDistResult naive_terrain_distance(const Terrain& r, const ConvexTerrain& b,
                                          VDistMode mode) {
  ProjectedPair pp = build_projected_pair(r, b);
  if (!pp.issues.ok())
    throw InvalidInput("terrain pair rejected: " + pp.issues.violations[0].message);

  SignedExtremes se;
  vertex_candidates(r, b, pp, se);

  auto scan_red = [&](const Segment& red, const RedEdgeInfo& info) {
    for (std::size_t bi = 0; bi < pp.pair.blues.size(); ++bi) {
      auto q = crossing_point(red, pp.pair.blues[bi]);
      if (!q) continue;
      Rational z_red = info.z_a + (info.z_b - info.z_a) * (q->x - red.a.x) / (red.b.x - red.a.x);
      Rational z_blue = b.planes[pp.blue_planes[bi].first].at(*q);
      se.add(z_red - z_blue, *q, VDistCase::EdgeEdge);
    }
  };
  for (std::size_t k = 0; k < pp.pair.reds.size(); ++k) scan_red(pp.pair.reds[k], pp.red_info[k]);
  for (std::size_t k = 0; k < pp.scan_reds.size(); ++k) scan_red(pp.scan_reds[k], pp.scan_info[k]);

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

  return finish_vdist(mode, se, r, b);
}

}  // namespace rbindex
