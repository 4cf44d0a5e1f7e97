#pragma once

#include <array>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <vector>

#include "rbindex/geometry.hpp"
#include "rbindex/validate.hpp"

namespace rbindex {

struct OutOfDomain : std::runtime_error {
  OutOfDomain() : std::runtime_error("point outside the terrain domain") {}
};

struct Domain {
  Rational xmin, ymin, xmax, ymax;

  bool contains(const Point& p) const {
    return xmin <= p.x && p.x <= xmax && ymin <= p.y && p.y <= ymax;
  }
  bool operator==(const Domain& o) const {
    return xmin == o.xmin && ymin == o.ymin && xmax == o.xmax && ymax == o.ymax;
  }
};

struct TerrainVertex {
  Rational x, y, z;
  Point xy() const { return {x, y}; }
};

// Piecewise-linear surface whose xy-projection triangulates the domain.
struct Terrain {
  Domain domain;
  std::vector<TerrainVertex> vertices;
  std::vector<std::array<int, 3>> triangles;  // 0-based vertex indexes
};

struct Plane {
  Rational a, b, c;  // z = a*x + b*y + c
  Rational at(const Point& p) const { return a * p.x + b * p.y + c; }
};

// Convex terrain: the upper envelope of its planes over the domain.
struct ConvexTerrain {
  Domain domain;
  std::vector<Plane> planes;
};

enum class VDistCase { VertexFacet, FacetVertex, EdgeEdge };

inline const char* vdist_case_name(VDistCase c) {
  switch (c) {
    case VDistCase::VertexFacet: return "vertex-facet";
    case VDistCase::FacetVertex: return "facet-vertex";
    case VDistCase::EdgeEdge: return "edge-edge";
  }
  return "?";
}

struct VDistResult {
  Rational value;
  Point witness_xy;
  VDistCase kind = VDistCase::VertexFacet;
};

// --- heights ------------------------------------------------------------

inline Plane facet_plane(const Terrain& t, const std::array<int, 3>& tri) {
  const TerrainVertex &v0 = t.vertices[tri[0]], &v1 = t.vertices[tri[1]], &v2 = t.vertices[tri[2]];
  Rational d1x = v1.x - v0.x, d1y = v1.y - v0.y, d1z = v1.z - v0.z;
  Rational d2x = v2.x - v0.x, d2y = v2.y - v0.y, d2z = v2.z - v0.z;
  Rational det = d1x * d2y - d1y * d2x;
  Rational a = (d1z * d2y - d1y * d2z) / det;
  Rational b = (d1x * d2z - d1z * d2x) / det;
  Rational c = v0.z - a * v0.x - b * v0.y;
  return {a, b, c};
}

namespace detail {

inline bool point_in_triangle(const Terrain& t, const std::array<int, 3>& tri, const Point& p) {
  Point a = t.vertices[tri[0]].xy(), b = t.vertices[tri[1]].xy(), c = t.vertices[tri[2]].xy();
  Orientation o = orientation(a, b, c);
  if (o == Orientation::Right) std::swap(b, c);
  return orientation(a, b, p) != Orientation::Right &&
         orientation(b, c, p) != Orientation::Right &&
         orientation(c, a, p) != Orientation::Right;
}

}  // namespace detail

inline Rational height_at(const Terrain& t, const Point& p) {
  if (!t.domain.contains(p)) throw OutOfDomain();
  for (const auto& tri : t.triangles) {
    if (detail::point_in_triangle(t, tri, p)) return facet_plane(t, tri).at(p);
  }
  throw InvalidInput("triangulation does not cover point " + format_point(p));
}

inline Rational height_at(const ConvexTerrain& t, const Point& p) {
  if (!t.domain.contains(p)) throw OutOfDomain();
  if (t.planes.empty()) throw InvalidInput("convex terrain has no planes");
  Rational best = t.planes[0].at(p);
  for (std::size_t i = 1; i < t.planes.size(); ++i) {
    Rational h = t.planes[i].at(p);
    if (h > best) best = h;
  }
  return best;
}

// --- validation ----------------------------------------------------------

inline ValidationReport validate_terrain(const Terrain& t) {
  ValidationReport rep;
  if (!(t.domain.xmin < t.domain.xmax) || !(t.domain.ymin < t.domain.ymax))
    rep.add("bad-domain", "domain rectangle is empty");
  if (t.triangles.empty()) rep.add("no-triangles", "terrain has no triangles");
  const int n = static_cast<int>(t.vertices.size());
  for (int i = 0; i < n; ++i) {
    if (!t.domain.contains(t.vertices[i].xy()))
      rep.add("vertex-outside-domain", "vertex " + std::to_string(i + 1) + " outside domain");
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (t.vertices[i].xy() == t.vertices[j].xy())
        rep.add("duplicate-vertex", "vertices " + std::to_string(i + 1) + " and " +
                                        std::to_string(j + 1) + " coincide");
      else if (t.vertices[i].x == t.vertices[j].x) {
        // Equal x is only forced on the two vertical domain sides.
        bool side = (t.vertices[i].x == t.domain.xmin || t.vertices[i].x == t.domain.xmax);
        if (!side)
          rep.add("duplicate-vertex-x", "vertices " + std::to_string(i + 1) + " and " +
                                            std::to_string(j + 1) + " share x off the sides");
      }
    }

  Rational area_sum = 0;
  std::map<std::pair<int, int>, int> edge_count;
  for (const auto& tri : t.triangles) {
    for (int k : tri)
      if (k < 0 || k >= n) {
        rep.add("bad-triangle", "triangle references a missing vertex");
        return rep;
      }
    Point a = t.vertices[tri[0]].xy(), b = t.vertices[tri[1]].xy(), c = t.vertices[tri[2]].xy();
    Rational twice = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
    if (sgn(twice) == 0) {
      rep.add("degenerate-triangle", "triangle with zero area");
      continue;
    }
    area_sum += abs(twice) / 2;
    for (int e = 0; e < 3; ++e) {
      int u = tri[e], v = tri[(e + 1) % 3];
      if (u > v) std::swap(u, v);
      ++edge_count[{u, v}];
    }
  }
  Rational domain_area = (t.domain.xmax - t.domain.xmin) * (t.domain.ymax - t.domain.ymin);
  if (area_sum != domain_area)
    rep.add("not-covering", "triangle areas sum to " + format_rational(area_sum) + ", domain has " +
                                format_rational(domain_area));
  for (const auto& [e, cnt] : edge_count) {
    if (cnt > 2) {
      rep.add("edge-overuse", "edge used by more than two triangles");
      continue;
    }
    if (cnt == 1) {
      const TerrainVertex &u = t.vertices[e.first], &v = t.vertices[e.second];
      bool on_boundary = (u.x == v.x && (u.x == t.domain.xmin || u.x == t.domain.xmax)) ||
                         (u.y == v.y && (u.y == t.domain.ymin || u.y == t.domain.ymax));
      if (!on_boundary) rep.add("open-edge", "interior edge used by only one triangle");
    }
  }
  return rep;
}

inline ValidationReport validate_convex_terrain(const ConvexTerrain& t) {
  ValidationReport rep;
  if (!(t.domain.xmin < t.domain.xmax) || !(t.domain.ymin < t.domain.ymax))
    rep.add("bad-domain", "domain rectangle is empty");
  if (t.planes.empty()) rep.add("no-planes", "convex terrain has no planes");
  for (std::size_t i = 0; i < t.planes.size(); ++i)
    for (std::size_t j = i + 1; j < t.planes.size(); ++j) {
      const Plane &p = t.planes[i], &q = t.planes[j];
      if (p.a == q.a && p.b == q.b && p.c == q.c)
        rep.add("duplicate-plane", "planes " + std::to_string(i + 1) + " and " +
                                       std::to_string(j + 1) + " coincide");
    }
  return rep;
}

// --- upper envelope edges -------------------------------------------------

// A maximal portion of the line h_i = h_j on which both planes attain the
// envelope, truncated to a per-edge clip box well outside the domain.
struct EnvelopeEdge {
  int plane_i = 0, plane_j = 0;
  Point a, b;  // projected, a.x < b.x
};

// Pairwise construction, exact: for every plane pair, intersect the
// equality line with the dominance halfplanes of all other planes and a
// clip box. Projected lines parallel to the y axis cannot be represented as
// x-monotone segments and are reported.
inline std::vector<EnvelopeEdge> envelope_edges(const ConvexTerrain& t, ValidationReport& rep) {
  std::vector<EnvelopeEdge> out;
  const int m = static_cast<int>(t.planes.size());
  Rational w = t.domain.xmax - t.domain.xmin;
  Rational h = t.domain.ymax - t.domain.ymin;
  Rational margin = (w > h ? w : h) + 1;
  int pair_no = 0;
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      ++pair_no;
      const Plane &pi = t.planes[i], &pj = t.planes[j];
      Rational A = pi.a - pj.a, B = pi.b - pj.b, C = pj.c - pi.c;  // A x + B y = C
      if (sgn(A) == 0 && sgn(B) == 0) continue;                    // parallel planes
      if (sgn(B) == 0) {
        rep.add("vertical-envelope-edge",
                "planes " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                    " meet along a vertical projected line");
        continue;
      }
      // Parametrize by x: y(x) = (C - A x)/B.
      Point p0{Rational(0), C / B};
      Rational dx = 1, dy = -A / B;

      // Per-pair clip box, inflated by a unique amount so clip endpoints
      // rarely share x coordinates.
      Rational infl = margin * (1 + Rational(pair_no, 64 * pair_no + 7));
      Rational lo = t.domain.xmin - infl, hi = t.domain.xmax + infl;
      Rational ylo = t.domain.ymin - infl, yhi = t.domain.ymax + infl;

      // Constraints on t (here t == x): h_i(p) >= h_k(p) for all k.
      bool empty = false;
      auto tighten = [&](const Rational& alpha, const Rational& beta) {
        // alpha + beta * x >= 0
        if (sgn(beta) == 0) {
          if (sgn(alpha) < 0) empty = true;
          return;
        }
        Rational bound = -alpha / beta;
        if (sgn(beta) > 0) {
          if (bound > lo) lo = bound;
        } else {
          if (bound < hi) hi = bound;
        }
      };
      for (int k = 0; k < m && !empty; ++k) {
        if (k == i || k == j) continue;
        const Plane& pk = t.planes[k];
        // (pi - pk) evaluated along the line, as alpha + beta*x.
        Rational ca = pi.a - pk.a, cb = pi.b - pk.b, cc = pi.c - pk.c;
        tighten(cb * p0.y + cc, ca + cb * dy);
      }
      // y-box constraints: ylo <= y(x) <= yhi.
      tighten(p0.y - ylo, dy);
      tighten(yhi - p0.y, -dy);
      if (empty || !(lo < hi)) continue;

      EnvelopeEdge e;
      e.plane_i = i;
      e.plane_j = j;
      e.a = {lo, p0.y + dy * lo};
      e.b = {hi, p0.y + dy * hi};
      out.push_back(std::move(e));
    }
  }
  return out;
}

// --- terrain file formats --------------------------------------------------

// `domain xmin ymin xmax ymax` header, then `v x y z` lines and `f i j k`
// lines (1-based vertex indexes).
inline Terrain load_terrain(std::istream& in) {
  Terrain t;
  bool have_domain = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    try {
      if (tok == "domain") {
        std::string a, b, c, d;
        if (!(ls >> a >> b >> c >> d)) throw ParseError("bad domain line");
        t.domain = {parse_rational(a), parse_rational(b), parse_rational(c), parse_rational(d)};
        have_domain = true;
      } else if (tok == "v") {
        std::string x, y, z;
        if (!(ls >> x >> y >> z)) throw ParseError("bad vertex line");
        t.vertices.push_back({parse_rational(x), parse_rational(y), parse_rational(z)});
      } else if (tok == "f") {
        int i, j, k;
        if (!(ls >> i >> j >> k)) throw ParseError("bad face line");
        t.triangles.push_back({i - 1, j - 1, k - 1});
      } else {
        throw ParseError("unknown record '" + tok + "'");
      }
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!have_domain) throw ParseError("terrain file lacks a domain header");
  return t;
}

// `domain` header then `p a b c` lines meaning z = a*x + b*y + c.
inline ConvexTerrain load_planes(std::istream& in) {
  ConvexTerrain t;
  bool have_domain = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    try {
      if (tok == "domain") {
        std::string a, b, c, d;
        if (!(ls >> a >> b >> c >> d)) throw ParseError("bad domain line");
        t.domain = {parse_rational(a), parse_rational(b), parse_rational(c), parse_rational(d)};
        have_domain = true;
      } else if (tok == "p") {
        std::string a, b, c;
        if (!(ls >> a >> b >> c)) throw ParseError("bad plane line");
        t.planes.push_back({parse_rational(a), parse_rational(b), parse_rational(c)});
      } else {
        throw ParseError("unknown record '" + tok + "'");
      }
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!have_domain) throw ParseError("planes file lacks a domain header");
  return t;
}

// --- the projected red-blue instance ---------------------------------------

// A red edge that is swept, with its endpoint heights aligned to the
// normalized (a.x < b.x) segment.
struct RedEdgeInfo {
  Rational z_a, z_b;
};

// Vertical domain-side edge, excluded from the sweep (not x-monotone).
struct VerticalEdge {
  Rational x, y_lo, y_hi, z_lo, z_hi;
};

struct ProjectedPair {
  SegmentSetPair pair;                 // sweep instance: reds away from vertical sides + envelope blues
  std::vector<RedEdgeInfo> red_info;   // by red index
  std::vector<RedEdgeInfo> scan_info;  // by scan index
  std::vector<Segment> scan_reds;      // corner-incident edges handled by direct scan
  std::vector<VerticalEdge> vertical;  // the <=2 vertical sides
  std::vector<std::pair<int, int>> blue_planes;  // by blue index
  std::vector<Point> blue_vertices;    // envelope vertices inside the domain
  ValidationReport issues;
};

// Projects the terrain's triangulation edges and the envelope's edges into
// one red-blue instance. Edges touching the vertical domain sides (corners
// share x by construction) stay out of the sweep and are scanned directly.
inline ProjectedPair build_projected_pair(const Terrain& r, const ConvexTerrain& b) {
  ProjectedPair pp;
  if (!(r.domain == b.domain)) {
    pp.issues.add("domain-mismatch", "terrains have different domains");
    return pp;
  }
  ValidationReport tr = validate_terrain(r);
  ValidationReport cr = validate_convex_terrain(b);
  for (auto& v : tr.violations) pp.issues.violations.push_back(std::move(v));
  for (auto& v : cr.violations) pp.issues.violations.push_back(std::move(v));
  if (!pp.issues.ok()) return pp;

  std::set<std::pair<int, int>> seen;
  for (const auto& tri : r.triangles) {
    for (int e = 0; e < 3; ++e) {
      int u = tri[e], v = tri[(e + 1) % 3];
      if (u > v) std::swap(u, v);
      if (!seen.insert({u, v}).second) continue;
      const TerrainVertex &vu = r.vertices[u], &vv = r.vertices[v];
      if (vu.x == vv.x) {
        VerticalEdge ve;
        ve.x = vu.x;
        if (vu.y < vv.y)
          ve = {vu.x, vu.y, vv.y, vu.z, vv.z};
        else
          ve = {vu.x, vv.y, vu.y, vv.z, vu.z};
        pp.vertical.push_back(std::move(ve));
        continue;
      }
      Segment s;
      s.color = Color::Red;
      RedEdgeInfo info;
      if (vu.x < vv.x) {
        s.a = vu.xy();
        s.b = vv.xy();
        info = {vu.z, vv.z};
      } else {
        s.a = vv.xy();
        s.b = vu.xy();
        info = {vv.z, vu.z};
      }
      bool touches_side = s.a.x == r.domain.xmin || s.a.x == r.domain.xmax ||
                          s.b.x == r.domain.xmin || s.b.x == r.domain.xmax;
      if (touches_side) {
        s.id = static_cast<int>(pp.scan_reds.size()) + 1;
        pp.scan_reds.push_back(std::move(s));
        pp.scan_info.push_back(info);
      } else {
        s.id = static_cast<int>(pp.pair.reds.size()) + 1;
        pp.pair.reds.push_back(std::move(s));
        pp.red_info.push_back(info);
      }
    }
  }

  auto edges = envelope_edges(b, pp.issues);
  if (!pp.issues.ok()) return pp;
  for (const auto& e : edges) {
    Segment s;
    s.color = Color::Blue;
    s.id = static_cast<int>(pp.pair.blues.size()) + 1;
    s.a = e.a;
    s.b = e.b;
    pp.pair.blues.push_back(std::move(s));
    pp.blue_planes.push_back({e.plane_i, e.plane_j});
    for (const Point* q : {&e.a, &e.b})
      if (b.domain.contains(*q)) pp.blue_vertices.push_back(*q);
  }

  validate_structural(pp.pair, pp.issues);
  return pp;
}

enum class VDistMode { Max, Min };

// Signed extremes of z_R - z_B over a candidate set, with witnesses. Ties
// keep the first candidate seen, so results are deterministic for a fixed
// enumeration order.
struct SignedExtremes {
  bool has = false;
  Rational max_d, min_d;
  Point max_p, min_p;
  VDistCase max_kind = VDistCase::VertexFacet, min_kind = VDistCase::VertexFacet;

  void add(const Rational& d, const Point& p, VDistCase k) {
    if (!has) {
      has = true;
      max_d = min_d = d;
      max_p = min_p = p;
      max_kind = min_kind = k;
      return;
    }
    if (d > max_d) {
      max_d = d;
      max_p = p;
      max_kind = k;
    }
    if (d < min_d) {
      min_d = d;
      min_p = p;
      min_kind = k;
    }
  }
};

// Exact zero of z_R - z_B on the straight walk from p_neg (difference <= 0)
// to p_pos (difference >= 0). Breakpoint parameters come from every
// projected edge line of either surface, so the difference is linear
// between consecutive breakpoints.
inline Point exact_zero_between(const Terrain& r, const ConvexTerrain& b, const Point& p_neg,
                                const Point& p_pos) {
  auto diff = [&](const Point& p) -> Rational { return height_at(r, p) - height_at(b, p); };
  if (sgn(diff(p_neg)) == 0) return p_neg;
  if (sgn(diff(p_pos)) == 0) return p_pos;

  std::vector<Rational> ts{Rational(0), Rational(1)};
  Rational wx = p_pos.x - p_neg.x, wy = p_pos.y - p_neg.y;
  auto add_line_cross = [&](const Point& a, const Point& bb) {
    // Solve p_neg + t*(w) on the line through a, bb.
    Rational ex = bb.x - a.x, ey = bb.y - a.y;
    Rational denom = wx * ey - wy * ex;
    if (sgn(denom) == 0) return;
    Rational t = ((a.x - p_neg.x) * ey - (a.y - p_neg.y) * ex) / denom;
    if (sgn(t) > 0 && t < 1) ts.push_back(t);
  };
  std::set<std::pair<int, int>> seen;
  for (const auto& tri : r.triangles)
    for (int e = 0; e < 3; ++e) {
      int u = tri[e], v = tri[(e + 1) % 3];
      if (u > v) std::swap(u, v);
      if (!seen.insert({u, v}).second) continue;
      add_line_cross(r.vertices[u].xy(), r.vertices[v].xy());
    }
  // Envelope breakpoints along the walk: crossings with every pairwise
  // equality line (a superset of the true envelope edges is enough).
  for (std::size_t i = 0; i < b.planes.size(); ++i)
    for (std::size_t j = i + 1; j < b.planes.size(); ++j) {
      Rational A = b.planes[i].a - b.planes[j].a, B = b.planes[i].b - b.planes[j].b;
      Rational C = b.planes[j].c - b.planes[i].c;
      // Line A x + B y = C intersected with the walk.
      Rational denom = A * wx + B * wy;
      if (sgn(denom) == 0) continue;
      Rational t = (C - A * p_neg.x - B * p_neg.y) / denom;
      if (sgn(t) > 0 && t < 1) ts.push_back(t);
    }
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

  auto at = [&](const Rational& t) { return Point{p_neg.x + wx * t, p_neg.y + wy * t}; };
  Rational prev_t = ts[0];
  Rational prev_d = diff(p_neg);
  for (std::size_t i = 1; i < ts.size(); ++i) {
    Point q = at(ts[i]);
    Rational d = diff(q);
    if (sgn(d) == 0) return q;
    if (sgn(prev_d) != sgn(d)) {
      Rational t0 = prev_t + (ts[i] - prev_t) * prev_d / (prev_d - d);
      Point z = at(t0);
      if (sgn(diff(z)) != 0) throw std::logic_error("zero walk missed a breakpoint");
      return z;
    }
    prev_t = ts[i];
    prev_d = d;
  }
  throw std::logic_error("zero walk found no sign change");
}

// Vertex-versus-surface candidates shared by both distance paths: every
// terrain vertex against the envelope, every in-domain envelope vertex
// against the terrain. Point location is brute force over facets/planes.
inline void vertex_candidates(const Terrain& r, const ConvexTerrain& b, const ProjectedPair& pp,
                              SignedExtremes& se) {
  for (const TerrainVertex& v : r.vertices)
    se.add(v.z - height_at(b, v.xy()), v.xy(), VDistCase::VertexFacet);
  for (const Point& p : pp.blue_vertices)
    se.add(height_at(r, p) - height_at(b, p), p, VDistCase::FacetVertex);
}

// Combines signed extremes into the requested distance. The maximum of
// |z_R - z_B| is always attained on a candidate; the minimum is zero as
// soon as the signed extremes straddle zero (the surfaces intersect), with
// an exact intersection witness from the zero walk.
inline VDistResult finish_vdist(VDistMode mode, const SignedExtremes& se, const Terrain& r,
                                const ConvexTerrain& b) {
  if (!se.has) throw InvalidInput("no candidates; empty terrain");
  if (mode == VDistMode::Max) {
    Rational hi = abs(se.max_d), lo = abs(se.min_d);
    if (hi >= lo) return {hi, se.max_p, se.max_kind};
    return {lo, se.min_p, se.min_kind};
  }
  if (sgn(se.min_d) <= 0 && sgn(se.max_d) >= 0) {
    if (sgn(se.min_d) == 0) return {Rational(0), se.min_p, se.min_kind};
    if (sgn(se.max_d) == 0) return {Rational(0), se.max_p, se.max_kind};
    Point z = exact_zero_between(r, b, se.min_p, se.max_p);
    return {Rational(0), z, VDistCase::EdgeEdge};
  }
  Rational hi = abs(se.max_d), lo = abs(se.min_d);
  if (hi <= lo) return {hi, se.max_p, se.max_kind};
  return {lo, se.min_p, se.min_kind};
}

}  // namespace rbindex
