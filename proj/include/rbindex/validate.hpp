#pragma once

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "rbindex/geometry.hpp"

namespace rbindex {

struct Violation {
  std::string code;     // machine-readable, e.g. "duplicate-endpoint-x"
  std::string message;  // human-readable with offending ids
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  void add(std::string code, std::string message) {
    violations.push_back({std::move(code), std::move(message)});
  }
};

namespace detail {

inline std::string seg_name(const Segment& s) {
  return std::string(1, color_letter(s.color) == 'R' ? 'r' : 'b') + std::to_string(s.id);
}

inline bool point_on_segment(const Point& p, const Segment& s) {
  if (p.x < s.a.x || p.x > s.b.x) return false;
  return orientation(s.a, s.b, p) == Orientation::Collinear;
}

inline bool same_line(const Segment& s, const Segment& t) {
  return orientation(s.a, s.b, t.a) == Orientation::Collinear &&
         orientation(s.a, s.b, t.b) == Orientation::Collinear;
}

// Same-color pairs may only meet at a shared endpoint.
inline void check_same_color_pair(const Segment& s, const Segment& t, ValidationReport& rep) {
  if (s.b.x < t.a.x || t.b.x < s.a.x) return;  // disjoint x ranges
  if (crossing_point(s, t)) {
    rep.add("same-color-crossing", "segments " + seg_name(s) + " and " + seg_name(t) +
                                       " of the same color cross");
    return;
  }
  if (same_line(s, t) && s.a.x < t.b.x && t.a.x < s.b.x) {
    rep.add("same-color-overlap", "segments " + seg_name(s) + " and " + seg_name(t) +
                                      " are collinear and overlap");
    return;
  }
  for (const Point* p : {&s.a, &s.b}) {
    if (*p == t.a || *p == t.b) continue;  // shared endpoint is fine
    if (point_on_segment(*p, t)) {
      rep.add("same-color-touch", "endpoint of " + seg_name(s) + " lies inside " + seg_name(t));
      return;
    }
  }
  for (const Point* p : {&t.a, &t.b}) {
    if (*p == s.a || *p == s.b) continue;
    if (point_on_segment(*p, s)) {
      rep.add("same-color-touch", "endpoint of " + seg_name(t) + " lies inside " + seg_name(s));
      return;
    }
  }
}

}  // namespace detail

// O(n log n) structural checks: x-monotone segments, unique ids per color,
// and pairwise distinct endpoint x coordinates (shared endpoints count once).
// This is the part of validation the sweep itself depends on, cheap enough
// to run on every input.
inline void validate_structural(const SegmentSetPair& pair, ValidationReport& rep) {
  std::vector<const Segment*> all;
  for (const auto& s : pair.reds) all.push_back(&s);
  for (const auto& s : pair.blues) all.push_back(&s);

  for (const Segment* s : all) {
    if (!(s->a.x < s->b.x))
      rep.add("not-x-monotone", "segment " + detail::seg_name(*s) +
                                    " has non-increasing x extent");
  }
  for (const auto* list : {&pair.reds, &pair.blues}) {
    std::vector<int> ids;
    for (const auto& s : *list) ids.push_back(s.id);
    std::sort(ids.begin(), ids.end());
    for (std::size_t i = 1; i < ids.size(); ++i)
      if (ids[i] == ids[i - 1])
        rep.add("duplicate-id", "duplicate segment id " + std::to_string(ids[i]));
  }

  // Distinct endpoint points must have distinct x. Identical points (shared
  // endpoints) are allowed.
  std::vector<std::pair<const Point*, const Segment*>> pts;
  for (const Segment* s : all) {
    pts.push_back({&s->a, s});
    pts.push_back({&s->b, s});
  }
  std::sort(pts.begin(), pts.end(), [](const auto& l, const auto& r) {
    if (l.first->x != r.first->x) return l.first->x < r.first->x;
    return l.first->y < r.first->y;
  });
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (pts[i].first->x == pts[i - 1].first->x && !(*pts[i].first == *pts[i - 1].first)) {
      rep.add("duplicate-endpoint-x",
              "duplicate endpoint x=" + format_rational(pts[i].first->x) + " between " +
                  detail::seg_name(*pts[i - 1].second) + " and " + detail::seg_name(*pts[i].second));
    }
  }
}

// Full validation: structural checks plus the O(n^2) geometric
// general-position checks. The report is the error channel; an empty report
// means the instance is accepted by every other operation.
inline ValidationReport validate_input(const SegmentSetPair& pair) {
  ValidationReport rep;
  validate_structural(pair, rep);
  if (!rep.ok()) return rep;

  for (std::size_t i = 0; i < pair.reds.size(); ++i)
    for (std::size_t j = i + 1; j < pair.reds.size(); ++j)
      detail::check_same_color_pair(pair.reds[i], pair.reds[j], rep);
  for (std::size_t i = 0; i < pair.blues.size(); ++i)
    for (std::size_t j = i + 1; j < pair.blues.size(); ++j)
      detail::check_same_color_pair(pair.blues[i], pair.blues[j], rep);

  // Endpoint x -> point lookup for crossing/endpoint coincidence checks.
  std::map<Rational, Point> by_x;
  for (const auto* list : {&pair.reds, &pair.blues})
    for (const auto& s : *list) {
      by_x.emplace(s.a.x, s.a);
      by_x.emplace(s.b.x, s.b);
    }

  for (const auto& r : pair.reds) {
    for (const auto& b : pair.blues) {
      if (r.b.x < b.a.x || b.b.x < r.a.x) continue;
      if (detail::same_line(r, b) && r.a.x < b.b.x && b.a.x < r.b.x) {
        rep.add("red-blue-overlap", "segments " + detail::seg_name(r) + " and " +
                                        detail::seg_name(b) + " are collinear and overlap");
        continue;
      }
      auto q = crossing_point(r, b);
      if (q) {
        auto it = by_x.find(q->x);
        if (it != by_x.end() && it->second == *q) {
          rep.add("crossing-at-endpoint", "crossing of " + detail::seg_name(r) + " and " +
                                              detail::seg_name(b) + " coincides with an endpoint");
        }
        continue;
      }
      // Not properly crossing: endpoint of one on the interior of the other
      // (a shared endpoint is fine and contributes no crossing).
      for (const Point* p : {&r.a, &r.b}) {
        if (*p == b.a || *p == b.b) continue;
        if (detail::point_on_segment(*p, b))
          rep.add("crossing-at-endpoint", "endpoint of " + detail::seg_name(r) +
                                              " lies inside " + detail::seg_name(b));
      }
      for (const Point* p : {&b.a, &b.b}) {
        if (*p == r.a || *p == r.b) continue;
        if (detail::point_on_segment(*p, r))
          rep.add("crossing-at-endpoint", "endpoint of " + detail::seg_name(b) +
                                              " lies inside " + detail::seg_name(r));
      }
    }
  }
  return rep;
}

}  // namespace rbindex
