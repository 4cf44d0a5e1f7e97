#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rbindex/rational.hpp"

namespace rbindex {

enum class Color : unsigned char { Red, Blue };

inline char color_letter(Color c) { return c == Color::Red ? 'R' : 'B'; }

struct Point {
  Rational x;
  Rational y;

  bool operator==(const Point& o) const { return x == o.x && y == o.y; }
  bool operator!=(const Point& o) const { return !(*this == o); }
};

// x-monotone straight-line edge; a.x < b.x always holds after loading.
struct Segment {
  int id = 0;  // unique within its color, 1-based file order
  Color color = Color::Red;
  Point a;
  Point b;
};

struct SegmentSetPair {
  std::vector<Segment> reds;
  std::vector<Segment> blues;
};

struct InvalidInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Orientation : int { Right = -1, Collinear = 0, Left = 1 };

// Exact sign of cross(q - p, r - p); Left is positive (counterclockwise).
inline Orientation orientation(const Point& p, const Point& q, const Point& r) {
  Rational cross = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
  int s = sgn(cross);
  return s > 0 ? Orientation::Left : (s < 0 ? Orientation::Right : Orientation::Collinear);
}

inline Rational y_at_x(const Segment& s, const Rational& x) {
  return s.a.y + (s.b.y - s.a.y) * (x - s.a.x) / (s.b.x - s.a.x);
}

// Unique interior intersection of the open segments; absent for shared
// endpoints, touching, collinear overlap, and disjoint pairs.
inline std::optional<Point> crossing_point(const Segment& s, const Segment& t) {
  Orientation o1 = orientation(s.a, s.b, t.a);
  Orientation o2 = orientation(s.a, s.b, t.b);
  Orientation o3 = orientation(t.a, t.b, s.a);
  Orientation o4 = orientation(t.a, t.b, s.b);
  if (static_cast<int>(o1) * static_cast<int>(o2) >= 0) return std::nullopt;
  if (static_cast<int>(o3) * static_cast<int>(o4) >= 0) return std::nullopt;
  // Solve s.a + u*(s.b - s.a) = t.a + v*(t.b - t.a) for u.
  Rational dsx = s.b.x - s.a.x, dsy = s.b.y - s.a.y;
  Rational dtx = t.b.x - t.a.x, dty = t.b.y - t.a.y;
  Rational denom = dsx * dty - dsy * dtx;
  Rational u = ((t.a.x - s.a.x) * dty - (t.a.y - s.a.y) * dtx) / denom;
  return Point{s.a.x + u * dsx, s.a.y + u * dsy};
}

// -1: p strictly below s's line, 0: on it, +1: strictly above.
inline int point_vs_segment(const Point& p, const Segment& s) {
  return static_cast<int>(orientation(s.a, s.b, p));
}

// Vertical order of two same-color segments wherever both are cut by a
// common vertical line. Same-color segments never properly cross, so this
// order is time-invariant for simultaneously active segments. Both of the
// compared segments must overlap in x; shared endpoints fall back to slope
// order. A left endpoint interior to the other segment means the input was
// degenerate and is reported as InvalidInput.
inline bool segment_below(const Segment& s, const Segment& t) {
  if (s.id == t.id && s.color == t.color) return false;
  if (s.a.x < t.a.x) {
    Orientation o = orientation(s.a, s.b, t.a);
    if (o == Orientation::Left) return true;   // t starts above s
    if (o == Orientation::Right) return false;
    // t.a on s's line: shared endpoint t.a == s.b, or degenerate input.
    if (t.a == s.b) {
      Orientation os = orientation(t.a, t.b, s.a);
      if (os == Orientation::Collinear)
        throw InvalidInput("collinear same-color segments share an endpoint");
      return os == Orientation::Left;
    }
    throw InvalidInput("same-color segment endpoint lies on another segment");
  }
  if (t.a.x < s.a.x) {
    Orientation o = orientation(t.a, t.b, s.a);
    if (o == Orientation::Left) return false;
    if (o == Orientation::Right) return true;
    if (s.a == t.b) {
      Orientation os = orientation(s.a, s.b, t.a);
      if (os == Orientation::Collinear)
        throw InvalidInput("collinear same-color segments share an endpoint");
      return os == Orientation::Right;
    }
    throw InvalidInput("same-color segment endpoint lies on another segment");
  }
  // Same left-endpoint x implies the same left endpoint (distinct points
  // never share an x coordinate in valid input). Order by slope.
  Orientation o = orientation(s.a, s.b, t.b);
  if (o == Orientation::Collinear)
    throw InvalidInput("collinear same-color segments share an endpoint");
  return o == Orientation::Left;
}

inline std::string format_point(const Point& p) {
  return "(" + format_rational(p.x) + "," + format_rational(p.y) + ")";
}

// A materialized red-blue crossing.
struct CrossingRef {
  int red_id = 0;
  int blue_id = 0;
  Point point;

  bool operator==(const CrossingRef& o) const {
    return red_id == o.red_id && blue_id == o.blue_id && point == o.point;
  }
};

}  // namespace rbindex
