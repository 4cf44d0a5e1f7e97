#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "rbindex/geometry.hpp"
#include "rbindex/validate.hpp"

namespace rbindex {

struct LoadResult {
  SegmentSetPair pair;
  ValidationReport issues;  // load-time problems (zero x extent, bad fields)
};

// One record per line: `R x1 y1 x2 y2` or `B x1 y1 x2 y2`. Coordinates are
// decimal or p/q literals, `#` starts a comment. Endpoint order in the file
// is irrelevant; loading normalizes a.x < b.x. Records with equal endpoint
// x are reported and skipped (they cannot form an x-monotone segment).
inline LoadResult load_segments(std::istream& in) {
  LoadResult res;
  std::string line;
  int line_no = 0;
  int next_red = 1, next_blue = 1;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string color_tok;
    if (!(ls >> color_tok)) continue;  // blank/comment line
    std::string xs1, ys1, xs2, ys2;
    if (!(ls >> xs1 >> ys1 >> xs2 >> ys2) || (color_tok != "R" && color_tok != "B")) {
      res.issues.add("bad-record", "line " + std::to_string(line_no) + ": malformed record");
      continue;
    }
    std::string extra;
    if (ls >> extra) {
      res.issues.add("bad-record", "line " + std::to_string(line_no) + ": trailing fields");
      continue;
    }
    Segment s;
    try {
      s.a = Point{parse_rational(xs1), parse_rational(ys1)};
      s.b = Point{parse_rational(xs2), parse_rational(ys2)};
    } catch (const ParseError& e) {
      res.issues.add("bad-record", "line " + std::to_string(line_no) + ": " + e.what());
      continue;
    }
    if (s.a.x == s.b.x) {
      res.issues.add("not-x-monotone",
                     "line " + std::to_string(line_no) + ": endpoints share x coordinate");
      continue;
    }
    if (s.b.x < s.a.x) std::swap(s.a, s.b);
    s.color = color_tok == "R" ? Color::Red : Color::Blue;
    s.id = s.color == Color::Red ? next_red++ : next_blue++;
    (s.color == Color::Red ? res.pair.reds : res.pair.blues).push_back(std::move(s));
  }
  return res;
}

inline void save_segments(std::ostream& out, const SegmentSetPair& pair) {
  for (const auto* list : {&pair.reds, &pair.blues}) {
    for (const auto& s : *list) {
      out << color_letter(s.color) << ' ' << format_rational(s.a.x) << ' '
          << format_rational(s.a.y) << ' ' << format_rational(s.b.x) << ' '
          << format_rational(s.b.y) << '\n';
    }
  }
}

}  // namespace rbindex
