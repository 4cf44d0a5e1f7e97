#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <set>

#include "rbindex/generator.hpp"
#include "rbindex/naive.hpp"
#include "rbindex/rb_search.hpp"

using namespace rbindex;

namespace {

Segment seg(Color c, int id, long x1, long y1, long x2, long y2) {
  Segment s;
  s.color = c;
  s.id = id;
  s.a = {rat(x1), rat(y1)};
  s.b = {rat(x2), rat(y2)};
  if (s.b.x < s.a.x) std::swap(s.a, s.b);
  return s;
}

SegmentSetPair one_by_one() {
  SegmentSetPair pair;
  pair.reds.push_back(seg(Color::Red, 1, 0, 0, 4, 0));
  pair.blues.push_back(seg(Color::Blue, 1, 1, 2, 3, -2));
  return pair;
}

// Exhaustive traversal of T_e through the navigation API, checking the
// parent/child algebra and collecting every node with its depth.
void traverse(const RBIndex& ix, const ImplicitNode& n, int depth,
              std::vector<CrossingRef>& out, int& max_depth) {
  max_depth = std::max(max_depth, depth);
  auto l = navigate_node(ix, n, NavMove::LeftChild);
  if (l) {
    auto back = navigate_node(ix, *l, NavMove::Parent);
    REQUIRE(back);
    CHECK(resolve(ix, *back) == resolve(ix, n));
    traverse(ix, *l, depth + 1, out, max_depth);
  }
  out.push_back(resolve(ix, n));
  auto r = navigate_node(ix, n, NavMove::RightChild);
  if (r) {
    auto back = navigate_node(ix, *r, NavMove::Parent);
    REQUIRE(back);
    CHECK(resolve(ix, *back) == resolve(ix, n));
    traverse(ix, *r, depth + 1, out, max_depth);
  }
}

void check_master_invariant(const SegmentSetPair& pair) {
  RBIndex ix = preprocess(pair);
  auto truth = naive_crossings(pair);
  for (const Segment& red : pair.reds) {
    InOrderStats st;
    auto got = in_order(ix, red.id, &st);
    CHECK(st.filtered == 0);  // defensive endpoint filter never fires
    const auto& want = truth[red.id];
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i].blue_id == want[i].blue_id);
      CHECK(got[i].point == want[i].point);
    }

    // Navigation agrees with in_order and respects the height bound.
    auto root = tree_root(ix, red.id);
    CHECK(root.has_value() == !want.empty());
    if (root) {
      std::vector<CrossingRef> visited;
      int max_depth = 0;
      traverse(ix, *root, 0, visited, max_depth);
      REQUIRE(visited.size() == want.size());
      for (std::size_t i = 0; i < visited.size(); ++i) CHECK(visited[i] == got[i]);
      double k = static_cast<double>(want.size());
      CHECK(max_depth <= 4.0 * std::log2(k + 2));
      CHECK(!navigate_node(ix, *root, NavMove::Parent));
    }
  }
}

}  // namespace

TEST_CASE("single crossing: root resolves to it") {
  RBIndex ix = preprocess(one_by_one());
  auto root = tree_root(ix, 1);
  REQUIRE(root);
  CrossingRef c = resolve(ix, *root);
  CHECK(c == CrossingRef{1, 1, Point{rat(2), rat(0)}});
  CHECK(in_order(ix, 1).size() == 1);
  CHECK_THROWS_AS(tree_root(ix, 99), UnknownEdge);
}

TEST_CASE("empty blue set: all-empty trees") {
  SegmentSetPair pair;
  pair.reds.push_back(seg(Color::Red, 1, 0, 0, 4, 1));
  pair.reds.push_back(seg(Color::Red, 2, 1, 5, 5, 6));
  RBIndex ix = preprocess(pair);
  CHECK(!tree_root(ix, 1));
  CHECK(!tree_root(ix, 2));
  CHECK(in_order(ix, 1).empty());
}

TEST_CASE("three blues cross in left-to-right order") {
  SegmentSetPair pair;
  pair.reds.push_back(seg(Color::Red, 1, 0, 0, 9, 1));
  pair.blues.push_back(seg(Color::Blue, 1, 2, -5, 3, 15));
  pair.blues.push_back(seg(Color::Blue, 2, 4, -5, 5, 15));
  pair.blues.push_back(seg(Color::Blue, 3, 6, -5, 7, 15));
  RBIndex ix = preprocess(pair);
  auto got = in_order(ix, 1);
  REQUIRE(got.size() == 3);
  CHECK(got[0].blue_id == 1);
  CHECK(got[1].blue_id == 2);
  CHECK(got[2].blue_id == 3);
  CHECK(got[0].point.x < got[1].point.x);
  CHECK(got[1].point.x < got[2].point.x);
}

TEST_CASE("downward-crossed bundle still reads left to right") {
  // A steep red descends through a bundle of near-horizontal blues: the
  // bundle's bottom-to-top order is right-to-left along the red edge.
  SegmentSetPair pair;
  pair.reds.push_back(seg(Color::Red, 1, 1, 50, 8, -50));
  pair.blues.push_back(seg(Color::Blue, 1, 0, 0, 9, 1));
  pair.blues.push_back(seg(Color::Blue, 2, 2, 10, 11, 12));
  pair.blues.push_back(seg(Color::Blue, 3, 3, 15, 12, 18));
  check_master_invariant(pair);
  RBIndex ix = preprocess(pair);
  auto got = in_order(ix, 1);
  REQUIRE(got.size() == 3);
  // Along the descending red, the upper blue is crossed first.
  CHECK(got[0].blue_id == 3);
  CHECK(got[2].blue_id == 1);
}

TEST_CASE("master invariant on random instances, all modes") {
  for (GenMode mode : {GenMode::General, GenMode::GridLike, GenMode::BundleHeavy}) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      GenConfig cfg{seed * 131 + static_cast<int>(mode), 2 + static_cast<int>(seed % 20),
                    2 + static_cast<int>((3 * seed) % 20), mode};
      INFO("mode=" << gen_mode_name(mode) << " seed=" << cfg.seed);
      check_master_invariant(gen_random(cfg));
    }
  }
}

TEST_CASE("monotone direction within every column") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto pair = gen_random({seed * 7, 10, 16, GenMode::BundleHeavy});
    RBIndex ix = preprocess(pair);
    for (const Segment& red : pair.reds) {
      int row = ix.red_row_of[ix.red_id_to_index[red.id]];
      ix.outer_store->for_each(ix.row_version[row], [&](std::uint32_t, std::uint32_t col) {
        std::vector<Rational> xs;
        ix.blue_store->for_each(ix.table.columns[col].blue_snapshot, [&](int pos, const Empty&) {
          xs.push_back(crossing_point(red, ix.blue_at_pos(pos))->x);
        });
        bool increasing = std::is_sorted(xs.begin(), xs.end());
        std::reverse(xs.begin(), xs.end());
        bool decreasing = std::is_sorted(xs.begin(), xs.end());
        CHECK((increasing || decreasing));
      });
    }
  }
}

TEST_CASE("preprocess is deterministic") {
  auto pair = gen_random({42, 12, 12, GenMode::General});
  std::ostringstream a, b;
  dump_life_table(preprocess(pair), a);
  dump_life_table(preprocess(pair), b);
  CHECK(a.str() == b.str());
}

TEST_CASE("batched search follows a forced path") {
  SegmentSetPair pair;
  pair.reds.push_back(seg(Color::Red, 1, 0, 0, 9, 1));
  pair.blues.push_back(seg(Color::Blue, 1, 2, -5, 3, 15));
  pair.blues.push_back(seg(Color::Blue, 2, 4, -5, 5, 15));
  pair.blues.push_back(seg(Color::Blue, 3, 6, -5, 7, 15));
  RBIndex ix = preprocess(pair);

  // Always GoRight: lands on the rightmost crossing, never Found.
  BatchedStats st;
  auto res = batched_search(ix, [](const CrossingRef&) { return OracleAnswer::GoRight; },
                            /*strict=*/false, &st);
  CHECK(res.empty());
  CHECK(st.oracle_calls <= 4);  // height+1 for three crossings

  // Strict mode reports the exhausted descent.
  CHECK_THROWS_AS(batched_search(ix, [](const CrossingRef&) { return OracleAnswer::GoRight; },
                                 /*strict=*/true),
                  InconsistentOracle);
}

TEST_CASE("batched search equals the naive reference on target-blue oracles") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    auto pair = gen_random({seed * 53, 10, 12, GenMode::General});
    RBIndex ix = preprocess(pair);
    auto truth = naive_crossings(pair);

    // Target: per edge, the leftmost crossing with an even blue id.
    std::map<int, CrossingRef> target;
    for (const auto& [red_id, list] : truth)
      for (const auto& c : list)
        if (c.blue_id % 2 == 0) {
          target.emplace(red_id, c);
          break;
        }
    Oracle oracle = [&](const CrossingRef& probe) {
      auto it = target.find(probe.red_id);
      if (it == target.end()) return OracleAnswer::GoLeft;
      if (it->second.point == probe.point) return OracleAnswer::Found;
      return it->second.point.x < probe.point.x ? OracleAnswer::GoLeft : OracleAnswer::GoRight;
    };

    BatchedStats st;
    auto fast = batched_search(ix, oracle, false, &st);
    auto slow = naive_batched_search(pair, oracle);
    REQUIRE(fast.size() == slow.size());
    for (std::size_t i = 0; i < fast.size(); ++i) CHECK(fast[i] == slow[i]);
    CHECK(fast.size() == target.size());

    // Oracle budget: per searched edge at most height+1 calls.
    double n = static_cast<double>(pair.reds.size() + pair.blues.size());
    CHECK(static_cast<double>(st.oracle_calls) <=
          2.0 * static_cast<double>(pair.reds.size()) * (std::log2(n + 2) + 2));
  }
}

TEST_CASE("edges without crossings cost zero oracle calls") {
  SegmentSetPair pair;
  pair.reds.push_back(seg(Color::Red, 1, 0, 0, 4, 1));
  RBIndex ix = preprocess(pair);
  BatchedStats st;
  std::size_t calls = 0;
  auto res = batched_search(ix, [&](const CrossingRef&) {
    ++calls;
    return OracleAnswer::Found;
  }, false, &st);
  CHECK(res.empty());
  CHECK(calls == 0);
  CHECK(st.oracle_calls == 0);
}
