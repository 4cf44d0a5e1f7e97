#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <sstream>

#include "rbindex/generator.hpp"
#include "rbindex/life_table.hpp"
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

SegmentSetPair grid2x2() {
  SegmentSetPair pair;
  pair.reds.push_back(seg(Color::Red, 1, 0, 0, 9, 1));
  pair.reds.push_back(seg(Color::Red, 2, 1, 10, 10, 11));
  pair.blues.push_back(seg(Color::Blue, 1, 2, -5, 3, 15));
  pair.blues.push_back(seg(Color::Blue, 2, 4, -5, 5, 15));
  return pair;
}

}  // namespace

TEST_CASE("life table for the single-crossing instance") {
  auto pair = one_by_one();
  SweepResult sr = sweep(pair);
  LifeTable lt = build_life_table(sr, pair);
  REQUIRE(lt.rows.size() == 1);
  REQUIRE(lt.columns.size() == 1);
  CHECK(lt.rows[0].red_id == 1);
  CHECK(lt.columns[0].witness.x == rat(3));
  CHECK(lt.columns[0].rows_lo == 1);
  CHECK(lt.columns[0].rows_hi == 1);
}

TEST_CASE("zero-crossing instance has rows but no columns") {
  SegmentSetPair pair;
  pair.reds.push_back(seg(Color::Red, 1, 0, 0, 3, 1));
  pair.reds.push_back(seg(Color::Red, 2, 1, 5, 4, 6));
  SweepResult sr = sweep(pair);
  LifeTable lt = build_life_table(sr, pair);
  CHECK(lt.rows.size() == 2);
  CHECK(lt.columns.empty());
}

TEST_CASE("2x2 grid: columns span both rows, expanded pairs number four") {
  auto pair = grid2x2();
  SweepResult sr = sweep(pair);
  LifeTable lt = build_life_table(sr, pair);
  CHECK(lt.rows.size() == 2);
  unsigned long long pairs = 0;
  for (const auto& col : lt.columns) {
    CHECK(col.rows_lo == 1);
    CHECK(col.rows_hi == 2);
    pairs += static_cast<unsigned long long>(col.snapshot_size) * (col.rows_hi - col.rows_lo + 1);
  }
  CHECK(pairs == 4);
}

TEST_CASE("column witness x lies inside every spanned row's x interval") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto pair = gen_random({seed, 12, 12, GenMode::General});
    SweepResult sr = sweep(pair);
    LifeTable lt = build_life_table(sr, pair);
    for (const auto& col : lt.columns) {
      for (int row = col.rows_lo; row <= col.rows_hi; ++row) {
        CHECK(lt.rows[row - 1].x_lo <= col.witness.x);
        CHECK(col.witness.x <= lt.rows[row - 1].x_hi);
      }
    }
  }
}

TEST_CASE("row versions equal interval stabbing") {
  auto check = [](const SegmentSetPair& pair) {
    RBIndex ix = preprocess(pair);
    const int rows = static_cast<int>(ix.table.rows.size());
    for (int row = 1; row <= rows; ++row) {
      std::set<std::uint32_t> in_version;
      ix.outer_store->for_each(ix.row_version[row], [&](std::uint32_t, std::uint32_t col) {
        in_version.insert(col);
      });
      std::set<std::uint32_t> stabbing;
      for (std::uint32_t c = 0; c < ix.table.columns.size(); ++c)
        if (ix.table.columns[c].rows_lo <= row && row <= ix.table.columns[c].rows_hi)
          stabbing.insert(c);
      CHECK(in_version == stabbing);
    }
  };
  check(one_by_one());
  check(grid2x2());
  for (std::uint64_t seed = 1; seed <= 15; ++seed)
    check(gen_random({seed * 31, 10, 14, GenMode::General}));
}

TEST_CASE("second sweep performs two updates per column") {
  auto pair = grid2x2();
  SweepResult sr = sweep(pair);
  LifeTable lt = build_life_table(sr, pair);
  std::size_t cols = lt.columns.size();
  RBIndex ix = build_index(std::move(lt), pair, sr);
  // versions: one per update, plus the initial empty version.
  CHECK(ix.outer_store->versions() == 2 * cols + 1);
}

TEST_CASE("interval semantics: column present exactly between lo and hi") {
  // Hand-built: rows 1..5, one column spanning [2,4].
  LifeTable lt;
  for (int i = 0; i < 5; ++i) lt.rows.push_back({i + 1, i, rat(0), rat(10)});
  lt.columns.push_back({1, 0, 2, 4, VersionId{0}, 1, Point{rat(5), rat(0)}});
  SweepResult fake;
  fake.red_order = {0, 1, 2, 3, 4};
  fake.red_row_of = {1, 2, 3, 4, 5};
  fake.blue_store = std::make_shared<MemberStore>();
  SegmentSetPair pair;
  for (int i = 0; i < 5; ++i) pair.reds.push_back(seg(Color::Red, i + 1, 0, 2 * i, 10, 2 * i));
  RBIndex ix = build_index(std::move(lt), pair, fake);
  for (int row = 1; row <= 5; ++row) {
    std::size_t count = ix.outer_store->size(ix.row_version[row]);
    CHECK(count == ((row >= 2 && row <= 4) ? 1u : 0u));
  }
}

TEST_CASE("dump is deterministic and stable across rebuilds") {
  auto pair = grid2x2();
  std::ostringstream a, b;
  dump_life_table(preprocess(pair), a);
  dump_life_table(preprocess(pair), b);
  CHECK(a.str() == b.str());
  CHECK(a.str().find("rows 2") == 0);
}
