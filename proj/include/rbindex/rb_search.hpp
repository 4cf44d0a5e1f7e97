#pragma once

#include <optional>
#include <vector>

#include "rbindex/life_table.hpp"
#include "rbindex/naive.hpp"

namespace rbindex {

enum class NavMove { Parent, LeftChild, RightChild };

// A position in the implicit tree T_e of one red edge: an outer handle into
// the edge's row version (one node per column) plus an inner handle into
// that column's blue-bundle snapshot. The column's direction flag makes
// LeftChild always mean "smaller position along the red edge".
struct ImplicitNode {
  int red_id = 0;
  int row = 0;
  RBIndex::OuterStore::NodeHandle outer;
  MemberStore::NodeHandle inner;
  bool reversed = false;
  std::uint32_t column = 0;
};

// sweep -> life table -> persistent second sweep, deterministic per input.
inline RBIndex preprocess(const SegmentSetPair& pair) {
  SweepResult sr = sweep(pair);
  LifeTable lt = build_life_table(sr, pair);
  return build_index(std::move(lt), pair, sr);
}

namespace detail {

// Bottom-to-top bundle order vs left-to-right order along the edge: decided
// by two exact crossing evaluations against the snapshot's extreme members.
inline bool column_reversed(const RBIndex& ix, const Segment& red, std::uint32_t column) {
  const auto& col = ix.table.columns[column];
  if (col.snapshot_size <= 1) return false;
  int bottom = *ix.blue_store->min_key(col.blue_snapshot);
  int top = *ix.blue_store->max_key(col.blue_snapshot);
  auto qb = crossing_point(red, ix.blue_at_pos(bottom));
  auto qt = crossing_point(red, ix.blue_at_pos(top));
  if (!qb || !qt) throw std::logic_error("column member does not cross its red edge");
  return qt->x < qb->x;
}

inline ImplicitNode enter_column(const RBIndex& ix, int red_id, int row,
                                 RBIndex::OuterStore::NodeHandle outer) {
  ImplicitNode n;
  n.red_id = red_id;
  n.row = row;
  n.column = ix.outer_store->value(outer);
  n.outer = std::move(outer);
  const auto& col = ix.table.columns[n.column];
  n.inner = *ix.blue_store->root(col.blue_snapshot);
  n.reversed = column_reversed(ix, ix.red_of_row(row), n.column);
  return n;
}

inline MemberStore::Move eff_left(const ImplicitNode& n) {
  return n.reversed ? MemberStore::Move::RightChild : MemberStore::Move::LeftChild;
}
inline MemberStore::Move eff_right(const ImplicitNode& n) {
  return n.reversed ? MemberStore::Move::LeftChild : MemberStore::Move::RightChild;
}

inline bool on_spine(const ImplicitNode& n, bool left) {
  std::uint8_t want = (left != n.reversed) ? 0 : 1;
  for (std::uint8_t step : n.inner.path)
    if (step != want) return false;
  return true;
}

inline std::optional<ImplicitNode> child(const RBIndex& ix, const ImplicitNode& n, bool left) {
  auto c = ix.blue_store->navigate(n.inner, left ? eff_left(n) : eff_right(n));
  if (c) {
    ImplicitNode out = n;
    out.inner = std::move(*c);
    return out;
  }
  // Exhausted the inner tree on this side: the outer child's column is
  // grafted below the inner spine end.
  if (!on_spine(n, left)) return std::nullopt;
  auto oc = ix.outer_store->navigate(
      n.outer, left ? RBIndex::OuterStore::Move::LeftChild : RBIndex::OuterStore::Move::RightChild);
  if (!oc) return std::nullopt;
  return enter_column(ix, n.red_id, n.row, std::move(*oc));
}

}  // namespace detail

// Root of T_e; absent iff the edge has zero crossings.
inline std::optional<ImplicitNode> tree_root(const RBIndex& ix, int red_id) {
  int row = ix.row_of_red_id(red_id);
  if (row < 0) throw UnknownEdge(red_id);
  auto outer = ix.outer_store->root(ix.row_version[row]);
  if (!outer) return std::nullopt;
  return detail::enter_column(ix, red_id, row, std::move(*outer));
}

inline std::optional<ImplicitNode> navigate_node(const RBIndex& ix, const ImplicitNode& n,
                                                 NavMove move) {
  switch (move) {
    case NavMove::LeftChild:
      return detail::child(ix, n, true);
    case NavMove::RightChild:
      return detail::child(ix, n, false);
    case NavMove::Parent: {
      if (!n.inner.path.empty()) {
        ImplicitNode out = n;
        out.inner = *ix.blue_store->navigate(n.inner, MemberStore::Move::Parent);
        return out;
      }
      if (n.outer.path.empty()) return std::nullopt;  // root of T_e
      bool was_left = n.outer.path.back() == 0;
      auto op = ix.outer_store->navigate(n.outer, RBIndex::OuterStore::Move::Parent);
      ImplicitNode out = detail::enter_column(ix, n.red_id, n.row, std::move(*op));
      // The graft point is the end of the parent column's inner spine.
      auto mv = was_left ? detail::eff_left(out) : detail::eff_right(out);
      while (auto c = ix.blue_store->navigate(out.inner, mv)) out.inner = std::move(*c);
      return out;
    }
  }
  return std::nullopt;
}

// Materializes the node's crossing.
inline CrossingRef resolve(const RBIndex& ix, const ImplicitNode& n) {
  const Segment& red = ix.red_of_row(n.row);
  const Segment& blue = ix.blue_at_pos(ix.blue_store->key(n.inner));
  auto q = crossing_point(red, blue);
  if (!q) throw std::logic_error("implicit node does not resolve to a crossing");
  return {red.id, blue.id, *q};
}

struct InOrderStats {
  std::size_t filtered = 0;  // columns dropped by the endpoint filter
};

// Crossings of one edge from its left endpoint to its right endpoint,
// walked directly from the row version (independent of navigate_node). The
// endpoint filter re-checks witness containment per column; it never fires
// on valid input and the tests assert as much.
inline std::vector<CrossingRef> in_order(const RBIndex& ix, int red_id,
                                         InOrderStats* stats = nullptr) {
  int row = ix.row_of_red_id(red_id);
  if (row < 0) throw UnknownEdge(red_id);
  const Segment& red = ix.red_of_row(row);
  std::vector<CrossingRef> out;
  ix.outer_store->for_each(ix.row_version[row], [&](std::uint32_t, std::uint32_t column) {
    const auto& col = ix.table.columns[column];
    if (col.witness.x < red.a.x || red.b.x < col.witness.x) {
      if (stats) ++stats->filtered;
      return;
    }
    std::vector<int> positions;
    positions.reserve(col.snapshot_size);
    ix.blue_store->for_each(col.blue_snapshot, [&](int pos, const Empty&) {
      positions.push_back(pos);
    });
    if (detail::column_reversed(ix, red, column))
      std::reverse(positions.begin(), positions.end());
    for (int pos : positions) {
      const Segment& blue = ix.blue_at_pos(pos);
      auto q = crossing_point(red, blue);
      if (!q) throw std::logic_error("column member does not cross its red edge");
      out.push_back({red.id, blue.id, *q});
    }
  });
  return out;
}

struct BatchedStats {
  std::size_t oracle_calls = 0;
  std::size_t edges_with_crossings = 0;
  std::size_t found = 0;
};

// Oracle-guided descent from tree_root on every red edge. Lenient mode
// (default) treats an exhausted descent as "no interesting intersection on
// this edge"; strict mode reports it as an inconsistent oracle.
inline std::vector<CrossingRef> batched_search(const RBIndex& ix, const Oracle& oracle,
                                               bool strict = false,
                                               BatchedStats* stats = nullptr) {
  std::vector<CrossingRef> out;
  BatchedStats local;
  for (const Segment& r : ix.pair.reds) {
    auto node = tree_root(ix, r.id);
    if (!node) continue;
    ++local.edges_with_crossings;
    while (node) {
      OracleAnswer a = oracle(resolve(ix, *node));
      ++local.oracle_calls;
      if (a == OracleAnswer::Found) {
        out.push_back(resolve(ix, *node));
        ++local.found;
        break;
      }
      auto next = navigate_node(ix, *node,
                                a == OracleAnswer::GoLeft ? NavMove::LeftChild : NavMove::RightChild);
      if (!next && strict) throw InconsistentOracle(r.id);
      node = std::move(next);
    }
  }
  if (stats) *stats = local;
  return out;
}

}  // namespace rbindex
