#pragma once

#include <cstdint>
#include <memory>
#include <ostream>
#include <vector>

#include "rbindex/bundle_sweep.hpp"

namespace rbindex {

// Rows: red segments in topological order, each with its x extent.
// Columns: timestamped blue-bundle snapshots spanning the contiguous range
// of red rows they cross. Column order is the event order, which along each
// individual row equals the crossing order along that red edge.
struct LifeTable {
  struct Row {
    int red_id = 0;
    int red_index = 0;  // into pair.reds
    Rational x_lo, x_hi;
  };
  struct Column {
    std::uint32_t event_index = 0;
    std::uint32_t tie_rank = 0;
    int rows_lo = 0, rows_hi = 0;  // 1-based inclusive
    VersionId blue_snapshot;
    std::uint32_t snapshot_size = 0;
    Point witness;
  };

  std::vector<Row> rows;
  std::vector<Column> columns;  // in event order; index+1 is the column key
  std::vector<int> blue_order;
  std::shared_ptr<MemberStore> blue_store;
  unsigned long long crossing_count = 0;
};

inline LifeTable build_life_table(const SweepResult& sr, const SegmentSetPair& pair) {
  LifeTable lt;
  lt.rows.reserve(sr.red_order.size());
  for (int idx : sr.red_order) {
    const Segment& s = pair.reds[idx];
    lt.rows.push_back({s.id, idx, s.a.x, s.b.x});
  }
  lt.columns.reserve(sr.events.size());
  for (const BundleEvent& e : sr.events) {
    lt.columns.push_back({e.event_index, e.tie_rank, e.rows_lo, e.rows_hi, e.blue_snapshot,
                          e.snapshot_size, e.witness});
  }
  lt.blue_order = sr.blue_order;
  lt.blue_store = sr.blue_store;
  lt.crossing_count = sr.crossing_count;
  return lt;
}

// The queryable structure: one persistent outer-tree version per red row,
// holding exactly the columns whose span includes that row, keyed by column
// sequence number. Immutable and freely shareable once built.
struct RBIndex {
  SegmentSetPair pair;
  std::vector<int> red_order;    // row (1-based) -> index into pair.reds
  std::vector<int> red_row_of;   // red index -> row
  std::vector<int> red_id_to_index;  // red id -> index into pair.reds (-1 absent)
  std::vector<int> blue_order;   // blue topo position -> index into pair.blues
  LifeTable table;

  using OuterStore = PTreeStore<std::uint32_t, std::uint32_t>;  // column seq -> column index
  std::shared_ptr<OuterStore> outer_store;
  std::vector<VersionId> row_version;  // [1..rows]; [0] = empty
  std::shared_ptr<MemberStore> blue_store;

  const Segment& red_of_row(int row) const { return pair.reds[red_order[row - 1]]; }
  const Segment& blue_at_pos(int pos) const { return pair.blues[blue_order[pos]]; }

  int row_of_red_id(int red_id) const {
    if (red_id < 0 || red_id >= static_cast<int>(red_id_to_index.size())) return -1;
    int idx = red_id_to_index[red_id];
    return idx < 0 ? -1 : red_row_of[idx];
  }
};

struct UnknownEdge : std::runtime_error {
  explicit UnknownEdge(int red_id)
      : std::runtime_error("unknown red edge id " + std::to_string(red_id)) {}
};

// Second sweep: walk the life table bottom to top; entering row i inserts
// the columns starting there and drops the columns that ended at row i-1,
// with every intermediate version retained.
inline RBIndex build_index(LifeTable lt, SegmentSetPair pair, const SweepResult& sr) {
  RBIndex ix;
  ix.pair = std::move(pair);
  ix.red_order = sr.red_order;
  ix.red_row_of = sr.red_row_of;
  ix.blue_order = sr.blue_order;
  ix.blue_store = sr.blue_store;
  ix.table = std::move(lt);

  int max_id = 0;
  for (const Segment& s : ix.pair.reds) max_id = std::max(max_id, s.id);
  ix.red_id_to_index.assign(max_id + 1, -1);
  for (std::size_t i = 0; i < ix.pair.reds.size(); ++i)
    ix.red_id_to_index[ix.pair.reds[i].id] = static_cast<int>(i);

  const int n_rows = static_cast<int>(ix.red_order.size());
  std::vector<std::vector<std::uint32_t>> starts(n_rows + 2), ends(n_rows + 2);
  for (std::uint32_t c = 0; c < ix.table.columns.size(); ++c) {
    starts[ix.table.columns[c].rows_lo].push_back(c);
    ends[ix.table.columns[c].rows_hi].push_back(c);
  }

  ix.outer_store = std::make_shared<RBIndex::OuterStore>();
  ix.row_version.assign(n_rows + 1, ix.outer_store->empty_version());
  VersionId cur = ix.outer_store->empty_version();
  for (int row = 1; row <= n_rows; ++row) {
    for (std::uint32_t c : ends[row - 1]) cur = ix.outer_store->erase(cur, c);
    for (std::uint32_t c : starts[row]) cur = ix.outer_store->insert(cur, c, c);
    ix.row_version[row] = cur;
  }
  for (std::uint32_t c : ends[n_rows]) cur = ix.outer_store->erase(cur, c);
  if (ix.outer_store->size(cur) != 0)
    throw std::logic_error("life table columns left open after the last row");
  return ix;
}

// Deterministic text form of the life table, for golden-file tests.
inline void dump_life_table(const RBIndex& ix, std::ostream& out) {
  out << "rows " << ix.table.rows.size() << "\n";
  for (std::size_t i = 0; i < ix.table.rows.size(); ++i) {
    const auto& r = ix.table.rows[i];
    out << "row " << (i + 1) << " red " << r.red_id << " x [" << format_rational(r.x_lo) << ", "
        << format_rational(r.x_hi) << "]\n";
  }
  out << "columns " << ix.table.columns.size() << "\n";
  for (std::size_t c = 0; c < ix.table.columns.size(); ++c) {
    const auto& col = ix.table.columns[c];
    out << "col " << (c + 1) << " key (" << col.event_index << "," << col.tie_rank << ") rows ["
        << col.rows_lo << "," << col.rows_hi << "] size " << col.snapshot_size << " witness "
        << format_point(col.witness) << "\n";
  }
}

}  // namespace rbindex
