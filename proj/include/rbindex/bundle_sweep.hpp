#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <memory>
#include <vector>

#include "rbindex/geometry.hpp"
#include "rbindex/pos_tree.hpp"
#include "rbindex/ptree.hpp"
#include "rbindex/topo_order.hpp"
#include "rbindex/validate.hpp"

namespace rbindex {

// Member trees are keyed by per-color topological position: an integer order
// that agrees with the pseudoline order of simultaneously active segments,
// so member comparisons inside bundles are plain int compares.
using MemberStore = PTreeStore<int>;

// One batch of crossings: every blue segment in the snapshot properly
// crosses every red segment with topological row in [rows_lo, rows_hi].
struct BundleEvent {
  std::uint32_t event_index = 0;  // 1-based endpoint event number
  std::uint32_t tie_rank = 0;     // processing order within one event point
  VersionId blue_snapshot;        // version in SweepResult::blue_store
  std::uint32_t snapshot_size = 0;
  int rows_lo = 0, rows_hi = 0;  // 1-based, inclusive
  Point witness;
};

struct SweepStats {
  std::size_t event_points = 0;
  std::size_t bundle_splits = 0;
  std::size_t bundle_merges = 0;
  std::size_t swaps = 0;         // bundle-bundle intersections encountered
  std::size_t member_nodes = 0;  // tree nodes allocated across both member stores
};

struct SweepResult {
  std::vector<int> red_order;   // row r (1-based) -> index into pair.reds at red_order[r-1]
  std::vector<int> red_row_of;  // red index -> row (1-based)
  std::vector<int> blue_order;  // blue topo position (0-based) -> index into pair.blues
  std::vector<int> blue_pos_of;
  std::vector<BundleEvent> events;  // sorted by (event_index, tie_rank)
  unsigned long long crossing_count = 0;
  SweepStats stats;
  std::shared_ptr<MemberStore> blue_store;
};

namespace detail {

struct SweepBundle;
struct BundleBackref {
  void operator()(SweepBundle*& b, void* node) const;
};
using BundleIndex = PosTree<SweepBundle*, BundleBackref>;

struct SweepBundle {
  Color color = Color::Red;
  VersionId tree;                   // member tree version
  int bottom_pos = 0, top_pos = 0;  // cached min/max member topo positions
  std::uint64_t label = 0;          // strictly increasing along the list
  SweepBundle* prev = nullptr;
  SweepBundle* next = nullptr;
  BundleIndex::Node* inode = nullptr;
  bool alive = true;
  int klass = 0;  // event-local class cache, see kL/kE/kH
  std::uint64_t klass_event = 0;
};

inline void BundleBackref::operator()(SweepBundle*& b, void* node) const {
  b->inode = static_cast<BundleIndex::Node*>(node);
}

// Bundle classes at an event point p: passes strictly below p, through p
// (ends at p), strictly above p.
constexpr int kL = 0, kE = 1, kH = 2;

class SweepEngine {
 public:
  SweepEngine(const SegmentSetPair& pair, SweepResult& out) : pair_(pair), out_(out) {}

  void run() {
    ValidationReport rep;
    validate_structural(pair_, rep);
    if (!rep.ok()) throw InvalidInput("structural validation failed: " + rep.violations[0].message);

    TopoOrder red_topo = topological_order(pair_.reds);
    TopoOrder blue_topo = topological_order(pair_.blues);
    out_.red_order = red_topo.order;
    out_.red_row_of.assign(pair_.reds.size(), 0);
    for (std::size_t i = 0; i < pair_.reds.size(); ++i)
      out_.red_row_of[i] = red_topo.position[i] + 1;
    out_.blue_order = blue_topo.order;
    out_.blue_pos_of = blue_topo.position;
    red_pos_of_ = red_topo.position;

    out_.blue_store = std::make_shared<MemberStore>();
    blue_members_ = out_.blue_store.get();

    build_events();
    for (event_no_ = 1; event_no_ <= events_.size(); ++event_no_) {
      process_event(events_[event_no_ - 1]);
    }
    out_.stats.event_points = events_.size();
    out_.stats.member_nodes = red_members_.nodes_allocated() + blue_members_->nodes_allocated();
    if (head_ != nullptr) throw InvalidInput("sweep finished with live bundles");
  }

 private:
  struct EndpointEvent {
    Point p;
    std::vector<int> end_red, end_blue;      // segment indexes ending here
    std::vector<int> start_red, start_blue;  // segment indexes starting here
  };

  const SegmentSetPair& pair_;
  SweepResult& out_;
  std::vector<int> red_pos_of_;

  MemberStore red_members_;
  MemberStore* blue_members_ = nullptr;

  std::deque<SweepBundle> arena_;
  SweepBundle* head_ = nullptr;
  SweepBundle* tail_ = nullptr;
  BundleIndex red_index_, blue_index_;

  std::vector<EndpointEvent> events_;
  std::uint64_t event_no_ = 0;
  Point p_;  // current event point

  static constexpr std::uint64_t kLabelGap = 1ull << 20;

  MemberStore& members(Color c) { return c == Color::Red ? red_members_ : *blue_members_; }
  BundleIndex& index(Color c) { return c == Color::Red ? red_index_ : blue_index_; }
  const Segment& seg_at(Color c, int pos) const {
    return c == Color::Red ? pair_.reds[out_.red_order[pos]] : pair_.blues[out_.blue_order[pos]];
  }

  // -1: member passes strictly below p, 0: through p, +1: strictly above.
  int member_vs_p(Color c, int pos) const { return -point_vs_segment(p_, seg_at(c, pos)); }

  int klass_of(SweepBundle* b) {
    if (b->klass_event != event_no_) {
      int v = member_vs_p(b->color, b->bottom_pos);
      b->klass = v < 0 ? kL : (v == 0 ? kE : kH);
      b->klass_event = event_no_;
    }
    return b->klass;
  }

  void build_events() {
    struct Entry {
      Point p;
      int seg;
      Color color;
      bool left;
    };
    std::vector<Entry> entries;
    entries.reserve(2 * (pair_.reds.size() + pair_.blues.size()));
    for (std::size_t i = 0; i < pair_.reds.size(); ++i) {
      entries.push_back({pair_.reds[i].a, static_cast<int>(i), Color::Red, true});
      entries.push_back({pair_.reds[i].b, static_cast<int>(i), Color::Red, false});
    }
    for (std::size_t i = 0; i < pair_.blues.size(); ++i) {
      entries.push_back({pair_.blues[i].a, static_cast<int>(i), Color::Blue, true});
      entries.push_back({pair_.blues[i].b, static_cast<int>(i), Color::Blue, false});
    }
    std::sort(entries.begin(), entries.end(),
              [](const Entry& l, const Entry& r) { return l.p.x < r.p.x; });
    for (std::size_t i = 0; i < entries.size();) {
      std::size_t j = i;
      EndpointEvent ev;
      ev.p = entries[i].p;
      while (j < entries.size() && entries[j].p.x == ev.p.x) {
        if (entries[j].p != ev.p)
          throw InvalidInput("distinct endpoints share x=" + format_rational(ev.p.x));
        const Entry& e = entries[j];
        auto& list = e.left ? (e.color == Color::Red ? ev.start_red : ev.start_blue)
                            : (e.color == Color::Red ? ev.end_red : ev.end_blue);
        list.push_back(e.seg);
        ++j;
      }
      events_.push_back(std::move(ev));
      i = j;
    }
  }

  // --- list / label plumbing ------------------------------------------

  SweepBundle* new_bundle(Color c, VersionId tree) {
    arena_.push_back(SweepBundle{});
    SweepBundle* b = &arena_.back();
    b->color = c;
    b->tree = tree;
    b->bottom_pos = *members(c).min_key(tree);
    b->top_pos = *members(c).max_key(tree);
    return b;
  }

  void link_after(SweepBundle* at, SweepBundle* b) {  // at == nullptr: at head
    b->prev = at;
    b->next = at ? at->next : head_;
    if (b->next) b->next->prev = b;
    if (at)
      at->next = b;
    else
      head_ = b;
    if (!b->next) tail_ = b;
    b->label = label_between(at, b->next);
  }

  void unlink(SweepBundle* b) {
    if (b->prev)
      b->prev->next = b->next;
    else
      head_ = b->next;
    if (b->next)
      b->next->prev = b->prev;
    else
      tail_ = b->prev;
    b->alive = false;
  }

  std::uint64_t label_between(SweepBundle* lo, SweepBundle* hi) {
    std::uint64_t a = lo ? lo->label : 0;
    if (!hi) return a + kLabelGap;
    if (hi->label - a >= 2) return a + (hi->label - a) / 2;
    relabel_all();
    return label_between(lo, hi);
  }

  void relabel_all() {
    std::uint64_t l = kLabelGap;
    for (SweepBundle* b = head_; b; b = b->next, l += kLabelGap) b->label = l;
  }

  // --- event processing -------------------------------------------------

  void process_event(const EndpointEvent& ev) {
    p_ = ev.p;

    split_straddlers(Color::Red);
    split_straddlers(Color::Blue);

    SweepBundle* first_non_l[2] = {
        item(red_index_.first_where([&](SweepBundle* b) { return klass_of(b) != kL; })),
        item(blue_index_.first_where([&](SweepBundle* b) { return klass_of(b) != kL; }))};
    SweepBundle* last_non_h[2] = {
        item(red_index_.last_where([&](SweepBundle* b) { return klass_of(b) != kH; })),
        item(blue_index_.last_where([&](SweepBundle* b) { return klass_of(b) != kH; }))};

    SweepBundle* a = min_label(first_non_l[0], first_non_l[1]);
    SweepBundle* z = max_label(last_non_h[0], last_non_h[1]);

    std::vector<SweepBundle*> anchors;
    std::uint32_t tie = 0;

    if (a && z && a->label < z->label) {
      sort_window(a, z, tie, anchors);
    }

    delete_ending(ev, anchors);
    insert_starting(ev, anchors);
    merge_around(anchors);
  }

  static SweepBundle* item(BundleIndex::Node* n) { return n ? n->item : nullptr; }
  static SweepBundle* min_label(SweepBundle* x, SweepBundle* y) {
    if (!x) return y;
    if (!y) return x;
    return x->label < y->label ? x : y;
  }
  static SweepBundle* max_label(SweepBundle* x, SweepBundle* y) {
    if (!x) return y;
    if (!y) return x;
    return x->label > y->label ? x : y;
  }

  // Split the (at most one per boundary) bundle whose members straddle the
  // event point so every bundle becomes class-pure.
  void split_straddlers(Color c) {
    BundleIndex& ix = index(c);
    // L | {E,H} boundary: lowest bundle whose top is at or above p.
    BundleIndex::Node* n =
        ix.first_where([&](SweepBundle* b) { return member_vs_p(c, b->top_pos) >= 0; });
    if (n && member_vs_p(c, n->item->bottom_pos) < 0) split_low(c, n->item, 0);
    // {L,E} | H boundary: lowest bundle whose top is strictly above p.
    n = ix.first_where([&](SweepBundle* b) { return member_vs_p(c, b->top_pos) > 0; });
    if (n && member_vs_p(c, n->item->bottom_pos) <= 0) split_low(c, n->item, 1);
  }

  // Splits b into [members with member_vs_p < threshold][rest]; the low part
  // becomes a fresh bundle inserted just below b.
  void split_low(Color c, SweepBundle* b, int threshold) {
    auto [lo, hi] =
        members(c).split_by(b->tree, [&](int pos) { return member_vs_p(c, pos) >= threshold; });
    SweepBundle* nb = new_bundle(c, lo);
    b->tree = hi;
    b->bottom_pos = *members(c).min_key(hi);
    SweepBundle* at = b->prev;
    link_after(at, nb);
    index(c).insert_before(b->inode, nb);
    ++out_.stats.bundle_splits;
  }

  // Stable insertion sort of the window by class; every adjacent
  // transposition is a bundle-bundle intersection batch. Any adjacent
  // transposition order yields, per red bundle, the forced partner order, so
  // tie ranks taken in swap order match the crossing order along every red
  // edge.
  void sort_window(SweepBundle* a, SweepBundle* z, std::uint32_t& tie,
                   std::vector<SweepBundle*>& anchors) {
    std::vector<SweepBundle*> w;
    for (SweepBundle* b = a;; b = b->next) {
      w.push_back(b);
      if (b == z) break;
      if (!b->next) throw std::logic_error("bundle window walk detached from its end");
    }
    SweepBundle* before = a->prev;
    SweepBundle* after = z->next;
    std::vector<std::uint64_t> labels;
    labels.reserve(w.size());
    for (SweepBundle* b : w) labels.push_back(b->label);

    for (std::size_t i = 1; i < w.size(); ++i) {
      for (std::size_t j = i; j > 0 && klass_of(w[j - 1]) > klass_of(w[j]); --j) {
        emit_swap(w[j - 1], w[j], tie);
        std::swap(w[j - 1], w[j]);
      }
    }

    // Relink the window in sorted order, reusing the label multiset.
    SweepBundle* prev = before;
    for (std::size_t i = 0; i < w.size(); ++i) {
      w[i]->label = labels[i];
      w[i]->prev = prev;
      if (prev)
        prev->next = w[i];
      else
        head_ = w[i];
      prev = w[i];
    }
    prev->next = after;
    if (after)
      after->prev = prev;
    else
      tail_ = prev;

    anchors.push_back(w.front());
    anchors.push_back(w.back());
  }

  // X sits below Y on the sweepline and must end up above it: a complete
  // bipartite batch of crossings witnessed at the current event point.
  void emit_swap(SweepBundle* x, SweepBundle* y, std::uint32_t& tie) {
    if (x->color == y->color)
      throw InvalidInput("same-color bundles out of order; degenerate input");
    SweepBundle* red = x->color == Color::Red ? x : y;
    SweepBundle* blue = x->color == Color::Red ? y : x;
    VersionId snap = blue->tree;
    auto size = static_cast<std::uint32_t>(blue_members_->size(snap));
    for (auto [lo, hi] : red_members_.integer_runs(red->tree)) {
      BundleEvent e;
      e.event_index = static_cast<std::uint32_t>(event_no_);
      e.tie_rank = tie++;
      e.blue_snapshot = snap;
      e.snapshot_size = size;
      e.rows_lo = lo + 1;
      e.rows_hi = hi + 1;
      e.witness = p_;
      out_.events.push_back(std::move(e));
      out_.crossing_count += static_cast<unsigned long long>(size) * (hi - lo + 1);
    }
    ++out_.stats.swaps;
  }

  void delete_ending(const EndpointEvent& ev, std::vector<SweepBundle*>& anchors) {
    for (Color c : {Color::Red, Color::Blue}) {
      const auto& ending = c == Color::Red ? ev.end_red : ev.end_blue;
      std::vector<SweepBundle*> es;
      std::size_t total = 0;
      for (BundleIndex::Node* n =
               index(c).first_where([&](SweepBundle* b) { return klass_of(b) >= kE; });
           n && klass_of(n->item) == kE; n = BundleIndex::next(n)) {
        es.push_back(n->item);
        total += members(c).size(n->item->tree);
      }
      if (total != ending.size())
        throw InvalidInput("segment passes through an endpoint event; degenerate input");
      for (SweepBundle* b : es) {
        if (b->prev) anchors.push_back(b->prev);
        if (b->next) anchors.push_back(b->next);
        unlink(b);
        index(c).erase(b->inode);
      }
    }
  }

  void insert_starting(const EndpointEvent& ev, std::vector<SweepBundle*>& anchors) {
    std::vector<std::pair<Color, int>> starters;
    for (int s : ev.start_red) starters.push_back({Color::Red, s});
    for (int s : ev.start_blue) starters.push_back({Color::Blue, s});
    if (starters.empty()) return;

    // Order just right of p: ascending slope around the shared point.
    std::sort(starters.begin(), starters.end(), [&](const auto& l, const auto& r) {
      const Segment& sl = l.first == Color::Red ? pair_.reds[l.second] : pair_.blues[l.second];
      const Segment& sr = r.first == Color::Red ? pair_.reds[r.second] : pair_.blues[r.second];
      Orientation o = orientation(p_, sl.b, sr.b);
      if (o == Orientation::Collinear)
        throw InvalidInput("collinear segments start at one point; degenerate input");
      return o == Orientation::Left;
    });

    SweepBundle* last_l[2] = {
        item(red_index_.last_where([&](SweepBundle* b) { return klass_of(b) == kL; })),
        item(blue_index_.last_where([&](SweepBundle* b) { return klass_of(b) == kL; }))};
    SweepBundle* low_nb = max_label(last_l[0], last_l[1]);

    // Per-color anchor below which no new bundle of that color may go:
    // the last L bundle of the color, if any.
    BundleIndex::Node* color_at[2] = {last_l[0] ? last_l[0]->inode : nullptr,
                                      last_l[1] ? last_l[1]->inode : nullptr};

    SweepBundle* list_at = low_nb;
    std::size_t i = 0;
    while (i < starters.size()) {
      Color c = starters[i].first;
      VersionId t = members(c).empty_version();
      std::size_t j = i;
      while (j < starters.size() && starters[j].first == c) {
        int pos = c == Color::Red ? red_pos_of_[starters[j].second]
                                  : out_.blue_pos_of[starters[j].second];
        t = members(c).insert(t, pos, Empty{});
        ++j;
      }
      SweepBundle* nb = new_bundle(c, t);
      link_after(list_at, nb);
      int ci = c == Color::Red ? 0 : 1;
      if (color_at[ci])
        color_at[ci] = index(c).insert_after(color_at[ci], nb);
      else if (index(c).empty())
        color_at[ci] = index(c).insert_root(nb);
      else
        color_at[ci] = index(c).insert_before(index(c).first(), nb);
      list_at = nb;
      anchors.push_back(nb);
      i = j;
    }
    if (low_nb) anchors.push_back(low_nb);
  }

  void merge_around(std::vector<SweepBundle*>& anchors) {
    for (std::size_t i = 0; i < anchors.size(); ++i) {
      SweepBundle* b = anchors[i];
      if (!b->alive) continue;
      while (b->prev && b->prev->color == b->color) b = b->prev;
      while (b->next && b->next->color == b->color) merge_into(b, b->next);
    }
  }

  void merge_into(SweepBundle* lo, SweepBundle* hi) {
    lo->tree = members(lo->color).join(lo->tree, hi->tree);
    lo->top_pos = hi->top_pos;
    unlink(hi);
    index(lo->color).erase(hi->inode);
    ++out_.stats.bundle_merges;
  }
};

}  // namespace detail

// The topological bundle sweep: discovers every red-blue crossing exactly
// once, in batches of complete bipartite bundle-bundle intersections, each
// stamped with the endpoint event that witnessed it.
inline SweepResult sweep(const SegmentSetPair& pair) {
  SweepResult out;
  detail::SweepEngine engine(pair, out);
  engine.run();
  return out;
}

inline unsigned long long count_crossings(const SegmentSetPair& pair) {
  return sweep(pair).crossing_count;
}

// Expands the events into explicit (red, blue, point) triples.
inline std::vector<CrossingRef> report_crossings(const SegmentSetPair& pair) {
  SweepResult sr = sweep(pair);
  std::vector<CrossingRef> out;
  out.reserve(sr.crossing_count);
  for (const BundleEvent& e : sr.events) {
    for (int row = e.rows_lo; row <= e.rows_hi; ++row) {
      const Segment& red = pair.reds[sr.red_order[row - 1]];
      sr.blue_store->for_each(e.blue_snapshot, [&](int pos, const Empty&) {
        const Segment& blue = pair.blues[sr.blue_order[pos]];
        auto q = crossing_point(red, blue);
        if (!q) throw InvalidInput("event expansion produced a non-crossing pair");
        out.push_back({red.id, blue.id, *q});
      });
    }
  }
  return out;
}

}  // namespace rbindex
