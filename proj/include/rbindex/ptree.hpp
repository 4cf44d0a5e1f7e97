#pragma once

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <optional>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

namespace rbindex {

// Version handle into a PTreeStore. Every update returns a fresh VersionId;
// old versions stay valid and immutable. Version 0 is the empty tree.
struct VersionId {
  std::uint32_t v = 0;
  bool operator==(const VersionId&) const = default;
};

struct DuplicateKey : std::logic_error {
  DuplicateKey() : std::logic_error("key already present in this version") {}
};
struct MissingKey : std::logic_error {
  MissingKey() : std::logic_error("key not present in this version") {}
};
struct JoinOrderViolation : std::logic_error {
  JoinOrderViolation() : std::logic_error("join requires all left keys below all right keys") {}
};

struct Empty {};

// Partially persistent balanced search tree (AVL, join-based) with path
// copying over immutable arena nodes. Heights satisfy
// height <= 1.4405*log2(size+2), comfortably inside the 2*log2(size+2)
// contract. Updates are single-writer; reads of frozen versions are safe
// from any number of threads.
template <typename Key, typename Value = Empty, typename Compare = std::less<Key>>
class PTreeStore {
 public:
  using NodeId = std::uint32_t;  // 0 = null

  enum class Move { Parent, LeftChild, RightChild };

  // Addresses a node in one version by its root-to-node path, so a Parent
  // move is a pop rather than an upward pointer chase.
  struct NodeHandle {
    VersionId version;
    std::vector<std::uint8_t> path;  // 0 = left, 1 = right
    std::vector<NodeId> trail;       // root..current, trail.size() == path.size()+1
    NodeId node() const { return trail.back(); }
  };

  explicit PTreeStore(Compare cmp = Compare()) : cmp_(std::move(cmp)) {
    nodes_.push_back(Node{});  // sentinel for NodeId 0
    roots_.push_back(0);       // version 0 = empty
  }

  VersionId empty_version() const { return VersionId{0}; }
  std::size_t versions() const { return roots_.size(); }
  std::size_t nodes_allocated() const { return nodes_.size() - 1; }

  std::size_t size(VersionId v) const { return sz(root_of(v)); }
  int height(VersionId v) const { return ht(root_of(v)); }

  VersionId insert(VersionId v, const Key& k, const Value& val) {
    return publish(insert_rec(root_of(v), k, val));
  }

  VersionId erase(VersionId v, const Key& k) {
    return publish(erase_rec(root_of(v), k));
  }

  // Partitions v into (< k, >= k); both sides balanced, v unchanged.
  std::pair<VersionId, VersionId> split(VersionId v, const Key& k) {
    auto [a, b] = split_rec(root_of(v), k);
    return {publish(a), publish(b)};
  }

  // Monotone predicate split: goes_right must be false on a prefix of the
  // key order and true on the suffix.
  template <typename Pred>
  std::pair<VersionId, VersionId> split_by(VersionId v, Pred goes_right) {
    auto [a, b] = split_by_rec(root_of(v), goes_right);
    return {publish(a), publish(b)};
  }

  VersionId join(VersionId lo, VersionId hi) {
    NodeId l = root_of(lo), r = root_of(hi);
    if (l && r && !cmp_(key_of(max_node(l)), key_of(min_node(r)))) throw JoinOrderViolation();
    return publish(join2(l, r));
  }

  bool contains(VersionId v, const Key& k) const { return find_node(root_of(v), k) != 0; }

  std::optional<Value> find(VersionId v, const Key& k) const {
    NodeId n = find_node(root_of(v), k);
    if (!n) return std::nullopt;
    return nodes_[n].value;
  }

  std::optional<Key> min_key(VersionId v) const {
    NodeId r = root_of(v);
    if (!r) return std::nullopt;
    return key_of(min_node(r));
  }
  std::optional<Key> max_key(VersionId v) const {
    NodeId r = root_of(v);
    if (!r) return std::nullopt;
    return key_of(max_node(r));
  }

  template <typename F>
  void for_each(VersionId v, F&& f) const {
    for_each_rec(root_of(v), f);
  }

  std::vector<Key> keys(VersionId v) const {
    std::vector<Key> out;
    out.reserve(size(v));
    for_each(v, [&](const Key& k, const Value&) { out.push_back(k); });
    return out;
  }

  // Maximal runs of consecutive integer keys, cheap when the key set is
  // nearly contiguous: a subtree whose size matches its key span is one run.
  std::vector<std::pair<Key, Key>> integer_runs(VersionId v) const
    requires std::is_integral_v<Key>
  {
    std::vector<std::pair<Key, Key>> out;
    runs_rec(root_of(v), out);
    return out;
  }

  // --- navigation -----------------------------------------------------

  std::optional<NodeHandle> root(VersionId v) const {
    NodeId r = root_of(v);
    if (!r) return std::nullopt;
    NodeHandle h;
    h.version = v;
    h.trail.push_back(r);
    return h;
  }

  std::optional<NodeHandle> navigate(const NodeHandle& h, Move m) const {
    if (m == Move::Parent) {
      if (h.path.empty()) return std::nullopt;
      NodeHandle out = h;
      out.path.pop_back();
      out.trail.pop_back();
      return out;
    }
    NodeId cur = h.node();
    NodeId next = m == Move::LeftChild ? nodes_[cur].left : nodes_[cur].right;
    if (!next) return std::nullopt;
    NodeHandle out = h;
    out.path.push_back(m == Move::LeftChild ? 0 : 1);
    out.trail.push_back(next);
    return out;
  }

  const Key& key(const NodeHandle& h) const { return nodes_[h.node()].key; }
  const Value& value(const NodeHandle& h) const { return nodes_[h.node()].value; }
  std::size_t subtree_size(const NodeHandle& h) const { return nodes_[h.node()].size; }
  bool has_child(const NodeHandle& h, bool right) const {
    const Node& n = nodes_[h.node()];
    return (right ? n.right : n.left) != 0;
  }

  // Test hook: BST order, AVL balance and size bookkeeping of one version.
  bool check_invariants(VersionId v) const {
    bool ok = true;
    check_rec(root_of(v), ok);
    return ok;
  }

 private:
  struct Node {
    Key key{};
    Value value{};
    NodeId left = 0, right = 0;
    std::uint32_t size = 0;
    std::int8_t height = 0;
  };

  std::vector<Node> nodes_;
  std::vector<NodeId> roots_;
  Compare cmp_;

  NodeId root_of(VersionId v) const { return roots_.at(v.v); }
  VersionId publish(NodeId root) {
    roots_.push_back(root);
    return VersionId{static_cast<std::uint32_t>(roots_.size() - 1)};
  }

  int ht(NodeId t) const { return t ? nodes_[t].height : 0; }
  std::uint32_t sz(NodeId t) const { return t ? nodes_[t].size : 0; }
  const Key& key_of(NodeId t) const { return nodes_[t].key; }

  NodeId mk(NodeId l, const Key& k, const Value& val, NodeId r) {
    Node n;
    n.key = k;
    n.value = val;
    n.left = l;
    n.right = r;
    n.size = sz(l) + sz(r) + 1;
    n.height = static_cast<std::int8_t>(std::max(ht(l), ht(r)) + 1);
    nodes_.push_back(std::move(n));
    return static_cast<NodeId>(nodes_.size() - 1);
  }

  // Balancing constructor; tolerates a height mismatch of up to 2 between
  // l and r, which is all insert/erase/join ever produce.
  NodeId bal(NodeId l, const Key& k, const Value& val, NodeId r) {
    if (ht(l) > ht(r) + 1) {
      Node ln = nodes_[l];
      if (ht(ln.left) >= ht(ln.right)) {
        return mk(ln.left, ln.key, ln.value, mk(ln.right, k, val, r));
      }
      Node lrn = nodes_[ln.right];
      return mk(mk(ln.left, ln.key, ln.value, lrn.left), lrn.key, lrn.value,
                mk(lrn.right, k, val, r));
    }
    if (ht(r) > ht(l) + 1) {
      Node rn = nodes_[r];
      if (ht(rn.right) >= ht(rn.left)) {
        return mk(mk(l, k, val, rn.left), rn.key, rn.value, rn.right);
      }
      Node rln = nodes_[rn.left];
      return mk(mk(l, k, val, rln.left), rln.key, rln.value,
                mk(rln.right, rn.key, rn.value, rn.right));
    }
    return mk(l, k, val, r);
  }

  NodeId insert_rec(NodeId t, const Key& k, const Value& val) {
    if (!t) return mk(0, k, val, 0);
    Node n = nodes_[t];
    if (cmp_(k, n.key)) return bal(insert_rec(n.left, k, val), n.key, n.value, n.right);
    if (cmp_(n.key, k)) return bal(n.left, n.key, n.value, insert_rec(n.right, k, val));
    throw DuplicateKey();
  }

  // Removes the minimum of t, returning (min node id, remainder).
  std::pair<NodeId, NodeId> remove_min(NodeId t) {
    Node n = nodes_[t];
    if (!n.left) return {t, n.right};
    auto [m, rest] = remove_min(n.left);
    return {m, bal(rest, n.key, n.value, n.right)};
  }
  std::pair<NodeId, NodeId> remove_max(NodeId t) {
    Node n = nodes_[t];
    if (!n.right) return {t, n.left};
    auto [m, rest] = remove_max(n.right);
    return {m, bal(n.left, n.key, n.value, rest)};
  }

  NodeId erase_rec(NodeId t, const Key& k) {
    if (!t) throw MissingKey();
    Node n = nodes_[t];
    if (cmp_(k, n.key)) return bal(erase_rec(n.left, k), n.key, n.value, n.right);
    if (cmp_(n.key, k)) return bal(n.left, n.key, n.value, erase_rec(n.right, k));
    if (!n.left) return n.right;
    if (!n.right) return n.left;
    auto [m, rest] = remove_min(n.right);
    Node mn = nodes_[m];
    return bal(n.left, mn.key, mn.value, rest);
  }

  // Full AVL join for arbitrary height difference.
  NodeId join3(NodeId l, const Key& k, const Value& val, NodeId r) {
    if (ht(l) > ht(r) + 1) {
      Node ln = nodes_[l];
      return bal(ln.left, ln.key, ln.value, join3(ln.right, k, val, r));
    }
    if (ht(r) > ht(l) + 1) {
      Node rn = nodes_[r];
      return bal(join3(l, k, val, rn.left), rn.key, rn.value, rn.right);
    }
    return mk(l, k, val, r);
  }

  NodeId join2(NodeId l, NodeId r) {
    if (!l) return r;
    if (!r) return l;
    auto [m, rest] = remove_max(l);
    Node mn = nodes_[m];
    return join3(rest, mn.key, mn.value, r);
  }

  std::pair<NodeId, NodeId> split_rec(NodeId t, const Key& k) {
    if (!t) return {0, 0};
    Node n = nodes_[t];
    if (cmp_(n.key, k)) {
      auto [a, b] = split_rec(n.right, k);
      return {join3(n.left, n.key, n.value, a), b};
    }
    auto [a, b] = split_rec(n.left, k);
    return {a, join3(b, n.key, n.value, n.right)};
  }

  template <typename Pred>
  std::pair<NodeId, NodeId> split_by_rec(NodeId t, Pred& goes_right) {
    if (!t) return {0, 0};
    Node n = nodes_[t];
    if (!goes_right(n.key)) {
      auto [a, b] = split_by_rec(n.right, goes_right);
      return {join3(n.left, n.key, n.value, a), b};
    }
    auto [a, b] = split_by_rec(n.left, goes_right);
    return {a, join3(b, n.key, n.value, n.right)};
  }

  NodeId find_node(NodeId t, const Key& k) const {
    while (t) {
      const Node& n = nodes_[t];
      if (cmp_(k, n.key))
        t = n.left;
      else if (cmp_(n.key, k))
        t = n.right;
      else
        return t;
    }
    return 0;
  }

  NodeId min_node(NodeId t) const {
    while (nodes_[t].left) t = nodes_[t].left;
    return t;
  }
  NodeId max_node(NodeId t) const {
    while (nodes_[t].right) t = nodes_[t].right;
    return t;
  }

  template <typename F>
  void for_each_rec(NodeId t, F& f) const {
    if (!t) return;
    const Node& n = nodes_[t];
    for_each_rec(n.left, f);
    f(n.key, n.value);
    for_each_rec(n.right, f);
  }

  void runs_rec(NodeId t, std::vector<std::pair<Key, Key>>& out) const
    requires std::is_integral_v<Key>
  {
    if (!t) return;
    const Node& n = nodes_[t];
    Key lo = key_of(min_node(t)), hi = key_of(max_node(t));
    if (static_cast<std::uint64_t>(hi - lo) + 1 == n.size) {
      append_run(out, lo, hi);
      return;
    }
    runs_rec(n.left, out);
    append_run(out, n.key, n.key);
    runs_rec(n.right, out);
  }

  static void append_run(std::vector<std::pair<Key, Key>>& out, Key lo, Key hi) {
    if (!out.empty() && out.back().second + 1 == lo)
      out.back().second = hi;
    else
      out.emplace_back(lo, hi);
  }

  void check_rec(NodeId t, bool& ok) const {
    if (!t || !ok) return;
    const Node& n = nodes_[t];
    if (n.size != sz(n.left) + sz(n.right) + 1) ok = false;
    if (n.height != std::max(ht(n.left), ht(n.right)) + 1) ok = false;
    if (std::abs(ht(n.left) - ht(n.right)) > 1) ok = false;
    if (n.left && !cmp_(key_of(max_node(n.left)), n.key)) ok = false;
    if (n.right && !cmp_(n.key, key_of(min_node(n.right)))) ok = false;
    check_rec(n.left, ok);
    check_rec(n.right, ok);
  }
};

}  // namespace rbindex
