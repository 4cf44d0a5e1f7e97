#pragma once

#include <cassert>
#include <cstdint>
#include <functional>

namespace rbindex {

// Mutable AVL tree ordered purely by position: items are inserted before or
// after an existing node, never by key. Searches descend with a caller
// functor that sees the stored item and answers -1 (target is below), 0
// (this node), +1 (above). In-order always equals insertion order, which the
// sweep keeps equal to the geometric bundle order per color.
//
// Backref is invoked as Backref{}(item, node*) whenever an item's node
// changes, letting items keep a pointer to their node.
template <typename T, typename Backref>
class PosTree {
 public:
  struct Node {
    T item;
    Node* left = nullptr;
    Node* right = nullptr;
    Node* parent = nullptr;
    int height = 1;
  };

  PosTree() = default;
  ~PosTree() { destroy(root_); }
  PosTree(const PosTree&) = delete;
  PosTree& operator=(const PosTree&) = delete;

  bool empty() const { return root_ == nullptr; }

  Node* insert_root(const T& item) {
    assert(!root_);
    root_ = make(item, nullptr);
    return root_;
  }

  Node* insert_before(Node* at, const T& item) {
    Node* n;
    if (!at->left) {
      n = make(item, at);
      at->left = n;
    } else {
      Node* p = at->left;
      while (p->right) p = p->right;
      n = make(item, p);
      p->right = n;
    }
    rebalance_up(n->parent);
    return n;
  }

  Node* insert_after(Node* at, const T& item) {
    Node* n;
    if (!at->right) {
      n = make(item, at);
      at->right = n;
    } else {
      Node* p = at->right;
      while (p->left) p = p->left;
      n = make(item, p);
      p->left = n;
    }
    rebalance_up(n->parent);
    return n;
  }

  void erase(Node* n) {
    if (n->left && n->right) {
      // Swap payload with the in-order successor, then delete that node.
      Node* s = n->right;
      while (s->left) s = s->left;
      std::swap(n->item, s->item);
      Backref{}(n->item, n);
      Backref{}(s->item, s);
      n = s;
    }
    Node* child = n->left ? n->left : n->right;
    Node* parent = n->parent;
    if (child) child->parent = parent;
    if (!parent)
      root_ = child;
    else if (parent->left == n)
      parent->left = child;
    else
      parent->right = child;
    delete n;
    rebalance_up(parent);
  }

  Node* first() const {
    Node* t = root_;
    if (!t) return nullptr;
    while (t->left) t = t->left;
    return t;
  }

  static Node* next(Node* n) {
    if (n->right) {
      n = n->right;
      while (n->left) n = n->left;
      return n;
    }
    while (n->parent && n->parent->right == n) n = n->parent;
    return n->parent;
  }

  // dir(item): -1 descend left, 0 stop here, +1 descend right.
  template <typename Dir>
  Node* locate(Dir dir) const {
    Node* t = root_;
    while (t) {
      int d = dir(t->item);
      if (d == 0) return t;
      t = d < 0 ? t->left : t->right;
    }
    return nullptr;
  }

  // Lowest node (in-order) for which pred(item) holds; pred must be monotone
  // (false on a prefix of the order, true on the suffix).
  template <typename Pred>
  Node* first_where(Pred pred) const {
    Node* t = root_;
    Node* best = nullptr;
    while (t) {
      if (pred(t->item)) {
        best = t;
        t = t->left;
      } else {
        t = t->right;
      }
    }
    return best;
  }

  // Highest node for which pred holds; pred monotone true->false.
  template <typename Pred>
  Node* last_where(Pred pred) const {
    Node* t = root_;
    Node* best = nullptr;
    while (t) {
      if (pred(t->item)) {
        best = t;
        t = t->right;
      } else {
        t = t->left;
      }
    }
    return best;
  }

 private:
  Node* root_ = nullptr;

  Node* make(const T& item, Node* parent) {
    Node* n = new Node{item, nullptr, nullptr, parent, 1};
    Backref{}(n->item, n);
    return n;
  }

  void destroy(Node* n) {
    if (!n) return;
    destroy(n->left);
    destroy(n->right);
    delete n;
  }

  static int h(Node* n) { return n ? n->height : 0; }
  static void pull(Node* n) { n->height = std::max(h(n->left), h(n->right)) + 1; }

  void replace_child(Node* parent, Node* was, Node* now) {
    if (!parent)
      root_ = now;
    else if (parent->left == was)
      parent->left = now;
    else
      parent->right = now;
    if (now) now->parent = parent;
  }

  Node* rotate_left(Node* n) {
    Node* r = n->right;
    replace_child(n->parent, n, r);
    n->right = r->left;
    if (n->right) n->right->parent = n;
    r->left = n;
    n->parent = r;
    pull(n);
    pull(r);
    return r;
  }

  Node* rotate_right(Node* n) {
    Node* l = n->left;
    replace_child(n->parent, n, l);
    n->left = l->right;
    if (n->left) n->left->parent = n;
    l->right = n;
    n->parent = l;
    pull(n);
    pull(l);
    return l;
  }

  void rebalance_up(Node* n) {
    while (n) {
      pull(n);
      int bf = h(n->left) - h(n->right);
      if (bf > 1) {
        if (h(n->left->left) < h(n->left->right)) rotate_left(n->left);
        n = rotate_right(n);
      } else if (bf < -1) {
        if (h(n->right->right) < h(n->right->left)) rotate_right(n->right);
        n = rotate_left(n);
      }
      n = n->parent;
    }
  }
};

}  // namespace rbindex
