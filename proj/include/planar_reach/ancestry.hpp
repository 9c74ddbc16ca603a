#pragma once

#include <bit>
#include <cstdint>
#include <vector>

#include "planar_reach/core.hpp"

namespace planar_reach {

using NodeId = int32_t;
constexpr NodeId kNoNode = -1;

// ---------------------------------------------------------------------------
// Single-word sets

constexpr int kWordWidth = 64;
constexpr int kNoDepth = -1;

// A set of integers below the word width, one bit per element.  Used for the
// per-vertex depth sets; anything deeper than the word is a build failure
// upstream, never a silent truncation here.
struct DepthMask {
  uint64_t bits = 0;

  void add(int i) {
    PR_CHECK(0 <= i && i < kWordWidth, "mask element " << i << " out of range");
    bits |= uint64_t{1} << i;
  }
  bool contains(int i) const { return i >= 0 && i < kWordWidth && (bits >> i) & 1; }
  int size() const { return std::popcount(bits); }
  bool empty() const { return bits == 0; }
};

// min{ j in S : j > i }, or kNoDepth.
inline int succ_in_mask(DepthMask s, int i) {
  ++op_counter().mask_op;
  uint64_t above = (i >= kWordWidth - 1) ? 0 : s.bits & (~uint64_t{0} << (i + 1));
  if (i < 0) above = s.bits;
  return above ? std::countr_zero(above) : kNoDepth;
}

// max{ j in S : j <= i }, or kNoDepth.
inline int pred_in_mask(DepthMask s, int i) {
  ++op_counter().mask_op;
  if (i < 0) return kNoDepth;
  uint64_t below = (i >= kWordWidth - 1) ? s.bits
                                         : s.bits & ((uint64_t{1} << (i + 1)) - 1);
  return below ? kWordWidth - 1 - std::countl_zero(below) : kNoDepth;
}

// |{ j in S : j > i }|
inline int count_above(DepthMask s, int i) {
  ++op_counter().mask_op;
  uint64_t above = (i >= kWordWidth - 1) ? 0 : s.bits & (~uint64_t{0} << (i + 1));
  if (i < 0) above = s.bits;
  return std::popcount(above);
}

// ---------------------------------------------------------------------------
// Level ancestor on shallow forests

// Forest given by parent references plus an externally supplied depth that
// strictly decreases toward the roots.  The depth need not step by one; the
// frame forests skip levels.
struct ShallowForest {
  std::vector<NodeId> parent;  // kNoNode at roots
  std::vector<int32_t> depth;

  int size() const { return static_cast<int>(parent.size()); }
};

class LevelAncestorIndex {
 public:
  // width: number of jump levels.  The default fits the deepest chain
  // actually present; callers that need size-independent layout pass a fixed
  // width (any chain fits in 6 levels because chains never exceed the word
  // width).
  static LevelAncestorIndex build(const ShallowForest& f, int width = -1) {
    int n = f.size();
    PR_CHECK(static_cast<int>(f.depth.size()) == n, "forest depth array size");
    LevelAncestorIndex idx;
    idx.n_ = n;
    idx.steps_.assign(n, -1);
    // Resolve chain lengths root-down; a parent whose depth does not
    // strictly decrease means the input is cyclic or mislabeled.
    for (NodeId v = 0; v < n; ++v) {
      if (idx.steps_[v] >= 0) continue;
      std::vector<NodeId> chain;
      NodeId u = v;
      while (u != kNoNode && idx.steps_[u] < 0) {
        chain.push_back(u);
        NodeId p = f.parent[u];
        if (p != kNoNode) {
          PR_CHECK(p >= 0 && p < n, "parent out of range");
          if (f.depth[p] >= f.depth[u])
            throw GraphError("cycle detected: depth does not decrease from node " +
                             std::to_string(u) + " to its parent");
        }
        u = p;
      }
      int32_t base = (u == kNoNode) ? -1 : idx.steps_[u];
      for (auto it = chain.rbegin(); it != chain.rend(); ++it)
        idx.steps_[*it] = ++base;
    }
    int32_t max_steps = 0;
    for (NodeId v = 0; v < n; ++v) max_steps = std::max(max_steps, idx.steps_[v]);
    int need = static_cast<int>(std::bit_width(static_cast<uint32_t>(max_steps)));
    idx.width_ = width < 0 ? need : width;
    PR_CHECK(idx.width_ >= need, "jump table width too small for forest depth");
    idx.jump_.assign(static_cast<size_t>(std::max(idx.width_, 1)) * n, kNoNode);
    for (NodeId v = 0; v < n; ++v)
      idx.jump_[v] = f.parent[v] == kNoNode ? v : f.parent[v];
    for (int k = 1; k < idx.width_; ++k)
      for (NodeId v = 0; v < n; ++v)
        idx.jump_[static_cast<size_t>(k) * n + v] =
            idx.jump_[static_cast<size_t>(k - 1) * n +
                      idx.jump_[static_cast<size_t>(k - 1) * n + v]];
    return idx;
  }

  NodeId level_anc(NodeId v, int k) const {
    ++op_counter().level_anc;
    if (k > steps_[v])
      throw GraphError("level ancestor " + std::to_string(k) + " steps above node " +
                       std::to_string(v) + " which has only " +
                       std::to_string(steps_[v]));
    for (int b = 0; k != 0; ++b, k >>= 1)
      if (k & 1) v = jump_[static_cast<size_t>(b) * n_ + v];
    return v;
  }

  int32_t steps_to_root(NodeId v) const { return steps_[v]; }
  int width() const { return width_; }

  uint64_t space_words() const { return vec_words(jump_) + vec_words(steps_); }

 private:
  int n_ = 0;
  int width_ = 0;
  std::vector<int32_t> steps_;
  std::vector<NodeId> jump_;
};

inline LevelAncestorIndex build_level_ancestor(const ShallowForest& f,
                                               int width = -1) {
  return LevelAncestorIndex::build(f, width);
}

// ---------------------------------------------------------------------------
// LCA via Euler tour + sparse table

class LcaIndex {
 public:
  static LcaIndex build(const std::vector<NodeId>& parent) {
    int n = static_cast<int>(parent.size());
    LcaIndex idx;
    idx.tree_of_.assign(n, -1);
    idx.first_.assign(n, -1);
    std::vector<NodeId> head(n, kNoNode), next_sib(n, kNoNode);
    for (NodeId v = n - 1; v >= 0; --v) {
      NodeId p = parent[v];
      if (p == kNoNode) continue;
      PR_CHECK(p >= 0 && p < n, "parent out of range");
      next_sib[v] = head[p];
      head[p] = v;
    }
    idx.euler_.reserve(2 * n);
    idx.edepth_.reserve(2 * n);
    int trees = 0;
    std::vector<std::pair<NodeId, int32_t>> stack;
    for (NodeId r = 0; r < n; ++r) {
      if (parent[r] != kNoNode) continue;
      int tree = trees++;
      stack.emplace_back(r, 0);
      while (!stack.empty()) {
        auto [v, d] = stack.back();
        stack.pop_back();
        if (v < 0) {
          // Returning to ~v after a subtree: record another occurrence.
          idx.euler_.push_back(~v);
          idx.edepth_.push_back(d);
          continue;
        }
        PR_CHECK(idx.tree_of_[v] == -1, "parent references form a cycle");
        idx.tree_of_[v] = tree;
        idx.first_[v] = static_cast<int32_t>(idx.euler_.size());
        idx.euler_.push_back(v);
        idx.edepth_.push_back(d);
        for (NodeId c = head[v]; c != kNoNode; c = next_sib[c]) {
          stack.emplace_back(~v, d);
          stack.emplace_back(c, d + 1);
        }
      }
    }
    for (NodeId v = 0; v < n; ++v)
      PR_CHECK(idx.tree_of_[v] >= 0, "parent references form a cycle");
    int len = static_cast<int>(idx.euler_.size());
    int levels = std::max(1, static_cast<int>(std::bit_width(static_cast<uint32_t>(len))));
    idx.table_.assign(static_cast<size_t>(levels) * len, 0);
    for (int i = 0; i < len; ++i) idx.table_[i] = i;
    for (int k = 1; k < levels; ++k) {
      int span = 1 << k;
      for (int i = 0; i + span <= len; ++i) {
        int32_t a = idx.table_[static_cast<size_t>(k - 1) * len + i];
        int32_t b = idx.table_[static_cast<size_t>(k - 1) * len + i + span / 2];
        idx.table_[static_cast<size_t>(k) * len + i] =
            idx.edepth_[a] <= idx.edepth_[b] ? a : b;
      }
    }
    idx.len_ = len;
    return idx;
  }

  NodeId lca(NodeId a, NodeId b) const {
    ++op_counter().table_read;
    if (a == b) return a;
    if (tree_of_[a] != tree_of_[b])
      throw GraphError("lca of nodes in different trees");
    int32_t i = first_[a], j = first_[b];
    if (i > j) std::swap(i, j);
    int k = std::bit_width(static_cast<uint32_t>(j - i + 1)) - 1;
    int32_t x = table_[static_cast<size_t>(k) * len_ + i];
    int32_t y = table_[static_cast<size_t>(k) * len_ + j + 1 - (1 << k)];
    return euler_[edepth_[x] <= edepth_[y] ? x : y];
  }

  int tree_of(NodeId v) const { return tree_of_[v]; }

  uint64_t space_words() const {
    return vec_words(euler_) + vec_words(edepth_) + vec_words(first_) +
           vec_words(table_) + vec_words(tree_of_);
  }

 private:
  int len_ = 0;
  std::vector<NodeId> euler_;
  std::vector<int32_t> edepth_, first_, table_, tree_of_;
};

inline LcaIndex build_lca(const std::vector<NodeId>& parent) {
  return LcaIndex::build(parent);
}

// ---------------------------------------------------------------------------
// DFS pre/post ancestry

struct DfsOrders {
  std::vector<int32_t> pre, post;

  // Ancestor-or-equal in the rooted forest the orders were built from.
  bool is_tree_ancestor(NodeId a, NodeId b) const {
    ++op_counter().label_cmp;
    return pre[a] <= pre[b] && post[b] <= post[a];
  }

  static DfsOrders build(const std::vector<NodeId>& parent) {
    int n = static_cast<int>(parent.size());
    DfsOrders o;
    o.pre.assign(n, -1);
    o.post.assign(n, -1);
    std::vector<NodeId> head(n, kNoNode), next_sib(n, kNoNode);
    for (NodeId v = n - 1; v >= 0; --v) {
      if (parent[v] == kNoNode) continue;
      PR_CHECK(parent[v] >= 0 && parent[v] < n, "parent out of range");
      next_sib[v] = head[parent[v]];
      head[parent[v]] = v;
    }
    int32_t timer = 0;
    std::vector<NodeId> stack;
    for (NodeId r = 0; r < n; ++r) {
      if (parent[r] != kNoNode) continue;
      stack.push_back(r);
      while (!stack.empty()) {
        NodeId v = stack.back();
        if (v < 0) {
          stack.pop_back();
          o.post[~v] = timer++;
          continue;
        }
        PR_CHECK(o.pre[v] == -1, "parent references form a cycle");
        o.pre[v] = timer++;
        stack.back() = ~v;
        for (NodeId c = head[v]; c != kNoNode; c = next_sib[c])
          stack.push_back(c);
      }
    }
    for (NodeId v = 0; v < n; ++v)
      PR_CHECK(o.pre[v] >= 0, "parent references form a cycle");
    return o;
  }

  uint64_t space_words() const { return vec_words(pre) + vec_words(post); }
};

inline DfsOrders dfs_orders(const std::vector<NodeId>& parent) {
  return DfsOrders::build(parent);
}

}  // namespace planar_reach
