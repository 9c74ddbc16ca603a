#include "doctest.h"

#include <random>
#include <set>

#include "planar_reach/ancestry.hpp"

using namespace planar_reach;

namespace {

DepthMask mask_of(std::initializer_list<int> xs) {
  DepthMask m;
  for (int x : xs) m.add(x);
  return m;
}

// Reference semantics, straight from the set comprehension.
int succ_ref(uint64_t bits, int i) {
  for (int j = i + 1; j < kWordWidth; ++j)
    if ((bits >> j) & 1) return j;
  return kNoDepth;
}
int pred_ref(uint64_t bits, int i) {
  for (int j = std::min(i, kWordWidth - 1); j >= 0; --j)
    if ((bits >> j) & 1) return j;
  return kNoDepth;
}
int count_ref(uint64_t bits, int i) {
  int c = 0;
  for (int j = i + 1; j < kWordWidth; ++j) c += (bits >> j) & 1;
  return c;
}

}  // namespace

TEST_CASE("mask successor, predecessor, count on pinned examples") {
  DepthMask s = mask_of({3, 5, 9});
  CHECK(succ_in_mask(s, 3) == 5);
  CHECK(succ_in_mask(s, 9) == kNoDepth);
  CHECK(succ_in_mask(DepthMask{}, 0) == kNoDepth);
  CHECK(pred_in_mask(s, 8) == 5);
  CHECK(pred_in_mask(mask_of({3}), 2) == kNoDepth);
  CHECK(pred_in_mask(mask_of({0}), 0) == 0);
  CHECK(count_above(s, 4) == 2);
  CHECK(count_above(DepthMask{}, 0) == 0);
  CHECK(count_above(mask_of({1, 2, 3}), 0) == 3);
}

TEST_CASE("mask operations match the reference on all width-16 sets") {
  for (uint32_t bits = 0; bits < (1u << 16); ++bits) {
    DepthMask m{bits};
    for (int i : {0, 1, 7, 14, 15}) {
      REQUIRE(succ_in_mask(m, i) == succ_ref(bits, i));
      REQUIRE(pred_in_mask(m, i) == pred_ref(bits, i));
      REQUIRE(count_above(m, i) == count_ref(bits, i));
    }
  }
}

TEST_CASE("mask operations match the reference on random full-width sets") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 2000; ++t) {
    DepthMask m{rng()};
    int i = static_cast<int>(rng() % kWordWidth);
    CHECK(succ_in_mask(m, i) == succ_ref(m.bits, i));
    CHECK(pred_in_mask(m, i) == pred_ref(m.bits, i));
    CHECK(count_above(m, i) == count_ref(m.bits, i));
  }
}

TEST_CASE("mask boundary values") {
  DepthMask full{~uint64_t{0}};
  CHECK(succ_in_mask(full, 63) == kNoDepth);
  CHECK(succ_in_mask(full, 62) == 63);
  CHECK(pred_in_mask(full, 63) == 63);
  CHECK(count_above(full, 63) == 0);
  CHECK(count_above(full, -1) == 64);
  CHECK(succ_in_mask(full, -1) == 0);
}

TEST_CASE("level ancestor on a three-node chain") {
  ShallowForest f;
  f.parent = {kNoNode, 0, 1};  // a <- b <- c
  f.depth = {0, 1, 2};
  LevelAncestorIndex idx = build_level_ancestor(f);
  CHECK(idx.level_anc(2, 2) == 0);
  CHECK(idx.level_anc(2, 1) == 1);
  CHECK(idx.level_anc(2, 0) == 2);
  CHECK(idx.level_anc(0, 0) == 0);
  CHECK(idx.steps_to_root(2) == 2);
  CHECK_THROWS_AS(idx.level_anc(1, 2), GraphError);
}

TEST_CASE("level ancestor on a single node") {
  ShallowForest f;
  f.parent = {kNoNode};
  f.depth = {0};
  LevelAncestorIndex idx = build_level_ancestor(f);
  CHECK(idx.level_anc(0, 0) == 0);
}

TEST_CASE("level ancestor rejects non-decreasing depths") {
  ShallowForest f;
  f.parent = {1, kNoNode};
  f.depth = {1, 1};
  CHECK_THROWS_WITH_AS(build_level_ancestor(f), doctest::Contains("cycle"),
                       GraphError);
}

static ShallowForest random_forest(int n, int max_depth, uint64_t seed) {
  std::mt19937_64 rng(seed);
  ShallowForest f;
  f.parent.assign(n, kNoNode);
  f.depth.assign(n, 0);
  for (NodeId v = 1; v < n; ++v) {
    if (rng() % 8 == 0) continue;  // new root
    NodeId p = static_cast<NodeId>(rng() % v);
    if (f.depth[p] + 1 > max_depth) continue;
    f.parent[v] = p;
    // skip some depth values to exercise the strict-decrease contract
    f.depth[v] = f.depth[p] + 1 + static_cast<int>(rng() % 2);
    if (f.depth[v] > max_depth) f.depth[v] = f.depth[p] + 1;
  }
  return f;
}

TEST_CASE("level ancestor equals the naive parent walk") {
  for (uint64_t seed : {1u, 2u, 3u}) {
    ShallowForest f = random_forest(200, 32, seed);
    LevelAncestorIndex idx = build_level_ancestor(f);
    LevelAncestorIndex idx6 = build_level_ancestor(f, 6);
    for (NodeId v = 0; v < f.size(); ++v) {
      NodeId u = v;
      int k = 0;
      while (true) {
        CHECK(idx.level_anc(v, k) == u);
        CHECK(idx6.level_anc(v, k) == u);
        if (f.parent[u] == kNoNode) break;
        u = f.parent[u];
        ++k;
      }
      CHECK(idx.steps_to_root(v) == k);
    }
  }
}

TEST_CASE("level ancestor exhaustive at a thousand nodes") {
  ShallowForest f = random_forest(1000, 48, 99);
  LevelAncestorIndex idx = build_level_ancestor(f);
  for (NodeId v = 0; v < f.size(); ++v) {
    NodeId u = v;
    for (int k = 0; k <= idx.steps_to_root(v); ++k) {
      REQUIRE(idx.level_anc(v, k) == u);
      u = f.parent[u];
    }
  }
}

TEST_CASE("lca basics") {
  //      0
  //     / \
  //    1   2
  //   / \
  //  3   4
  std::vector<NodeId> parent = {kNoNode, 0, 0, 1, 1};
  LcaIndex idx = build_lca(parent);
  CHECK(idx.lca(3, 3) == 3);
  CHECK(idx.lca(3, 1) == 1);
  CHECK(idx.lca(3, 4) == 1);
  CHECK(idx.lca(3, 2) == 0);
  CHECK(idx.lca(4, 2) == 0);
}

TEST_CASE("lca rejects cross-tree queries") {
  std::vector<NodeId> parent = {kNoNode, kNoNode, 0, 1};
  LcaIndex idx = build_lca(parent);
  CHECK(idx.lca(2, 0) == 0);
  CHECK(idx.lca(3, 1) == 1);
  CHECK_THROWS_WITH_AS(idx.lca(0, 1), doctest::Contains("different trees"),
                       GraphError);
}

static NodeId naive_lca(const std::vector<NodeId>& parent, NodeId a, NodeId b) {
  std::set<NodeId> anc;
  for (NodeId u = a; u != kNoNode; u = parent[u]) anc.insert(u);
  for (NodeId u = b; u != kNoNode; u = parent[u])
    if (anc.count(u)) return u;
  return kNoNode;
}

TEST_CASE("lca agrees with the naive walk on a random tree") {
  std::mt19937_64 rng(5);
  int n = 500;
  std::vector<NodeId> parent(n, kNoNode);
  for (NodeId v = 1; v < n; ++v) parent[v] = static_cast<NodeId>(rng() % v);
  LcaIndex idx = build_lca(parent);
  for (int t = 0; t < 10000; ++t) {
    NodeId a = static_cast<NodeId>(rng() % n);
    NodeId b = static_cast<NodeId>(rng() % n);
    REQUIRE(idx.lca(a, b) == naive_lca(parent, a, b));
  }
}

TEST_CASE("dfs orders give constant-time ancestry") {
  std::vector<NodeId> parent = {kNoNode, 0, 0, 1, 1};
  DfsOrders o = dfs_orders(parent);
  for (NodeId v = 0; v < 5; ++v) {
    CHECK(o.is_tree_ancestor(0, v));
    CHECK(o.is_tree_ancestor(v, v));
  }
  CHECK(o.is_tree_ancestor(1, 3));
  CHECK(!o.is_tree_ancestor(3, 1));
  CHECK(!o.is_tree_ancestor(1, 2));
  CHECK(!o.is_tree_ancestor(2, 1));
  CHECK(!o.is_tree_ancestor(3, 4));
}

TEST_CASE("dfs ancestry agrees with the parent walk on a random forest") {
  std::mt19937_64 rng(17);
  int n = 400;
  std::vector<NodeId> parent(n, kNoNode);
  for (NodeId v = 1; v < n; ++v)
    if (rng() % 10) parent[v] = static_cast<NodeId>(rng() % v);
  DfsOrders o = dfs_orders(parent);
  auto naive = [&](NodeId a, NodeId b) {
    for (NodeId u = b; u != kNoNode; u = parent[u])
      if (u == a) return true;
    return false;
  };
  for (int t = 0; t < 10000; ++t) {
    NodeId a = static_cast<NodeId>(rng() % n);
    NodeId b = static_cast<NodeId>(rng() % n);
    REQUIRE(o.is_tree_ancestor(a, b) == naive(a, b));
  }
}
