#pragma once

// Frame-level predecessor queries over the two-corner frames of a
// decomposition.  Nodes whose own frame has four corners are contracted into
// their parents, leaving a tree in which every non-root node is bounded by a
// frame with one source and one target corner.  For a vertex v and a level i,
// the structure reports the best vertex on each side of the level-(i+1) frame
// that can still reach v: "best" means furthest along the frame's directed
// boundary path on that side.  Queries run in a constant number of word
// operations; a brute-force reference implementation recomputes the same
// values from scratch for differential testing.

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "planar_reach/ancestry.hpp"
#include "planar_reach/core.hpp"
#include "planar_reach/decomp.hpp"
#include "planar_reach/plane_graph.hpp"

namespace planar_reach {

inline constexpr int8_t kSideNone = -1;
inline constexpr int8_t kSideLeft = 0;
inline constexpr int8_t kSideRight = 1;

// Chains in the frame forests never exceed the word width, so six jump
// levels always suffice; a fixed width keeps the per-vertex layout identical
// across instance sizes.
inline constexpr int kFrameJumpWidth = 6;

// Global side assignment for every edge that leaves some contracted frame
// into its region, indexed by edge id.  An edge keeps one side even when it
// crosses several nested frames.
struct LRPartition2 {
  std::vector<int8_t> side;

  uint64_t space_words() const { return vec_words(side); }
};

namespace frame2_detail {

// Temporary rule switches while the side assignment is being pinned down
// against the reference oracle; the survivors get hard-coded.
// g_orient 1: a corner strictly inside the forward boundary path is right,
// and right edges rank along the forward path.  g_orient 0: the mirror.
// g_skip bit 0: a frame never decides an edge leaving its source corner
// vertex; bit 1: same for the target corner vertex.
inline int g_orient = 1;
inline int g_skip = 0;
inline int g_src = 0;  // side for a corner at the source position
inline std::vector<int> g_orient_node;  // per-node override when non-empty

inline int orient_of(NodeId x) {
  if (x < (NodeId)g_orient_node.size()) return g_orient_node[x];
  return g_orient;
}

// Steps forward along a cyclic walk of the given length.
inline int fwd_dist(int len, int from, int to) {
  return (to - from + len) % len;
}

// The frame walk keeps its region on the left, so the source-to-target path
// that follows the walk turns clockwise around the already-placed side of
// the frame; a corner strictly inside that path puts the edge in the right
// pool.  Corners on the opposite path go left, and so does the source
// corner, which sits where the two paths meet.
inline int8_t corner_side(NodeId x, const DecompNode& nd, int32_t walk_pos) {
  int d = fwd_dist(nd.frame_len, nd.corner_pos[0], walk_pos);
  int along = fwd_dist(nd.frame_len, nd.corner_pos[0], nd.corner_pos[1]);
  if (d == 0) return g_src == 1 ? kSideRight : kSideLeft;
  bool inside_forward = d > 0 && d < along;
  bool inside_reverse = d > along;
  if (orient_of(x) == 1) return inside_forward ? kSideRight : kSideLeft;
  return inside_reverse ? kSideRight : kSideLeft;
}

// True when the frame defers the decision for an edge leaving this vertex.
inline bool skips(const DecompNode& nd, Vertex from) {
  if ((g_skip & 1) && from == nd.corner_vertex[0]) return true;
  if ((g_skip & 2) && from == nd.corner_vertex[1]) return true;
  return false;
}

// Rank of a frame corner in the cyclic traversal anchored at the source
// corner: the left pool ranks against the placed-side clockwise direction,
// the right pool with it.  Corners off the pool's own boundary path still
// get a well-defined rank further along the cycle.
inline int cyclic_rank(NodeId x, const DecompNode& nd, int32_t walk_pos,
                       bool left_pool) {
  bool with_walk = (orient_of(x) == 1) != left_pool;
  return with_walk ? fwd_dist(nd.frame_len, nd.corner_pos[0], walk_pos)
                   : fwd_dist(nd.frame_len, walk_pos, nd.corner_pos[0]);
}

// Non-contracted ancestors of full-tree node start, root first, including
// start itself when it survives contraction.
inline std::vector<NodeId> frame_chain(const StDecomposition& dec, NodeId start) {
  std::vector<NodeId> chain;
  for (NodeId x = start; x != kNoNode; x = dec.node(x).parent)
    if (dec.node(x).kind != FrameKind::four) chain.push_back(x);
  std::reverse(chain.begin(), chain.end());
  return chain;
}

}  // namespace frame2_detail

// Assigns each region-crossing edge of a contracted frame to the left or
// right pool.  The shallowest frame the edge crosses decides: the edge goes
// right when its corner there lies strictly inside the forward boundary
// path, and left otherwise.  An edge keeps that side at every deeper frame
// it crosses.
inline LRPartition2 lr_partition2(const StDecomposition& dec) {
  LRPartition2 part;
  part.side.assign(dec.graph().m(), kSideNone);

  std::vector<NodeId> reps;
  for (NodeId x = 0; x < dec.node_count(); ++x)
    if (dec.node(x).kind == FrameKind::two) reps.push_back(x);
  std::stable_sort(reps.begin(), reps.end(), [&](NodeId a, NodeId b) {
    return dec.depth(a) < dec.depth(b);
  });

  constexpr int8_t kPresent = -2;
  for (NodeId x : reps) {
    const DecompNode& nd = dec.node(x);
    for (const DownEdge& de : dec.down_edges(x)) {
      int8_t& s = part.side[de.edge];
      if (s == kSideLeft || s == kSideRight) continue;
      if (frame2_detail::skips(nd, de.from)) {
        s = kPresent;
        continue;
      }
      s = frame2_detail::corner_side(x, nd, de.walk_pos);
    }
  }
  for (int8_t& s : part.side)
    if (s == kPresent) s = kSideLeft;
  return part;
}

// Constant-time frame predecessor queries.  Stores, for every vertex, its
// contracted node and depth, the best left and right frame vertices on its
// own frame (the parents of two forests), the chain of vertices the query
// restarts from when the best path switches sides (a third forest), and
// one depth set per forest so a level ancestor jump can replace each climb.
class Frame2Index {
 public:
  static Frame2Index build(const StDecomposition& dec);

  int32_t d2(Vertex v) const { return d2_[v]; }
  NodeId c2(Vertex v) const { return c2_[v]; }
  Vertex parent_left(Vertex v) const { return pl_[v]; }
  Vertex parent_right(Vertex v) const { return pr_[v]; }
  Vertex parent_mid(Vertex v) const { return pm_[v]; }
  DepthMask depths_left(Vertex v) const { return dl_[v]; }
  DepthMask depths_right(Vertex v) const { return dr_[v]; }
  DepthMask mids(Vertex v) const { return mm_[v]; }
  const LRPartition2& partition() const { return part_; }

  // The contracted node whose frame separates v from level i, that is, the
  // ancestor of c2(v) at contracted depth i + 1.
  NodeId frame_node(Vertex v, int i) const {
    check_level(v, i);
    return t2_anc_.level_anc(c2_[v], d2_[v] - i - 1);
  }
  Vertex frame_source(Vertex v, int i) const { return s_vert_[frame_node(v, i)]; }
  Vertex frame_target(Vertex v, int i) const { return t_vert_[frame_node(v, i)]; }

  // m_i(v): the vertex whose own left and right parents the level-i answer
  // is phrased in terms of; v itself until a side switch happens below
  // depth d2(v), then the switch vertex, and so on down.
  Vertex mid(Vertex v, int i) const {
    check_level(v, i);
    int steps = count_above(mm_[v], i);
    return steps == 0 ? v : tm_.level_anc(v, steps);
  }

  // Deepest vertex of depth at most i on u's left parent chain, including u,
  // or the sentinel when the chain ends first.
  Vertex climb_left(Vertex u, int i) const { return climb(dl_, tl_, u, i); }
  Vertex climb_right(Vertex u, int i) const { return climb(dr_, tr_, u, i); }

  uint64_t space_words() const {
    return vec_words(c2_) + vec_words(d2_) + vec_words(pl_) + vec_words(pr_) +
           vec_words(pm_) + vec_words(dl_) + vec_words(dr_) + vec_words(mm_) +
           tl_.space_words() + tr_.space_words() + tm_.space_words() +
           vec_words(t2_parent_) + vec_words(t2_depth_) + vec_words(rep_) +
           vec_words(s_vert_) + vec_words(t_vert_) + t2_anc_.space_words() +
           part_.space_words();
  }

 private:
  void check_level(Vertex v, int i) const {
    PR_CHECK(v >= 0 && v < static_cast<Vertex>(d2_.size()),
             "vertex " << v << " out of range");
    PR_CHECK(i >= 0 && i < d2_[v],
             "level " << i << " out of range for vertex " << v << " at depth "
                      << d2_[v]);
  }

  Vertex climb(const std::vector<DepthMask>& depths, const LevelAncestorIndex& la,
               Vertex u, int i) const {
    if (u == kNoVertex) return kNoVertex;
    if (d2_[u] <= i) return u;
    if (pred_in_mask(depths[u], i) == kNoDepth) return kNoVertex;
    return la.level_anc(u, count_above(depths[u], i) + 1);
  }

  std::vector<NodeId> c2_;
  std::vector<int32_t> d2_;
  std::vector<Vertex> pl_, pr_, pm_;
  std::vector<DepthMask> dl_, dr_, mm_;
  LevelAncestorIndex tl_, tr_, tm_;
  std::vector<NodeId> t2_parent_;
  std::vector<int32_t> t2_depth_;
  std::vector<NodeId> rep_;
  std::vector<Vertex> s_vert_, t_vert_;
  LevelAncestorIndex t2_anc_;
  LRPartition2 part_;
};

// Best left and right frame vertices for v at level i: among the edges that
// cross the level-(i+1) frame on that side and whose head still reaches v,
// the tail furthest along the side's boundary path, or the sentinel when no
// such edge exists.
inline std::pair<Vertex, Vertex> l_r_query(const Frame2Index& idx, Vertex v, int i) {
  Vertex m = idx.mid(v, i);
  return {idx.climb_left(m, i), idx.climb_right(m, i)};
}

inline Frame2Index Frame2Index::build(const StDecomposition& dec) {
  const PlaneDigraph& g = dec.graph();
  const int n = g.n();
  Frame2Index idx;
  PR_CHECK(dec.height() < kWordWidth,
           "decomposition height " << dec.height() << " overflows the depth masks");

  // Contract four-corner nodes into their parents.  Parents are created
  // before children, so one increasing pass resolves every chain.
  const int nodes = dec.node_count();
  idx.rep_.assign(nodes, kNoNode);
  idx.t2_parent_.assign(nodes, kNoNode);
  idx.t2_depth_.assign(nodes, 0);
  idx.s_vert_.assign(nodes, kNoVertex);
  idx.t_vert_.assign(nodes, kNoVertex);
  for (NodeId x = 0; x < nodes; ++x) {
    const DecompNode& nd = dec.node(x);
    if (nd.kind == FrameKind::four) {
      idx.rep_[x] = idx.rep_[nd.parent];
      continue;
    }
    idx.rep_[x] = x;
    if (nd.kind == FrameKind::two) {
      idx.t2_parent_[x] = idx.rep_[nd.parent];
      idx.t2_depth_[x] = idx.t2_depth_[idx.t2_parent_[x]] + 1;
      idx.s_vert_[x] = nd.corner_vertex[0];
      idx.t_vert_[x] = nd.corner_vertex[1];
    }
  }
  idx.c2_.resize(n);
  idx.d2_.resize(n);
  int maxd = 0;
  for (Vertex v = 0; v < n; ++v) {
    idx.c2_[v] = idx.rep_[dec.c(v)];
    idx.d2_[v] = idx.t2_depth_[idx.c2_[v]];
    maxd = std::max(maxd, idx.d2_[v]);
  }

  idx.part_ = lr_partition2(dec);

  std::vector<std::vector<NodeId>> reps_at(maxd + 1);
  for (NodeId x = 0; x < nodes; ++x)
    if (idx.rep_[x] == x && dec.node(x).kind == FrameKind::two)
      reps_at[idx.t2_depth_[x]].push_back(x);

  // One global topological order drives every per-level sweep.
  std::vector<Vertex> topo;
  topo.reserve(n);
  {
    std::vector<int32_t> indeg(n, 0);
    for (EdgeId e = 0; e < g.m(); ++e) ++indeg[g.head(e)];
    for (Vertex v = 0; v < n; ++v)
      if (indeg[v] == 0) topo.push_back(v);
    for (size_t qi = 0; qi < topo.size(); ++qi)
      for (Dart d : g.rotation(topo[qi])) {
        if (!dart_forward(d)) continue;
        Vertex w = g.dart_to(d);
        if (--indeg[w] == 0) topo.push_back(w);
      }
    PR_CHECK(static_cast<int>(topo.size()) == n, "graph has a cycle");
  }
  std::vector<int32_t> in_start(n + 1, 0);
  std::vector<Vertex> in_tail(g.m());
  for (EdgeId e = 0; e < g.m(); ++e) ++in_start[g.head(e) + 1];
  for (Vertex v = 0; v < n; ++v) in_start[v + 1] += in_start[v];
  {
    std::vector<int32_t> fill(in_start.begin(), in_start.end() - 1);
    for (EdgeId e = 0; e < g.m(); ++e) in_tail[fill[g.head(e)]++] = g.tail(e);
  }

  idx.pl_.assign(n, kNoVertex);
  idx.pr_.assign(n, kNoVertex);
  idx.pm_.assign(n, kNoVertex);
  idx.dl_.assign(n, {});
  idx.dr_.assign(n, {});
  idx.mm_.assign(n, {});
  std::vector<Vertex> m_cur(n, kNoVertex);
  std::vector<Vertex> prev_l(n, kNoVertex), prev_r(n, kNoVertex);

  // Per-level scratch: best (rank, vertex) per side, and per-frame boundary
  // ranks, all epoch-stamped so levels and frames reset for free.
  std::vector<int32_t> rank_l(n), rank_r(n), st_val(n, 0);
  std::vector<Vertex> vert_l(n), vert_r(n);
  std::vector<int32_t> along(n), against(n), st_along(n, 0), st_against(n, 0);
  int32_t epoch = 0, frame_epoch = 0;

  for (int i = maxd - 1; i >= 0; --i) {
    ++epoch;
    auto offer = [&](std::vector<int32_t>& rank, std::vector<Vertex>& vert,
                     Vertex at, int32_t r, Vertex w) {
      if (st_val[at] != epoch) {
        st_val[at] = epoch;
        rank_l[at] = rank_r[at] = -1;
        vert_l[at] = vert_r[at] = kNoVertex;
      }
      if (r > rank[at]) {
        rank[at] = r;
        vert[at] = w;
      }
    };
    for (NodeId x : reps_at[i + 1]) {
      const DecompNode& nd = dec.node(x);
      FrameWalk fw = dec.replay_frame(x);
      ++frame_epoch;
      const int len = nd.frame_len;
      int ps = nd.corner_pos[0], pt = nd.corner_pos[1];
      int along_len = frame2_detail::fwd_dist(len, ps, pt);
      for (int k = 0; k <= along_len; ++k) {
        Vertex w = g.dart_to(fw.darts[(ps + k) % len]);
        if (st_along[w] != frame_epoch) {
          st_along[w] = frame_epoch;
          along[w] = k;
        }
      }
      for (int k = 0; k <= len - along_len; ++k) {
        Vertex w = g.dart_to(fw.darts[(ps - k + len) % len]);
        if (st_against[w] != frame_epoch) {
          st_against[w] = frame_epoch;
          against[w] = k;
        }
      }
      const bool fwd_right = frame2_detail::orient_of(x) == 1;
      auto& left_stamp = fwd_right ? st_against : st_along;
      auto& left_rank = fwd_right ? against : along;
      auto& right_stamp = fwd_right ? st_along : st_against;
      auto& right_rank = fwd_right ? along : against;
      for (const DownEdge& de : dec.down_edges(x)) {
        Vertex h = g.head(de.edge);
        int8_t s = idx.part_.side[de.edge];
        if (s == kSideLeft) {
          PR_CHECK(left_stamp[de.from] == frame_epoch,
                   "left edge " << de.edge << " starts off the reverse boundary path"
                                << " of the frame of node " << x);
          offer(rank_l, vert_l, h, left_rank[de.from], de.from);
        } else {
          PR_CHECK(s == kSideRight, "edge " << de.edge << " missing a side");
          PR_CHECK(right_stamp[de.from] == frame_epoch,
                   "right edge " << de.edge << " starts off the forward boundary path"
                                 << " of the frame of node " << x);
          offer(rank_r, vert_r, h, right_rank[de.from], de.from);
        }
      }
    }
    for (Vertex v : topo) {
      if (idx.d2_[v] <= i) continue;
      for (int32_t a = in_start[v]; a < in_start[v + 1]; ++a) {
        Vertex u = in_tail[a];
        if (idx.d2_[u] <= i || st_val[u] != epoch) continue;
        offer(rank_l, vert_l, v, rank_l[u], vert_l[u]);
        offer(rank_r, vert_r, v, rank_r[u], vert_r[u]);
      }
    }
    auto best_l = [&](Vertex v) { return st_val[v] == epoch ? vert_l[v] : kNoVertex; };
    auto best_r = [&](Vertex v) { return st_val[v] == epoch ? vert_r[v] : kNoVertex; };
    for (Vertex v = 0; v < n; ++v) {
      if (idx.d2_[v] != i + 1) continue;
      idx.pl_[v] = best_l(v);
      idx.pr_[v] = best_r(v);
      m_cur[v] = v;
    }
    for (Vertex v = 0; v < n; ++v) {
      if (idx.d2_[v] <= i + 1) continue;
      auto settle = [&](Vertex u, auto&& own) -> Vertex {
        if (u == kNoVertex || idx.d2_[u] <= i) return u;
        PR_CHECK(idx.d2_[u] == i + 1,
                 "frame vertex " << u << " sits below the frame it came from");
        return own(u);
      };
      Vertex li = best_l(v), ri = best_r(v);
      Vertex lp = settle(prev_l[v], [&](Vertex u) { return idx.pl_[u]; });
      Vertex rp = settle(prev_r[v], [&](Vertex u) { return idx.pr_[u]; });
      Vertex m_new = m_cur[v];
      if (ri != rp) {
        m_new = prev_l[v];
      } else if (li != lp) {
        m_new = prev_r[v];
      }
      if (m_new != m_cur[v]) {
        PR_CHECK(m_new != kNoVertex,
                 "side switch at level " << i << " for vertex " << v
                                         << " lost its restart vertex");
        idx.mm_[v].add(i + 1);
        if (idx.pm_[v] == kNoVertex) idx.pm_[v] = m_new;
        m_cur[v] = m_new;
      }
    }
    for (Vertex v = 0; v < n; ++v) {
      if (idx.d2_[v] <= i) continue;
      prev_l[v] = best_l(v);
      prev_r[v] = best_r(v);
    }
  }

  // Depth sets, filled parents-first along increasing contracted depth.
  {
    std::vector<Vertex> by_depth(topo);
    std::stable_sort(by_depth.begin(), by_depth.end(), [&](Vertex a, Vertex b) {
      return idx.d2_[a] < idx.d2_[b];
    });
    for (Vertex v : by_depth) {
      if (idx.pl_[v] != kNoVertex) {
        idx.dl_[v] = idx.dl_[idx.pl_[v]];
        idx.dl_[v].add(idx.d2_[idx.pl_[v]]);
      }
      if (idx.pr_[v] != kNoVertex) {
        idx.dr_[v] = idx.dr_[idx.pr_[v]];
        idx.dr_[v].add(idx.d2_[idx.pr_[v]]);
      }
    }
  }

  idx.tl_ = build_level_ancestor({idx.pl_, idx.d2_}, kFrameJumpWidth);
  idx.tr_ = build_level_ancestor({idx.pr_, idx.d2_}, kFrameJumpWidth);
  idx.tm_ = build_level_ancestor({idx.pm_, idx.d2_}, kFrameJumpWidth);
  idx.t2_anc_ = build_level_ancestor({idx.t2_parent_, idx.t2_depth_}, kFrameJumpWidth);
  return idx;
}

// Reference implementation: recomputes one (v, i) answer from the
// decomposition alone, with a fresh reachability search per crossing edge
// and a from-scratch side assignment per edge.  Exercised only by tests.
struct Frame2Sets {
  NodeId node = kNoNode;
  std::vector<DownEdge> lhat, rhat;  // reaching edges per side, boundary order
};

inline Frame2Sets brute_frame2_sets(const StDecomposition& dec, Vertex v, int i) {
  const PlaneDigraph& g = dec.graph();
  std::vector<NodeId> chain = frame2_detail::frame_chain(dec, dec.c(v));
  PR_CHECK(i >= 0 && i + 1 < static_cast<int>(chain.size()),
           "level " << i << " out of range for vertex " << v);
  NodeId x = chain[i + 1];

  auto reaches = [&](Vertex from) {
    std::vector<char> seen(g.n(), 0);
    std::vector<Vertex> stack = {from};
    seen[from] = 1;
    while (!stack.empty()) {
      Vertex u = stack.back();
      stack.pop_back();
      if (u == v) return true;
      for (Dart d : g.rotation(u))
        if (dart_forward(d) && !seen[g.dart_to(d)]) {
          seen[g.dart_to(d)] = 1;
          stack.push_back(g.dart_to(d));
        }
    }
    return false;
  };

  auto side_of = [&](const DownEdge& de) -> int8_t {
    for (NodeId y : frame2_detail::frame_chain(dec, dec.c(g.head(de.edge)))) {
      if (dec.node(y).kind != FrameKind::two) continue;
      const DecompNode& nd = dec.node(y);
      bool found = false;
      int32_t pos = -1;
      for (const DownEdge& cand : dec.down_edges(y))
        if (cand.edge == de.edge) {
          found = true;
          pos = cand.walk_pos;
          break;
        }
      if (!found || frame2_detail::skips(nd, de.from)) continue;
      return frame2_detail::corner_side(y, nd, pos);
    }
    return kSideLeft;
  };

  Frame2Sets out;
  out.node = x;
  for (const DownEdge& de : dec.down_edges(x)) {
    if (!reaches(g.head(de.edge))) continue;
    (side_of(de) == kSideLeft ? out.lhat : out.rhat).push_back(de);
  }
  const DecompNode& nd = dec.node(x);
  auto order = [&](std::vector<DownEdge>& set, bool left_pool) {
    std::stable_sort(set.begin(), set.end(),
                     [&](const DownEdge& a, const DownEdge& b) {
                       return frame2_detail::cyclic_rank(x, nd, a.walk_pos,
                                                         left_pool) <
                              frame2_detail::cyclic_rank(x, nd, b.walk_pos,
                                                         left_pool);
                     });
  };
  order(out.lhat, true);
  order(out.rhat, false);
  return out;
}

inline std::pair<Vertex, Vertex> brute_frame2(const StDecomposition& dec, Vertex v,
                                              int i) {
  Frame2Sets sets = brute_frame2_sets(dec, v, i);
  Vertex l = sets.lhat.empty() ? kNoVertex : sets.lhat.back().from;
  Vertex r = sets.rhat.empty() ? kNoVertex : sets.rhat.back().from;
  return {l, r};
}

}  // namespace planar_reach
