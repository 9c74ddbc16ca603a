#pragma once

// Recursive decomposition of an acyclic single-source plane digraph.
//
// Each tree node consumes one face: every still-unplaced vertex that can
// reach the face boundary joins the node's component, and the faces left
// behind split into independent regions, one child per region.  A non-root
// node keeps an O(1) summary of the cycle bounding its region (the frame);
// full walks are replayed on demand from the rotation system.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "planar_reach/ancestry.hpp"
#include "planar_reach/closure.hpp"
#include "planar_reach/core.hpp"
#include "planar_reach/plane_graph.hpp"
#include "planar_reach/scc.hpp"

namespace planar_reach {

// ---------------------------------------------------------------------------
// Backward closure of a face

struct BackwardClosure {
  std::vector<Vertex> vertices;  // increasing
  std::vector<EdgeId> edges;     // increasing; every edge entering a member
};

// Smallest backward-closed subgraph containing all vertices on the boundary
// of face f, found by reverse search from the boundary.
inline BackwardClosure backward_closure(const PlaneDigraph& g, const FaceSet& fs,
                                        FaceId f) {
  PR_CHECK(f >= 0 && f < fs.count(), "face id " << f << " out of range");
  std::vector<char> in(g.n(), 0);
  std::vector<Vertex> stack;
  for (Dart d : fs.walk[f]) {
    Vertex v = g.dart_from(d);
    if (!in[v]) {
      in[v] = 1;
      stack.push_back(v);
    }
  }
  std::vector<std::vector<EdgeId>> in_edges(g.n());
  for (EdgeId e = 0; e < g.m(); ++e) in_edges[g.head(e)].push_back(e);
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    for (EdgeId e : in_edges[v]) {
      Vertex u = g.tail(e);
      if (!in[u]) {
        in[u] = 1;
        stack.push_back(u);
      }
    }
  }
  BackwardClosure bc;
  for (Vertex v = 0; v < g.n(); ++v)
    if (in[v]) bc.vertices.push_back(v);
  for (EdgeId e = 0; e < g.m(); ++e)
    if (in[g.head(e)]) bc.edges.push_back(e);
  return bc;
}

// ---------------------------------------------------------------------------
// Decomposition nodes

enum class FrameKind : uint8_t { root, two, four };

inline const char* to_string(FrameKind k) {
  switch (k) {
    case FrameKind::root: return "root";
    case FrameKind::two: return "2-frame";
    case FrameKind::four: return "4-frame";
  }
  return "?";
}

struct DecompNode {
  NodeId parent = kNoNode;
  int32_t depth = 0;
  FrameKind kind = FrameKind::root;
  FaceId face = kNoFace;  // the face this node consumed
  // Faces flanking the two target corners, recorded for four-frames so the
  // node's own face can later be projected onto the dual path between them.
  FaceId f0 = kNoFace, f1 = kNoFace;
  std::vector<Vertex> comp;      // vertices owned by this node, increasing
  std::vector<NodeId> children;  // creation order
  int32_t region_faces = 0;      // faces of the region this node subdivided
  Dart frame_start = kNoDart;    // minimal dart on the frame walk
  int32_t frame_len = 0;
  int32_t alternation = 0;  // 0 at the root, otherwise 2 or 4
  // Corner slots in walk order s0, t0, s1, t1; a two-frame uses slots 0, 1.
  // corner_pos holds the walk index of the corner's incoming dart.
  std::array<int32_t, 4> corner_pos{{-1, -1, -1, -1}};
  std::array<Dart, 4> corner_in{{kNoDart, kNoDart, kNoDart, kNoDart}};
  std::array<Dart, 4> corner_out{{kNoDart, kNoDart, kNoDart, kNoDart}};
  std::array<Vertex, 4> corner_vertex{{kNoVertex, kNoVertex, kNoVertex, kNoVertex}};
  // Four-frames: whether target a sits on a target corner of the parent.
  std::array<int8_t, 2> target_shared{{0, 0}};
  int32_t down_count = 0;  // edges leaving the frame into the region

  int corners_in_use() const { return alternation; }
};

struct FrameCorner {
  int32_t walk_pos;  // index of in_dart on the frame walk
  Dart in_dart;
  Dart out_dart;
  Vertex at;
  CornerKind kind;
};

struct FrameWalk {
  std::vector<Dart> darts;           // starting at DecompNode::frame_start
  std::vector<FrameCorner> corners;  // source/target corners in walk order
  int alternation = 0;
};

struct DownEdge {
  EdgeId edge;
  Dart dart;         // tail-side dart, in rotation order within its corner
  int32_t walk_pos;  // frame position of the corner the edge attaches at
  Vertex from;
};

struct Disegment {
  int source_slot;
  int target_slot;
  bool along_walk;            // travel direction relative to the frame walk
  std::vector<Vertex> verts;  // source corner vertex first, target last
};

namespace decomp_detail {

// Head vertex of the edge under dart d, regardless of which end d sits at.
inline Vertex edge_head(const PlaneDigraph& g, Dart d) {
  return dart_forward(d) ? g.dart_to(d) : g.dart_from(d);
}

// One step of a region-boundary walk: after arriving on d, scan the rotation
// at its endpoint clockwise, skipping darts whose edge heads into the region.
// Every skipped dart leaves the vertex along such an edge; they are reported
// to on_skip in scan order.
template <class InS, class OnSkip>
Dart hole_step(const PlaneDigraph& g, Dart d, InS&& in_s, OnSkip&& on_skip) {
  Dart a = g.rot_next(dart_rev(d));
  int guard = g.degree(g.dart_to(d)) + 1;
  while (!in_s(edge_head(g, a))) {
    on_skip(a);
    a = g.rot_next(a);
    PR_CHECK(--guard > 0, "boundary walk stuck at vertex " << g.dart_to(d));
  }
  return a;
}

struct Builder;

}  // namespace decomp_detail

// ---------------------------------------------------------------------------
// The decomposition

class StDecomposition {
 public:
  // Rejects graphs with a directed cycle or a vertex unreachable from s.
  static StDecomposition build(const PlaneDigraph& g, Vertex s);

  int node_count() const { return static_cast<int>(nodes_.size()); }
  const DecompNode& node(NodeId x) const { return nodes_[x]; }
  const std::vector<DecompNode>& nodes() const { return nodes_; }
  NodeId root() const { return 0; }
  Vertex source() const { return source_; }
  const PlaneDigraph& graph() const { return *g_; }

  NodeId c(Vertex v) const { return c_[v]; }
  const std::vector<NodeId>& c_map() const { return c_; }
  int depth(NodeId x) const { return nodes_[x].depth; }
  int height() const {
    int h = 0;
    for (const DecompNode& nd : nodes_) h = std::max(h, static_cast<int>(nd.depth));
    return h;
  }
  const DfsOrders& orders() const { return orders_; }

  // Ancestor-or-equal in the decomposition tree.
  bool node_ancestor(NodeId a, NodeId b) const {
    return orders_.is_tree_ancestor(a, b);
  }

  // The node that consumed the face, or retired it as an exhausted region.
  NodeId face_owner(FaceId f) const { return face_owner_[f]; }

  // Whether w was already placed when node x's region was carved, i.e. w
  // belongs to a strict ancestor of x.
  bool placed_above(Vertex w, NodeId x) const {
    NodeId cw = c_[w];
    return cw != x && orders_.is_tree_ancestor(cw, x);
  }

  FrameWalk replay_frame(NodeId x) const;
  std::vector<DownEdge> down_edges(NodeId x) const;
  std::vector<Disegment> disegments(NodeId x) const;

  // Words retained by the query path: the vertex-to-node map, tree ancestry
  // orders, and fixed-size node summaries.  Component and child lists are
  // build and validation aids and are excluded.
  uint64_t space_words() const {
    return vec_words(c_) + orders_.space_words() + nodes_.size() * kNodeWords;
  }

  void corrupt_for_tests(Vertex v, NodeId x) { c_[v] = x; }

 private:
  friend struct decomp_detail::Builder;
  static constexpr uint64_t kNodeWords = 14;

  const PlaneDigraph* g_ = nullptr;
  Vertex source_ = kNoVertex;
  std::vector<DecompNode> nodes_;
  std::vector<NodeId> c_;
  std::vector<NodeId> face_owner_;
  DfsOrders orders_;
};

inline FrameWalk StDecomposition::replay_frame(NodeId x) const {
  const DecompNode& nd = nodes_[x];
  FrameWalk w;
  if (nd.kind == FrameKind::root) return w;
  auto in_s = [&](Vertex v) { return placed_above(v, x); };
  auto nop = [](Dart) {};
  Dart d = nd.frame_start;
  do {
    w.darts.push_back(d);
    PR_CHECK(static_cast<int32_t>(w.darts.size()) <= nd.frame_len,
             "frame replay of node " << x << " overruns its stored length");
    d = decomp_detail::hole_step(*g_, d, in_s, nop);
  } while (d != nd.frame_start);
  int len = static_cast<int>(w.darts.size());
  int sources = 0;
  for (int i = 0; i < len; ++i) {
    Dart in = w.darts[i];
    Dart out = w.darts[(i + 1 == len) ? 0 : i + 1];
    CornerKind k = classify_corner(in, out);
    if (k == CornerKind::neither) continue;
    w.corners.push_back({i, in, out, g_->dart_to(in), k});
    sources += k == CornerKind::source;
  }
  w.alternation = 2 * sources;
  return w;
}

inline std::vector<DownEdge> StDecomposition::down_edges(NodeId x) const {
  const DecompNode& nd = nodes_[x];
  std::vector<DownEdge> out;
  if (nd.kind == FrameKind::root) return out;
  auto in_s = [&](Vertex v) { return placed_above(v, x); };
  Dart d = nd.frame_start;
  int32_t pos = 0;
  do {
    Dart next = decomp_detail::hole_step(*g_, d, in_s, [&](Dart a) {
      out.push_back({dart_edge(a), a, pos, g_->dart_from(a)});
    });
    PR_CHECK(++pos <= nd.frame_len,
             "frame replay of node " << x << " overruns its stored length");
    d = next;
  } while (d != nd.frame_start);
  return out;
}

inline std::vector<Disegment> StDecomposition::disegments(NodeId x) const {
  const DecompNode& nd = nodes_[x];
  std::vector<Disegment> out;
  if (nd.kind == FrameKind::root) return out;
  FrameWalk w = replay_frame(x);
  const int len = nd.frame_len;
  auto vert_at = [&](int pos) { return g_->dart_to(w.darts[pos]); };
  auto span = [&](int source_slot, int target_slot, bool along) {
    Disegment ds{source_slot, target_slot, along, {}};
    int i = nd.corner_pos[source_slot];
    int stop = nd.corner_pos[target_slot];
    ds.verts.push_back(vert_at(i));
    while (i != stop) {
      i = along ? (i + 1) % len : (i + len - 1) % len;
      ds.verts.push_back(vert_at(i));
    }
    return ds;
  };
  if (nd.alternation == 2) {
    out.push_back(span(0, 1, true));
    out.push_back(span(0, 1, false));
  } else {
    out.push_back(span(0, 1, true));
    out.push_back(span(2, 1, false));
    out.push_back(span(2, 3, true));
    out.push_back(span(0, 3, false));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Construction

namespace decomp_detail {

struct Builder {
  const PlaneDigraph& g;
  StDecomposition& out;
  FaceSet fs;
  TreeCotree tc;

  // In-edges per vertex, CSR.
  std::vector<int32_t> in_start;
  std::vector<EdgeId> in_edge;
  // Dual adjacency restricted to non-tree edges, CSR per face.
  std::vector<int32_t> cot_start;
  std::vector<FaceId> cot_nbr;
  std::vector<EdgeId> cot_edge;
  std::vector<NodeId> cot_parent;
  std::vector<int32_t> cot_depth;
  LcaIndex cot_lca;

  // Scratch, valid while stamp matches epoch.
  int32_t epoch = 0;
  std::vector<int32_t> face_mark;
  std::vector<int32_t> comp_seen;
  std::vector<int32_t> cent_seen;
  std::vector<FaceId> par_face;
  std::vector<int32_t> sub_size;
  std::vector<FaceId> face_order;
  std::vector<Dart> walk_buf;

  Builder(const PlaneDigraph& g_in, StDecomposition& out_in)
      : g(g_in), out(out_in) {}

  bool free_vertex(Vertex v) const { return out.c_[v] == kNoNode; }
  bool alive(EdgeId e) const { return free_vertex(g.head(e)); }

  void run(Vertex s) {
    out.source_ = s;
    out.c_.assign(g.n(), kNoNode);
    out.nodes_.clear();
    out.nodes_.emplace_back();
    fs = faces(g);
    out.face_owner_.assign(fs.count(), kNoNode);
    if (fs.count() == 0) {
      // A single vertex has no recorded face; the root owns it directly.
      out.nodes_[0].comp.push_back(s);
      out.c_[s] = 0;
    } else {
      tc = tree_cotree(g, fs, s);
      prepare();
      std::vector<FaceId> all(fs.count());
      for (FaceId f = 0; f < fs.count(); ++f) all[f] = f;
      process(0, std::move(all));
    }
    std::vector<NodeId> parent(out.nodes_.size());
    for (size_t i = 0; i < out.nodes_.size(); ++i) parent[i] = out.nodes_[i].parent;
    out.orders_ = DfsOrders::build(parent);
    for (Vertex v = 0; v < g.n(); ++v)
      PR_CHECK(out.c_[v] != kNoNode, "vertex " << v << " never placed");
    for (FaceId f = 0; f < fs.count(); ++f)
      PR_CHECK(out.face_owner_[f] != kNoNode, "face " << f << " never consumed");
  }

  void prepare() {
    in_start.assign(g.n() + 1, 0);
    for (EdgeId e = 0; e < g.m(); ++e) ++in_start[g.head(e) + 1];
    for (Vertex v = 0; v < g.n(); ++v) in_start[v + 1] += in_start[v];
    in_edge.resize(g.m());
    std::vector<int32_t> cursor(in_start.begin(), in_start.end() - 1);
    for (EdgeId e = 0; e < g.m(); ++e) in_edge[cursor[g.head(e)]++] = e;

    const int f = fs.count();
    cot_start.assign(f + 1, 0);
    for (size_t i = 0; i < tc.cotree_edges.size(); ++i) {
      auto [fa, fb] = tc.dual_ends[i];
      PR_CHECK(fa != fb, "non-tree edge " << tc.cotree_edges[i]
                                          << " has the same face on both sides");
      ++cot_start[fa + 1];
      ++cot_start[fb + 1];
    }
    for (FaceId ff = 0; ff < f; ++ff) cot_start[ff + 1] += cot_start[ff];
    cot_nbr.resize(2 * tc.cotree_edges.size());
    cot_edge.resize(2 * tc.cotree_edges.size());
    std::vector<int32_t> fcur(cot_start.begin(), cot_start.end() - 1);
    for (size_t i = 0; i < tc.cotree_edges.size(); ++i) {
      auto [fa, fb] = tc.dual_ends[i];
      cot_nbr[fcur[fa]] = fb;
      cot_edge[fcur[fa]++] = tc.cotree_edges[i];
      cot_nbr[fcur[fb]] = fa;
      cot_edge[fcur[fb]++] = tc.cotree_edges[i];
    }

    cot_parent.assign(f, kNoNode);
    cot_depth.assign(f, 0);
    std::vector<char> seen(f, 0);
    std::vector<FaceId> queue = {0};
    seen[0] = 1;
    for (size_t i = 0; i < queue.size(); ++i) {
      FaceId cur = queue[i];
      for (int32_t j = cot_start[cur]; j < cot_start[cur + 1]; ++j) {
        FaceId nb = cot_nbr[j];
        if (seen[nb]) continue;
        seen[nb] = 1;
        cot_parent[nb] = cur;
        cot_depth[nb] = cot_depth[cur] + 1;
        queue.push_back(nb);
      }
    }
    PR_CHECK(static_cast<int>(queue.size()) == f,
             "non-tree edges do not span the dual");
    cot_lca = LcaIndex::build(cot_parent);

    face_mark.assign(f, 0);
    comp_seen.assign(f, 0);
    cent_seen.assign(f, 0);
    par_face.assign(f, kNoFace);
    sub_size.assign(f, 0);
  }

  // Face whose removal leaves dual pieces of at most half the region, the
  // smaller face id on a tie.
  FaceId centroid(const std::vector<FaceId>& region) {
    const int k = static_cast<int>(region.size());
    if (k == 1) return region[0];
    face_order.clear();
    face_order.push_back(region[0]);
    cent_seen[region[0]] = epoch;
    par_face[region[0]] = kNoFace;
    for (size_t i = 0; i < face_order.size(); ++i) {
      FaceId f = face_order[i];
      for (int32_t j = cot_start[f]; j < cot_start[f + 1]; ++j) {
        if (!alive(cot_edge[j])) continue;
        FaceId nb = cot_nbr[j];
        if (cent_seen[nb] == epoch) continue;
        PR_CHECK(face_mark[nb] == epoch, "live dual edge leaves the region");
        cent_seen[nb] = epoch;
        par_face[nb] = f;
        face_order.push_back(nb);
      }
    }
    PR_CHECK(static_cast<int>(face_order.size()) == k,
             "region is not dual-connected");
    for (FaceId f : face_order) sub_size[f] = 1;
    for (size_t i = face_order.size(); i-- > 1;)
      sub_size[par_face[face_order[i]]] += sub_size[face_order[i]];

    FaceId cur = region[0];
    for (int steps = 0; steps <= k; ++steps) {
      FaceId heavier = kNoFace;
      for (int32_t j = cot_start[cur]; j < cot_start[cur + 1]; ++j) {
        if (!alive(cot_edge[j])) continue;
        FaceId nb = cot_nbr[j];
        int piece = par_face[nb] == cur ? sub_size[nb] : k - sub_size[cur];
        if (2 * piece > k) {
          heavier = nb;
          break;
        }
      }
      if (heavier == kNoFace) break;
      cur = heavier;
      PR_CHECK(steps < k, "centroid walk cycles");
    }
    FaceId best = cur;
    for (int32_t j = cot_start[cur]; j < cot_start[cur + 1]; ++j) {
      if (!alive(cot_edge[j])) continue;
      FaceId nb = cot_nbr[j];
      int piece = par_face[nb] == cur ? sub_size[nb] : k - sub_size[cur];
      if (2 * piece == k) best = std::min(best, nb);
    }
    return best;
  }

  // Point on the dual path between a and b closest to m, from the three
  // pairwise meeting points in the rooted dual tree.
  FaceId project(FaceId a, FaceId b, FaceId m) {
    FaceId p1 = cot_lca.lca(a, b);
    FaceId p2 = cot_lca.lca(a, m);
    FaceId p3 = cot_lca.lca(b, m);
    FaceId best = p1;
    if (cot_depth[p2] > cot_depth[best]) best = p2;
    if (cot_depth[p3] > cot_depth[best]) best = p3;
    return best;
  }

  void consume(NodeId x, FaceId fx) {
    std::vector<Vertex>& comp = out.nodes_[x].comp;
    for (Dart d : fs.walk[fx]) {
      Vertex v = g.dart_from(d);
      if (free_vertex(v)) {
        out.c_[v] = x;
        comp.push_back(v);
      }
    }
    for (size_t i = 0; i < comp.size(); ++i) {
      Vertex v = comp[i];
      for (int32_t j = in_start[v]; j < in_start[v + 1]; ++j) {
        Vertex u = g.tail(in_edge[j]);
        if (free_vertex(u)) {
          out.c_[u] = x;
          comp.push_back(u);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    PR_CHECK(!comp.empty(), "node " << x << " consumed no vertices");
  }

  // Whether the child corner (in, out) lies within the parent corner's
  // rotation interval at the same vertex.
  bool corner_within(const FrameCorner& c, const DecompNode& pa, int slot) const {
    if (g.dart_to(c.in_dart) != pa.corner_vertex[slot]) return false;
    Vertex v = pa.corner_vertex[slot];
    int deg = g.degree(v);
    int base = g.rot_pos(dart_rev(pa.corner_in[slot]));
    auto off = [&](Dart d) { return (g.rot_pos(d) - base + deg) % deg; };
    int ci = off(dart_rev(c.in_dart));
    int co = off(c.out_dart);
    return ci <= co && co <= off(pa.corner_out[slot]);
  }

  void set_corner(DecompNode& nd, int slot, const FrameCorner& c) {
    nd.corner_pos[slot] = c.walk_pos;
    nd.corner_in[slot] = c.in_dart;
    nd.corner_out[slot] = c.out_dart;
    nd.corner_vertex[slot] = c.at;
  }

  void classify_child(NodeId x, NodeId y, Dart candidate) {
    auto in_s = [this](Vertex v) { return !free_vertex(v); };
    auto nop = [](Dart) {};
    Dart dmin = candidate;
    int len = 0;
    {
      Dart d = candidate;
      do {
        dmin = std::min(dmin, d);
        ++len;
        PR_CHECK(len <= g.dart_count(), "boundary walk does not close");
        d = hole_step(g, d, in_s, nop);
      } while (d != candidate);
    }
    walk_buf.clear();
    int downs = 0;
    {
      Dart d = dmin;
      do {
        walk_buf.push_back(d);
        d = hole_step(g, d, in_s, [&](Dart) { ++downs; });
      } while (d != dmin);
    }
    DecompNode& nd = out.nodes_[y];
    nd.frame_start = dmin;
    nd.frame_len = len;
    nd.down_count = downs;

    std::vector<FrameCorner> sig;
    int sources = 0;
    for (int i = 0; i < len; ++i) {
      Dart in = walk_buf[i];
      Dart out_d = walk_buf[(i + 1 == len) ? 0 : i + 1];
      CornerKind k = classify_corner(in, out_d);
      if (k == CornerKind::neither) continue;
      sig.push_back({i, in, out_d, g.dart_to(in), k});
      sources += k == CornerKind::source;
    }
    PR_CHECK(sources >= 1, "frame of node " << y << " bounds a directed cycle");
    PR_CHECK(static_cast<int>(sig.size()) == 2 * sources,
             "frame of node " << y << " has unbalanced corners");
    for (size_t i = 0; i < sig.size(); ++i)
      PR_CHECK(sig[i].kind != sig[(i + 1) % sig.size()].kind,
               "frame corners of node " << y << " do not alternate");
    int alt = 2 * sources;
    PR_CHECK(alt == 2 || alt == 4,
             "frame of node " << y << " has alternation " << alt);
    nd.alternation = alt;
    nd.kind = alt == 2 ? FrameKind::two : FrameKind::four;

    const DecompNode& pa = out.nodes_[x];
    if (pa.kind == FrameKind::root)
      PR_CHECK(alt == 2, "root child " << y << " has alternation " << alt);

    if (alt == 2) {
      for (const FrameCorner& c : sig)
        set_corner(nd, c.kind == CornerKind::source ? 0 : 1, c);
      return;
    }

    int anchor;  // sig index that becomes s0 (or t^alpha when inherited)
    if (pa.kind == FrameKind::four) {
      int match_sig = -1, match_slot = -1, matches = 0;
      for (int j = 0; j < 4; ++j) {
        if (sig[j].kind != CornerKind::target) continue;
        for (int slot : {1, 3}) {
          if (corner_within(sig[j], pa, slot)) {
            ++matches;
            match_sig = j;
            match_slot = slot;
          }
        }
      }
      PR_CHECK(matches == 1, "four-frame node " << y << " shares " << matches
                                                << " target corners with its parent");
      int alpha = match_slot == 1 ? 0 : 1;
      set_corner(nd, 2 * alpha + 1, sig[match_sig]);
      set_corner(nd, 2 * (1 - alpha), sig[(match_sig + 1) % 4]);
      set_corner(nd, 2 * (1 - alpha) + 1, sig[(match_sig + 2) % 4]);
      set_corner(nd, 2 * alpha, sig[(match_sig + 3) % 4]);
      anchor = -1;
    } else {
      anchor = -1;
      for (int j = 0; j < 4; ++j) {
        if (sig[j].kind != CornerKind::source) continue;
        if (anchor == -1 || sig[j].in_dart < sig[anchor].in_dart) anchor = j;
      }
      set_corner(nd, 0, sig[anchor]);
      set_corner(nd, 1, sig[(anchor + 1) % 4]);
      set_corner(nd, 2, sig[(anchor + 2) % 4]);
      set_corner(nd, 3, sig[(anchor + 3) % 4]);
    }
    for (int a = 0; a < 2; ++a) {
      FrameCorner c{nd.corner_pos[2 * a + 1], nd.corner_in[2 * a + 1],
                    nd.corner_out[2 * a + 1], nd.corner_vertex[2 * a + 1],
                    CornerKind::target};
      if (pa.kind == FrameKind::four)
        nd.target_shared[a] = corner_within(c, pa, 2 * a + 1);
      else if (pa.kind == FrameKind::two)
        nd.target_shared[a] = corner_within(c, pa, 1);
    }
    nd.f0 = fs.face_of[nd.corner_in[1]];
    nd.f1 = fs.face_of[nd.corner_in[3]];
  }

  void process(NodeId x, std::vector<FaceId> region) {
    PR_CHECK(!region.empty(), "node " << x << " has an empty region");
    ++epoch;
    for (FaceId f : region) face_mark[f] = epoch;
    out.nodes_[x].region_faces = static_cast<int32_t>(region.size());

    FaceId fx;
    if (out.nodes_[x].kind == FrameKind::four) {
      FaceId m = centroid(region);
      fx = project(out.nodes_[x].f0, out.nodes_[x].f1, m);
      PR_CHECK(face_mark[fx] == epoch, "projected face left the region");
    } else {
      fx = centroid(region);
    }
    PR_CHECK(out.face_owner_[fx] == kNoNode, "face " << fx << " consumed twice");
    out.nodes_[x].face = fx;
    out.face_owner_[fx] = x;
    consume(x, fx);

    // Split the remaining faces into regions joined by still-live dual edges.
    std::vector<std::pair<NodeId, std::vector<FaceId>>> pending;
    for (FaceId f : region) {
      if (f == fx || comp_seen[f] == epoch) continue;
      comp_seen[f] = epoch;
      std::vector<FaceId> part = {f};
      for (size_t i = 0; i < part.size(); ++i) {
        FaceId cur = part[i];
        for (int32_t j = cot_start[cur]; j < cot_start[cur + 1]; ++j) {
          if (!alive(cot_edge[j])) continue;
          FaceId nb = cot_nbr[j];
          if (comp_seen[nb] == epoch) continue;
          PR_CHECK(face_mark[nb] == epoch, "live dual edge leaves the region");
          comp_seen[nb] = epoch;
          part.push_back(nb);
        }
      }
      if (part.size() == 1) {
        bool has_free = false;
        for (Dart d : fs.walk[part[0]])
          if (free_vertex(g.dart_from(d))) {
            has_free = true;
            break;
          }
        if (!has_free) {
          // Fully surrounded face with nothing left inside: retire it.
          out.face_owner_[part[0]] = x;
          continue;
        }
      }
      Dart candidate = kNoDart;
      for (FaceId pf : part) {
        for (Dart d : fs.walk[pf])
          if (!free_vertex(g.head(dart_edge(d)))) {
            candidate = d;
            break;
          }
        if (candidate != kNoDart) break;
      }
      PR_CHECK(candidate != kNoDart, "child region has no bounding edge");
      NodeId y = static_cast<NodeId>(out.nodes_.size());
      out.nodes_.emplace_back();
      out.nodes_[y].parent = x;
      out.nodes_[y].depth = out.nodes_[x].depth + 1;
      out.nodes_[x].children.push_back(y);
      classify_child(x, y, candidate);
      pending.emplace_back(y, std::move(part));
    }
    for (auto& [y, part] : pending) process(y, std::move(part));
  }
};

}  // namespace decomp_detail

inline StDecomposition StDecomposition::build(const PlaneDigraph& g, Vertex s) {
  PR_CHECK(g.n() > 0, "empty graph");
  PR_CHECK(s >= 0 && s < g.n(), "source " << s << " out of range");
  if (!strongly_connected_components(g).trivial())
    throw GraphError("cycle found: input has a directed cycle");
  std::vector<char> from_s = reachable_from(g, s);
  for (Vertex v = 0; v < g.n(); ++v)
    if (!from_s[v])
      throw GraphError("unreachable vertex: " + std::to_string(v) +
                       " has no path from " + std::to_string(s));
  StDecomposition dec;
  dec.g_ = &g;
  decomp_detail::Builder builder(g, dec);
  builder.run(s);
  return dec;
}

inline StDecomposition build_st_decomposition(const PlaneDigraph& g, Vertex s) {
  return StDecomposition::build(g, s);
}

// ---------------------------------------------------------------------------
// Validation

struct GoodReport {
  std::vector<std::string> violations;
  int nodes = 0;
  int height = 0;
  int faces = 0;

  bool ok() const { return violations.empty(); }
};

// Re-derives every structural promise of a decomposition from the graph:
// the vertex partition, edge ownership order, frame summaries against fresh
// replays, the height and halving bounds, and the corner-capture rule that
// decides each child's alternation.
inline GoodReport validate_good(const StDecomposition& dec) {
  const PlaneDigraph& g = dec.graph();
  GoodReport r;
  r.nodes = dec.node_count();
  r.height = dec.height();
  auto fail = [&](std::string msg) {
    if (r.violations.size() < 64) r.violations.push_back(std::move(msg));
  };

  std::vector<char> seen(g.n(), 0);
  size_t total = 0;
  for (NodeId x = 0; x < dec.node_count(); ++x) {
    const DecompNode& nd = dec.node(x);
    if (nd.comp.empty()) fail("node " + std::to_string(x) + " owns no vertices");
    total += nd.comp.size();
    for (Vertex v : nd.comp) {
      if (v < 0 || v >= g.n()) {
        fail("node " + std::to_string(x) + " lists an invalid vertex");
        continue;
      }
      if (dec.c(v) != x)
        fail("vertex " + std::to_string(v) + " listed by node " +
             std::to_string(x) + " but mapped to " + std::to_string(dec.c(v)));
      if (seen[v])
        fail("vertex " + std::to_string(v) + " owned twice");
      seen[v] = 1;
    }
  }
  if (total != static_cast<size_t>(g.n()))
    fail("components cover " + std::to_string(total) + " of " +
         std::to_string(g.n()) + " vertices");

  for (EdgeId e = 0; e < g.m(); ++e)
    if (!dec.node_ancestor(dec.c(g.tail(e)), dec.c(g.head(e))))
      fail("edge " + std::to_string(e) + " runs against the ownership order");

  FaceSet fs = faces(g);
  r.faces = fs.count();
  if (fs.count() > 0) {
    int bound = 2 * (fs.count() <= 1
                         ? 0
                         : static_cast<int>(std::bit_width(
                               static_cast<uint32_t>(fs.count() - 1)))) +
                2;
    if (r.height > bound)
      fail("height " + std::to_string(r.height) + " exceeds bound " +
           std::to_string(bound) + " for " + std::to_string(fs.count()) +
           " faces");

    std::vector<char> face_seen(fs.count(), 0);
    for (NodeId x = 0; x < dec.node_count(); ++x) {
      FaceId f = dec.node(x).face;
      if (f == kNoFace) {
        fail("node " + std::to_string(x) + " has no face");
        continue;
      }
      if (face_seen[f]) fail("face " + std::to_string(f) + " consumed twice");
      face_seen[f] = 1;
      if (dec.face_owner(f) != x)
        fail("face " + std::to_string(f) + " owner disagrees with node " +
             std::to_string(x));
    }
    for (FaceId f = 0; f < fs.count(); ++f)
      if (dec.face_owner(f) == kNoNode)
        fail("face " + std::to_string(f) + " has no owner");
  }

  for (NodeId z = 0; z < dec.node_count(); ++z) {
    NodeId y = dec.node(z).parent;
    if (y == kNoNode) continue;
    if (dec.node(z).depth != dec.node(y).depth + 1)
      fail("node " + std::to_string(z) + " depth disagrees with its parent");
    NodeId x = dec.node(y).parent;
    if (x == kNoNode) continue;
    if (2 * dec.node(z).region_faces > dec.node(x).region_faces)
      fail("grandchild " + std::to_string(z) + " region does not halve: " +
           std::to_string(dec.node(z).region_faces) + " vs " +
           std::to_string(dec.node(x).region_faces));
  }

  // Frame summaries against fresh replays.
  for (NodeId x = 0; x < dec.node_count(); ++x) {
    const DecompNode& nd = dec.node(x);
    if (nd.kind == FrameKind::root) {
      if (nd.alternation != 0 || nd.parent != kNoNode || x != dec.root())
        fail("node " + std::to_string(x) + " claims to be the root");
      continue;
    }
    if (nd.alternation != 2 && nd.alternation != 4) {
      fail("node " + std::to_string(x) + " has alternation " +
           std::to_string(nd.alternation));
      continue;
    }
    FrameWalk w;
    try {
      w = dec.replay_frame(x);
    } catch (const GraphError& e) {
      fail("frame replay of node " + std::to_string(x) + " failed: " + e.what());
      continue;
    }
    if (static_cast<int32_t>(w.darts.size()) != nd.frame_len) {
      fail("frame of node " + std::to_string(x) + " replays to length " +
           std::to_string(w.darts.size()) + ", stored " +
           std::to_string(nd.frame_len));
      continue;
    }
    if (*std::min_element(w.darts.begin(), w.darts.end()) != nd.frame_start)
      fail("frame of node " + std::to_string(x) +
           " does not start at its minimal dart");
    if (w.alternation != nd.alternation)
      fail("frame of node " + std::to_string(x) + " replays to alternation " +
           std::to_string(w.alternation));
    bool endpoints_ok = true;
    for (Dart d : w.darts) {
      if (!dec.placed_above(g.dart_from(d), x) ||
          !dec.placed_above(g.dart_to(d), x))
        endpoints_ok = false;
    }
    if (!endpoints_ok)
      fail("frame of node " + std::to_string(x) +
           " touches vertices outside its ancestors");
    for (int slot = 0; slot < nd.corners_in_use(); ++slot) {
      bool found = false;
      for (const FrameCorner& c : w.corners) {
        if (c.walk_pos != nd.corner_pos[slot]) continue;
        found = c.in_dart == nd.corner_in[slot] &&
                c.out_dart == nd.corner_out[slot] &&
                c.at == nd.corner_vertex[slot] &&
                c.kind == (slot % 2 == 0 ? CornerKind::source : CornerKind::target);
      }
      if (!found)
        fail("corner slot " + std::to_string(slot) + " of node " +
             std::to_string(x) + " does not match the replayed frame");
    }
    // Each span between consecutive corners must run with the walk from a
    // source and against it into a target.
    if (nd.alternation > 0 && static_cast<int>(w.corners.size()) == nd.alternation) {
      int len = nd.frame_len;
      for (size_t ci = 0; ci < w.corners.size(); ++ci) {
        const FrameCorner& from = w.corners[ci];
        const FrameCorner& to = w.corners[(ci + 1) % w.corners.size()];
        bool expect_forward = from.kind == CornerKind::source;
        for (int i = (from.walk_pos + 1) % len; ; i = (i + 1) % len) {
          if (dart_forward(w.darts[i]) != expect_forward)
            fail("disegment span of node " + std::to_string(x) +
                 " mixes edge directions");
          if (i == to.walk_pos) break;
        }
      }
    }
    std::vector<DownEdge> downs;
    try {
      downs = dec.down_edges(x);
    } catch (const GraphError& e) {
      fail("down-edge replay of node " + std::to_string(x) + " failed: " +
           e.what());
      continue;
    }
    if (static_cast<int32_t>(downs.size()) != nd.down_count)
      fail("node " + std::to_string(x) + " stores " +
           std::to_string(nd.down_count) + " down edges but replays " +
           std::to_string(downs.size()));
    for (const DownEdge& de : downs) {
      if (!dart_forward(de.dart))
        fail("down edge " + std::to_string(de.edge) + " of node " +
             std::to_string(x) + " recorded from its head side");
      if (!dec.node_ancestor(x, dec.c(g.head(de.edge))))
        fail("down edge " + std::to_string(de.edge) + " of node " +
             std::to_string(x) + " leaves the subtree");
      if (!dec.placed_above(de.from, x))
        fail("down edge " + std::to_string(de.edge) + " of node " +
             std::to_string(x) + " starts off the frame");
    }
  }

  // Corner capture decides each child's alternation: a child that inherits
  // all faces wedged at a parent target corner turns it into one of its own
  // target corners; each extra captured corner adds 2 to the alternation.
  if (fs.count() > 0) {
    for (NodeId x = 0; x < dec.node_count(); ++x) {
      const DecompNode& nd = dec.node(x);
      std::vector<std::vector<FaceId>> sectors;
      std::vector<int> sector_slot;
      int nslots = nd.kind == FrameKind::root ? 0 : nd.corners_in_use();
      for (int slot = 1; slot < nslots; slot += 2) {
        std::vector<FaceId> sector;
        Dart stop = nd.corner_out[slot];
        Dart a = dart_rev(nd.corner_in[slot]);
        int guard = g.degree(nd.corner_vertex[slot]) + 1;
        do {
          a = g.rot_next(a);
          sector.push_back(fs.face_of[a]);
          if (--guard < 0) break;
        } while (a != stop);
        if (guard < 0) {
          fail("target sector scan of node " + std::to_string(x) +
               " does not close");
          continue;
        }
        std::sort(sector.begin(), sector.end());
        sector.erase(std::unique(sector.begin(), sector.end()), sector.end());
        sectors.push_back(std::move(sector));
        sector_slot.push_back(slot);
      }
      for (NodeId y : nd.children) {
        int captured = 0;
        int captured_slot = -1;
        for (size_t si = 0; si < sectors.size(); ++si) {
          bool all_in = !sectors[si].empty();
          for (FaceId f : sectors[si])
            if (!dec.node_ancestor(y, dec.face_owner(f))) all_in = false;
          if (all_in) {
            ++captured;
            captured_slot = sector_slot[si];
          }
        }
        if (captured > 1)
          fail("child " + std::to_string(y) + " captures both target corners of " +
               std::to_string(x));
        int expect = 2 + 2 * captured;
        if (dec.node(y).alternation != expect)
          fail("child " + std::to_string(y) + " of " + std::to_string(x) +
               " has alternation " + std::to_string(dec.node(y).alternation) +
               ", corner capture predicts " + std::to_string(expect));
        if (dec.node(y).kind == FrameKind::four && nd.kind == FrameKind::four) {
          int shared_alpha = captured_slot == 1 ? 0 : 1;
          for (int a = 0; a < 2; ++a) {
            int8_t expect_flag = captured == 1 && a == shared_alpha;
            if (dec.node(y).target_shared[a] != expect_flag)
              fail("child " + std::to_string(y) + " target sharing flag " +
                   std::to_string(a) + " disagrees with face capture");
          }
        }
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// DOT export
//
// Nodes carry: label "n<id> <kind> f=<face> C=<size> alt=<a> down=<k>",
// shape box.  Edges follow parent -> child in creation order.

inline void export_dot(const StDecomposition& dec, std::ostream& out) {
  out << "digraph decomposition {\n  node [shape=box];\n";
  for (NodeId x = 0; x < dec.node_count(); ++x) {
    const DecompNode& nd = dec.node(x);
    out << "  n" << x << " [label=\"n" << x << " " << to_string(nd.kind)
        << " f=" << nd.face << " C=" << nd.comp.size()
        << " alt=" << nd.alternation << " down=" << nd.down_count << "\"];\n";
  }
  for (NodeId x = 0; x < dec.node_count(); ++x)
    for (NodeId y : dec.node(x).children) out << "  n" << x << " -> n" << y << ";\n";
  out << "}\n";
}

}  // namespace planar_reach
