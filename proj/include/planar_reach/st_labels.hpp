#pragma once

#include <algorithm>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "planar_reach/closure.hpp"
#include "planar_reach/core.hpp"
#include "planar_reach/decomp.hpp"
#include "planar_reach/plane_graph.hpp"

namespace planar_reach {

// A decomposition component realised as a standalone plane graph.  The
// vertices owned by the node keep their embedding; every edge arriving from
// an ancestor component is rerouted to a synthetic source s', and a synthetic
// target t' sits inside the consumed face with an edge from every boundary
// corner the component owns.  The result is an acyclic plane graph with one
// source and one sink in which every vertex lies on a source-to-target dipath
// and every face has alternation number 2.
struct CompletedComponent {
  PlaneDigraph graph;         // local ids: real vertices, then s' (if any), then t'
  std::vector<Vertex> verts;  // global vertex per real local id, increasing
  int32_t real_count = 0;
  Vertex source = kNoVertex;  // local id of s', or of the true source at the root
  Vertex target = kNoVertex;  // local id of t'
  bool synthetic_source = false;
  NodeId node = kNoNode;

  Vertex local_of(Vertex global) const {
    auto it = std::lower_bound(verts.begin(), verts.end(), global);
    PR_CHECK(it != verts.end() && *it == global,
             "vertex " << global << " is not in this component");
    return static_cast<Vertex>(it - verts.begin());
  }
  Vertex global_of(Vertex local) const { return verts[local]; }
};

// Builds the completed component of one decomposition node.  `fs` must be
// faces(dec.graph()); passing it in lets callers complete every node against
// a single face computation.  Throws GraphError when the completion fails its
// own invariants (a face of alternation other than 2, or a vertex off every
// source-to-target dipath); both signal a decomposition bug.
inline CompletedComponent complete_component(const StDecomposition& dec,
                                             const FaceSet& fs, NodeId x) {
  const PlaneDigraph& g = dec.graph();
  PR_CHECK(x >= 0 && x < dec.node_count(), "node id " << x << " out of range");
  const DecompNode& nd = dec.node(x);
  PR_CHECK(!nd.comp.empty(), "node " << x << " owns no vertices");

  CompletedComponent cc;
  cc.node = x;
  cc.verts = nd.comp;
  cc.real_count = static_cast<int32_t>(cc.verts.size());
  cc.synthetic_source = x != 0;
  const int k = cc.real_count;
  cc.source = cc.synthetic_source ? k : cc.local_of(dec.source());
  const Vertex t_loc = cc.synthetic_source ? k + 1 : k;
  cc.target = t_loc;
  const int total = t_loc + 1;

  std::vector<Vertex> tl, hd;
  std::vector<std::vector<Dart>> rot(total);
  auto add_edge = [&](Vertex a, Vertex b) -> EdgeId {
    tl.push_back(a);
    hd.push_back(b);
    return static_cast<EdgeId>(tl.size()) - 1;
  };

  if (nd.face == kNoFace) {
    // A one-vertex graph records no face; its completion is a single edge.
    PR_CHECK(k == 1 && !cc.synthetic_source,
             "node " << x << " has no consumed face");
    EdgeId e = add_edge(0, t_loc);
    rot[0].push_back(make_dart(e, 0));
    rot[t_loc].push_back(make_dart(e, 1));
  } else {
    // Spokes to t', one per boundary corner of the consumed face whose vertex
    // belongs to the component.  Corners at frame vertices contract into s'
    // and need none.  spoke_at collects, per real vertex, the rotation
    // positions the spokes are inserted in front of.
    std::vector<std::vector<std::pair<int32_t, EdgeId>>> spoke_at(k);
    std::vector<Dart> t_rot;
    const std::vector<Dart>& walk = fs.walk[nd.face];
    for (size_t i = 0; i < walk.size(); ++i) {
      Dart out = walk[(i + 1 == walk.size()) ? 0 : i + 1];
      Vertex w = g.dart_from(out);
      if (dec.c(w) != x) {
        PR_CHECK(dec.placed_above(w, x),
                 "face " << nd.face << " touches vertex " << w
                         << " outside the component and its frame");
        continue;
      }
      Vertex lw = cc.local_of(w);
      EdgeId e = add_edge(lw, t_loc);
      spoke_at[lw].push_back({g.rot_pos(out), e});
      t_rot.push_back(make_dart(e, 1));
    }
    // The face walk runs counterclockwise as seen from inside the face, so
    // the clockwise rotation of an apex placed there is the reverse.
    std::reverse(t_rot.begin(), t_rot.end());
    rot[t_loc] = std::move(t_rot);

    // Edges from the frame contract into s'.  The frame walk keeps its hole
    // on the left, which is the opposite traversal sense from the face the
    // component sees, so here the two reversals cancel and the down-edge
    // order is already the clockwise rotation.  Heads in deeper components
    // vanish with them.
    std::unordered_map<EdgeId, EdgeId> from_frame;
    if (cc.synthetic_source) {
      std::vector<Dart> s_rot;
      for (const DownEdge& de : dec.down_edges(x)) {
        Vertex head = g.head(de.edge);
        if (dec.c(head) != x) continue;
        EdgeId e = add_edge(k, cc.local_of(head));
        from_frame.emplace(de.edge, e);
        s_rot.push_back(make_dart(e, 0));
      }
      PR_CHECK(!s_rot.empty(), "node " << x << " receives no frame edges");
      rot[k] = std::move(s_rot);
    }

    std::unordered_map<EdgeId, EdgeId> internal;
    for (Vertex lv = 0; lv < k; ++lv) {
      Vertex v = cc.verts[lv];
      std::vector<std::pair<int32_t, EdgeId>>& spokes = spoke_at[lv];
      std::sort(spokes.begin(), spokes.end());
      size_t next_spoke = 0;
      const std::vector<Dart>& r = g.rotation(v);
      for (int32_t i = 0; i < static_cast<int32_t>(r.size()); ++i) {
        while (next_spoke < spokes.size() && spokes[next_spoke].first == i)
          rot[lv].push_back(make_dart(spokes[next_spoke++].second, 0));
        Dart d = r[i];
        Vertex w = g.dart_to(d);
        if (dec.c(w) == x) {
          EdgeId e = dart_edge(d);
          auto it = internal.find(e);
          EdgeId le;
          if (it != internal.end()) {
            le = it->second;
          } else {
            Vertex lt = cc.local_of(g.tail(e));
            le = add_edge(lt, cc.local_of(g.head(e)));
            internal.emplace(e, le);
          }
          rot[lv].push_back(make_dart(le, dart_forward(d) ? 0 : 1));
        } else if (dart_forward(d)) {
          PR_CHECK(!dec.placed_above(w, x),
                   "edge from vertex " << v << " climbs to an ancestor");
          // heads in descendant components vanish with them
        } else {
          PR_CHECK(dec.placed_above(w, x),
                   "vertex " << v << " has an incoming edge from a descendant");
          auto it = from_frame.find(dart_edge(d));
          PR_CHECK(it != from_frame.end(),
                   "frame edge into vertex " << v << " missing from the down-edge walk");
          rot[lv].push_back(make_dart(it->second, 1));
        }
      }
      PR_CHECK(next_spoke == spokes.size(),
               "spoke positions at vertex " << v << " out of range");
    }
  }

  cc.graph = PlaneDigraph::build(total, std::move(tl), std::move(hd), std::move(rot));

  FaceSet cfs = faces(cc.graph);
  FaceCorners corners = corner_classification(cfs, cc.graph);
  for (FaceId f = 0; f < cfs.count(); ++f)
    if (corners.alternation[f] != 2)
      throw GraphError("completion of node " + std::to_string(x) +
                       " produced a face with alternation number " +
                       std::to_string(corners.alternation[f]));

  std::vector<char> from_source = reachable_from(cc.graph, cc.source);
  std::vector<char> to_target(total, 0);
  to_target[cc.target] = 1;
  std::vector<Vertex> stack = {cc.target};
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    for (Dart d : cc.graph.rotation(v)) {
      Vertex u = cc.graph.dart_to(d);
      if (!dart_forward(d) && !to_target[u]) {
        to_target[u] = 1;
        stack.push_back(u);
      }
    }
  }
  for (Vertex v = 0; v < total; ++v)
    PR_CHECK(from_source[v] && to_target[v],
             "vertex " << v << " of the completion of node " << x
                       << " misses a source-to-target dipath");
  return cc;
}

// Per-vertex reachability label inside one completed component.  The
// completed graph is cut open along one source-to-target dipath P.  The cut
// graph is a plane graph with its source and sink on a common face, so two
// topological orders, taking respectively the clockwise-first and
// clockwise-last outgoing edge first, agree exactly on its reachable pairs.
// Paths that touch P are recovered arithmetically: a path can enter P no
// earlier than fp(u), ride it, and leave no later than lp(v).
struct StLabel {
  int32_t l = 0, r = 0;    // ranks in the two cut-graph topological orders
  int32_t fp = 0, lp = 0;  // earliest cut-path position reachable from the
                           // vertex; latest position reaching it
  int32_t pos = -1;        // position on the cut path, -1 off it
};

class StLabels {
 public:
  static StLabels build(const CompletedComponent& c);

  const StLabel& at(Vertex local) const {
    PR_CHECK(local >= 0 && local < static_cast<Vertex>(label_.size()),
             "label lookup for vertex " << local << " out of range");
    return label_[local];
  }
  int size() const { return static_cast<int>(label_.size()); }
  uint64_t space_words() const { return vec_words(label_); }

 private:
  std::vector<StLabel> label_;
};

inline bool st_reach(const StLabels& lab, Vertex u, Vertex v) {
  const StLabel& a = lab.at(u);
  const StLabel& b = lab.at(v);
  ++op_counter().label_cmp;
  if (a.pos >= 0 && b.pos >= 0) return a.pos <= b.pos;
  if (a.pos >= 0) return b.lp >= a.pos;
  if (b.pos >= 0) return a.fp <= b.pos;
  return (a.l <= b.l && a.r <= b.r) || a.fp <= b.lp;
}

inline StLabels StLabels::build(const CompletedComponent& c) {
  const PlaneDigraph& h = c.graph;
  const int n = h.n();

  // Short hop toward the target from every vertex, found by a reverse
  // breadth-first search; the hops concatenate into the cut path.
  std::vector<Dart> succ(n, kNoDart);
  {
    std::vector<char> seen(n, 0);
    std::vector<Vertex> queue;
    queue.reserve(n);
    seen[c.target] = 1;
    queue.push_back(c.target);
    for (size_t qi = 0; qi < queue.size(); ++qi) {
      Vertex w = queue[qi];
      for (Dart d : h.rotation(w)) {
        if (dart_forward(d)) continue;
        Vertex u = h.dart_to(d);
        if (!seen[u]) {
          seen[u] = 1;
          succ[u] = dart_rev(d);
          queue.push_back(u);
        }
      }
    }
    PR_CHECK(static_cast<int>(queue.size()) == n,
             "a completed vertex cannot reach the target");
  }

  std::vector<Vertex> path;
  std::vector<Dart> pdart;
  std::vector<int32_t> pos(n, -1);
  for (Vertex v = c.source; v != c.target; v = h.dart_to(succ[v])) {
    pos[v] = static_cast<int32_t>(path.size());
    path.push_back(v);
    pdart.push_back(succ[v]);
    PR_CHECK(static_cast<int>(path.size()) <= n, "cut path revisits a vertex");
  }
  pos[c.target] = static_cast<int32_t>(path.size());
  path.push_back(c.target);
  const int plen = static_cast<int>(path.size());

  // fp and lp by dynamic programming over a topological order.
  std::vector<int32_t> order;
  order.reserve(n);
  {
    std::vector<int32_t> indeg(n, 0);
    for (EdgeId e = 0; e < h.m(); ++e) ++indeg[h.head(e)];
    for (Vertex v = 0; v < n; ++v)
      if (indeg[v] == 0) order.push_back(v);
    for (size_t qi = 0; qi < order.size(); ++qi) {
      for (Dart d : h.rotation(order[qi])) {
        if (!dart_forward(d)) continue;
        Vertex w = h.dart_to(d);
        if (--indeg[w] == 0) order.push_back(w);
      }
    }
    PR_CHECK(static_cast<int>(order.size()) == n, "completed component has a cycle");
  }
  std::vector<int32_t> fp(n, std::numeric_limits<int32_t>::max());
  std::vector<int32_t> lp(n, -1);
  for (int i = n - 1; i >= 0; --i) {
    Vertex v = order[i];
    for (Dart d : h.rotation(v))
      if (dart_forward(d)) fp[v] = std::min(fp[v], fp[h.dart_to(d)]);
    if (pos[v] >= 0) fp[v] = pos[v];
    PR_CHECK(fp[v] != std::numeric_limits<int32_t>::max(),
             "vertex " << v << " reaches no cut-path vertex");
  }
  for (int i = 0; i < n; ++i) {
    Vertex v = order[i];
    for (Dart d : h.rotation(v))
      if (!dart_forward(d)) lp[v] = std::max(lp[v], lp[h.dart_to(d)]);
    if (pos[v] >= 0) lp[v] = pos[v];
    PR_CHECK(lp[v] >= 0, "vertex " << v << " is reached by no cut-path vertex");
  }

  // The cut graph: interior path vertices split into the two sides of the
  // path, the path edges double, and every other edge follows the side its
  // dart lands on.  Side 1 keeps the original vertex id.
  std::vector<int32_t> second_id(n, -1);
  for (int i = 1; i + 1 < plen; ++i) second_id[path[i]] = n + (i - 1);
  const int gn = n + std::max(plen - 2, 0);
  std::vector<int8_t> side(h.dart_count(), 0);
  for (int i = 1; i + 1 < plen; ++i) {
    Dart a = pdart[i];
    Dart b = dart_rev(pdart[i - 1]);
    int guard = h.degree(path[i]) + 1;
    for (Dart d = h.rot_next(a); d != b; d = h.rot_next(d)) {
      side[d] = 1;
      PR_CHECK(--guard > 0, "side sweep misses the incoming path dart");
    }
    for (Dart d = h.rot_next(b); d != a; d = h.rot_next(d)) {
      side[d] = 2;
      PR_CHECK(--guard > 0, "side sweep misses the outgoing path dart");
    }
  }
  auto path_copy = [&](int i, int8_t s) -> int32_t {
    Vertex v = path[i];
    return (s == 2 && second_id[v] >= 0) ? second_id[v] : v;
  };
  auto landing = [&](Dart out) -> int32_t {
    Dart at = dart_rev(out);
    Vertex w = h.dart_from(at);
    if (second_id[w] < 0) return w;
    PR_CHECK(side[at] != 0, "edge into a path vertex has no side");
    return path_copy(pos[w], side[at]);
  };

  std::vector<std::vector<int32_t>> adj(gn);
  {
    Dart a = pdart[0];
    adj[c.source].push_back(path_copy(1, 1));
    for (Dart d = h.rot_next(a); d != a; d = h.rot_next(d)) {
      PR_CHECK(dart_forward(d), "the completed source has an incoming edge");
      adj[c.source].push_back(landing(d));
    }
    adj[c.source].push_back(path_copy(1, 2));
  }
  for (int i = 1; i + 1 < plen; ++i) {
    Dart a = pdart[i];
    Dart b = dart_rev(pdart[i - 1]);
    std::vector<int32_t>& one = adj[path[i]];
    one.push_back(path_copy(i + 1, 1));
    for (Dart d = h.rot_next(a); d != b; d = h.rot_next(d))
      if (dart_forward(d)) one.push_back(landing(d));
    std::vector<int32_t>& two = adj[second_id[path[i]]];
    for (Dart d = h.rot_next(b); d != a; d = h.rot_next(d))
      if (dart_forward(d)) two.push_back(landing(d));
    two.push_back(path_copy(i + 1, 2));
  }
  for (Vertex v = 0; v < n; ++v) {
    if (pos[v] >= 0) continue;
    const std::vector<Dart>& r = h.rotation(v);
    const int deg = static_cast<int>(r.size());
    int start = -1, transitions = 0;
    for (int j = 0; j < deg; ++j) {
      Dart prev = r[(j + deg - 1) % deg];
      if (dart_forward(r[j]) && !dart_forward(prev)) {
        start = j;
        ++transitions;
      }
    }
    PR_CHECK(transitions == 1,
             "completed vertex " << v << " has interleaved edge directions");
    for (int step = 0; step < deg; ++step) {
      Dart d = r[(start + step) % deg];
      if (!dart_forward(d)) break;
      adj[v].push_back(landing(d));
    }
  }

  // Two depth-first sweeps over the cut graph; ranks are reverse postorder.
  auto sweep = [&](bool forward) {
    std::vector<int32_t> rank(gn, -1);
    std::vector<int32_t> post;
    post.reserve(gn);
    std::vector<char> seen(gn, 0);
    std::vector<std::pair<int32_t, size_t>> stack;
    seen[c.source] = 1;
    stack.push_back({c.source, 0});
    while (!stack.empty()) {
      auto& [v, ci] = stack.back();
      if (ci == adj[v].size()) {
        post.push_back(v);
        stack.pop_back();
        continue;
      }
      size_t pick = forward ? ci : adj[v].size() - 1 - ci;
      int32_t w = adj[v][pick];
      ++ci;
      if (!seen[w]) {
        seen[w] = 1;
        stack.push_back({w, 0});
      }
    }
    PR_CHECK(static_cast<int>(post.size()) == gn,
             "cut graph is not spanned from the source");
    for (size_t i = 0; i < post.size(); ++i)
      rank[post[i]] = static_cast<int32_t>(post.size() - 1 - i);
    return rank;
  };
  std::vector<int32_t> rank1 = sweep(true);
  std::vector<int32_t> rank2 = sweep(false);

  StLabels out;
  out.label_.resize(c.real_count);
  for (Vertex v = 0; v < c.real_count; ++v) {
    StLabel& lb = out.label_[v];
    lb.l = rank1[v];
    lb.r = rank2[v];
    lb.fp = fp[v];
    lb.lp = lp[v];
    lb.pos = pos[v];
  }
  return out;
}

}  // namespace planar_reach
