#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <queue>
#include <sstream>
#include <string>
#include <vector>

#include "planar_reach/core.hpp"

namespace planar_reach {

// Directed planar multigraph with a combinatorial embedding.  The embedding
// is stored as one clockwise cyclic sequence of darts per vertex; all notions
// of clockwise elsewhere in the library reduce to this order.  Self-loops are
// never stored (rejected on input, dropped by contraction); parallel edges
// are fine.
class PlaneDigraph {
 public:
  PlaneDigraph() = default;

  static PlaneDigraph build(int n, std::vector<Vertex> tail,
                            std::vector<Vertex> head,
                            std::vector<std::vector<Dart>> rotation) {
    PlaneDigraph g;
    g.n_ = n;
    g.tail_ = std::move(tail);
    g.head_ = std::move(head);
    g.rot_ = std::move(rotation);
    g.finish_build();
    return g;
  }

  int n() const { return n_; }
  int m() const { return static_cast<int>(tail_.size()); }
  int dart_count() const { return 2 * m(); }

  Vertex tail(EdgeId e) const { return tail_[e]; }
  Vertex head(EdgeId e) const { return head_[e]; }

  Vertex dart_from(Dart d) const {
    return dart_forward(d) ? tail_[dart_edge(d)] : head_[dart_edge(d)];
  }
  Vertex dart_to(Dart d) const {
    return dart_forward(d) ? head_[dart_edge(d)] : tail_[dart_edge(d)];
  }

  int degree(Vertex v) const { return static_cast<int>(rot_[v].size()); }
  const std::vector<Dart>& rotation(Vertex v) const { return rot_[v]; }
  int rot_pos(Dart d) const { return rot_pos_[d]; }

  // Clockwise successor / predecessor among the darts leaving dart_from(d).
  Dart rot_next(Dart d) const {
    const std::vector<Dart>& r = rot_[dart_from(d)];
    int32_t i = rot_pos_[d] + 1;
    return r[i == static_cast<int32_t>(r.size()) ? 0 : i];
  }
  Dart rot_prev(Dart d) const {
    const std::vector<Dart>& r = rot_[dart_from(d)];
    int32_t i = rot_pos_[d];
    return r[(i == 0 ? static_cast<int32_t>(r.size()) : i) - 1];
  }

  // Walking a face boundary: after traversing d, the walk continues with the
  // rotation successor of rev(d) at the vertex d points to.
  Dart next_face_dart(Dart d) const { return rot_next(dart_rev(d)); }
  Dart prev_face_dart(Dart d) const { return dart_rev(rot_prev(d)); }

  bool connected() const {
    if (n_ == 0) return true;
    std::vector<char> seen(n_, 0);
    std::vector<Vertex> stack = {0};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
      Vertex v = stack.back();
      stack.pop_back();
      for (Dart d : rot_[v]) {
        Vertex w = dart_to(d);
        if (!seen[w]) {
          seen[w] = 1;
          ++reached;
          stack.push_back(w);
        }
      }
    }
    return reached == n_;
  }

  const std::vector<std::string>& names() const { return names_; }
  void set_names(std::vector<std::string> names) {
    PR_CHECK(names.empty() || static_cast<int>(names.size()) == n_,
             "name list size mismatch");
    names_ = std::move(names);
  }
  std::string vertex_label(Vertex v) const {
    if (v >= 0 && v < static_cast<int>(names_.size()) && !names_[v].empty())
      return names_[v];
    return std::to_string(v);
  }

  uint64_t space_words() const {
    uint64_t words = vec_words(tail_) + vec_words(head_) + vec_words(rot_pos_);
    for (const auto& r : rot_) words += vec_words(r);
    return words;
  }

 private:
  void finish_build() {
    int m_count = m();
    PR_CHECK(head_.size() == tail_.size(), "tail/head arrays differ in size");
    PR_CHECK(static_cast<int>(rot_.size()) == n_,
             "rotation table must have one row per vertex");
    for (EdgeId e = 0; e < m_count; ++e) {
      PR_CHECK(tail_[e] >= 0 && tail_[e] < n_ && head_[e] >= 0 && head_[e] < n_,
               "edge " << e << " endpoint out of range");
      PR_CHECK(tail_[e] != head_[e], "edge " << e << " is a self-loop");
    }
    rot_pos_.assign(2 * m_count, -1);
    for (Vertex v = 0; v < n_; ++v) {
      for (int32_t i = 0; i < static_cast<int32_t>(rot_[v].size()); ++i) {
        Dart d = rot_[v][i];
        PR_CHECK(d >= 0 && d < 2 * m_count,
                 "rotation of vertex " << v << " mentions invalid dart " << d);
        PR_CHECK(dart_from(d) == v, "dart " << d << " listed at vertex " << v
                                            << " but leaves vertex "
                                            << dart_from(d));
        PR_CHECK(rot_pos_[d] == -1, "dart " << d << " listed twice");
        rot_pos_[d] = i;
      }
    }
    for (Dart d = 0; d < 2 * m_count; ++d)
      PR_CHECK(rot_pos_[d] >= 0, "dart " << d << " missing from rotations");
  }

  int32_t n_ = 0;
  std::vector<Vertex> tail_, head_;
  std::vector<std::vector<Dart>> rot_;
  std::vector<int32_t> rot_pos_;
  std::vector<std::string> names_;
};

// ---------------------------------------------------------------------------
// Text format

// Parses the plain-text graph format:
//   p <n> <m>
//   e <id> <tail> <head>          (m lines, ids 0..m-1 in any order)
//   r <vertex> <edge-id>...       (n lines; clockwise order of incidences)
// Full-line comments start with '#'.  Every incidence of an edge must show up
// exactly once in the rotation of the matching endpoint.
inline PlaneDigraph parse_plane_graph(std::istream& in) {
  std::string line;
  int line_no = 0;
  int n = -1, m = -1;
  std::vector<Vertex> tail, head;
  std::vector<char> edge_seen;
  std::vector<std::vector<Dart>> rot;
  std::vector<char> vertex_seen;
  int edges_read = 0, rotations_read = 0;

  auto fail = [&](const std::string& msg) -> void { throw ParseError(msg, line_no); };

  while (std::getline(in, line)) {
    ++line_no;
    size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    std::string kind;
    ls >> kind;
    if (kind == "p") {
      if (n >= 0) fail("duplicate p line");
      if (!(ls >> n >> m) || n < 0 || m < 0) fail("malformed p line");
      tail.assign(m, kNoVertex);
      head.assign(m, kNoVertex);
      edge_seen.assign(m, 0);
      rot.assign(n, {});
      vertex_seen.assign(n, 0);
    } else if (kind == "e") {
      if (n < 0) fail("e line before p line");
      long long id, u, v;
      if (!(ls >> id >> u >> v)) fail("malformed e line");
      if (id < 0 || id >= m) fail("edge id " + std::to_string(id) + " out of range");
      if (edge_seen[id]) fail("duplicate edge id " + std::to_string(id));
      if (u < 0 || u >= n || v < 0 || v >= n)
        fail("dangling edge reference (vertex " +
             std::to_string(u < 0 || u >= n ? u : v) + ")");
      if (u == v) fail("self-loop at vertex " + std::to_string(u));
      edge_seen[id] = 1;
      tail[id] = static_cast<Vertex>(u);
      head[id] = static_cast<Vertex>(v);
      ++edges_read;
    } else if (kind == "r") {
      if (n < 0) fail("r line before p line");
      if (edges_read != m) fail("r line before all e lines");
      long long v;
      if (!(ls >> v)) fail("malformed r line");
      if (v < 0 || v >= n) fail("rotation for unknown vertex " + std::to_string(v));
      if (vertex_seen[v]) fail("duplicate rotation for vertex " + std::to_string(v));
      vertex_seen[v] = 1;
      ++rotations_read;
      long long id;
      while (ls >> id) {
        if (id < 0 || id >= m) fail("rotation mentions unknown edge " + std::to_string(id));
        Dart d;
        if (tail[id] == v)
          d = make_dart(static_cast<EdgeId>(id), 0);
        else if (head[id] == v)
          d = make_dart(static_cast<EdgeId>(id), 1);
        else
          fail("rotation not a permutation: edge " + std::to_string(id) +
               " is not incident to vertex " + std::to_string(v));
        rot[v].push_back(d);
      }
      if (!ls.eof()) fail("malformed r line");
    } else {
      fail("unknown line kind '" + kind + "'");
    }
  }
  ++line_no;
  if (n < 0) fail("missing p line");
  if (edges_read != m)
    fail("expected " + std::to_string(m) + " e lines, got " + std::to_string(edges_read));
  if (rotations_read != n)
    fail("expected " + std::to_string(n) + " r lines, got " + std::to_string(rotations_read));

  try {
    return PlaneDigraph::build(n, std::move(tail), std::move(head), std::move(rot));
  } catch (const GraphError& err) {
    // Permutation violations surface here (a dart missing from its vertex's
    // rotation); report them as parse errors of the whole file.
    throw ParseError(std::string("rotation not a permutation: ") + err.what(), line_no);
  }
}

inline PlaneDigraph parse_plane_graph(const std::string& text) {
  std::istringstream in(text);
  return parse_plane_graph(in);
}

inline void write_plane_graph(std::ostream& out, const PlaneDigraph& g) {
  out << "p " << g.n() << " " << g.m() << "\n";
  for (EdgeId e = 0; e < g.m(); ++e)
    out << "e " << e << " " << g.tail(e) << " " << g.head(e) << "\n";
  for (Vertex v = 0; v < g.n(); ++v) {
    out << "r " << v;
    for (Dart d : g.rotation(v)) out << " " << dart_edge(d);
    out << "\n";
  }
}

inline std::string write_plane_graph(const PlaneDigraph& g) {
  std::ostringstream out;
  write_plane_graph(out, g);
  return out.str();
}

// ---------------------------------------------------------------------------
// Faces

struct FaceSet {
  // Boundary walk of each face, starting at its smallest dart.  Faces are
  // numbered in increasing order of that smallest dart, so face ids are
  // stable across runs.
  std::vector<std::vector<Dart>> walk;
  std::vector<FaceId> face_of;

  int count() const { return static_cast<int>(walk.size()); }
  int walk_length(FaceId f) const { return static_cast<int>(walk[f].size()); }

  uint64_t space_words() const {
    uint64_t words = vec_words(face_of);
    for (const auto& w : walk) words += vec_words(w);
    return words;
  }
};

inline FaceSet faces(const PlaneDigraph& g) {
  if (!g.connected())
    throw GraphError("disconnected input: faces require a connected graph");
  FaceSet fs;
  fs.face_of.assign(g.dart_count(), kNoFace);
  // Scanning darts in increasing order and starting each walk at the first
  // unvisited dart makes every walk begin at its minimal dart.
  for (Dart d0 = 0; d0 < g.dart_count(); ++d0) {
    if (fs.face_of[d0] != kNoFace) continue;
    FaceId f = fs.count();
    fs.walk.emplace_back();
    Dart d = d0;
    do {
      PR_CHECK(fs.face_of[d] == kNoFace, "dart on two face walks");
      fs.face_of[d] = f;
      fs.walk[f].push_back(d);
      d = g.next_face_dart(d);
    } while (d != d0);
  }
  // A single vertex has one face but no dart to walk it with.
  int implied = g.n() == 1 && g.m() == 0 ? 1 : fs.count();
  if (g.n() - g.m() + implied != 2)
    throw GraphError("embedding fails Euler identity: n=" +
                     std::to_string(g.n()) + " m=" + std::to_string(g.m()) +
                     " faces=" + std::to_string(fs.count()));
  return fs;
}

// ---------------------------------------------------------------------------
// Corners

enum class CornerKind : uint8_t { source, target, neither };

// The corner of a face at the vertex between consecutive boundary darts:
// the walk arrives on in_dart and continues with out_dart.  The corner is a
// source when both incident edge ends leave the vertex, a target when both
// enter it.
struct Corner {
  Vertex at;
  Dart in_dart;
  Dart out_dart;
  CornerKind kind;
};

inline CornerKind classify_corner(Dart in_dart, Dart out_dart) {
  bool in_edge_enters = dart_forward(in_dart);
  bool out_edge_leaves = dart_forward(out_dart);
  if (!in_edge_enters && out_edge_leaves) return CornerKind::source;
  if (in_edge_enters && !out_edge_leaves) return CornerKind::target;
  return CornerKind::neither;
}

struct FaceCorners {
  std::vector<std::vector<Corner>> corners;  // aligned with FaceSet::walk
  std::vector<int> alternation;              // 2 * (#source corners)
};

inline FaceCorners corner_classification(const FaceSet& fs, const PlaneDigraph& g) {
  FaceCorners fc;
  fc.corners.resize(fs.count());
  fc.alternation.assign(fs.count(), 0);
  for (FaceId f = 0; f < fs.count(); ++f) {
    const std::vector<Dart>& w = fs.walk[f];
    int sources = 0, targets = 0;
    fc.corners[f].reserve(w.size());
    for (size_t i = 0; i < w.size(); ++i) {
      Dart in_dart = w[i];
      Dart out_dart = w[(i + 1 == w.size()) ? 0 : i + 1];
      Corner c{g.dart_to(in_dart), in_dart, out_dart,
               classify_corner(in_dart, out_dart)};
      sources += c.kind == CornerKind::source;
      targets += c.kind == CornerKind::target;
      fc.corners[f].push_back(c);
    }
    PR_CHECK(sources == targets,
             "face " << f << " has " << sources << " source but " << targets
                     << " target corners");
    fc.alternation[f] = 2 * sources;
  }
  return fc;
}

// ---------------------------------------------------------------------------
// Tree-cotree decomposition

struct TreeCotree {
  Vertex root = kNoVertex;
  std::vector<char> in_tree;          // per edge id
  std::vector<EdgeId> parent_edge;    // per vertex; kNoEdge at the root
  std::vector<Vertex> parent;         // per vertex; kNoVertex at the root
  std::vector<EdgeId> cotree_edges;   // ids not in the tree, increasing
  // Dual endpoints of each cotree edge: the faces left and right of it.
  std::vector<std::pair<FaceId, FaceId>> dual_ends;  // aligned with cotree_edges

  int tree_size() const {
    return static_cast<int>(std::count(in_tree.begin(), in_tree.end(), 1));
  }
};

// Grows a spanning tree from s along edge directions, so every tree edge
// points away from s.  The remaining edges form a spanning tree of the dual.
inline TreeCotree tree_cotree(const PlaneDigraph& g, const FaceSet& fs, Vertex s) {
  TreeCotree tc;
  tc.root = s;
  tc.in_tree.assign(g.m(), 0);
  tc.parent_edge.assign(g.n(), kNoEdge);
  tc.parent.assign(g.n(), kNoVertex);
  std::vector<char> seen(g.n(), 0);
  std::queue<Vertex> bfs;
  seen[s] = 1;
  bfs.push(s);
  int reached = 1;
  while (!bfs.empty()) {
    Vertex v = bfs.front();
    bfs.pop();
    for (Dart d : g.rotation(v)) {
      if (!dart_forward(d)) continue;  // follow edge direction only
      Vertex w = g.dart_to(d);
      if (seen[w]) continue;
      seen[w] = 1;
      ++reached;
      tc.in_tree[dart_edge(d)] = 1;
      tc.parent_edge[w] = dart_edge(d);
      tc.parent[w] = v;
      bfs.push(w);
    }
  }
  if (reached != g.n())
    throw GraphError("not single-source-spanning: only " +
                     std::to_string(reached) + " of " + std::to_string(g.n()) +
                     " vertices reachable from " + std::to_string(s));
  for (EdgeId e = 0; e < g.m(); ++e) {
    if (tc.in_tree[e]) continue;
    tc.cotree_edges.push_back(e);
    tc.dual_ends.emplace_back(fs.face_of[make_dart(e, 0)],
                              fs.face_of[make_dart(e, 1)]);
  }
  PR_CHECK(static_cast<int>(tc.cotree_edges.size()) == g.m() - g.n() + 1,
           "cotree size is not m - n + 1");
  return tc;
}

inline TreeCotree tree_cotree(const PlaneDigraph& g, Vertex s) {
  FaceSet fs = faces(g);
  return tree_cotree(g, fs, s);
}

// True when the cotree edges connect all faces without a dual cycle, i.e.
// form a spanning tree of the dual.
inline bool cotree_spans_dual(const TreeCotree& tc, int face_count) {
  std::vector<FaceId> uf(face_count);
  std::iota(uf.begin(), uf.end(), 0);
  auto find = [&](FaceId f) {
    while (uf[f] != f) f = uf[f] = uf[uf[f]];
    return f;
  };
  int components = face_count;
  for (auto [a, b] : tc.dual_ends) {
    FaceId ra = find(a), rb = find(b);
    if (ra == rb) return false;
    uf[ra] = rb;
    --components;
  }
  return components == 1;
}

// ---------------------------------------------------------------------------
// Contraction

struct ContractionResult {
  PlaneDigraph graph;
  std::vector<Vertex> vertex_map;  // old vertex -> new vertex
  std::vector<EdgeId> edge_map;    // old edge -> new edge, kNoEdge if dropped
  std::vector<EdgeId> edge_origin; // new edge -> old edge

  Dart dart_origin(Dart d) const {
    return make_dart(edge_origin[dart_edge(d)], d & 1);
  }
};

// Contracts every class of the given partition to a single vertex, keeping
// the embedding.  Classes must induce connected subgraphs.  Each class is
// collapsed by contracting a spanning tree of its induced edges one edge at
// a time; a single contraction splices the head's rotation into the tail's
// in place of the contracted darts, which is exactly the rotation of the
// merged vertex on the sphere.  Edges that end up with both ends in one
// class become self-loops and are dropped.
inline ContractionResult contract_classes(const PlaneDigraph& g,
                                          const std::vector<Vertex>& class_of,
                                          int class_count) {
  PR_CHECK(static_cast<int>(class_of.size()) == g.n(),
           "class map must cover every vertex");
  int dc = g.dart_count();
  // Circular dart lists, seeded from the rotations.
  std::vector<Dart> nxt(dc, kNoDart), prv(dc, kNoDart);
  for (Vertex v = 0; v < g.n(); ++v) {
    const std::vector<Dart>& r = g.rotation(v);
    for (size_t i = 0; i < r.size(); ++i) {
      Dart a = r[i], b = r[(i + 1 == r.size()) ? 0 : i + 1];
      nxt[a] = b;
      prv[b] = a;
    }
  }
  auto unlink = [&](Dart d) {
    if (nxt[d] == d) { /* last dart of its vertex */ }
    else {
      nxt[prv[d]] = nxt[d];
      prv[nxt[d]] = prv[d];
    }
    nxt[d] = prv[d] = kNoDart;
  };

  // Spanning forest of each class over its induced edges, found by one
  // undirected scan per class.
  std::vector<char> merged(g.n(), 0);
  std::vector<EdgeId> forest;
  {
    std::vector<char> visited(g.n(), 0);
    std::vector<int> pieces(class_count, 0);
    for (Vertex v0 = 0; v0 < g.n(); ++v0) {
      if (visited[v0]) continue;
      visited[v0] = 1;
      if (++pieces[class_of[v0]] > 1)
        throw GraphError("contraction class " + std::to_string(class_of[v0]) +
                         " does not induce a connected subgraph");
      std::vector<Vertex> comp = {v0};
      while (!comp.empty()) {
        Vertex v = comp.back();
        comp.pop_back();
        for (Dart d : g.rotation(v)) {
          Vertex w = g.dart_to(d);
          if (class_of[w] != class_of[v] || visited[w]) continue;
          visited[w] = 1;
          forest.push_back(dart_edge(d));
          comp.push_back(w);
        }
      }
    }
  }

  for (EdgeId e : forest) {
    // Splice: the two endpoint rotations become one, joined where the
    // contracted darts sat.
    Dart d0 = make_dart(e, 0), d1 = make_dart(e, 1);
    Dart a = prv[d0], b = nxt[d0], c = prv[d1], f = nxt[d1];
    if (b == d0) {
      // Tail end had degree 1: the merged rotation is just the head's.
      unlink(d1);
    } else if (f == d1) {
      unlink(d0);
    } else {
      nxt[a] = f;
      prv[f] = a;
      nxt[c] = b;
      prv[b] = c;
      nxt[d0] = prv[d0] = nxt[d1] = prv[d1] = kNoDart;
    }
    merged[g.tail(e)] = merged[g.head(e)] = 1;
  }

  ContractionResult res;
  res.vertex_map.assign(g.n(), kNoVertex);
  std::vector<Vertex> class_new_id(class_count, kNoVertex);
  int new_n = 0;
  for (Vertex v = 0; v < g.n(); ++v) {
    if (class_new_id[class_of[v]] == kNoVertex) class_new_id[class_of[v]] = new_n++;
    res.vertex_map[v] = class_new_id[class_of[v]];
  }

  res.edge_map.assign(g.m(), kNoEdge);
  std::vector<Vertex> new_tail, new_head;
  for (EdgeId e = 0; e < g.m(); ++e) {
    if (res.vertex_map[g.tail(e)] == res.vertex_map[g.head(e)]) {
      // Self-loop after contraction (a forest edge or a chord of a class).
      if (!nxt.empty() && nxt[make_dart(e, 0)] != kNoDart) unlink(make_dart(e, 0));
      if (!nxt.empty() && nxt[make_dart(e, 1)] != kNoDart) unlink(make_dart(e, 1));
      continue;
    }
    res.edge_map[e] = static_cast<EdgeId>(new_tail.size());
    res.edge_origin.push_back(e);
    new_tail.push_back(res.vertex_map[g.tail(e)]);
    new_head.push_back(res.vertex_map[g.head(e)]);
  }

  std::vector<std::vector<Dart>> new_rot(new_n);
  std::vector<char> dart_done(dc, 0);
  for (Dart d0 = 0; d0 < dc; ++d0) {
    if (dart_done[d0] || res.edge_map[dart_edge(d0)] == kNoEdge) continue;
    Vertex v = res.vertex_map[g.dart_from(d0)];
    PR_CHECK(new_rot[v].empty(), "two dart cycles at one merged vertex");
    Dart d = d0;
    do {
      PR_CHECK(!dart_done[d], "dart cycle revisits a dart");
      dart_done[d] = 1;
      new_rot[v].push_back(make_dart(res.edge_map[dart_edge(d)], d & 1));
      d = nxt[d];
    } while (d != d0);
  }

  res.graph = PlaneDigraph::build(new_n, std::move(new_tail),
                                  std::move(new_head), std::move(new_rot));
  return res;
}

inline ContractionResult contract_connected_subgraph(
    const PlaneDigraph& g, const std::vector<Vertex>& subset) {
  std::vector<char> in_set(g.n(), 0);
  for (Vertex v : subset) {
    PR_CHECK(v >= 0 && v < g.n(), "contraction vertex out of range");
    in_set[v] = 1;
  }
  std::vector<Vertex> class_of(g.n());
  int classes = 0;
  int set_class = -1;
  for (Vertex v = 0; v < g.n(); ++v) {
    if (in_set[v]) {
      if (set_class < 0) set_class = classes++;
      class_of[v] = set_class;
    } else {
      class_of[v] = classes++;
    }
  }
  return contract_classes(g, class_of, classes);
}

}  // namespace planar_reach
