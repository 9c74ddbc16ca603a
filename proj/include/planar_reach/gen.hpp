#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "planar_reach/plane_graph.hpp"

namespace planar_reach {

enum class GenClass {
  single_source,
  in_out,
  cyclic,
  adversarial_path,
  fan,
  nested_frames,
};

inline GenClass gen_class_from_string(const std::string& s) {
  if (s == "single_source") return GenClass::single_source;
  if (s == "in_out") return GenClass::in_out;
  if (s == "cyclic") return GenClass::cyclic;
  if (s == "adversarial_path") return GenClass::adversarial_path;
  if (s == "fan") return GenClass::fan;
  if (s == "nested_frames") return GenClass::nested_frames;
  throw GraphError("unknown generator class: " + s);
}

inline const char* to_string(GenClass c) {
  switch (c) {
    case GenClass::single_source: return "single_source";
    case GenClass::in_out: return "in_out";
    case GenClass::cyclic: return "cyclic";
    case GenClass::adversarial_path: return "adversarial_path";
    case GenClass::fan: return "fan";
    case GenClass::nested_frames: return "nested_frames";
  }
  return "?";
}

struct GenConfig {
  GenClass klass = GenClass::single_source;
  int n = 10;
  uint64_t seed = 1;
  double cycle_fraction = 0.05;
  int nesting_depth = 0;  // 0 = as deep as n allows
  int flips_per_vertex = 3;
};

struct GenResult {
  PlaneDigraph graph;
  Vertex source = 0;
};

namespace gen_detail {

inline uint64_t rand_below(std::mt19937_64& rng, uint64_t k) {
  return rng() % k;  // slight modulo bias is fine for test instances
}

// Undirected plane triangulation under construction, as a half-edge table.
// Darts 2e and 2e+1 are the two sides of edge e; next_ steps along a face,
// so next_[d ^ 1] steps around the origin of d.
class TriBuilder {
 public:
  static TriBuilder triangle() {
    TriBuilder t;
    t.n_ = 3;
    t.origin_ = {0, 1, 1, 2, 2, 0};
    t.next_.assign(6, kNoDart);
    // face 0->1->2 and its mirror
    t.link(0, 2);
    t.link(2, 4);
    t.link(4, 0);
    t.link(5, 3);
    t.link(3, 1);
    t.link(1, 5);
    t.vertex_dart_ = {0, 1, 3};
    return t;
  }

  int n() const { return n_; }
  int m() const { return static_cast<int>(origin_.size()) / 2; }
  Vertex origin(Dart d) const { return origin_[d]; }
  Vertex other_end(Dart d) const { return origin_[d ^ 1]; }
  Dart next(Dart d) const { return next_[d]; }
  Dart rot(Dart d) const { return next_[d ^ 1]; }

  struct Split {
    Vertex v;
    Dart rep1, rep2;  // darts left on the two faces that split away from f0
  };

  // Splits the triangular face holding f0 into three; f0 stays on one part,
  // rep1/rep2 land on the other two.
  Split split_face(Dart f0) {
    Dart f1 = next_[f0], f2 = next_[f1];
    PR_CHECK(next_[f2] == f0, "split_face: face is not a triangle");
    Vertex a = origin_[f0], b = origin_[f1], c = origin_[f2];
    Vertex v = n_++;
    Dart av = new_edge(a, v), bv = new_edge(b, v), cv = new_edge(c, v);
    vertex_dart_.push_back(av ^ 1);
    link(f0, bv);
    link(bv, av ^ 1);
    link(av ^ 1, f0);
    link(f1, cv);
    link(cv, bv ^ 1);
    link(bv ^ 1, f1);
    link(f2, av);
    link(av, cv ^ 1);
    link(cv ^ 1, f2);
    return {v, f1, f2};
  }

  bool adjacent(Vertex x, Vertex y) const {
    Dart start = vertex_dart_[x];
    Dart d = start;
    do {
      if (other_end(d) == y) return true;
      d = rot(d);
    } while (d != start);
    return false;
  }

  // Replaces edge (a,b) by the opposite diagonal of its two triangles.
  // Refuses flips that would create a parallel edge.
  bool flip(Dart d) {
    Dart t = d ^ 1;
    Dart d1 = next_[d], d2 = next_[d1];
    Dart t1 = next_[t], t2 = next_[t1];
    if (next_[d2] != d || next_[t2] != t) return false;
    Vertex a = origin_[d], b = origin_[t];
    Vertex c = origin_[d2], e = origin_[t2];
    if (c == e || adjacent(c, e)) return false;
    origin_[d] = c;
    origin_[t] = e;
    link(d, t2);
    link(t2, d1);
    link(d1, d);
    link(t, d2);
    link(d2, t1);
    link(t1, t);
    if (vertex_dart_[a] == d) vertex_dart_[a] = t1;
    if (vertex_dart_[b] == t) vertex_dart_[b] = d1;
    return true;
  }

  std::vector<Dart> face_reps() const {
    std::vector<char> seen(origin_.size(), 0);
    std::vector<Dart> reps;
    for (Dart d = 0; d < static_cast<Dart>(origin_.size()); ++d) {
      if (seen[d]) continue;
      reps.push_back(d);
      Dart w = d;
      do {
        seen[w] = 1;
        w = next_[w];
      } while (w != d);
    }
    return reps;
  }

  // Cyclic list of incident edge ids at v, in rotation order.
  std::vector<EdgeId> rotation_edges(Vertex v) const {
    std::vector<EdgeId> out;
    Dart start = vertex_dart_[v];
    Dart d = start;
    do {
      out.push_back(d >> 1);
      d = rot(d);
    } while (d != start);
    return out;
  }

 private:
  void link(Dart from, Dart to) { next_[from] = to; }

  Dart new_edge(Vertex x, Vertex y) {
    Dart d = static_cast<Dart>(origin_.size());
    origin_.push_back(x);
    origin_.push_back(y);
    next_.push_back(kNoDart);
    next_.push_back(kNoDart);
    return d;
  }

  int n_ = 0;
  std::vector<Vertex> origin_;
  std::vector<Dart> next_;
  std::vector<Dart> vertex_dart_;
};

// Assembles a PlaneDigraph once every edge has a direction.  to_tail[e] is
// the chosen tail; rotations come straight from the half-edge structure.
inline PlaneDigraph orient_tri(const TriBuilder& tri,
                               const std::vector<Vertex>& tails) {
  std::vector<Vertex> head(tri.m());
  for (EdgeId e = 0; e < tri.m(); ++e) {
    Vertex x = tri.origin(2 * e), y = tri.origin(2 * e + 1);
    PR_CHECK(tails[e] == x || tails[e] == y, "orient_tri: tail not an end");
    head[e] = tails[e] == x ? y : x;
  }
  std::vector<std::vector<Dart>> rot(tri.n());
  for (Vertex v = 0; v < tri.n(); ++v) {
    for (EdgeId e : tri.rotation_edges(v))
      rot[v].push_back(make_dart(e, v == tails[e] ? 0 : 1));
  }
  return PlaneDigraph::build(tri.n(), tails, head, rot);
}

// BFS layers over the non-excluded vertices, from vertex 0.
inline std::vector<int> bfs_layers(const TriBuilder& tri,
                                   const std::vector<char>& excluded) {
  std::vector<int> layer(tri.n(), -1);
  std::vector<Vertex> queue{0};
  layer[0] = 0;
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    Vertex v = queue[qi];
    for (EdgeId e : tri.rotation_edges(v)) {
      Vertex w = tri.origin(2 * e) == v ? tri.origin(2 * e + 1)
                                        : tri.origin(2 * e);
      if (excluded[w] || layer[w] != -1) continue;
      layer[w] = layer[v] + 1;
      queue.push_back(w);
    }
  }
  return layer;
}

// pocket_rank[v] >= 0 marks grafted vertices whose edges all point outward;
// between two of them the newer one points at the older.
inline std::vector<Vertex> choose_tails(const TriBuilder& tri,
                                        const std::vector<int>& layer,
                                        const std::vector<int>& pocket_rank) {
  auto key = [&](Vertex v) { return std::pair<int, Vertex>(layer[v], v); };
  std::vector<Vertex> tails(tri.m());
  for (EdgeId e = 0; e < tri.m(); ++e) {
    Vertex x = tri.origin(2 * e), y = tri.origin(2 * e + 1);
    int px = pocket_rank[x], py = pocket_rank[y];
    if (px >= 0 && py >= 0)
      tails[e] = px > py ? x : y;
    else if (px >= 0)
      tails[e] = x;
    else if (py >= 0)
      tails[e] = y;
    else
      tails[e] = key(x) < key(y) ? x : y;
  }
  return tails;
}

inline TriBuilder random_triangulation(int n, std::mt19937_64& rng,
                                       int flips_per_vertex) {
  PR_CHECK(n >= 3, "triangulation needs n >= 3");
  TriBuilder tri = TriBuilder::triangle();
  std::vector<Dart> reps = {0, 1};
  while (tri.n() < n) {
    size_t idx = rand_below(rng, reps.size());
    auto split = tri.split_face(reps[idx]);
    reps.push_back(split.rep1);
    reps.push_back(split.rep2);
  }
  int64_t flips = static_cast<int64_t>(flips_per_vertex) * tri.n();
  for (int64_t i = 0; i < flips; ++i) {
    EdgeId e = static_cast<EdgeId>(rand_below(rng, tri.m()));
    tri.flip(2 * e);
  }
  return tri;
}

template <typename T>
void shuffle_vec(std::vector<T>& v, std::mt19937_64& rng) {
  for (size_t i = v.size(); i > 1; --i)
    std::swap(v[i - 1], v[rand_below(rng, i)]);
}

inline PlaneDigraph single_source_graph(int n, std::mt19937_64& rng,
                                        int flips_per_vertex) {
  if (n == 1) return PlaneDigraph::build(1, {}, {}, {{}});
  if (n == 2) return PlaneDigraph::build(2, {0}, {1}, {{0}, {1}});
  TriBuilder tri = random_triangulation(n, rng, flips_per_vertex);
  std::vector<char> excluded(n, 0);
  std::vector<int> layer = bfs_layers(tri, excluded);
  std::vector<int> no_pockets(n, -1);
  return orient_tri(tri, choose_tails(tri, layer, no_pockets));
}

// Reverses the key-largest edge of some pairwise vertex-disjoint triangle
// faces.  Each reversal closes a 3-cycle; the detour u->v->w keeps every
// original path intact, so vertex 0 still reaches everything.
inline PlaneDigraph cyclic_graph(const GenConfig& cfg, std::mt19937_64& rng) {
  PR_CHECK(cfg.n >= 3, "cyclic class needs n >= 3");
  TriBuilder tri = random_triangulation(cfg.n, rng, cfg.flips_per_vertex);
  std::vector<char> excluded(cfg.n, 0);
  std::vector<int> layer = bfs_layers(tri, excluded);
  std::vector<int> no_pockets(cfg.n, -1);
  std::vector<Vertex> tails = choose_tails(tri, layer, no_pockets);

  auto key = [&](Vertex v) { return std::pair<int, Vertex>(layer[v], v); };
  int target = std::max<int>(1, static_cast<int>(cfg.cycle_fraction * cfg.n));
  std::vector<Dart> reps = tri.face_reps();
  shuffle_vec(reps, rng);
  std::vector<char> used(cfg.n, 0);
  int made = 0;
  for (Dart rep : reps) {
    if (made >= target) break;
    Dart d1 = tri.next(rep), d2 = tri.next(d1);
    Vertex x = tri.origin(rep), y = tri.origin(d1), z = tri.origin(d2);
    if (used[x] || used[y] || used[z]) continue;
    Vertex lo = x, hi = x;
    for (Vertex v : {y, z}) {
      if (key(v) < key(lo)) lo = v;
      if (key(hi) < key(v)) hi = v;
    }
    for (Dart d : {rep, d1, d2}) {
      Vertex a = tri.origin(d), b = tri.other_end(d);
      if ((a == lo && b == hi) || (a == hi && b == lo)) {
        tails[d >> 1] = hi;
        break;
      }
    }
    used[x] = used[y] = used[z] = 1;
    ++made;
  }
  PR_CHECK(made >= 1, "cyclic class: no reversible face found");
  return orient_tri(tri, tails);
}

inline PlaneDigraph in_out_graph(const GenConfig& cfg, std::mt19937_64& rng) {
  PR_CHECK(cfg.n >= 3, "in_out class needs n >= 3");
  if (cfg.n == 3)
    return PlaneDigraph::build(3, {0, 2}, {1, 1}, {{0}, {1, 3}, {2}});
  if (cfg.n == 4)  // a 3-vertex base has no face avoiding vertex 0
    return PlaneDigraph::build(4, {0, 1, 3}, {1, 2, 1},
                               {{0}, {1, 2, 5}, {3}, {4}});
  int pockets = std::clamp(cfg.n / 150, 1, cfg.n - 3);
  int base_n = cfg.n - pockets;
  TriBuilder tri = random_triangulation(base_n, rng, cfg.flips_per_vertex);

  std::vector<Dart> reps = tri.face_reps();
  shuffle_vec(reps, rng);
  std::vector<int> pocket_rank;
  pocket_rank.assign(base_n, -1);
  int budget = pockets, rank = 0;
  for (Dart rep : reps) {
    if (budget == 0) break;
    Dart d1 = tri.next(rep), d2 = tri.next(d1);
    // keeping vertex 0 free of pocket in-edges keeps it an in-degree-0
    // candidate for the classifier
    if (tri.origin(rep) == 0 || tri.origin(d1) == 0 || tri.origin(d2) == 0)
      continue;
    tri.split_face(rep);
    pocket_rank.push_back(rank++);
    --budget;
    if (budget > 0 && rand_below(rng, 2) == 0) {
      tri.split_face(rep);  // rep now lies on a sub-face of the pocket
      pocket_rank.push_back(rank++);
      --budget;
    }
  }
  PR_CHECK(budget == 0, "in_out class: not enough pocket-free faces");

  std::vector<char> excluded(tri.n(), 0);
  for (Vertex v = 0; v < tri.n(); ++v) excluded[v] = pocket_rank[v] >= 0;
  std::vector<int> layer = bfs_layers(tri, excluded);
  return orient_tri(tri, choose_tails(tri, layer, pocket_rank));
}

inline PlaneDigraph fan_graph(int n) {
  PR_CHECK(n >= 3, "fan graph needs n >= 3");
  std::vector<Vertex> tail, head;
  for (Vertex v = 1; v < n; ++v) {
    tail.push_back(0);
    head.push_back(v);
  }
  for (Vertex v = 1; v + 1 < n; ++v) {
    tail.push_back(v);
    head.push_back(v + 1);
  }
  auto spoke = [&](Vertex v) { return static_cast<EdgeId>(v - 1); };
  auto rung = [&](Vertex v) { return static_cast<EdgeId>(n - 2 + v); };
  std::vector<std::vector<Dart>> rot(n);
  for (Vertex v = n - 1; v >= 1; --v) rot[0].push_back(make_dart(spoke(v), 0));
  for (Vertex v = 1; v < n; ++v) {
    rot[v].push_back(make_dart(spoke(v), 1));
    if (v + 1 < n) rot[v].push_back(make_dart(rung(v), 0));
    if (v >= 2) rot[v].push_back(make_dart(rung(v - 1), 1));
  }
  return PlaneDigraph::build(n, tail, head, rot);
}

// Directed path plus a random subset of the dyadic chords (i, i + 2^k),
// i a multiple of 2^k, all drawn on the same side; the spans nest, so the
// result stays plane and acyclic with vertex 0 as the only source.
inline PlaneDigraph adversarial_path_graph(int n, std::mt19937_64& rng) {
  if (n == 1) return PlaneDigraph::build(1, {}, {}, {{}});
  std::vector<Vertex> tail, head;
  for (Vertex v = 0; v + 1 < n; ++v) {
    tail.push_back(v);
    head.push_back(v + 1);
  }
  // per vertex: chords out (built in increasing span, used in decreasing)
  // and chords in (increasing span)
  std::vector<std::vector<EdgeId>> chord_out(n), chord_in(n);
  for (int span = 2; span < n; span *= 2) {
    for (int i = 0; i + span < n; i += span) {
      if (rand_below(rng, 10) >= 6) continue;
      EdgeId e = static_cast<EdgeId>(tail.size());
      tail.push_back(i);
      head.push_back(i + span);
      chord_out[i].push_back(e);
      chord_in[i + span].push_back(e);
    }
  }
  std::vector<std::vector<Dart>> rot(n);
  for (Vertex v = 0; v < n; ++v) {
    if (v > 0) rot[v].push_back(make_dart(v - 1, 1));
    for (EdgeId e : chord_in[v]) rot[v].push_back(make_dart(e, 1));
    for (auto it = chord_out[v].rbegin(); it != chord_out[v].rend(); ++it)
      rot[v].push_back(make_dart(*it, 0));
    if (v + 1 < n) rot[v].push_back(make_dart(v, 0));
  }
  return PlaneDigraph::build(n, tail, head, rot);
}

// Two directed chains u_0..u_d and w_0..w_d between a source and a shared
// target t, where each level's shortcut u_i->w_i is drawn around t.  Every
// face around t then lies inside the deepest shortcut, which is the shape
// that drives target-corner capture in the decomposition.  Leftover vertices
// become a path hanging off t.
inline PlaneDigraph nested_frames_graph(int n, int depth_param) {
  PR_CHECK(n >= 4, "nested_frames class needs n >= 4");
  int d_max = (n - 4) / 2;
  int d = depth_param > 0 ? std::min(depth_param, d_max) : d_max;
  int pads = n - (2 * d + 4);
  auto u = [](int i) { return static_cast<Vertex>(2 + 2 * i); };
  auto w = [](int i) { return static_cast<Vertex>(3 + 2 * i); };
  Vertex t = 1;

  std::vector<Vertex> tail, head;
  auto add = [&](Vertex x, Vertex y) {
    tail.push_back(x);
    head.push_back(y);
    return static_cast<EdgeId>(tail.size() - 1);
  };
  EdgeId e0 = add(0, u(0)), e1 = add(0, w(0));
  std::vector<EdgeId> eu(d + 1), ew(d + 1), arc(d + 1), cu(d), cw(d), pad(pads);
  for (int i = 0; i <= d; ++i) {
    eu[i] = add(u(i), t);
    ew[i] = add(w(i), t);
    arc[i] = add(u(i), w(i));
  }
  for (int i = 0; i < d; ++i) {
    cu[i] = add(u(i), u(i + 1));
    cw[i] = add(w(i), w(i + 1));
  }
  Vertex prev = t;
  for (int j = 0; j < pads; ++j) {
    Vertex p = static_cast<Vertex>(2 * d + 4 + j);
    pad[j] = add(prev, p);
    prev = p;
  }

  std::vector<std::vector<Dart>> rot(n);
  rot[0] = {make_dart(e0, 0), make_dart(e1, 0)};
  for (int i = 0; i <= d; ++i) {
    auto& ru = rot[u(i)];
    ru.push_back(i == 0 ? make_dart(e0, 1) : make_dart(cu[i - 1], 1));
    ru.push_back(make_dart(arc[i], 0));
    if (i < d) ru.push_back(make_dart(cu[i], 0));
    ru.push_back(make_dart(eu[i], 0));
    auto& rw = rot[w(i)];
    rw.push_back(i == 0 ? make_dart(e1, 1) : make_dart(cw[i - 1], 1));
    rw.push_back(make_dart(ew[i], 0));
    if (i < d) rw.push_back(make_dart(cw[i], 0));
    rw.push_back(make_dart(arc[i], 1));
  }
  for (int i = 0; i <= d; ++i) rot[t].push_back(make_dart(eu[i], 1));
  for (int i = d; i >= 0; --i) rot[t].push_back(make_dart(ew[i], 1));
  if (pads > 0) rot[t].push_back(make_dart(pad[0], 0));
  for (int j = 0; j < pads; ++j) {
    Vertex p = static_cast<Vertex>(2 * d + 4 + j);
    rot[p].push_back(make_dart(pad[j], 1));
    if (j + 1 < pads) rot[p].push_back(make_dart(pad[j + 1], 0));
  }
  return PlaneDigraph::build(n, tail, head, rot);
}

}  // namespace gen_detail

inline GenResult gen(const GenConfig& cfg) {
  PR_CHECK(cfg.n >= 1, "gen needs n >= 1");
  std::mt19937_64 rng(cfg.seed);
  using namespace gen_detail;
  switch (cfg.klass) {
    case GenClass::single_source:
      return {single_source_graph(cfg.n, rng, cfg.flips_per_vertex), 0};
    case GenClass::cyclic:
      return {cyclic_graph(cfg, rng), 0};
    case GenClass::in_out:
      return {in_out_graph(cfg, rng), 0};
    case GenClass::fan:
      if (cfg.n < 3)
        return {single_source_graph(cfg.n, rng, cfg.flips_per_vertex), 0};
      return {fan_graph(cfg.n), 0};
    case GenClass::adversarial_path:
      return {adversarial_path_graph(cfg.n, rng), 0};
    case GenClass::nested_frames:
      if (cfg.n < 4) return {adversarial_path_graph(cfg.n, rng), 0};
      return {nested_frames_graph(cfg.n, cfg.nesting_depth), 0};
  }
  throw GraphError("gen: unhandled class");
}

}  // namespace planar_reach
