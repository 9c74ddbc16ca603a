#include <doctest.h>

#include <vector>

#include "planar_reach/closure.hpp"
#include "planar_reach/gen.hpp"
#include "planar_reach/scc.hpp"
#include "test_util.hpp"

using namespace planar_reach;
using namespace pr_test;

namespace {

bool same_graph(const PlaneDigraph& a, const PlaneDigraph& b) {
  if (a.n() != b.n() || a.m() != b.m()) return false;
  for (EdgeId e = 0; e < a.m(); ++e)
    if (a.tail(e) != b.tail(e) || a.head(e) != b.head(e)) return false;
  for (Vertex v = 0; v < a.n(); ++v)
    if (a.rotation(v) != b.rotation(v)) return false;
  return true;
}

std::vector<int> in_degrees(const PlaneDigraph& g) {
  std::vector<int> deg(g.n(), 0);
  for (EdgeId e = 0; e < g.m(); ++e) ++deg[g.head(e)];
  return deg;
}

bool acyclic(const PlaneDigraph& g) {
  return strongly_connected_components(g).trivial();
}

GenResult run(GenClass k, int n, uint64_t seed) {
  GenConfig cfg;
  cfg.klass = k;
  cfg.n = n;
  cfg.seed = seed;
  return gen(cfg);
}

}  // namespace

TEST_CASE("generation is deterministic") {
  for (GenClass k : {GenClass::single_source, GenClass::in_out,
                     GenClass::cyclic, GenClass::adversarial_path,
                     GenClass::fan, GenClass::nested_frames}) {
    INFO("class=", std::string(to_string(k)));
    CHECK(same_graph(run(k, 50, 7).graph, run(k, 50, 7).graph));
  }
  // classes with random structure must react to the seed
  for (GenClass k : {GenClass::single_source, GenClass::in_out,
                     GenClass::cyclic, GenClass::adversarial_path}) {
    INFO("class=", std::string(to_string(k)));
    CHECK(!same_graph(run(k, 50, 7).graph, run(k, 50, 8).graph));
  }
}

TEST_CASE("single_source instances have one source and reach everything") {
  for (int n : {1, 2, 3, 10, 57, 200}) {
    for (uint64_t seed : {1, 2, 3}) {
      INFO("n=", n, " seed=", seed);
      auto [g, s] = run(GenClass::single_source, n, seed);
      CHECK(g.n() == n);
      faces(g);  // validates connectivity and the Euler identity
      CHECK(acyclic(g));
      int sources = 0;
      for (int d : in_degrees(g)) sources += d == 0;
      CHECK(sources == 1);
      auto row = reachable_from(g, s);
      for (Vertex v = 0; v < g.n(); ++v) CHECK(row[v]);
    }
  }
}

TEST_CASE("triangulation-backed instances are plane triangulations") {
  auto [g, s] = run(GenClass::single_source, 80, 5);
  CHECK(g.m() == 3 * g.n() - 6);
  FaceSet fs = faces(g);
  for (const auto& w : fs.walk) CHECK(w.size() == 3);
}

TEST_CASE("cyclic instances contain a cycle but keep full reach from 0") {
  for (int n : {3, 20, 100, 400}) {
    for (uint64_t seed : {1, 2}) {
      INFO("n=", n, " seed=", seed);
      auto [g, s] = run(GenClass::cyclic, n, seed);
      faces(g);
      CHECK(!strongly_connected_components(g).trivial());
      auto row = reachable_from(g, s);
      for (Vertex v = 0; v < g.n(); ++v) CHECK(row[v]);
    }
  }
  GenConfig bad;
  bad.klass = GenClass::cyclic;
  bad.n = 2;
  CHECK_THROWS_AS(gen(bad), GraphError);
}

TEST_CASE("in_out instances keep vertex 0 as a candidate that reaches all sinks") {
  for (int n : {3, 4, 50, 200, 500}) {
    for (uint64_t seed : {1, 2}) {
      INFO("n=", n, " seed=", seed);
      auto [g, s] = run(GenClass::in_out, n, seed);
      faces(g);
      CHECK(acyclic(g));
      CHECK(in_degrees(g)[s] == 0);
      auto row = reachable_from(g, s);
      std::vector<int> outdeg(g.n(), 0);
      for (EdgeId e = 0; e < g.m(); ++e) ++outdeg[g.tail(e)];
      bool any_red = false;
      for (Vertex v = 0; v < g.n(); ++v) {
        if (outdeg[v] == 0) CHECK(row[v]);
        any_red = any_red || !row[v];
      }
      CHECK(any_red);
    }
  }
}

TEST_CASE("fan instance shape") {
  auto [g, s] = run(GenClass::fan, 6, 1);
  CHECK(g.m() == 2 * g.n() - 3);
  CHECK(faces(g).count() == g.n() - 1);
  ClosureOracle c = closure(g);
  for (Vertex v = 0; v < g.n(); ++v) CHECK(c.reach(0, v));
  CHECK(c.reach(2, 4));
  CHECK(!c.reach(4, 2));
}

TEST_CASE("adversarial_path reach is exactly the vertex order") {
  for (int n : {2, 9, 33, 64}) {
    for (uint64_t seed : {1, 4}) {
      INFO("n=", n, " seed=", seed);
      auto [g, s] = run(GenClass::adversarial_path, n, seed);
      faces(g);
      ClosureOracle c = closure(g);
      for (Vertex u = 0; u < g.n(); ++u)
        for (Vertex v = 0; v < g.n(); ++v) CHECK(c.reach(u, v) == (u <= v));
    }
  }
}

TEST_CASE("nested_frames faces all have two direction changes") {
  for (int n : {4, 10, 11, 37}) {
    INFO("n=", n);
    auto [g, s] = run(GenClass::nested_frames, n, 1);
    CHECK(g.n() == n);
    FaceSet fs = faces(g);
    FaceCorners fc = corner_classification(fs, g);
    for (FaceId f = 0; f < fs.count(); ++f) CHECK(fc.alternation[f] == 2);
    CHECK(acyclic(g));
    auto row = reachable_from(g, s);
    for (Vertex v = 0; v < g.n(); ++v) CHECK(row[v]);
  }
}

TEST_CASE("nested_frames honours the depth parameter") {
  GenConfig cfg;
  cfg.klass = GenClass::nested_frames;
  cfg.n = 40;
  cfg.nesting_depth = 3;
  PlaneDigraph g = gen(cfg).graph;
  // depth 3 core uses 10 vertices; the rest becomes the pad path, whose
  // vertices have degree <= 2
  int small = 0;
  for (Vertex v = 0; v < g.n(); ++v) small += g.degree(v) <= 2;
  CHECK(small >= 30);
}

TEST_CASE("large instances build and validate") {
  for (GenClass k : {GenClass::single_source, GenClass::in_out,
                     GenClass::cyclic, GenClass::adversarial_path,
                     GenClass::nested_frames}) {
    INFO("class=", to_string(k));
    auto [g, s] = run(k, 20000, 11);
    CHECK(g.n() == 20000);
    faces(g);
  }
}
