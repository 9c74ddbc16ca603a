#include "doctest.h"

#include <set>

#include "planar_reach/plane_graph.hpp"
#include "test_util.hpp"

using namespace planar_reach;
using pr_test::load_fixture;

TEST_CASE("parsing the triangle fixture") {
  PlaneDigraph g = load_fixture("fx_t.pg");
  CHECK(g.n() == 3);
  CHECK(g.m() == 3);
  CHECK(g.tail(0) == 0);
  CHECK(g.head(0) == 1);
  CHECK(g.degree(0) == 2);
  CHECK(g.dart_from(make_dart(2, 1)) == 2);
  CHECK(g.dart_to(make_dart(2, 1)) == 0);
}

TEST_CASE("parsing the diamond fixture") {
  PlaneDigraph g = load_fixture("fx_d.pg");
  CHECK(g.n() == 4);
  CHECK(g.m() == 4);
  int deg_sum = 0;
  for (Vertex v = 0; v < g.n(); ++v) deg_sum += g.degree(v);
  CHECK(deg_sum == 2 * g.m());
}

static void expect_parse_error(const std::string& text, const std::string& frag,
                               int line) {
  try {
    parse_plane_graph(text);
    FAIL("expected a parse error containing '" << frag << "'");
  } catch (const ParseError& err) {
    CHECK(std::string(err.what()).find(frag) != std::string::npos);
    CHECK(err.line() == line);
  }
}

TEST_CASE("parse errors carry line numbers") {
  expect_parse_error("p 2 1\ne 0 0 5\nr 0 0\nr 1\n", "dangling edge reference", 2);
  expect_parse_error("p 2 1\ne 0 1 1\nr 0\nr 1 0\n", "self-loop", 2);
  expect_parse_error("p 1 0\nbogus\nr 0\n", "unknown line kind", 2);
  expect_parse_error("p 2 1\ne 0 0 1\ne 0 0 1\nr 0 0\nr 1 0\n", "duplicate edge id", 3);
  expect_parse_error("e 0 0 1\n", "e line before p", 1);
  expect_parse_error("p 2 1\ne 0 0 1\nr 0 0\n", "expected 2 r lines", 4);
  // edge 0 listed in the rotation of a vertex it does not touch
  expect_parse_error("p 3 1\ne 0 0 1\nr 0 0\nr 1 0\nr 2 0\n", "not a permutation", 5);
  // edge 0 missing from vertex 1's rotation
  expect_parse_error("p 2 1\ne 0 0 1\nr 0 0\nr 1\n", "not a permutation", 5);
  // same incidence listed twice
  expect_parse_error("p 2 1\ne 0 0 1\nr 0 0 0\nr 1 0\n", "not a permutation", 5);
}

TEST_CASE("write then reparse is the identity") {
  PlaneDigraph g = load_fixture("fx_crown.pg");
  PlaneDigraph h = parse_plane_graph(write_plane_graph(g));
  CHECK(h.n() == g.n());
  CHECK(h.m() == g.m());
  for (EdgeId e = 0; e < g.m(); ++e) {
    CHECK(h.tail(e) == g.tail(e));
    CHECK(h.head(e) == g.head(e));
  }
  for (Vertex v = 0; v < g.n(); ++v) CHECK(h.rotation(v) == g.rotation(v));
}

TEST_CASE("face extraction and the Euler identity") {
  CHECK(faces(load_fixture("fx_d.pg")).count() == 2);
  CHECK(faces(load_fixture("fx_t.pg")).count() == 2);
  CHECK(faces(pr_test::make_path(5)).count() == 1);
  CHECK(faces(load_fixture("fx_crown.pg")).count() == 4);
  CHECK(faces(load_fixture("fx_c1.pg")).count() == 3);
}

TEST_CASE("every dart lies on exactly one face walk") {
  PlaneDigraph g = load_fixture("fx_crown.pg");
  FaceSet fs = faces(g);
  std::vector<int> hits(g.dart_count(), 0);
  for (const auto& w : fs.walk)
    for (Dart d : w) ++hits[d];
  for (Dart d = 0; d < g.dart_count(); ++d) {
    CHECK(hits[d] == 1);
    CHECK(fs.face_of[d] != kNoFace);
  }
}

TEST_CASE("faces reject disconnected input") {
  // two separate edges
  PlaneDigraph g = parse_plane_graph(
      "p 4 2\ne 0 0 1\ne 1 2 3\nr 0 0\nr 1 0\nr 2 1\nr 3 1\n");
  CHECK_THROWS_WITH_AS(faces(g), doctest::Contains("disconnected"), GraphError);
}

TEST_CASE("corner classification on the diamond") {
  PlaneDigraph g = load_fixture("fx_d.pg");
  FaceSet fs = faces(g);
  FaceCorners fc = corner_classification(fs, g);
  for (FaceId f = 0; f < fs.count(); ++f) CHECK(fc.alternation[f] == 2);
}

TEST_CASE("a consistently oriented cycle has alternation 0") {
  PlaneDigraph g = pr_test::make_cycle(4);
  FaceSet fs = faces(g);
  FaceCorners fc = corner_classification(fs, g);
  REQUIRE(fs.count() == 2);
  CHECK(fc.alternation[0] == 0);
  CHECK(fc.alternation[1] == 0);
}

TEST_CASE("crown hexagon face alternates six times") {
  PlaneDigraph g = load_fixture("fx_crown.pg");
  FaceSet fs = faces(g);
  FaceCorners fc = corner_classification(fs, g);
  std::multiset<int> alts;
  int corner_total = 0;
  for (FaceId f = 0; f < fs.count(); ++f) {
    alts.insert(fc.alternation[f]);
    corner_total += static_cast<int>(fc.corners[f].size());
  }
  CHECK(alts == std::multiset<int>({2, 2, 2, 6}));
  // a vertex of degree k owns k corners in total
  CHECK(corner_total == 2 * g.m());
}

TEST_CASE("tree-cotree on the diamond") {
  PlaneDigraph g = load_fixture("fx_d.pg");
  FaceSet fs = faces(g);
  TreeCotree tc = tree_cotree(g, fs, 0);
  CHECK(tc.tree_size() == 3);
  CHECK(tc.cotree_edges.size() == 1);
  CHECK(cotree_spans_dual(tc, fs.count()));
  for (Vertex v = 1; v < g.n(); ++v) {
    CHECK(tc.parent[v] != kNoVertex);
    CHECK(g.head(tc.parent_edge[v]) == v);  // tree edges point away from s
  }
}

TEST_CASE("tree-cotree on a path uses every edge") {
  PlaneDigraph g = pr_test::make_path(5);
  TreeCotree tc = tree_cotree(g, 0);
  CHECK(tc.tree_size() == 4);
  CHECK(tc.cotree_edges.empty());
}

TEST_CASE("tree-cotree rejects graphs that are not single-source-spanning") {
  PlaneDigraph g = load_fixture("fx_io.pg");
  CHECK_THROWS_WITH_AS(tree_cotree(g, 0), doctest::Contains("not single-source-spanning"),
                       GraphError);
}

TEST_CASE("cotree spans the dual on larger fixtures") {
  for (const char* name : {"fx_t.pg", "fx_crown.pg"}) {
    PlaneDigraph g = load_fixture(name);
    FaceSet fs = faces(g);
    TreeCotree tc = tree_cotree(g, fs, 0);
    CHECK(cotree_spans_dual(tc, fs.count()));
  }
}

TEST_CASE("contracting a two-cycle removes both edges") {
  PlaneDigraph g = parse_plane_graph("p 2 2\ne 0 0 1\ne 1 1 0\nr 0 0 1\nr 1 0 1\n");
  ContractionResult r = contract_connected_subgraph(g, {0, 1});
  CHECK(r.graph.n() == 1);
  CHECK(r.graph.m() == 0);
  CHECK(r.vertex_map[0] == r.vertex_map[1]);
}

TEST_CASE("contracting a triangle inside the bridged-cycles fixture") {
  PlaneDigraph g = load_fixture("fx_c1.pg");
  ContractionResult r = contract_connected_subgraph(g, {0, 1, 2});
  CHECK(r.graph.n() == 4);
  CHECK(r.graph.m() == 4);
  CHECK(faces(r.graph).count() == 2 - r.graph.n() + r.graph.m());
  // the bridge survives with its tail at the merged vertex
  EdgeId bridge = r.edge_map[6];
  REQUIRE(bridge != kNoEdge);
  CHECK(r.graph.tail(bridge) == r.vertex_map[2]);
  CHECK(r.graph.head(bridge) == r.vertex_map[3]);
  CHECK(r.edge_origin[bridge] == 6);
}

TEST_CASE("contracting everything leaves one bare vertex") {
  PlaneDigraph g = load_fixture("fx_d.pg");
  ContractionResult r = contract_connected_subgraph(g, {0, 1, 2, 3});
  CHECK(r.graph.n() == 1);
  CHECK(r.graph.m() == 0);
}

TEST_CASE("contraction of a disconnected class is rejected") {
  PlaneDigraph g = load_fixture("fx_d.pg");
  CHECK_THROWS_WITH_AS(contract_connected_subgraph(g, {1, 2}),
                       doctest::Contains("connected"), GraphError);
}

TEST_CASE("contraction preserves the Euler identity on the crown") {
  PlaneDigraph g = load_fixture("fx_crown.pg");
  ContractionResult r = contract_connected_subgraph(g, {0, 1, 3});
  CHECK(faces(r.graph).count() == 2 - r.graph.n() + r.graph.m());
}

TEST_CASE("self-loops are rejected at build") {
  std::vector<std::vector<Dart>> rot(1);
  rot[0] = {0, 1};
  CHECK_THROWS_AS(PlaneDigraph::build(1, {0}, {0}, rot), GraphError);
}
