#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>
#include <set>

#include "geolayer/graph.hpp"
#include "support.hpp"

using namespace geolayer;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name, const std::string& content)
      : path("/tmp/geolayer_test_" + name) {
    std::ofstream f(path);
    f << content;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_SUITE("graph") {

TEST_CASE("load_graph derives six non-empty partitions") {
  // 18 vertices over six DCs, three per DC, with cross edges (1,4) and (4,2)
  std::string edges;
  for (int d = 0; d < 6; ++d) {
    edges += std::to_string(3 * d) + " " + std::to_string(3 * d + 1) + "\n";
    edges += std::to_string(3 * d + 1) + " " + std::to_string(3 * d + 2) + "\n";
  }
  edges += "1 4\n4 2\n";
  for (int d = 1; d < 6; ++d) {
    edges += std::to_string(3 * d - 1) + " " + std::to_string(3 * d) + "\n";
  }
  std::string parts;
  for (int v = 0; v < 18; ++v) {
    parts += std::to_string(v) + " " + std::to_string(v / 3) + "\n";
  }
  TempFile ef("fig3.edges", edges);
  TempFile pf("fig3.part", parts);
  auto [g, part] = load_graph(ef.path, pf.path);
  CHECK(g.vertex_count == 18);
  CHECK(part.dc_count == 6);
  for (DcId d = 0; d < 6; ++d) {
    CHECK(part.vertices_of[static_cast<size_t>(d)].size() == 3);
  }
  // the cross edges (1,4) and (4,2) land in E^B
  std::set<std::pair<VertexId, VertexId>> cross;
  for (EdgeId e : part.cross_edges) {
    cross.insert({g.edges[static_cast<size_t>(e)].u, g.edges[static_cast<size_t>(e)].v});
  }
  CHECK(cross.count({1, 4}) == 1);
  CHECK(cross.count({4, 2}) == 1);
}

TEST_CASE("single-DC assignment has no boundary") {
  std::mt19937_64 rng(3);
  Graph g = testsup::random_connected_graph(10, 5, rng);
  std::vector<DcId> assign(10, 0);
  BoundaryInfo b = extract_boundary(g, assign, 1);
  CHECK(b.cross_edges.empty());
  CHECK(b.boundary_of[0].empty());
}

TEST_CASE("path split yields the middle edge as boundary") {
  Graph g;
  g.vertex_count = 4;
  g.edges = {{0, 1, 1.0, false}, {1, 2, 1.0, false}, {2, 3, 1.0, false}};
  g.rebuild_adjacency();
  std::vector<DcId> assign{0, 0, 1, 1};
  BoundaryInfo b = extract_boundary(g, assign, 2);
  REQUIRE(b.cross_edges.size() == 1);
  CHECK(g.edges[static_cast<size_t>(b.cross_edges[0])].u == 1);
  CHECK(g.edges[static_cast<size_t>(b.cross_edges[0])].v == 2);
  CHECK(b.boundary_of[0] == std::vector<VertexId>{1});
  CHECK(b.boundary_of[1] == std::vector<VertexId>{2});
}

TEST_CASE("extract_boundary matches a naive edge scan") {
  std::mt19937_64 rng(17);
  Graph g = testsup::random_connected_graph(50, 40, rng);
  Partitioning part = testsup::random_partition(g, 3, rng);

  // independent O(|E|) scan
  std::set<EdgeId> naive_cross;
  std::set<VertexId> naive_boundary;
  for (EdgeId e = 0; e < static_cast<EdgeId>(g.edges.size()); ++e) {
    const Edge& ed = g.edges[static_cast<size_t>(e)];
    if (part.assignment[static_cast<size_t>(ed.u)] !=
        part.assignment[static_cast<size_t>(ed.v)]) {
      naive_cross.insert(e);
      naive_boundary.insert(ed.u);
      naive_boundary.insert(ed.v);
    }
  }
  BoundaryInfo b = extract_boundary(g, part.assignment, 3);
  CHECK(std::set<EdgeId>(b.cross_edges.begin(), b.cross_edges.end()) == naive_cross);
  std::set<VertexId> got;
  for (const auto& bd : b.boundary_of) got.insert(bd.begin(), bd.end());
  CHECK(got == naive_boundary);
}

TEST_CASE("extract_boundary is pure") {
  std::mt19937_64 rng(5);
  Graph g = testsup::random_connected_graph(30, 20, rng);
  Partitioning part = testsup::random_partition(g, 4, rng);
  BoundaryInfo a = extract_boundary(g, part.assignment, 4);
  BoundaryInfo b = extract_boundary(g, part.assignment, 4);
  CHECK(a.cross_edges == b.cross_edges);
  CHECK(a.boundary_of == b.boundary_of);
}

TEST_CASE("partition sets are disjoint and cover") {
  std::mt19937_64 rng(11);
  Graph g = testsup::random_connected_graph(40, 25, rng);
  Partitioning part = testsup::random_partition(g, 5, rng);
  size_t vtotal = 0;
  for (const auto& vs : part.vertices_of) vtotal += vs.size();
  CHECK(vtotal == static_cast<size_t>(g.vertex_count));
  size_t etotal = part.cross_edges.size();
  for (const auto& es : part.edges_of) etotal += es.size();
  CHECK(etotal == g.edges.size());
  // every boundary vertex has a neighbor outside its DC
  for (DcId d = 0; d < part.dc_count; ++d) {
    for (VertexId v : part.boundary_of[static_cast<size_t>(d)]) {
      bool outside = false;
      for (const auto& [w, e] : g.adj[static_cast<size_t>(v)]) {
        if (part.dc_of(w) != d) outside = true;
      }
      CHECK(outside);
    }
  }
}

TEST_CASE("validate_pattern accepts paths and rejects disconnected items") {
  Graph g;
  g.vertex_count = 6;
  g.edges = {{0, 1, 1.0, false}, {1, 2, 1.0, false}, {2, 3, 1.0, false},
             {3, 4, 1.0, false}, {4, 5, 1.0, false}};
  g.rebuild_adjacency();
  Partitioning part;
  part.dc_count = 1;
  part.assignment.assign(6, 0);
  part.derive(g);
  ItemCatalog items = build_items(g, part, 100, 50);

  Pattern single;
  single.id = 0;
  single.items = {items.vertex_item(2)};
  CHECK(validate_pattern(single, g, items).ok);

  Pattern path;
  path.id = 1;
  path.items = {items.vertex_item(0), items.edge_item(0), items.vertex_item(1)};
  CHECK(validate_pattern(path, g, items).ok);

  Pattern broken;
  broken.id = 2;
  broken.items = {items.vertex_item(0), items.vertex_item(5)};
  PatternReport rep = validate_pattern(broken, g, items);
  CHECK_FALSE(rep.ok);
  CHECK(!rep.message.empty());
}

TEST_CASE("load_graph reports malformed and inconsistent inputs") {
  TempFile good_part("p.part", "0 0\n1 1\n");
  TempFile bad_edges("bad.edges", "0 1\nnot an edge\n");
  CHECK_THROWS_WITH_AS(load_graph(bad_edges.path, good_part.path),
                       doctest::Contains(":2"), GraphError);

  TempFile disc_edges("disc.edges", "0 1\n2 3\n");
  TempFile disc_part("disc.part", "0 0\n1 0\n2 1\n3 1\n");
  CHECK_THROWS_AS(load_graph(disc_edges.path, disc_part.path), GraphError);

  TempFile edges2("e2.edges", "0 1\n1 2\n");
  TempFile part2("p2.part", "0 0\n1 0\n");  // vertex 2 unassigned
  CHECK_THROWS_AS(load_graph(edges2.path, part2.path), GraphError);
}

TEST_CASE("edge items live at the smaller endpoint's DC") {
  Graph g;
  g.vertex_count = 4;
  g.edges = {{0, 1, 1.0, false}, {1, 2, 1.0, false}, {2, 3, 1.0, false}};
  g.rebuild_adjacency();
  Partitioning part;
  part.dc_count = 2;
  part.assignment = {0, 0, 1, 1};
  part.derive(g);
  ItemCatalog items = build_items(g, part, 100, 50);
  CHECK(items.at(items.edge_item(1)).home == 0);  // edge (1,2) lives with vertex 1
  CHECK(items.at(items.vertex_item(2)).home == 1);
  CHECK(items.at(items.edge_item(2)).home == 1);
}

}  // TEST_SUITE
