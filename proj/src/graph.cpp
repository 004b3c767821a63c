#include "geolayer/graph.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace geolayer {

void Graph::rebuild_adjacency() {
  adj.assign(static_cast<size_t>(vertex_count), {});
  for (EdgeId e = 0; e < static_cast<EdgeId>(edges.size()); ++e) {
    const Edge& ed = edges[static_cast<size_t>(e)];
    adj[static_cast<size_t>(ed.u)].emplace_back(ed.v, e);
    if (ed.u != ed.v) adj[static_cast<size_t>(ed.v)].emplace_back(ed.u, e);
  }
}

bool Graph::is_connected() const {
  if (vertex_count == 0) return true;
  std::vector<char> seen(static_cast<size_t>(vertex_count), 0);
  std::vector<VertexId> stack{0};
  seen[0] = 1;
  std::int32_t reached = 1;
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    for (const auto& [w, e] : adj[static_cast<size_t>(v)]) {
      if (!seen[static_cast<size_t>(w)]) {
        seen[static_cast<size_t>(w)] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  return reached == vertex_count;
}

EdgeId Graph::find_edge(VertexId a, VertexId b) const {
  for (const auto& [w, e] : adj.at(static_cast<size_t>(a))) {
    if (w == b) return e;
  }
  return -1;
}

void Partitioning::derive(const Graph& g) {
  vertices_of.assign(static_cast<size_t>(dc_count), {});
  edges_of.assign(static_cast<size_t>(dc_count), {});
  for (VertexId v = 0; v < g.vertex_count; ++v) {
    vertices_of[static_cast<size_t>(assignment[static_cast<size_t>(v)])].push_back(v);
  }
  BoundaryInfo b = extract_boundary(g, assignment, dc_count);
  boundary_of = std::move(b.boundary_of);
  cross_edges = std::move(b.cross_edges);
  for (EdgeId e = 0; e < static_cast<EdgeId>(g.edges.size()); ++e) {
    const Edge& ed = g.edges[static_cast<size_t>(e)];
    DcId du = assignment[static_cast<size_t>(ed.u)];
    DcId dv = assignment[static_cast<size_t>(ed.v)];
    if (du == dv) edges_of[static_cast<size_t>(du)].push_back(e);
  }
}

BoundaryInfo extract_boundary(const Graph& g, const std::vector<DcId>& assignment,
                              std::int32_t dc_count) {
  BoundaryInfo out;
  out.boundary_of.assign(static_cast<size_t>(dc_count), {});
  std::vector<char> is_boundary(static_cast<size_t>(g.vertex_count), 0);
  for (EdgeId e = 0; e < static_cast<EdgeId>(g.edges.size()); ++e) {
    const Edge& ed = g.edges[static_cast<size_t>(e)];
    DcId du = assignment.at(static_cast<size_t>(ed.u));
    DcId dv = assignment.at(static_cast<size_t>(ed.v));
    if (du != dv) {
      out.cross_edges.push_back(e);
      is_boundary[static_cast<size_t>(ed.u)] = 1;
      is_boundary[static_cast<size_t>(ed.v)] = 1;
    }
  }
  for (VertexId v = 0; v < g.vertex_count; ++v) {
    if (is_boundary[static_cast<size_t>(v)]) {
      out.boundary_of[static_cast<size_t>(assignment[static_cast<size_t>(v)])].push_back(v);
    }
  }
  return out;
}

namespace {

// Strips comments and whitespace; returns false for blank lines.
bool clean_line(std::string& line) {
  auto hash = line.find('#');
  if (hash != std::string::npos) line.erase(hash);
  auto end = line.find_last_not_of(" \t\r\n");
  if (end == std::string::npos) return false;
  line.erase(end + 1);
  return true;
}

}  // namespace

std::pair<Graph, Partitioning> load_graph(const std::string& edge_list_file,
                                          const std::string& partition_file) {
  std::ifstream pf(partition_file);
  if (!pf) throw GraphError("cannot open partition file: " + partition_file);
  std::vector<std::pair<VertexId, DcId>> raw_assign;
  VertexId max_vertex = -1;
  DcId max_dc = -1;
  std::string line;
  int lineno = 0;
  while (std::getline(pf, line)) {
    ++lineno;
    if (!clean_line(line)) continue;
    std::istringstream is(line);
    VertexId v;
    DcId d;
    if (!(is >> v >> d) || v < 0 || d < 0) {
      throw GraphError(partition_file + ":" + std::to_string(lineno) +
                       ": malformed partition line '" + line + "'");
    }
    raw_assign.emplace_back(v, d);
    max_vertex = std::max(max_vertex, v);
    max_dc = std::max(max_dc, d);
  }

  Graph g;
  g.vertex_count = max_vertex + 1;

  std::ifstream ef(edge_list_file);
  if (!ef) throw GraphError("cannot open edge list file: " + edge_list_file);
  lineno = 0;
  while (std::getline(ef, line)) {
    ++lineno;
    if (!clean_line(line)) continue;
    std::istringstream is(line);
    VertexId u, v;
    if (!(is >> u >> v) || u < 0 || v < 0) {
      throw GraphError(edge_list_file + ":" + std::to_string(lineno) +
                       ": malformed edge line '" + line + "'");
    }
    double w = 1.0;
    if (is >> w) {
      if (w < 0.0) {
        throw GraphError(edge_list_file + ":" + std::to_string(lineno) +
                         ": negative edge weight");
      }
    }
    g.edges.push_back(Edge{u, v, w, false});
    g.vertex_count = std::max(g.vertex_count, std::max(u, v) + 1);
  }
  g.rebuild_adjacency();

  Partitioning part;
  part.dc_count = max_dc + 1;
  part.assignment.assign(static_cast<size_t>(g.vertex_count), -1);
  for (const auto& [v, d] : raw_assign) {
    if (v >= g.vertex_count) {
      throw GraphError("partition file names vertex " + std::to_string(v) +
                       " absent from the edge list");
    }
    part.assignment[static_cast<size_t>(v)] = d;
  }
  for (VertexId v = 0; v < g.vertex_count; ++v) {
    if (part.assignment[static_cast<size_t>(v)] < 0) {
      throw GraphError("vertex " + std::to_string(v) + " has no DC assignment");
    }
  }
  if (!g.is_connected()) {
    throw GraphError("input graph is not connected");
  }
  part.derive(g);
  return {std::move(g), std::move(part)};
}

PatternReport validate_pattern(const Pattern& p, const Graph& g,
                               const ItemCatalog& items) {
  if (p.items.empty()) return {false, "pattern " + std::to_string(p.id) + " is empty"};

  std::vector<VertexId> verts;
  std::vector<EdgeId> edges;
  for (ItemId x : p.items) {
    const DataItem& it = items.at(x);
    if (it.kind == ItemKind::Vertex) {
      verts.push_back(static_cast<VertexId>(x));
    } else {
      edges.push_back(static_cast<EdgeId>(x - items.vertex_count));
    }
  }
  std::vector<char> in_pattern(static_cast<size_t>(g.vertex_count), 0);
  for (VertexId v : verts) in_pattern[static_cast<size_t>(v)] = 1;

  for (EdgeId e : edges) {
    const Edge& ed = g.edges.at(static_cast<size_t>(e));
    if (!in_pattern[static_cast<size_t>(ed.u)] || !in_pattern[static_cast<size_t>(ed.v)]) {
      return {false, "edge item (" + std::to_string(ed.u) + "," + std::to_string(ed.v) +
                         ") has an endpoint outside the pattern"};
    }
  }
  if (verts.empty()) return {false, "pattern has edges but no vertices"};

  // connectivity over the pattern's own edges
  std::map<VertexId, std::vector<VertexId>> padj;
  for (VertexId v : verts) padj[v];
  for (EdgeId e : edges) {
    const Edge& ed = g.edges[static_cast<size_t>(e)];
    padj[ed.u].push_back(ed.v);
    padj[ed.v].push_back(ed.u);
  }
  std::vector<VertexId> stack{verts.front()};
  std::map<VertexId, char> seen{{verts.front(), 1}};
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    for (VertexId w : padj[v]) {
      if (!seen.count(w)) {
        seen[w] = 1;
        stack.push_back(w);
      }
    }
  }
  for (VertexId v : verts) {
    if (!seen.count(v)) {
      return {false, "vertex item " + std::to_string(v) +
                         " is disconnected from the pattern's first vertex"};
    }
  }
  return {true, ""};
}

ItemCatalog build_items(const Graph& g, const Partitioning& part,
                        std::int64_t vertex_size_bytes, std::int64_t edge_size_bytes) {
  ItemCatalog cat;
  cat.vertex_count = g.vertex_count;
  cat.items.reserve(static_cast<size_t>(g.vertex_count) + g.edges.size());
  for (VertexId v = 0; v < g.vertex_count; ++v) {
    cat.items.push_back(DataItem{v, ItemKind::Vertex, vertex_size_bytes, -1, -1,
                                 part.dc_of(v)});
  }
  for (EdgeId e = 0; e < static_cast<EdgeId>(g.edges.size()); ++e) {
    const Edge& ed = g.edges[static_cast<size_t>(e)];
    VertexId lo = std::min(ed.u, ed.v);
    DcId home = part.dc_of(lo);
    cat.items.push_back(DataItem{cat.edge_item(e), ItemKind::Edge, edge_size_bytes,
                                 ed.u, ed.v, home});
  }
  return cat;
}

}  // namespace geolayer
