#include "geolayer/layered.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace geolayer {

void LatencyThresholds::validate() const {
  if (cuts.empty() || cuts.front() != 0.0) {
    throw LayeredError("thresholds must start at t_0 = 0");
  }
  for (size_t i = 1; i < cuts.size(); ++i) {
    if (!(cuts[i] > cuts[i - 1])) {
      throw LayeredError("thresholds must be strictly increasing");
    }
  }
}

LatencyThresholds LatencyThresholds::fixed_interval(double interval_s,
                                                    double max_latency_s) {
  if (interval_s <= 0.0) throw LayeredError("interval must be positive");
  LatencyThresholds t;
  int finite = static_cast<int>(std::floor(max_latency_s / interval_s)) + 1;
  for (int i = 0; i <= finite; ++i) {
    t.cuts.push_back(interval_s * static_cast<double>(i));
  }
  return t;
}

double assign_latency(const Graph& g, EdgeId e, const Partitioning& part,
                      const WanProfile& wan) {
  const Edge& ed = g.edges.at(static_cast<size_t>(e));
  DcId du = part.dc_of(ed.u);
  DcId dv = part.dc_of(ed.v);
  if (du == dv) {
    throw LayeredError("edge " + std::to_string(e) + " is not a cross-partition edge");
  }
  return std::max(wan.link(du, dv).rtt_s, wan.link(dv, du).rtt_s);
}

std::vector<LayerGraph> build_layers(const Graph& g, const Partitioning& part,
                                     const WanProfile& wan,
                                     const LatencyThresholds& thresholds) {
  thresholds.validate();
  const int h = thresholds.layer_count();
  std::vector<LayerGraph> layers(static_cast<size_t>(h));
  for (int i = 1; i <= h; ++i) layers[static_cast<size_t>(i - 1)].index = i;
  for (EdgeId e : part.cross_edges) {
    double lat = assign_latency(g, e, part, wan);
    int k = thresholds.layer_of(lat);
    layers[static_cast<size_t>(k - 1)].edges.push_back(e);
  }
  for (LayerGraph& lg : layers) {
    std::set<VertexId> verts;
    for (EdgeId e : lg.edges) {
      verts.insert(g.edges[static_cast<size_t>(e)].u);
      verts.insert(g.edges[static_cast<size_t>(e)].v);
    }
    lg.vertices.assign(verts.begin(), verts.end());
  }
  return layers;
}

namespace {

struct Dsu {
  std::vector<int> parent;
  explicit Dsu(int n) : parent(static_cast<size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int a) {
    while (parent[static_cast<size_t>(a)] != a) {
      parent[static_cast<size_t>(a)] = parent[static_cast<size_t>(parent[static_cast<size_t>(a)])];
      a = parent[static_cast<size_t>(a)];
    }
    return a;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a > b) std::swap(a, b);  // keep the smaller id as root for determinism
    parent[static_cast<size_t>(b)] = a;
    return true;
  }
};

}  // namespace

LayeredGraph build_layered_graph(const Graph& g, const Partitioning& part,
                                 const WanProfile& wan,
                                 const LatencyThresholds& thresholds) {
  LayeredGraph lg;
  lg.thresholds = thresholds;
  lg.dc_count = part.dc_count;
  lg.layers = build_layers(g, part, wan, thresholds);

  // hierarchy starts with one node per DC
  lg.parent.assign(static_cast<size_t>(part.dc_count), -1);
  lg.children.assign(static_cast<size_t>(part.dc_count), {});
  lg.dc_span.assign(static_cast<size_t>(part.dc_count), {});
  for (DcId d = 0; d < part.dc_count; ++d) lg.dc_span[static_cast<size_t>(d)] = {d};

  // vertex-level weakly connected components of the aggregated graph
  Dsu dsu(g.vertex_count);
  for (DcId d = 0; d < part.dc_count; ++d) {
    for (EdgeId e : part.edges_of[static_cast<size_t>(d)]) {
      dsu.unite(g.edges[static_cast<size_t>(e)].u, g.edges[static_cast<size_t>(e)].v);
    }
  }

  // owner hierarchy node of each component root; Layer_0 components are
  // DC-internal so their owner is the DC
  std::map<int, int> owner;
  for (VertexId v = 0; v < g.vertex_count; ++v) {
    int r = dsu.find(v);
    if (!owner.count(r)) owner[r] = part.dc_of(static_cast<VertexId>(r));
  }

  auto root_of = [&](int node) {
    while (lg.parent[static_cast<size_t>(node)] >= 0) node = lg.parent[static_cast<size_t>(node)];
    return node;
  };
  auto component_vertices = [&](int root) {
    std::vector<VertexId> out;
    for (VertexId v = 0; v < g.vertex_count; ++v) {
      if (dsu.find(v) == root) out.push_back(v);
    }
    return out;
  };

  for (const LayerGraph& layer : lg.layers) {
    // group this layer's edges into meta-components over current WCCs
    Dsu meta(g.vertex_count);
    for (EdgeId e : layer.edges) {
      int ru = dsu.find(g.edges[static_cast<size_t>(e)].u);
      int rv = dsu.find(g.edges[static_cast<size_t>(e)].v);
      meta.unite(ru, rv);
    }
    std::map<int, std::vector<EdgeId>> groups;  // meta root -> layer edges
    for (EdgeId e : layer.edges) {
      int ru = dsu.find(g.edges[static_cast<size_t>(e)].u);
      groups[meta.find(ru)].push_back(e);
    }
    // deterministic order: by smallest contained edge id
    std::vector<std::pair<EdgeId, int>> order;
    for (const auto& [root, edges] : groups) {
      order.emplace_back(*std::min_element(edges.begin(), edges.end()), root);
    }
    std::sort(order.begin(), order.end());

    for (const auto& [min_edge, meta_root] : order) {
      const std::vector<EdgeId>& edges = groups[meta_root];
      std::set<int> spanned;  // current WCC roots touched by the group
      for (EdgeId e : edges) {
        spanned.insert(dsu.find(g.edges[static_cast<size_t>(e)].u));
        spanned.insert(dsu.find(g.edges[static_cast<size_t>(e)].v));
      }
      if (spanned.size() < 2) {
        // merges nothing new: the edges attach to whatever already owns
        // the component they fall into
        int own = owner.at(*spanned.begin());
        if (!lg.is_dc_node(own)) {
          BridgeSubgraph& bs = lg.subgraphs[static_cast<size_t>(lg.bs_of_node(own))];
          bs.absorbed_edges.insert(bs.absorbed_edges.end(), edges.begin(), edges.end());
        }
        continue;
      }

      BridgeSubgraph bs;
      bs.id = static_cast<int>(lg.subgraphs.size());
      bs.layer = layer.index;
      bs.edges = edges;
      std::sort(bs.edges.begin(), bs.edges.end());
      std::set<VertexId> verts;
      for (EdgeId e : bs.edges) {
        verts.insert(g.edges[static_cast<size_t>(e)].u);
        verts.insert(g.edges[static_cast<size_t>(e)].v);
      }
      bs.vertices.assign(verts.begin(), verts.end());
      for (int comp_root : spanned) {
        bs.merged_components.push_back(component_vertices(comp_root));
      }

      int node = static_cast<int>(lg.parent.size());
      lg.parent.push_back(-1);
      lg.children.push_back({});
      lg.dc_span.push_back({});

      Cluster cluster;
      cluster.linking_bs = bs.id;
      std::set<int> members;
      for (int comp_root : spanned) members.insert(root_of(owner.at(comp_root)));
      cluster.members.assign(members.begin(), members.end());
      std::set<DcId> span;
      for (int m : cluster.members) {
        lg.parent[static_cast<size_t>(m)] = node;
        lg.children[static_cast<size_t>(node)].push_back(m);
        for (DcId d : lg.dc_span[static_cast<size_t>(m)]) span.insert(d);
      }
      lg.dc_span[static_cast<size_t>(node)].assign(span.begin(), span.end());

      // merge the component roots and point the merged root at this subgraph
      int acc = *spanned.begin();
      for (int comp_root : spanned) {
        dsu.unite(acc, comp_root);
        acc = dsu.find(acc);
      }
      for (EdgeId e : bs.edges) {
        dsu.unite(g.edges[static_cast<size_t>(e)].u, g.edges[static_cast<size_t>(e)].v);
      }
      owner[dsu.find(acc)] = node;

      lg.subgraphs.push_back(std::move(bs));
      lg.clusters.push_back(std::move(cluster));
    }
  }

  for (int n = 0; n < lg.node_count(); ++n) {
    if (lg.parent[static_cast<size_t>(n)] < 0) lg.roots.push_back(n);
  }
  std::set<int> comps;
  for (VertexId v = 0; v < g.vertex_count; ++v) comps.insert(dsu.find(v));
  lg.top_component_count = static_cast<int>(comps.size());
  return lg;
}

std::vector<int> LayeredGraph::chain_of_dc(DcId d) const {
  std::vector<int> chain;
  int node = node_of_dc(d);
  while (node >= 0) {
    chain.push_back(node);
    node = parent[static_cast<size_t>(node)];
  }
  return chain;
}

std::string dump_layered_graph(const LayeredGraph& lg, const Graph& g) {
  std::ostringstream os;
  for (const LayerGraph& layer : lg.layers) {
    os << "layer " << layer.index << " edges " << layer.edges.size() << "\n";
    for (EdgeId e : layer.edges) {
      const Edge& ed = g.edges[static_cast<size_t>(e)];
      os << "  e" << e << " " << ed.u << "-" << ed.v << "\n";
    }
  }
  for (size_t i = 0; i < lg.subgraphs.size(); ++i) {
    const BridgeSubgraph& bs = lg.subgraphs[i];
    os << "bs " << bs.id << " layer " << bs.layer << " edges";
    for (EdgeId e : bs.edges) os << " e" << e;
    os << " cluster";
    for (int m : lg.clusters[i].members) os << " n" << m;
    os << "\n";
  }
  os << "hierarchy";
  for (int n = 0; n < lg.node_count(); ++n) {
    os << " " << n << "->" << lg.parent[static_cast<size_t>(n)];
  }
  os << "\n";
  return os.str();
}

}  // namespace geolayer
