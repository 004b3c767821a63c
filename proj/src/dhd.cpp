#include "geolayer/dhd.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <map>

namespace geolayer {

HeatGraph HeatGraph::from_graph(const Graph& g) {
  HeatGraph hg;
  hg.n = g.vertex_count;
  hg.adj.assign(static_cast<size_t>(hg.n), {});
  hg.label.resize(static_cast<size_t>(hg.n));
  for (VertexId v = 0; v < g.vertex_count; ++v) hg.label[static_cast<size_t>(v)] = v;
  for (const Edge& e : g.edges) {
    if (e.u == e.v) continue;  // self loops carry no heat
    hg.adj[static_cast<size_t>(e.u)].emplace_back(e.v, e.weight);
    hg.adj[static_cast<size_t>(e.v)].emplace_back(e.u, e.weight);
  }
  return hg;
}

HeatGraph HeatGraph::induced(const Graph& g, const std::vector<VertexId>& verts) {
  HeatGraph hg;
  hg.n = static_cast<int>(verts.size());
  hg.adj.assign(verts.size(), {});
  hg.label = verts;
  std::map<VertexId, int> index;
  for (int i = 0; i < hg.n; ++i) index[verts[static_cast<size_t>(i)]] = i;
  for (const Edge& e : g.edges) {
    if (e.u == e.v) continue;
    auto iu = index.find(e.u);
    auto iv = index.find(e.v);
    if (iu == index.end() || iv == index.end()) continue;
    hg.adj[static_cast<size_t>(iu->second)].emplace_back(iv->second, e.weight);
    hg.adj[static_cast<size_t>(iv->second)].emplace_back(iu->second, e.weight);
  }
  return hg;
}

int HeatGraph::local_index(VertexId v) const {
  for (int i = 0; i < n; ++i) {
    if (label[static_cast<size_t>(i)] == v) return i;
  }
  return -1;
}

SourceState make_sources(const HeatGraph& hg, const std::vector<int>& source_vertices,
                         const DhdParams& params) {
  SourceState s;
  s.sources = source_vertices;
  std::sort(s.sources.begin(), s.sources.end());
  s.q0.assign(static_cast<size_t>(hg.n), 0.0);
  s.q.assign(static_cast<size_t>(hg.n), 0.0);
  s.pi = std::log(2.0) / params.t_half;
  s.delta_q = params.delta_q;
  if (!s.sources.empty()) {
    const double q0 = 1.0 / static_cast<double>(s.sources.size());
    for (int v : s.sources) {
      s.q0[static_cast<size_t>(v)] = q0;
      s.q[static_cast<size_t>(v)] = q0;
    }
  }
  return s;
}

void source_step(SourceState& s, int step_k, const std::vector<double>& access_counts) {
  const double decay = std::exp(-s.pi * static_cast<double>(step_k));
  std::fill(s.q.begin(), s.q.end(), 0.0);
  for (int v : s.sources) {
    double acc = access_counts.empty() ? 0.0 : access_counts[static_cast<size_t>(v)];
    s.q[static_cast<size_t>(v)] = s.q0[static_cast<size_t>(v)] * decay + s.delta_q * acc;
  }
}

namespace {

// |N^out_u| at the current step: neighbors with strictly lower heat.
std::vector<int> lower_neighbor_counts(const HeatGraph& hg, const HeatState& state) {
  std::vector<int> counts(static_cast<size_t>(hg.n), 0);
  for (int u = 0; u < hg.n; ++u) {
    int c = 0;
    for (const auto& [w, a] : hg.adj[static_cast<size_t>(u)]) {
      if (state.heat[static_cast<size_t>(w)] < state.heat[static_cast<size_t>(u)]) ++c;
    }
    counts[static_cast<size_t>(u)] = c;
  }
  return counts;
}

double edge_weight(const HeatGraph& hg, int u, int v) {
  for (const auto& [w, a] : hg.adj[static_cast<size_t>(u)]) {
    if (w == v) return a;
  }
  throw DhdError("edge (" + std::to_string(u) + "," + std::to_string(v) + ") not present");
}

}  // namespace

double edge_transfer(const HeatGraph& hg, int u, int v, const HeatState& state,
                     const DhdParams& params) {
  const double a = edge_weight(hg, u, v);
  const double diff = state.heat[static_cast<size_t>(u)] - state.heat[static_cast<size_t>(v)];
  if (diff <= 0.0) return 0.0;
  int lower = 0;
  for (const auto& [w, aw] : hg.adj[static_cast<size_t>(u)]) {
    if (state.heat[static_cast<size_t>(w)] < state.heat[static_cast<size_t>(u)]) ++lower;
  }
  if (lower == 0) return 0.0;
  return params.alpha * a / static_cast<double>(lower) * diff;
}

HeatState vertex_step(const HeatGraph& hg, const HeatState& state,
                      const DhdParams& params) {
  params.validate();
  const std::vector<int> lower = lower_neighbor_counts(hg, state);
  std::vector<double> net(static_cast<size_t>(hg.n), 0.0);
  // each transfer is computed once and applied antisymmetrically, so the
  // sourceless total obeys sum H' = (1-gamma) sum H exactly
  for (int u = 0; u < hg.n; ++u) {
    const double hu = state.heat[static_cast<size_t>(u)];
    for (const auto& [v, a] : hg.adj[static_cast<size_t>(u)]) {
      if (v <= u) continue;  // visit each undirected edge once
      const double hv = state.heat[static_cast<size_t>(v)];
      if (hu > hv && lower[static_cast<size_t>(u)] > 0) {
        double t = params.alpha * a / static_cast<double>(lower[static_cast<size_t>(u)]) *
                   (hu - hv);
        net[static_cast<size_t>(u)] -= t;
        net[static_cast<size_t>(v)] += t;
      } else if (hv > hu && lower[static_cast<size_t>(v)] > 0) {
        double t = params.alpha * a / static_cast<double>(lower[static_cast<size_t>(v)]) *
                   (hv - hu);
        net[static_cast<size_t>(v)] -= t;
        net[static_cast<size_t>(u)] += t;
      }
    }
  }
  HeatState next;
  next.step = state.step + 1;
  next.heat.resize(static_cast<size_t>(hg.n));
  for (int v = 0; v < hg.n; ++v) {
    next.heat[static_cast<size_t>(v)] =
        (1.0 - params.gamma) * (state.heat[static_cast<size_t>(v)] + net[static_cast<size_t>(v)]);
  }
  return next;
}

Eigen::SparseMatrix<double> directional_laplacian(const HeatGraph& hg,
                                                  const HeatState& state) {
  const std::vector<int> lower = lower_neighbor_counts(hg, state);
  std::vector<Eigen::Triplet<double>> trips;
  std::vector<double> diag(static_cast<size_t>(hg.n), 0.0);
  for (int u = 0; u < hg.n; ++u) {
    const double hu = state.heat[static_cast<size_t>(u)];
    for (const auto& [v, a] : hg.adj[static_cast<size_t>(u)]) {
      if (v <= u) continue;
      const double hv = state.heat[static_cast<size_t>(v)];
      double kappa = 0.0;
      int sender = -1, receiver = -1;
      if (hu > hv && lower[static_cast<size_t>(u)] > 0) {
        kappa = a / static_cast<double>(lower[static_cast<size_t>(u)]);
        sender = u;
        receiver = v;
      } else if (hv > hu && lower[static_cast<size_t>(v)] > 0) {
        kappa = a / static_cast<double>(lower[static_cast<size_t>(v)]);
        sender = v;
        receiver = u;
      }
      if (sender < 0) continue;
      // the flow kappa (H_s - H_r) enters the receiver row and leaves the
      // sender row; both rows keep a zero sum
      trips.emplace_back(receiver, sender, kappa);
      diag[static_cast<size_t>(receiver)] -= kappa;
      trips.emplace_back(sender, receiver, kappa);
      diag[static_cast<size_t>(sender)] -= kappa;
    }
  }
  for (int v = 0; v < hg.n; ++v) {
    if (diag[static_cast<size_t>(v)] != 0.0) {
      trips.emplace_back(v, v, diag[static_cast<size_t>(v)]);
    }
  }
  Eigen::SparseMatrix<double> l(hg.n, hg.n);
  l.setFromTriplets(trips.begin(), trips.end());
  return l;
}

HeatState system_step(const HeatGraph& hg, const HeatState& state,
                      const std::vector<double>& q, const DhdParams& params) {
  params.validate();
  Eigen::SparseMatrix<double> l = directional_laplacian(hg, state);
  Eigen::Map<const Eigen::VectorXd> h(state.heat.data(), hg.n);
  Eigen::VectorXd next = (1.0 - params.gamma) * (h + params.alpha * (l * h));
  if (!q.empty()) {
    Eigen::Map<const Eigen::VectorXd> qv(q.data(), hg.n);
    next += params.beta * qv;
  }
  HeatState out;
  out.step = state.step + 1;
  out.heat.assign(next.data(), next.data() + hg.n);
  return out;
}

SteadyResult run_to_steady(const HeatGraph& hg, HeatState init,
                           const std::vector<double>& q, const DhdParams& params) {
  SteadyResult res;
  res.state = std::move(init);
  res.residual = std::numeric_limits<double>::infinity();
  for (int it = 0; it < params.max_iters; ++it) {
    HeatState next = system_step(hg, res.state, q, params);
    double r = 0.0;
    for (int v = 0; v < hg.n; ++v) {
      r = std::max(r, std::abs(next.heat[static_cast<size_t>(v)] -
                               res.state.heat[static_cast<size_t>(v)]));
    }
    res.state = std::move(next);
    res.residual = r;
    res.iterations = it + 1;
    if (r < params.residual_tol) {
      res.converged = true;
      break;
    }
  }
  return res;
}

ConvergenceReport check_convergence_condition(const Eigen::SparseMatrix<double>& l_dir,
                                              const DhdParams& params) {
  ConvergenceReport rep;
  std::vector<double> row_sum(static_cast<size_t>(l_dir.rows()), 0.0);
  for (int k = 0; k < l_dir.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(l_dir, k); it; ++it) {
      row_sum[static_cast<size_t>(it.row())] += std::abs(it.value());
    }
  }
  rep.laplacian_norm = row_sum.empty() ? 0.0
                                       : *std::max_element(row_sum.begin(), row_sum.end());
  if (rep.laplacian_norm == 0.0) {
    rep.ok = true;
    rep.alpha_bound = std::numeric_limits<double>::infinity();
    rep.margin = std::numeric_limits<double>::infinity();
    return rep;
  }
  rep.alpha_bound = params.gamma / ((1.0 - params.gamma) * rep.laplacian_norm);
  rep.margin = rep.alpha_bound - params.alpha;
  rep.ok = params.alpha < rep.alpha_bound;
  return rep;
}

std::vector<double> closed_form_steady(const Eigen::SparseMatrix<double>& l_dir,
                                       const std::vector<double>& q,
                                       const DhdParams& params) {
  params.validate();
  const int n = static_cast<int>(l_dir.rows());
  Eigen::SparseMatrix<double> system = -params.alpha * (1.0 - params.gamma) * l_dir;
  for (int v = 0; v < n; ++v) system.coeffRef(v, v) += params.gamma;
  system.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> solver;
  solver.analyzePattern(system);
  solver.factorize(system);
  if (solver.info() != Eigen::Success) {
    throw DhdError("closed_form_steady: singular system");
  }
  Eigen::Map<const Eigen::VectorXd> qv(q.data(), n);
  Eigen::VectorXd h = solver.solve(params.beta * qv);
  if (solver.info() != Eigen::Success) {
    throw DhdError("closed_form_steady: solve failed");
  }
  return std::vector<double>(h.data(), h.data() + n);
}

HotSubgraph extract_hot_subgraph(const HeatGraph& hg, const HeatState& state,
                                 double theta) {
  HotSubgraph out;
  std::vector<char> hot(static_cast<size_t>(hg.n), 0);
  for (int v = 0; v < hg.n; ++v) {
    const double h = state.heat[static_cast<size_t>(v)];
    if (h > 0.0 && h >= theta) {
      hot[static_cast<size_t>(v)] = 1;
      out.vertices.push_back(v);
    }
  }
  for (int u = 0; u < hg.n; ++u) {
    if (!hot[static_cast<size_t>(u)]) continue;
    for (const auto& [v, a] : hg.adj[static_cast<size_t>(u)]) {
      if (v > u && hot[static_cast<size_t>(v)]) out.edges.emplace_back(u, v);
    }
  }
  return out;
}

}  // namespace geolayer
