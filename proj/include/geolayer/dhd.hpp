// Directed heat diffusion: ReLU-gated transfers along undirected edges,
// global decay, source dynamics, the matrix-form step, steady-state solving
// and hot-subgraph extraction.
#pragma once

#include <Eigen/Sparse>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "geolayer/graph.hpp"

namespace geolayer {

class DhdError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DhdParams {
  double alpha = 0.5;        // diffusivity
  double gamma = 0.1;        // decay, in (0, 1)
  double beta = 0.3;         // source coupling
  int max_iters = 200;
  double residual_tol = 1e-8;
  double t_half = 10.0;      // source half-life in steps
  double delta_q = 0.1;      // heat added per served access

  void validate() const {
    if (!(gamma > 0.0 && gamma < 1.0)) throw DhdError("gamma must be in (0,1)");
    if (!(alpha > 0.0)) throw DhdError("alpha must be positive");
    if (beta < 0.0) throw DhdError("beta must be non-negative");
  }
};

// Compact diffusion substrate: any vertex set with weighted undirected
// adjacency. `label` maps local indices back to graph vertex ids.
struct HeatGraph {
  int n = 0;
  std::vector<std::vector<std::pair<int, double>>> adj;  // (neighbor, A_uv)
  std::vector<VertexId> label;

  static HeatGraph from_graph(const Graph& g);
  static HeatGraph induced(const Graph& g, const std::vector<VertexId>& verts);
  int local_index(VertexId v) const;  // -1 when absent
};

struct HeatState {
  std::vector<double> heat;
  int step = 0;
};

struct SourceState {
  std::vector<int> sources;      // local indices of O
  std::vector<double> q0;        // per-vertex initial heat, 0 outside O
  std::vector<double> q;         // current Q_v
  double pi = 0.0;               // ln 2 / T_hl
  double delta_q = 0.1;
};

SourceState make_sources(const HeatGraph& hg, const std::vector<int>& source_vertices,
                         const DhdParams& params);

// Q_v^{k+1} = Q_v^0 e^{-pi k} + dQ * accesses(v) for v in O, else 0.
void source_step(SourceState& s, int step_k, const std::vector<double>& access_counts);

// Heat moved from u to v in one step; zero when u has no lower-heat neighbor.
double edge_transfer(const HeatGraph& hg, int u, int v, const HeatState& state,
                     const DhdParams& params);

// Per-vertex simultaneous update (sourceless form).
HeatState vertex_step(const HeatGraph& hg, const HeatState& state,
                      const DhdParams& params);

// Directional Laplace matrix for the current heat ordering. Row sums vanish,
// so a uniform heat field only decays.
Eigen::SparseMatrix<double> directional_laplacian(const HeatGraph& hg,
                                                  const HeatState& state);

// Matrix-form update H' = (1-gamma)(H + alpha L H) + beta Q.
HeatState system_step(const HeatGraph& hg, const HeatState& state,
                      const std::vector<double>& q, const DhdParams& params);

struct SteadyResult {
  HeatState state;
  bool converged = false;
  double residual = 0.0;
  int iterations = 0;
};

// Iterates system_step with the sources held fixed until the sup-norm
// residual drops under tolerance or max_iters hits.
SteadyResult run_to_steady(const HeatGraph& hg, HeatState init,
                           const std::vector<double>& q, const DhdParams& params);

struct ConvergenceReport {
  bool ok = false;
  double laplacian_norm = 0.0;   // induced infinity norm
  double alpha_bound = 0.0;      // gamma / ((1-gamma) * norm)
  double margin = 0.0;           // bound - alpha
};

ConvergenceReport check_convergence_condition(const Eigen::SparseMatrix<double>& l_dir,
                                              const DhdParams& params);

// Solves (gamma I - alpha (1-gamma) L) H = beta Q for a fixed ordering.
std::vector<double> closed_form_steady(const Eigen::SparseMatrix<double>& l_dir,
                                       const std::vector<double>& q,
                                       const DhdParams& params);

struct HotSubgraph {
  std::vector<int> vertices;                 // local indices, heat >= theta
  std::vector<std::pair<int, int>> edges;    // induced, local indices
};

HotSubgraph extract_hot_subgraph(const HeatGraph& hg, const HeatState& state,
                                 double theta);

}  // namespace geolayer
