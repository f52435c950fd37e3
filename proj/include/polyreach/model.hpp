#pragma once

#include <map>
#include <optional>
#include <vector>

#include "polyreach/graph.hpp"
#include "polyreach/linalg.hpp"
#include "polyreach/polytope.hpp"

namespace polyreach {

/* One agent's local data: open-loop dynamics, feedback gains, initial set,
 * and disturbance set.  The control law is
 *   u_i = K_self x_i + sum over neighbors j of K_neighbors[j] (x_i - x_j)
 * so every gain an agent applies is its own. */
struct AgentModel {
  Matrix A;       // n_x x n_x state matrix
  Matrix B;       // n_x x n_u input matrix
  Matrix B1;      // n_x x n_w disturbance matrix
  Matrix K_self;  // n_u x n_x
  std::map<int, Matrix> K_neighbors;  // neighbor id -> n_u x n_x relative gain
  PolytopePair X0;                    // initial set, both representations
  VPolytope W;                        // disturbance vertices
  std::optional<HPolytope> W_faces;   // present when W came from a box or ball

  int state_dim() const { return A.rows(); }
  int input_dim() const { return B.cols(); }
  int disturbance_dim() const { return B1.cols(); }
};

/* Everything agent i may read: its own model, its neighbor ids, and its share
 * of the joint disturbance vertex ids.  No other agent's dynamics appear. */
struct InformationSet {
  int agent_id = 0;
  AgentModel model;
  std::vector<int> neighbors;
  std::vector<int> vertex_share;  // indices into the stacked disturbance set
};

/* Checks the dimensional coherence of one agent's model. */
void validate_agent(const AgentModel& m, int agent_id);

/* Agent i's block row of the stacked closed-loop state matrix.  Built from
 * the agent's own information only: diagonal block
 *   A + B K_self + B * sum of K_neighbors, coupling block j = -B K_neighbors[j].
 * Throws when a graph neighbor has no gain or a gain has no edge. */
struct BlockRow {
  Matrix diagonal;
  std::map<int, Matrix> coupling;
};
BlockRow closed_loop_block_row(const InformationSet& info, const Graph& g);

/* Joint system for the whole network: stacked closed-loop state matrix, block
 * diagonal disturbance matrix, product initial set, product disturbance set. */
struct StackedSystem {
  Matrix A;
  Matrix B;  // stacked disturbance input map, block diagonal
  PolytopePair X0;
  VPolytope W;
  std::optional<HPolytope> W_faces;
  std::vector<VPolytope> W_factors;  // per-agent vertex lists, product order
  std::vector<int> state_dims;
  std::vector<int> disturbance_dims;
  std::vector<int> faces_per_agent;

  int agent_count() const { return static_cast<int>(state_dims.size()); }
  int state_dim() const;
  int disturbance_dim() const;
  int state_offset(int agent) const;
  int disturbance_offset(int agent) const;
};

StackedSystem assemble_stacked(const std::vector<InformationSet>& agents, const Graph& g,
                               std::size_t vertex_cap = 4096);

/* Round-robin split of the stacked disturbance vertex ids: vertex k goes to
 * agent k mod N.  Deterministic, disjoint, complete. */
std::vector<std::vector<int>> assign_vertex_shares(int agent_count, const VPolytope& stacked);

/* Convenience: build information sets from models plus the graph, then attach
 * the vertex shares of the assembled joint disturbance set. */
std::vector<InformationSet> build_information_sets(const std::vector<AgentModel>& models,
                                                   const Graph& g);

}  // namespace polyreach
