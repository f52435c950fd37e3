#include "polyreach/model.hpp"

#include <numeric>
#include <string>

#include "polyreach/errors.hpp"

namespace polyreach {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw InvalidInput(msg);
}

std::string agent_tag(int id) { return "agent " + std::to_string(id); }

}  // namespace

void validate_agent(const AgentModel& m, int agent_id) {
  const std::string tag = agent_tag(agent_id);
  const int nx = m.A.rows();
  require(nx >= 1 && m.A.cols() == nx, tag + ": A must be square and non-empty");
  require(m.B.rows() == nx, tag + ": B row count must match the state dimension");
  require(m.B1.rows() == nx, tag + ": B1 row count must match the state dimension");
  require(m.B1.cols() >= 1, tag + ": B1 needs at least one disturbance channel");
  require(m.K_self.rows() == m.B.cols() && m.K_self.cols() == nx,
          tag + ": K_self must be input_dim x state_dim");
  for (const auto& [j, k] : m.K_neighbors)
    require(k.rows() == m.B.cols() && k.cols() == nx,
            tag + ": gain for neighbor " + std::to_string(j) + " must be input_dim x state_dim");
  require(m.X0.faces.dim == nx && m.X0.vertices.dim == nx,
          tag + ": X0 dimension must match the state dimension");
  require(m.W.dim == m.B1.cols(), tag + ": W dimension must match B1 columns");
  if (m.W_faces) require(m.W_faces->dim == m.W.dim, tag + ": W face dimension mismatch");
}

BlockRow closed_loop_block_row(const InformationSet& info, const Graph& g) {
  const AgentModel& m = info.model;
  validate_agent(m, info.agent_id);
  const std::vector<int>& neighbors = g.neighbors(info.agent_id);

  for (const auto& [j, k] : m.K_neighbors)
    require(g.has_edge(info.agent_id, j),
            agent_tag(info.agent_id) + ": gain declared for non-neighbor " + std::to_string(j));

  BlockRow row;
  row.diagonal = m.A + m.B * m.K_self;
  for (int j : neighbors) {
    const auto it = m.K_neighbors.find(j);
    require(it != m.K_neighbors.end(),
            agent_tag(info.agent_id) + ": missing gain for neighbor " + std::to_string(j));
    row.diagonal = row.diagonal + m.B * it->second;
    row.coupling.emplace(j, (m.B * it->second) * -1.0);
  }
  return row;
}

int StackedSystem::state_dim() const {
  return std::accumulate(state_dims.begin(), state_dims.end(), 0);
}

int StackedSystem::disturbance_dim() const {
  return std::accumulate(disturbance_dims.begin(), disturbance_dims.end(), 0);
}

int StackedSystem::state_offset(int agent) const {
  return std::accumulate(state_dims.begin(), state_dims.begin() + agent, 0);
}

int StackedSystem::disturbance_offset(int agent) const {
  return std::accumulate(disturbance_dims.begin(), disturbance_dims.begin() + agent, 0);
}

StackedSystem assemble_stacked(const std::vector<InformationSet>& agents, const Graph& g,
                               std::size_t vertex_cap) {
  const int n_agents = static_cast<int>(agents.size());
  require(n_agents >= 1, "need at least one agent");
  require(g.node_count() == n_agents, "graph node count must match the agent count");
  for (int i = 0; i < n_agents; ++i) {
    require(agents[i].agent_id == i, "agents must be listed in id order");
    validate_agent(agents[i].model, i);
  }

  // Neighboring agents must share a state dimension: the control law couples
  // them through x_i - x_j.
  for (const auto& [a, b] : g.edges())
    require(agents[a].model.state_dim() == agents[b].model.state_dim(),
            "neighbors " + std::to_string(a) + " and " + std::to_string(b) +
                " have mismatched state dimensions");

  std::vector<int> state_dims, disturbance_dims, faces_per_agent;
  std::vector<int> state_offsets, disturbance_offsets;
  int n = 0, nw = 0;
  for (const InformationSet& info : agents) {
    state_offsets.push_back(n);
    disturbance_offsets.push_back(nw);
    state_dims.push_back(info.model.state_dim());
    disturbance_dims.push_back(info.model.disturbance_dim());
    faces_per_agent.push_back(static_cast<int>(info.model.X0.faces.faces.size()));
    n += info.model.state_dim();
    nw += info.model.disturbance_dim();
  }

  Matrix a(n, n), b(n, nw);
  for (int i = 0; i < n_agents; ++i) {
    const BlockRow row = closed_loop_block_row(agents[i], g);
    const int ro = state_offsets[i];
    for (int r = 0; r < row.diagonal.rows(); ++r)
      for (int c = 0; c < row.diagonal.cols(); ++c) a(ro + r, ro + c) = row.diagonal(r, c);
    for (const auto& [j, block] : row.coupling) {
      const int co = state_offsets[j];
      for (int r = 0; r < block.rows(); ++r)
        for (int c = 0; c < block.cols(); ++c) a(ro + r, co + c) = block(r, c);
    }
    const Matrix& b1 = agents[i].model.B1;
    const int wo = disturbance_offsets[i];
    for (int r = 0; r < b1.rows(); ++r)
      for (int c = 0; c < b1.cols(); ++c) b(ro + r, wo + c) = b1(r, c);
  }

  std::vector<HPolytope> x0_faces;
  std::vector<VPolytope> x0_verts;
  std::vector<VPolytope> w_verts;
  std::vector<HPolytope> w_faces;
  bool all_w_faces = true;
  for (const InformationSet& info : agents) {
    x0_faces.push_back(info.model.X0.faces);
    x0_verts.push_back(info.model.X0.vertices);
    w_verts.push_back(info.model.W);
    if (info.model.W_faces)
      w_faces.push_back(*info.model.W_faces);
    else
      all_w_faces = false;
  }
  return StackedSystem{std::move(a),
                       std::move(b),
                       PolytopePair{product_faces(x0_faces), product(x0_verts, vertex_cap)},
                       product(w_verts, vertex_cap),
                       all_w_faces ? std::optional<HPolytope>(product_faces(w_faces))
                                   : std::nullopt,
                       std::move(w_verts),
                       std::move(state_dims),
                       std::move(disturbance_dims),
                       std::move(faces_per_agent)};
}

std::vector<std::vector<int>> assign_vertex_shares(int agent_count, const VPolytope& stacked) {
  require(agent_count >= 1, "need at least one agent");
  std::vector<std::vector<int>> shares(agent_count);
  for (int v = 0; v < static_cast<int>(stacked.vertices.size()); ++v)
    shares[v % agent_count].push_back(v);
  return shares;
}

std::vector<InformationSet> build_information_sets(const std::vector<AgentModel>& models,
                                                   const Graph& g) {
  require(g.node_count() == static_cast<int>(models.size()),
          "graph node count must match the agent count");
  std::vector<InformationSet> agents;
  agents.reserve(models.size());
  for (int i = 0; i < static_cast<int>(models.size()); ++i)
    agents.push_back(InformationSet{i, models[i], g.neighbors(i), {}});
  const StackedSystem sys = assemble_stacked(agents, g);
  const auto shares = assign_vertex_shares(static_cast<int>(models.size()), sys.W);
  for (int i = 0; i < static_cast<int>(models.size()); ++i)
    agents[i].vertex_share = shares[i];
  return agents;
}

}  // namespace polyreach
