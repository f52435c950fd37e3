#include "polyreach/graph.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <string>

#include "polyreach/errors.hpp"

namespace polyreach {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw InvalidInput(msg);
}

}  // namespace

Graph::Graph(int node_count, std::vector<std::pair<int, int>> edges) : node_count_(node_count) {
  require(node_count >= 1, "graph needs at least one node");
  for (auto& [a, b] : edges) {
    require(a != b, "self-loops are not allowed");
    require(0 <= a && a < node_count && 0 <= b && b < node_count,
            "edge endpoint out of range");
    if (a > b) std::swap(a, b);
  }
  std::sort(edges.begin(), edges.end());
  require(std::adjacent_find(edges.begin(), edges.end()) == edges.end(),
          "duplicate edge");
  edges_ = std::move(edges);
  neighbors_.assign(node_count, {});
  for (const auto& [a, b] : edges_) {
    neighbors_[a].push_back(b);
    neighbors_[b].push_back(a);
  }
  for (auto& n : neighbors_) std::sort(n.begin(), n.end());
}

const std::vector<int>& Graph::neighbors(int node) const {
  require(0 <= node && node < node_count_, "node out of range");
  return neighbors_[node];
}

bool Graph::has_edge(int a, int b) const {
  if (a > b) std::swap(a, b);
  return std::binary_search(edges_.begin(), edges_.end(), std::make_pair(a, b));
}

Matrix adjacency(const Graph& g, bool self_loops) {
  Matrix m(g.node_count(), g.node_count());
  for (const auto& [a, b] : g.edges()) {
    m(a, b) = 1.0;
    m(b, a) = 1.0;
  }
  if (self_loops)
    for (int i = 0; i < g.node_count(); ++i) m(i, i) = 1.0;
  return m;
}

Matrix degree_matrix(const Graph& g) {
  Matrix m(g.node_count(), g.node_count());
  for (int i = 0; i < g.node_count(); ++i)
    m(i, i) = static_cast<double>(g.neighbors(i).size());
  return m;
}

Matrix laplacian(const Graph& g) { return degree_matrix(g) - adjacency(g); }

namespace {

std::vector<int> bfs_distances(const Graph& g, int start) {
  std::vector<int> dist(g.node_count(), -1);
  std::queue<int> q;
  dist[start] = 0;
  q.push(start);
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (int v : g.neighbors(u))
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        q.push(v);
      }
  }
  return dist;
}

std::vector<int> bfs_distances(const DiGraph& g, int start) {
  std::vector<int> dist(g.node_count, -1);
  std::queue<int> q;
  dist[start] = 0;
  q.push(start);
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (int v = 0; v < g.node_count; ++v)
      if (u != v && g.adj[u][v] && dist[v] < 0) {
        dist[v] = dist[u] + 1;
        q.push(v);
      }
  }
  return dist;
}

}  // namespace

bool is_connected(const Graph& g) {
  const std::vector<int> dist = bfs_distances(g, 0);
  return std::none_of(dist.begin(), dist.end(), [](int d) { return d < 0; });
}

int diameter(const Graph& g) {
  int best = 0;
  for (int s = 0; s < g.node_count(); ++s) {
    const std::vector<int> dist = bfs_distances(g, s);
    for (int d : dist) {
      if (d < 0) throw InvalidInput("graph is not connected");
      best = std::max(best, d);
    }
  }
  return best;
}

DiGraph compose(const Graph& g1, const Graph& g2) {
  const std::vector<Graph> window{g1, g2};
  return compose_window(window);
}

DiGraph compose_window(std::span<const Graph> graphs) {
  require(!graphs.empty(), "composition window must be non-empty");
  const int n = graphs[0].node_count();
  for (const Graph& g : graphs)
    require(g.node_count() == n, "composition needs matching node counts");

  // Boolean matrix product of self-looped adjacencies, folded in round order.
  std::vector<std::vector<bool>> acc(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i) {
    acc[i][i] = true;
    for (int j : graphs[0].neighbors(i)) acc[i][j] = true;
  }
  for (std::size_t t = 1; t < graphs.size(); ++t) {
    std::vector<std::vector<bool>> next(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        if (!acc[i][k]) continue;
        next[i][k] = true;  // unit self-loop on the right factor
        for (int j : graphs[t].neighbors(k)) next[i][j] = true;
      }
    acc = std::move(next);
  }
  return DiGraph{n, std::move(acc)};
}

bool is_strongly_connected(const DiGraph& g) {
  for (int s = 0; s < g.node_count; ++s) {
    const std::vector<int> dist = bfs_distances(g, s);
    if (std::any_of(dist.begin(), dist.end(), [](int d) { return d < 0; })) return false;
  }
  return true;
}

int diameter(const DiGraph& g) {
  int best = 0;
  for (int s = 0; s < g.node_count; ++s) {
    const std::vector<int> dist = bfs_distances(g, s);
    for (int d : dist) {
      if (d < 0) throw InvalidInput("directed support is not strongly connected");
      best = std::max(best, d);
    }
  }
  return best;
}

GraphSchedule GraphSchedule::fixed(Graph g) {
  GraphSchedule s;
  s.mode_ = Mode::fixed;
  s.graphs_.push_back(std::move(g));
  return s;
}

GraphSchedule GraphSchedule::periodic(std::vector<Graph> graphs) {
  require(!graphs.empty(), "periodic schedule needs at least one graph");
  for (const Graph& g : graphs)
    require(g.node_count() == graphs[0].node_count(),
            "schedule graphs need matching node counts");
  GraphSchedule s;
  s.mode_ = Mode::periodic;
  s.graphs_ = std::move(graphs);
  return s;
}

int GraphSchedule::node_count() const { return graphs_[0].node_count(); }

bool is_repeatedly_jointly_strongly_connected(const GraphSchedule& s, int window) {
  require(window >= 1, "window must be positive");
  if (s.mode() == GraphSchedule::Mode::fixed) return is_connected(s.at(0));
  const int period = s.period();
  const int cycle = std::lcm(period, window);
  for (int start = 0; start < cycle; start += window) {
    std::vector<Graph> slice;
    slice.reserve(window);
    for (int t = 0; t < window; ++t) slice.push_back(s.at(start + t));
    if (!is_strongly_connected(compose_window(slice))) return false;
  }
  return true;
}

int consensus_round_bound(const GraphSchedule& s) {
  if (s.mode() == GraphSchedule::Mode::fixed) {
    if (!is_connected(s.at(0))) throw InvalidInput("graph is not connected");
    return diameter(s.at(0));
  }
  const int period = s.period();
  if (!is_repeatedly_jointly_strongly_connected(s, period))
    throw InvalidInput("schedule is not jointly connected over its period");
  int hops = 0;
  const int cycle = std::lcm(period, period);
  for (int start = 0; start < cycle; start += period) {
    std::vector<Graph> slice;
    for (int t = 0; t < period; ++t) slice.push_back(s.at(start + t));
    hops = std::max(hops, diameter(compose_window(slice)));
  }
  return hops * period;
}

}  // namespace polyreach
