#pragma once

#include <span>
#include <utility>
#include <vector>

#include "polyreach/linalg.hpp"

namespace polyreach {

/* Undirected communication graph on nodes 0..node_count-1.  Edges are
 * unordered pairs, stored normalized (lo < hi) and sorted; self-loops and
 * duplicates are rejected. */
class Graph {
 public:
  Graph(int node_count, std::vector<std::pair<int, int>> edges);

  int node_count() const { return node_count_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const std::vector<int>& neighbors(int node) const;
  bool has_edge(int a, int b) const;

 private:
  int node_count_ = 0;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> neighbors_;
};

Matrix adjacency(const Graph& g, bool self_loops = false);
Matrix degree_matrix(const Graph& g);
Matrix laplacian(const Graph& g);  // degree - adjacency

bool is_connected(const Graph& g);
int diameter(const Graph& g);  // throws InvalidInput when disconnected

/* Directed reachability support produced by graph composition. */
struct DiGraph {
  int node_count = 0;
  std::vector<std::vector<bool>> adj;  // adj[i][j]: i can reach j
};

/* Support of adjacency(g1) * adjacency(g2) with unit self-loops added to both
 * factors, so an agent may hold information for a round.  Edge i->j means a
 * two-hop time-respecting path: i to some k under g1, then k to j under g2. */
DiGraph compose(const Graph& g1, const Graph& g2);
DiGraph compose_window(std::span<const Graph> graphs);

bool is_strongly_connected(const DiGraph& g);
int diameter(const DiGraph& g);  // throws InvalidInput when not strongly connected

/* Round-indexed sequence of graphs: one graph per synchronous round.  Static
 * schedules repeat a single graph; periodic ones cycle through a list. */
class GraphSchedule {
 public:
  enum class Mode { fixed, periodic };

  static GraphSchedule fixed(Graph g);
  static GraphSchedule periodic(std::vector<Graph> graphs);

  Mode mode() const { return mode_; }
  int period() const { return static_cast<int>(graphs_.size()); }
  int node_count() const;
  const Graph& at(int round) const { return graphs_[round % graphs_.size()]; }
  const std::vector<Graph>& graphs() const { return graphs_; }

 private:
  GraphSchedule() = default;
  Mode mode_ = Mode::fixed;
  std::vector<Graph> graphs_;
};

/* True when every window-aligned composition of `window` consecutive graphs
 * is strongly connected.  Periodic schedules are checked across one full
 * cycle of distinct window contents. */
bool is_repeatedly_jointly_strongly_connected(const GraphSchedule& s, int window);

/* Rounds that guarantee a max-consensus sweep reaches every node: the graph
 * diameter for a fixed schedule, and (window composition diameter) * period
 * for a periodic one.  Throws InvalidInput when the schedule cannot spread
 * information everywhere. */
int consensus_round_bound(const GraphSchedule& s);

}  // namespace polyreach
