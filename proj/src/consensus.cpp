#include "polyreach/consensus.hpp"

#include <limits>
#include <string>

#include "polyreach/errors.hpp"

namespace polyreach {

bool Candidate::better_than(const Candidate& other) const {
  if (value != other.value) return value > other.value;
  return id < other.id;
}

Candidate Candidate::lowest() {
  return Candidate{-std::numeric_limits<double>::infinity(), {},
                   std::numeric_limits<long long>::max()};
}

Candidate local_argmax(const VPolytope& vertices, const std::vector<int>& share_ids,
                       const Vec& direction) {
  if (direction.size() != static_cast<std::size_t>(vertices.dim))
    throw InvalidInput("direction dimension mismatch");
  Candidate best = Candidate::lowest();
  for (int id : share_ids) {
    if (id < 0 || id >= static_cast<int>(vertices.vertices.size()))
      throw InvalidInput("vertex share id out of range: " + std::to_string(id));
    const Candidate c{dot(direction, vertices.vertices[id]), vertices.vertices[id],
                      static_cast<long long>(id)};
    if (c.better_than(best)) best = c;
  }
  return best;
}

std::vector<Candidate> max_consensus_round(const std::vector<Candidate>& candidates,
                                           const Graph& g) {
  if (g.node_count() != static_cast<int>(candidates.size()))
    throw InvalidInput("graph node count must match the candidate count");
  std::vector<Candidate> next = candidates;
  for (int i = 0; i < g.node_count(); ++i)
    for (int j : g.neighbors(i))
      if (candidates[j].better_than(next[i])) next[i] = candidates[j];
  return next;
}

std::vector<Candidate> max_consensus(std::vector<Candidate> candidates,
                                     const GraphSchedule& schedule, int rounds) {
  if (schedule.node_count() != static_cast<int>(candidates.size()))
    throw InvalidInput("schedule node count must match the candidate count");
  if (rounds < 0) throw InvalidInput("round count must be non-negative");
  if (schedule.mode() == GraphSchedule::Mode::fixed && !is_connected(schedule.at(0)))
    throw InvalidInput("fixed schedule graph is not connected");
  for (int r = 0; r < rounds; ++r)
    candidates = max_consensus_round(candidates, schedule.at(r));
  return candidates;
}

}  // namespace polyreach
