#pragma once

#include <vector>

#include "polyreach/graph.hpp"
#include "polyreach/linalg.hpp"
#include "polyreach/polytope.hpp"

namespace polyreach {

/* A scored proposal in a max sweep: the score, the payload it belongs to
 * (here a vertex), and the global id used to break exact ties.  Ordering is
 * lexicographic on (value, -id): higher value wins, equal values go to the
 * lower id, so independently computed sweeps agree bit-for-bit. */
struct Candidate {
  double value = 0;
  Vec payload;
  long long id = 0;

  bool better_than(const Candidate& other) const;

  /* Losing placeholder for agents with nothing to propose. */
  static Candidate lowest();
};

/* Best candidate within one agent's share of the joint vertex set:
 * argmax over share_ids of <direction, vertices[id]>.  Empty shares yield
 * the losing placeholder. */
Candidate local_argmax(const VPolytope& vertices, const std::vector<int>& share_ids,
                       const Vec& direction);

/* One synchronous round: each agent keeps the best of its own candidate and
 * its neighbors' round-start candidates. */
std::vector<Candidate> max_consensus_round(const std::vector<Candidate>& candidates,
                                           const Graph& g);

/* Run `rounds` rounds under the schedule.  A fixed schedule over a
 * disconnected graph can never agree, so that is rejected up front. */
std::vector<Candidate> max_consensus(std::vector<Candidate> candidates,
                                     const GraphSchedule& schedule, int rounds);

}  // namespace polyreach
