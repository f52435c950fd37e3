#pragma once

#include <string>
#include <vector>

#include "polyreach/graph.hpp"
#include "polyreach/linalg.hpp"

namespace polyreach {

/* One agent's slice of a joint linear system: a block of rows and the
 * matching right-hand side entries.  A block may be empty, in which case the
 * agent contributes no constraint and only relays neighbor estimates. */
struct DleRowBlock {
  Matrix rows;
  Vec rhs;
};

struct DleProblem {
  std::vector<DleRowBlock> agents;
  int dimension = 0;
};
void validate_problem(const DleProblem& p);

/* Iteration state: every agent holds a full-length estimate that always
 * satisfies its own rows; kernel projectors are cached at init. */
struct DleState {
  int iteration = 0;
  std::vector<Vec> estimates;
  std::vector<Matrix> projectors;
};

/* Start from each agent's minimum-norm solution of its own rows (or from a
 * supplied guess re-projected onto the agent's solution set, which is how a
 * caller warm-starts from the previous step of an outer loop).  Throws
 * InvalidInput naming the agent whose rows are inconsistent. */
DleState dle_init(const DleProblem& p);
DleState dle_init_warm(const DleProblem& p, const std::vector<Vec>& guesses);

/* One synchronous sweep: each agent moves toward the mean of its neighbors'
 * current estimates, projected so its own rows stay satisfied.  Agents with
 * no neighbors this round keep their estimate.  The neighbor mean excludes
 * the agent itself, matching the update rule as written. */
void dle_step(DleState& s, const DleProblem& p, const Graph& g);

/* Largest pairwise disagreement, max-norm.  Harness-level metric: it drives
 * the stop rule but is never exchanged between agents. */
double max_disagreement(const std::vector<Vec>& estimates);

struct DleReport {
  int iterations = 0;
  bool converged = false;
  std::vector<double> disagreement_history;  // entry k: disagreement after k sweeps
  std::string averaging = "neighbors-only";  // self excluded from the mean
  std::vector<std::string> warnings;
};

struct DleOutcome {
  std::vector<Vec> solutions;
  DleReport report;
};

/* Iterate dle_step under the schedule until the disagreement drops below tol.
 * Throws NonConvergence with the iteration count and last disagreement when
 * max_iter sweeps were not enough.  `warm` seeds the iteration as in
 * dle_init_warm; `check_schedule` controls the joint-connectivity warning
 * (callers that checked once already can switch it off). */
DleOutcome dle_solve(const DleProblem& p, const GraphSchedule& schedule, double tol,
                     int max_iter, const std::vector<Vec>* warm = nullptr,
                     bool check_schedule = true);

}  // namespace polyreach
