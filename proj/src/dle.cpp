#include "polyreach/dle.hpp"

#include <string>

#include "polyreach/errors.hpp"

namespace polyreach {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw InvalidInput(msg);
}

}  // namespace

void validate_problem(const DleProblem& p) {
  require(p.dimension >= 1, "d-le dimension must be positive");
  require(!p.agents.empty(), "d-le needs at least one agent");
  for (std::size_t i = 0; i < p.agents.size(); ++i) {
    const DleRowBlock& blk = p.agents[i];
    require(blk.rows.rows() == 0 || blk.rows.cols() == p.dimension,
            "agent " + std::to_string(i) + ": row block column count mismatch");
    require(blk.rhs.size() == static_cast<std::size_t>(blk.rows.rows()),
            "agent " + std::to_string(i) + ": right-hand side size mismatch");
  }
}

namespace {

DleState init_state(const DleProblem& p, const std::vector<Vec>* guesses) {
  validate_problem(p);
  DleState s;
  s.iteration = 0;
  s.estimates.reserve(p.agents.size());
  s.projectors.reserve(p.agents.size());
  for (std::size_t i = 0; i < p.agents.size(); ++i) {
    const DleRowBlock& blk = p.agents[i];
    s.projectors.push_back(kernel_projector(blk.rows));
    try {
      if (guesses) {
        s.estimates.push_back(project_affine(blk.rows, blk.rhs, (*guesses)[i]));
        // The affine projection lands on the least-squares set even for
        // inconsistent rows, so verify the rows are actually satisfied.
        const Vec residual = sub(blk.rows * s.estimates.back(), blk.rhs);
        require(inf_norm(residual) <= 1e-8 * std::max(1.0, inf_norm(blk.rhs)),
                "inconsistent rows");
      } else {
        s.estimates.push_back(min_norm_solution(blk.rows, blk.rhs));
      }
    } catch (const InvalidInput& e) {
      throw InvalidInput("agent " + std::to_string(i) + ": " + e.what());
    }
  }
  return s;
}

}  // namespace

DleState dle_init(const DleProblem& p) { return init_state(p, nullptr); }

DleState dle_init_warm(const DleProblem& p, const std::vector<Vec>& guesses) {
  require(guesses.size() == p.agents.size(), "warm start needs one guess per agent");
  for (const Vec& g : guesses)
    require(g.size() == static_cast<std::size_t>(p.dimension), "warm start guess size mismatch");
  return init_state(p, &guesses);
}

void dle_step(DleState& s, const DleProblem& p, const Graph& g) {
  const int n_agents = static_cast<int>(p.agents.size());
  require(g.node_count() == n_agents, "graph node count must match the agent count");
  std::vector<Vec> next(s.estimates.size());
  for (int i = 0; i < n_agents; ++i) {
    const std::vector<int>& nbrs = g.neighbors(i);
    if (nbrs.empty()) {
      next[i] = s.estimates[i];
      continue;
    }
    Vec mean(p.dimension, 0.0);
    for (int j : nbrs)
      for (int c = 0; c < p.dimension; ++c) mean[c] += s.estimates[j][c];
    for (int c = 0; c < p.dimension; ++c) mean[c] /= static_cast<double>(nbrs.size());

    const Vec gap = sub(s.estimates[i], mean);
    const Vec correction = s.projectors[i] * gap;
    next[i] = sub(s.estimates[i], correction);
  }
  s.estimates = std::move(next);
  ++s.iteration;
}

double max_disagreement(const std::vector<Vec>& estimates) {
  double worst = 0;
  for (std::size_t i = 0; i < estimates.size(); ++i)
    for (std::size_t j = i + 1; j < estimates.size(); ++j)
      worst = std::max(worst, inf_norm(sub(estimates[i], estimates[j])));
  return worst;
}

DleOutcome dle_solve(const DleProblem& p, const GraphSchedule& schedule, double tol,
                     int max_iter, const std::vector<Vec>* warm, bool check_schedule) {
  require(tol > 0, "tolerance must be positive");
  require(max_iter >= 0, "iteration budget must be non-negative");
  require(schedule.node_count() == static_cast<int>(p.agents.size()),
          "schedule node count must match the agent count");

  DleReport report;
  if (check_schedule &&
      !is_repeatedly_jointly_strongly_connected(schedule, schedule.period()))
    report.warnings.push_back("schedule is not repeatedly jointly strongly connected");

  DleState s = warm ? dle_init_warm(p, *warm) : dle_init(p);
  double disagreement = max_disagreement(s.estimates);
  report.disagreement_history.push_back(disagreement);
  while (disagreement >= tol && s.iteration < max_iter) {
    dle_step(s, p, schedule.at(s.iteration));
    disagreement = max_disagreement(s.estimates);
    report.disagreement_history.push_back(disagreement);
  }
  report.iterations = s.iteration;
  report.converged = disagreement < tol;
  if (!report.converged)
    throw NonConvergence("d-le did not converge in " + std::to_string(max_iter) +
                             " sweeps (disagreement " + std::to_string(disagreement) + ")",
                         s.iteration, disagreement);
  return DleOutcome{std::move(s.estimates), std::move(report)};
}

}  // namespace polyreach
