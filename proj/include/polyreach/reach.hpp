#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polyreach/graph.hpp"
#include "polyreach/linalg.hpp"
#include "polyreach/model.hpp"
#include "polyreach/polytope.hpp"

namespace polyreach {

enum class Integrator { exponential, implicit_euler };
enum class DisturbanceMode { stacked, product };

struct ReachConfig {
  double t0 = 0.0;
  double tau = 1.0;
  double dt = 0.01;
  double dle_tol = 1e-10;
  int dle_max_iter = 5000;
  int consensus_rounds = 0;        // 0: use the schedule's derived bound
  bool use_vertex_shares = false;  // select disturbances by share + max sweep
  Integrator integrator = Integrator::exponential;  // centralized flow only
  DisturbanceMode disturbance_mode = DisturbanceMode::stacked;

  int steps() const;  // validates and returns (tau - t0) / dt
};

/* One supporting hyperplane tracked through time.  Entry k of the per-step
 * arrays belongs to time t0 + k dt; disturbance[k] is the vertex held
 * constant on [t_k, t_{k+1}), so it has one entry fewer. */
struct HyperplaneTrace {
  int face = 0;
  std::vector<Vec> costate;
  std::vector<Vec> contact;
  std::vector<double> support_offset;
  std::vector<Vec> disturbance;
};

struct ReachResult {
  int agent = -1;  // -1: centralized
  std::vector<double> times;
  std::vector<HyperplaneTrace> traces;
  long long dle_sweeps_total = 0;
  long long consensus_rounds_total = 0;
  std::vector<std::string> warnings;

  int steps() const { return static_cast<int>(times.size()) - 1; }
  HPolytope outer_at(int step) const;   // one halfspace per trace
  VPolytope inner_at(int step) const;   // contact cloud, deduplicated
};

/* Step-zero traces: one per face of the joint initial set, with the contact
 * at the face's support vertex and the offset taken from the face.  Throws
 * when a face offset and its contact disagree beyond 1e-9 (an inconsistent
 * H/V pair). */
std::vector<HyperplaneTrace> init_traces(const StackedSystem& sys);

/* Single exact-flow steps, usable on their own in tests.  The propagation
 * loops precompute the transition matrices instead of calling these. */
Vec costate_step_centralized(const Vec& costate, const StackedSystem& sys, double dt);
Vec contact_step_centralized(const Vec& contact, const Vec& disturbance,
                             const StackedSystem& sys, double dt);

/* Disturbance vertex maximizing <costate, B w>.  The stacked mode scans the
 * joint vertex list; the product mode argmaxes each factor under its own
 * direction block and concatenates.  Both return the same joint vertex id:
 * the product order makes per-factor lowest-index ties compose to the joint
 * lowest-index tie. */
struct DisturbanceChoice {
  Vec w;
  long long vertex_id = 0;
  std::vector<int> factor_ids;
};
DisturbanceChoice optimal_disturbance(const Vec& costate, const StackedSystem& sys,
                                      DisturbanceMode mode);

ReachResult reach_centralized(const StackedSystem& sys, const ReachConfig& cfg);

/* Distributed propagation.  Per step and per trace: (a) the costate update
 * solves (I + dt A^T) x = costate with each agent owning its block rows,
 * (b) the disturbance vertex is chosen from the updated costate (locally per
 * factor, or via vertex shares plus a max sweep over the schedule), and
 * (c) the contact update solves (I - dt A) x = contact + dt B w the same way.
 * Every agent keeps its own copies; one result per agent. */
std::vector<ReachResult> reach_distributed(const StackedSystem& sys,
                                           const std::vector<InformationSet>& agents,
                                           const GraphSchedule& schedule,
                                           const ReachConfig& cfg);

/* Per-agent projection of a joint result: coordinate bounds of the outer
 * polytope (by linear programming) and the contact cloud restricted to the
 * agent's block.  LP failures mark the step degenerate instead of throwing. */
struct AgentView {
  int agent = 0;
  std::vector<Vec> lower;               // per step, one bound per coordinate
  std::vector<Vec> upper;
  std::vector<std::vector<Vec>> points;  // per step, deduplicated contacts
  std::vector<bool> degenerate;          // per step
};
std::vector<AgentView> per_agent_views(const ReachResult& result, const StackedSystem& sys);

/* Monte-Carlo containment check: simulate trajectories from hull samples of
 * the initial set under per-step random disturbance vertices (exact
 * zero-order-hold flow) and test them against the outer polytopes; also test
 * every contact point against every halfspace. */
struct ContainmentReport {
  bool pass = false;
  bool inner_pass = false;
  bool samples_pass = false;
  int samples = 0;
  double worst_sample_margin = 0;
  int worst_sample = -1;
  int worst_sample_step = -1;
  double worst_inner_margin = 0;
  int worst_inner_step = -1;
  int worst_inner_trace = -1;  // contact point index == trace index
  int worst_inner_face = -1;
  double sample_tol = 1e-6;
  double inner_tol = 1e-8;
};
ContainmentReport verify_containment(const ReachResult& result, const StackedSystem& sys,
                                     const ReachConfig& cfg, int n_samples, std::uint64_t seed);

}  // namespace polyreach
