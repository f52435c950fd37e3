#pragma once

#include <string>
#include <vector>

#include "polyreach/model.hpp"
#include "polyreach/reach.hpp"

namespace polyreach {

/* One exported record: the state of one trace at one step, as seen by one
 * agent (-1 for a centralized run).  `disturbance` is the vertex held on the
 * step ending at `step`, so it is empty for step 0. */
struct TraceRow {
  int agent = -1;
  int trace = 0;
  int step = 0;
  double time = 0;
  double gamma = 0;
  Vec costate;
  Vec contact;
  Vec disturbance;
};

std::vector<TraceRow> flatten_traces(const std::vector<ReachResult>& results);

/* CSV uses 17 significant digits; JSON lines use shortest-round-trip doubles.
 * Both re-read to the exact same bits, and identical rows always serialize to
 * identical bytes. */
void write_traces_csv(const std::string& path, const std::vector<TraceRow>& rows);
void write_traces_jsonl(const std::string& path, const std::vector<TraceRow>& rows);

/* Reads either format back, dispatching on the .csv / .jsonl extension. */
std::vector<TraceRow> load_traces(const std::string& path);

/* Per-step polytope snapshots outer_k<step>.json: every agent's halfspaces
 * and contact points at that step. */
void write_outer_json(const std::string& dir, const std::vector<ReachResult>& results);

/* Coordinate boxes per agent per step, from each agent's own copy. */
void write_agent_boxes(const std::string& path, const std::vector<AgentView>& views,
                       const std::vector<double>& times);

/* report.json for a run: scenario identity, settings, and counters.  Contains
 * no timing, so identical runs produce identical bytes. */
struct RunSummary {
  std::string scenario;
  std::string mode;
  int agents = 0;
  int traces = 0;
  int steps = 0;
  double t0 = 0;
  double tau = 0;
  double dt = 0;
  long long dle_sweeps_total = 0;
  long long consensus_rounds_total = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> warnings;
};
void write_run_report(const std::string& path, const RunSummary& summary);

}  // namespace polyreach
