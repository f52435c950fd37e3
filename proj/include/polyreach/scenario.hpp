#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polyreach/graph.hpp"
#include "polyreach/model.hpp"
#include "polyreach/reach.hpp"

namespace polyreach {

/* A complete experiment description loaded from one JSON file: agent models,
 * the coupling graph, the communication schedule, solver settings, and the
 * sampling controls used by verification.  The grammar is documented in the
 * README. */
struct Scenario {
  std::string name;
  std::vector<AgentModel> models;
  Graph graph;
  GraphSchedule schedule;
  ReachConfig config;
  std::uint64_t seed = 1;
  int samples = 1000;
};

/* Parses scenario text.  `origin` names the source in diagnostics (usually
 * the file path).  Malformed JSON reports the line; semantic errors report
 * the key path.  Throws InvalidInput in both cases. */
Scenario parse_scenario(const std::string& text, const std::string& origin);

Scenario load_scenario(const std::string& path);

}  // namespace polyreach
