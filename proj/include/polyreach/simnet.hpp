#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "polyreach/errors.hpp"
#include "polyreach/graph.hpp"

namespace polyreach {

/* Synchronous round-based message harness.  A message sent in round k is
 * readable in round k+1 and travels an edge of round k's graph; an agent can
 * address only its current neighbors.  Inboxes are delivered sorted by sender
 * id, so outcomes do not depend on the order agents are stepped in. */

struct MessageRecord {
  int round;
  int from;
  int to;
  std::size_t payload_size;
};

template <class State>
struct RoundOutcome {
  std::vector<State> states;
  int rounds_used = -1;  // index of the last executed round
  bool converged = false;
  std::vector<MessageRecord> log;
};

namespace detail {

template <class Msg>
std::size_t payload_size(const Msg& m) {
  if constexpr (requires { m.size(); })
    return m.size();
  else
    return 1;
}

}  // namespace detail

/* step(agent, round, state, inbox, neighbors) -> outbox of (target, message).
 * stop(round, states) is evaluated after each round's updates; harness-level,
 * like a convergence metric no single agent could compute.  `last_round` is
 * the largest round index allowed (inclusive).  `agent_order` only changes
 * the iteration order inside a round; outcomes must not depend on it. */
template <class State, class Msg, class StepFn, class StopFn>
RoundOutcome<State> run_protocol(std::vector<State> states, const GraphSchedule& schedule,
                                 StepFn step, StopFn stop, int last_round,
                                 const std::vector<int>* agent_order = nullptr) {
  const int n = static_cast<int>(states.size());
  if (schedule.node_count() != n)
    throw InvalidInput("schedule node count must match the agent count");

  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  if (agent_order) {
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (int a : *agent_order) {
      if (a < 0 || a >= n || seen[static_cast<std::size_t>(a)])
        throw InvalidInput("agent order must list every agent once");
      seen[static_cast<std::size_t>(a)] = true;
    }
    if (static_cast<int>(agent_order->size()) != n)
      throw InvalidInput("agent order must list every agent once");
    order = *agent_order;
  }

  RoundOutcome<State> out;
  out.states = std::move(states);

  std::vector<std::vector<std::pair<int, Msg>>> inboxes(n);
  for (int round = 0; round <= last_round; ++round) {
    const Graph& g = schedule.at(round);
    for (auto& box : inboxes)
      std::sort(box.begin(), box.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });

    std::vector<std::vector<std::pair<int, Msg>>> next_inboxes(n);
    for (int agent : order) {
      const std::vector<int>& nbrs = g.neighbors(agent);
      auto outbox = step(agent, round, out.states[agent], inboxes[agent], nbrs);
      for (auto& [target, msg] : outbox) {
        if (!std::binary_search(nbrs.begin(), nbrs.end(), target))
          throw InvalidInput("agent " + std::to_string(agent) +
                             " addressed non-neighbor " + std::to_string(target));
        out.log.push_back(MessageRecord{round, agent, target, detail::payload_size<Msg>(msg)});
        next_inboxes[target].emplace_back(agent, std::move(msg));
      }
    }
    inboxes = std::move(next_inboxes);
    out.rounds_used = round;
    if (stop(round, out.states)) {
      out.converged = true;
      break;
    }
  }
  return out;
}

/* Per-round, per-directed-edge message tallies. */
std::map<int, std::map<std::pair<int, int>, int>> message_counts(
    const std::vector<MessageRecord>& log);

/* Message log as JSON lines: {"round":..,"from":..,"to":..,"payload_size":..} */
void write_message_log(const std::string& path, const std::vector<MessageRecord>& log);

}  // namespace polyreach
