#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <fstream>
#include <random>

#include "doctest.h"
#include "polyreach/dle.hpp"
#include "polyreach/errors.hpp"
#include "polyreach/simnet.hpp"
#include "test_util.hpp"

using namespace polyreach;
using test_util::max_abs_diff;

namespace {

Graph path(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return Graph(n, std::move(edges));
}

Graph complete(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  return Graph(n, std::move(edges));
}

}  // namespace

TEST_CASE("echo protocol delivers at the next round") {
  // Each agent broadcasts its id once; after one round both hold the peer's.
  struct State {
    double own;
    double heard = -1;
  };
  std::vector<State> init{{10.0}, {20.0}};
  const auto out = run_protocol<State, double>(
      init, GraphSchedule::fixed(complete(2)),
      [](int, int round, State& s, const std::vector<std::pair<int, double>>& inbox,
         const std::vector<int>& nbrs) {
        std::vector<std::pair<int, double>> outbox;
        if (round == 0)
          for (int n : nbrs) outbox.emplace_back(n, s.own);
        if (!inbox.empty()) s.heard = inbox[0].second;
        return outbox;
      },
      [](int, const std::vector<State>& states) {
        return states[0].heard >= 0 && states[1].heard >= 0;
      },
      10);
  CHECK(out.converged);
  CHECK(out.rounds_used == 1);
  CHECK(out.states[0].heard == 20.0);
  CHECK(out.states[1].heard == 10.0);
  CHECK(out.log.size() == 2);
}

TEST_CASE("flooding a path takes diameter rounds") {
  struct State {
    bool has = false;
  };
  const int n = 5;
  std::vector<State> init(n);
  init[0].has = true;
  const auto out = run_protocol<State, int>(
      init, GraphSchedule::fixed(path(n)),
      [](int, int, State& s, const std::vector<std::pair<int, int>>& inbox,
         const std::vector<int>& nbrs) {
        std::vector<std::pair<int, int>> outbox;
        if (!inbox.empty()) s.has = true;
        if (s.has)
          for (int t : nbrs) outbox.emplace_back(t, 1);
        return outbox;
      },
      [](int, const std::vector<State>& states) {
        for (const State& s : states)
          if (!s.has) return false;
        return true;
      },
      100);
  CHECK(out.converged);
  CHECK(out.rounds_used == n - 1);
}

TEST_CASE("messages to non-neighbors are rejected") {
  struct State {};
  std::vector<State> init(3);
  CHECK_THROWS_WITH_AS(
      (run_protocol<State, int>(
          init, GraphSchedule::fixed(path(3)),
          [](int agent, int, State&, const std::vector<std::pair<int, int>>&,
             const std::vector<int>&) {
            std::vector<std::pair<int, int>> outbox;
            if (agent == 0) outbox.emplace_back(2, 1);  // 0 and 2 are not adjacent
            return outbox;
          },
          [](int, const std::vector<State>&) { return false; }, 3)),
      doctest::Contains("non-neighbor"), InvalidInput);
}

TEST_CASE("schedule size must match the agent count") {
  struct State {};
  std::vector<State> init(2);
  CHECK_THROWS_AS((run_protocol<State, int>(
                      init, GraphSchedule::fixed(path(3)),
                      [](int, int, State&, const std::vector<std::pair<int, int>>&,
                         const std::vector<int>&) {
                        return std::vector<std::pair<int, int>>{};
                      },
                      [](int, const std::vector<State>&) { return false; }, 3)),
                  InvalidInput);
}

TEST_CASE("agent execution order does not change the outcome") {
  // Max-consensus over messages: each round every agent broadcasts its value
  // and adopts the largest it has heard.
  struct State {
    double value;
  };
  auto step = [](int, int, State& s, const std::vector<std::pair<int, double>>& inbox,
                 const std::vector<int>& nbrs) {
    for (const auto& [from, v] : inbox) s.value = std::max(s.value, v);
    std::vector<std::pair<int, double>> outbox;
    for (int t : nbrs) outbox.emplace_back(t, s.value);
    return outbox;
  };
  auto never = [](int, const std::vector<State>&) { return false; };

  std::vector<State> init{{0.4}, {0.9}, {0.1}, {0.6}};
  const std::vector<int> forward{0, 1, 2, 3};
  const std::vector<int> backward{3, 2, 1, 0};
  const auto a = run_protocol<State, double>(init, GraphSchedule::fixed(path(4)), step, never,
                                             5, &forward);
  const auto b = run_protocol<State, double>(init, GraphSchedule::fixed(path(4)), step, never,
                                             5, &backward);
  for (int i = 0; i < 4; ++i) CHECK(a.states[i].value == b.states[i].value);
  CHECK(a.log.size() == b.log.size());

  const std::vector<int> bad{0, 0, 1, 2};
  CHECK_THROWS_AS((run_protocol<State, double>(init, GraphSchedule::fixed(path(4)), step,
                                               never, 5, &bad)),
                  InvalidInput);
}

TEST_CASE("periodic schedules restrict messages to the active edges") {
  struct State {
    int sent = 0;
  };
  const Graph g1(3, {{0, 1}});
  const Graph g2(3, {{1, 2}});
  std::vector<State> init(3);
  const auto out = run_protocol<State, int>(
      init, GraphSchedule::periodic({g1, g2}),
      [](int, int, State& s, const std::vector<std::pair<int, int>>&,
         const std::vector<int>& nbrs) {
        std::vector<std::pair<int, int>> outbox;
        for (int t : nbrs) outbox.emplace_back(t, 1);
        s.sent += static_cast<int>(outbox.size());
        return outbox;
      },
      [](int, const std::vector<State>&) { return false; }, 3);

  const auto counts = message_counts(out.log);
  // Rounds 0 and 2 use edge 0-1; rounds 1 and 3 use edge 1-2.
  CHECK(counts.at(0).at({0, 1}) == 1);
  CHECK(counts.at(0).at({1, 0}) == 1);
  CHECK(counts.at(0).count({1, 2}) == 0);
  CHECK(counts.at(1).at({1, 2}) == 1);
  CHECK(counts.at(1).at({2, 1}) == 1);
  CHECK(counts.at(2).at({0, 1}) == 1);
  CHECK(counts.at(3).at({2, 1}) == 1);
}

TEST_CASE("message_counts tallies per round and edge") {
  CHECK(message_counts({}).empty());

  struct State {};
  std::vector<State> init(3);
  const auto out = run_protocol<State, int>(
      init, GraphSchedule::fixed(complete(3)),
      [](int, int, State&, const std::vector<std::pair<int, int>>&,
         const std::vector<int>& nbrs) {
        std::vector<std::pair<int, int>> outbox;
        for (int t : nbrs) outbox.emplace_back(t, 1);
        return outbox;
      },
      [](int, const std::vector<State>&) { return false; }, 0);
  int total = 0;
  for (const auto& [round, per_edge] : message_counts(out.log))
    for (const auto& [edge, count] : per_edge) total += count;
  CHECK(total == 6);  // broadcast on K3: every directed pair once
}

TEST_CASE("message-passing d-le sweep matches dle_solve") {
  // Realize the projected-averaging iteration as an explicit protocol: each
  // round agents broadcast their estimate, then move toward the mean of what
  // they heard, projected back onto their own rows.  Messages sent in round k
  // are read in round k+1, so round r of the protocol completes sweep r.
  std::mt19937_64 eng(67);
  const int dim = 4;
  Matrix a = test_util::rand_matrix(eng, dim, dim);
  for (int i = 0; i < dim; ++i) a(i, i) += static_cast<double>(dim);
  const Vec truth = test_util::rand_vec(eng, dim);
  const Vec b = a * truth;

  DleProblem p;
  p.dimension = dim;
  for (int i = 0; i < dim; ++i) {
    DleRowBlock blk;
    blk.rows = a.row_slice(i, i + 1);
    blk.rhs = {b[static_cast<std::size_t>(i)]};
    p.agents.push_back(std::move(blk));
  }
  const GraphSchedule sched = GraphSchedule::fixed(complete(dim));
  const double tol = 1e-10;

  const DleOutcome oracle = dle_solve(p, sched, tol, 5000);

  struct State {
    Vec estimate;
    Matrix projector;
  };
  std::vector<State> init;
  const DleState seed = dle_init(p);
  for (int i = 0; i < dim; ++i) init.push_back({seed.estimates[i], seed.projectors[i]});

  const auto out = run_protocol<State, Vec>(
      init, sched,
      [&](int, int, State& s, const std::vector<std::pair<int, Vec>>& inbox,
          const std::vector<int>& nbrs) {
        if (!inbox.empty()) {
          Vec mean(s.estimate.size(), 0.0);
          for (const auto& [from, est] : inbox)
            for (std::size_t c = 0; c < mean.size(); ++c) mean[c] += est[c];
          for (double& v : mean) v /= static_cast<double>(inbox.size());
          const Vec gap = sub(s.estimate, mean);
          s.estimate = sub(s.estimate, s.projector * gap);
        }
        std::vector<std::pair<int, Vec>> outbox;
        for (int t : nbrs) outbox.emplace_back(t, s.estimate);
        return outbox;
      },
      [&](int, const std::vector<State>& states) {
        std::vector<Vec> ests;
        for (const State& s : states) ests.push_back(s.estimate);
        return max_disagreement(ests) < tol;
      },
      5000);

  CHECK(out.converged);
  // Round 0 only broadcasts, so protocol rounds = oracle sweeps.
  CHECK(out.rounds_used == oracle.report.iterations);
  for (int i = 0; i < dim; ++i)
    CHECK(max_abs_diff(out.states[i].estimate, oracle.solutions[i]) < 1e-12);
}

TEST_CASE("write_message_log emits one json object per record") {
  const std::string path_name = "simnet_log_test.jsonl";
  write_message_log(path_name, {{0, 1, 2, 8}, {1, 2, 1, 16}});
  std::ifstream in(path_name);
  REQUIRE(in.good());
  std::string line;
  std::getline(in, line);
  CHECK(line == R"({"from":1,"payload_size":8,"round":0,"to":2})");
  std::getline(in, line);
  CHECK(line == R"({"from":2,"payload_size":16,"round":1,"to":1})");
  in.close();
  std::remove(path_name.c_str());
}
