#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "polyreach/cli.hpp"

namespace {

/* Parse targets for flags whose absence must stay observable; values are
 * copied into the option structs only when the flag was given. */
struct FlagSlots {
  double tau = 0;
  double dt = 0;
  double tol = 0;
  int max_iters = 0;
  int rounds = 0;
  int samples = 0;
  int window = 0;
  std::uint64_t seed = 0;
  std::string traces;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polytopic reachable sets for coupled agent networks"};
  app.require_subcommand(1);

  polyreach::RunOptions run_opts;
  FlagSlots rs;
  CLI::App* run = app.add_subcommand("run", "propagate hyperplane traces and export them");
  run->add_option("scenario", run_opts.scenario_path, "scenario JSON file")->required();
  run->add_option("--out", run_opts.out_dir, "output directory (default: out)");
  run->add_option("--format", run_opts.format, "trace file format: csv, jsonl, or both");
  run->add_flag("--oracle", run_opts.oracle, "run the centralized computation instead");
  run->add_option("--tau", rs.tau, "horizon end time");
  run->add_option("--dt", rs.dt, "step size");
  run->add_option("--tol", rs.tol, "d-LE disagreement tolerance");
  run->add_option("--max-iters", rs.max_iters, "d-LE sweep budget per solve");
  run->add_option("--rounds", rs.rounds, "max-consensus rounds (0: schedule bound)");
  run->add_option("--seed", rs.seed, "seed recorded in the report");

  polyreach::VerifyOptions verify_opts;
  FlagSlots vs;
  CLI::App* verify =
      app.add_subcommand("verify", "cross-check the distributed run against centralized oracles");
  verify->add_option("scenario", verify_opts.scenario_path, "scenario JSON file")->required();
  verify->add_option("--out", verify_opts.out_dir, "output directory for report.json");
  verify->add_option("--tau", vs.tau, "horizon end time");
  verify->add_option("--dt", vs.dt, "step size");
  verify->add_option("--tol", vs.tol, "gamma agreement tolerance (default 1e-6)");
  verify->add_option("--max-iters", vs.max_iters, "d-LE sweep budget per solve");
  verify->add_option("--rounds", vs.rounds, "max-consensus rounds (0: schedule bound)");
  verify->add_option("--samples", vs.samples, "sampled trajectory count");
  verify->add_option("--seed", vs.seed, "sampling seed");
  verify->add_option("--traces", vs.traces, "audit a previously exported trace file");

  polyreach::GraphcheckOptions graph_opts;
  FlagSlots gs;
  CLI::App* graphcheck =
      app.add_subcommand("graphcheck", "connectivity report for the communication schedule");
  graphcheck->add_option("scenario", graph_opts.scenario_path, "scenario JSON file")->required();
  graphcheck->add_option("--window", gs.window, "composition window (default: schedule period)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (run->parsed()) {
    if (run->count("--tau")) run_opts.tau = rs.tau;
    if (run->count("--dt")) run_opts.dt = rs.dt;
    if (run->count("--tol")) run_opts.tol = rs.tol;
    if (run->count("--max-iters")) run_opts.max_iters = rs.max_iters;
    if (run->count("--rounds")) run_opts.rounds = rs.rounds;
    if (run->count("--seed")) run_opts.seed = rs.seed;
    return polyreach::cmd_run(run_opts, std::cout, std::cerr);
  }
  if (verify->parsed()) {
    if (verify->count("--tau")) verify_opts.tau = vs.tau;
    if (verify->count("--dt")) verify_opts.dt = vs.dt;
    if (verify->count("--tol")) verify_opts.tol = vs.tol;
    if (verify->count("--max-iters")) verify_opts.max_iters = vs.max_iters;
    if (verify->count("--rounds")) verify_opts.rounds = vs.rounds;
    if (verify->count("--samples")) verify_opts.samples = vs.samples;
    if (verify->count("--seed")) verify_opts.seed = vs.seed;
    if (verify->count("--traces")) verify_opts.traces_path = vs.traces;
    return polyreach::cmd_verify(verify_opts, std::cout, std::cerr);
  }
  if (graphcheck->parsed()) {
    if (graphcheck->count("--window")) graph_opts.window = gs.window;
    return polyreach::cmd_graphcheck(graph_opts, std::cout, std::cerr);
  }
  return 2;
}
