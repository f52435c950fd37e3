#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

namespace polyreach {

/* Command implementations behind the executable, separated so tests can call
 * them in-process.  Each returns the process exit code: 0 success, 1 a
 * verification failure, 2 invalid input, 3 non-convergence.  Optional fields
 * override the values from the scenario file. */

struct RunOptions {
  std::string scenario_path;
  std::string out_dir = "out";
  std::string format = "both";  // csv | jsonl | both
  bool oracle = false;          // run the centralized computation instead
  std::optional<double> tau;
  std::optional<double> dt;
  std::optional<double> tol;  // d-LE disagreement tolerance
  std::optional<int> max_iters;
  std::optional<int> rounds;
  std::optional<std::uint64_t> seed;
};
int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err);

struct VerifyOptions {
  std::string scenario_path;
  std::string out_dir = "out";
  std::optional<double> tau;
  std::optional<double> dt;
  std::optional<double> tol;  // gamma agreement gate, default 1e-6
  std::optional<int> max_iters;
  std::optional<int> rounds;
  std::optional<int> samples;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> traces_path;  // previously exported rows to audit
};
int cmd_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err);

struct GraphcheckOptions {
  std::string scenario_path;
  std::optional<int> window;  // composition window, default: schedule period
};
int cmd_graphcheck(const GraphcheckOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace polyreach
