#include "polyreach/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "polyreach/errors.hpp"
#include "polyreach/exports.hpp"
#include "polyreach/reach.hpp"
#include "polyreach/scenario.hpp"

namespace polyreach {

namespace {

using nlohmann::json;

struct Prepared {
  Scenario scenario;
  std::vector<InformationSet> agents;
  StackedSystem sys;
};

Prepared prepare(const std::string& path) {
  Scenario sc = load_scenario(path);
  std::vector<InformationSet> agents = build_information_sets(sc.models, sc.graph);
  StackedSystem sys = assemble_stacked(agents, sc.graph);
  return Prepared{std::move(sc), std::move(agents), std::move(sys)};
}

void apply_common(Scenario& sc, const std::optional<double>& tau, const std::optional<double>& dt,
                  const std::optional<int>& max_iters, const std::optional<int>& rounds,
                  const std::optional<std::uint64_t>& seed) {
  if (tau) sc.config.tau = *tau;
  if (dt) sc.config.dt = *dt;
  if (max_iters) sc.config.dle_max_iter = *max_iters;
  if (rounds) sc.config.consensus_rounds = *rounds;
  if (seed) sc.seed = *seed;
}

/* A short diagnosis attached to non-convergence errors when the schedule
 * could never have spread information everywhere. */
std::string connectivity_note(const GraphSchedule& s) {
  if (s.mode() == GraphSchedule::Mode::fixed) {
    if (!is_connected(s.at(0))) return "the communication graph is not connected";
  } else if (!is_repeatedly_jointly_strongly_connected(s, s.period())) {
    return "the schedule is not repeatedly jointly strongly connected over its period";
  }
  return {};
}

const char* verdict(bool pass) { return pass ? "PASS" : "FAIL"; }

struct Worst {
  double value = -std::numeric_limits<double>::infinity();
  int agent = -1;
  int trace = -1;
  int step = -1;
};

}  // namespace

int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    if (opts.format != "csv" && opts.format != "jsonl" && opts.format != "both")
      throw InvalidInput("--format must be csv or jsonl");
    Prepared p = prepare(opts.scenario_path);
    apply_common(p.scenario, opts.tau, opts.dt, opts.max_iters, opts.rounds, opts.seed);
    if (opts.tol) p.scenario.config.dle_tol = *opts.tol;
    const ReachConfig& cfg = p.scenario.config;
    const std::string note = connectivity_note(p.scenario.schedule);

    std::vector<ReachResult> results;
    try {
      if (opts.oracle)
        results.push_back(reach_centralized(p.sys, cfg));
      else
        results = reach_distributed(p.sys, p.agents, p.scenario.schedule, cfg);
    } catch (const NonConvergence& e) {
      err << "non-convergence: " << e.what();
      if (!note.empty()) err << " (" << note << ")";
      err << "\n";
      return 3;
    }

    std::filesystem::create_directories(opts.out_dir);
    const auto at = [&](const char* name) {
      return (std::filesystem::path(opts.out_dir) / name).string();
    };
    const std::vector<TraceRow> rows = flatten_traces(results);
    if (opts.format != "jsonl") write_traces_csv(at("traces.csv"), rows);
    if (opts.format != "csv") write_traces_jsonl(at("traces.jsonl"), rows);
    write_outer_json(opts.out_dir, results);

    std::vector<AgentView> views;
    if (opts.oracle) {
      views = per_agent_views(results[0], p.sys);
    } else {
      for (int a = 0; a < p.sys.agent_count(); ++a)
        views.push_back(per_agent_views(results[a], p.sys)[a]);
    }
    write_agent_boxes(at("agents_boxes.json"), views, results[0].times);

    RunSummary summary;
    summary.scenario = p.scenario.name;
    summary.mode = opts.oracle ? "centralized" : "distributed";
    summary.agents = p.sys.agent_count();
    summary.traces = static_cast<int>(results[0].traces.size());
    summary.steps = results[0].steps();
    summary.t0 = cfg.t0;
    summary.tau = cfg.tau;
    summary.dt = cfg.dt;
    summary.dle_sweeps_total = results[0].dle_sweeps_total;
    summary.consensus_rounds_total = results[0].consensus_rounds_total;
    summary.seed = p.scenario.seed;
    summary.warnings = results[0].warnings;
    write_run_report(at("report.json"), summary);

    for (const std::string& w : summary.warnings) err << "warning: " << w << "\n";
    out << p.scenario.name << ": " << summary.mode << ", " << summary.steps << " steps, "
        << summary.traces << " traces, " << summary.agents << " agents\n"
        << "d-LE sweeps total: " << summary.dle_sweeps_total << "\n"
        << "consensus rounds total: " << summary.consensus_rounds_total << "\n"
        << "wrote " << opts.out_dir << "\n";
    return 0;
  } catch (const NonConvergence& e) {
    err << "non-convergence: " << e.what() << "\n";
    return 3;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

int cmd_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    Prepared p = prepare(opts.scenario_path);
    apply_common(p.scenario, opts.tau, opts.dt, opts.max_iters, opts.rounds, opts.seed);
    if (opts.samples) p.scenario.samples = *opts.samples;
    const double gate = opts.tol.value_or(1e-6);
    const ReachConfig& cfg = p.scenario.config;
    const std::string note = connectivity_note(p.scenario.schedule);

    std::vector<ReachResult> dist;
    try {
      dist = reach_distributed(p.sys, p.agents, p.scenario.schedule, cfg);
    } catch (const NonConvergence& e) {
      err << "non-convergence: " << e.what();
      if (!note.empty()) err << " (" << note << ")";
      err << "\n";
      return 3;
    }

    ReachConfig cfg_ie = cfg;
    cfg_ie.integrator = Integrator::implicit_euler;
    const ReachResult oracle_ie = reach_centralized(p.sys, cfg_ie);
    ReachConfig cfg_exp = cfg;
    cfg_exp.integrator = Integrator::exponential;
    const ReachResult oracle_exp = reach_centralized(p.sys, cfg_exp);

    const ContainmentReport contain =
        verify_containment(oracle_exp, p.sys, cfg_exp, p.scenario.samples, p.scenario.seed);

    /* The distributed loop steps with an implicit-Euler pair whose costate
     * map is not the exact adjoint of its state map, so its own sandwich
     * carries an O(dt) defect.  The certified containment statement belongs
     * to the exact flow; the distributed margin is reported, not gated. */
    double dist_inner_worst = -std::numeric_limits<double>::infinity();
    int dist_inner_agent = -1;
    for (int a = 0; a < static_cast<int>(dist.size()); ++a) {
      const ContainmentReport rep = verify_containment(dist[a], p.sys, cfg, 0, 0);
      if (rep.worst_inner_margin > dist_inner_worst) {
        dist_inner_worst = rep.worst_inner_margin;
        dist_inner_agent = a;
      }
    }

    Worst gap, egap;
    for (int a = 0; a < static_cast<int>(dist.size()); ++a) {
      for (int j = 0; j < static_cast<int>(dist[a].traces.size()); ++j) {
        for (int k = 0; k <= dist[a].steps(); ++k) {
          const double g = dist[a].traces[j].support_offset[k];
          const double d_ie = std::abs(g - oracle_ie.traces[j].support_offset[k]);
          if (d_ie > gap.value) gap = Worst{d_ie, a, j, k};
          const double d_exp = std::abs(g - oracle_exp.traces[j].support_offset[k]);
          if (d_exp > egap.value) egap = Worst{d_exp, a, j, k};
        }
      }
    }
    const bool gamma_pass = gap.value <= gate;

    bool traces_pass = true;
    std::string traces_detail;
    if (opts.traces_path) {
      const std::vector<TraceRow> rows = load_traces(*opts.traces_path);
      double worst = 0;
      const TraceRow* bad = nullptr;
      for (const TraceRow& row : rows) {
        const double d = std::abs(row.gamma - dot(row.costate, row.contact));
        if (d > worst) {
          worst = d;
          bad = &row;
        }
      }
      if (worst > 1e-9 && bad != nullptr) {
        traces_pass = false;
        traces_detail = "trace " + std::to_string(bad->trace) + " step " +
                        std::to_string(bad->step) + " (agent " + std::to_string(bad->agent) +
                        "): gamma disagrees with <costate, contact> by " + std::to_string(worst);
      } else {
        traces_detail =
            std::to_string(rows.size()) + " rows, support identity within 1e-9";
      }
    }

    const bool pass = contain.pass && gamma_pass && traces_pass;

    std::filesystem::create_directories(opts.out_dir);
    json checks;
    checks["inner"] = {{"pass", contain.inner_pass},
                       {"worst_margin", contain.worst_inner_margin},
                       {"step", contain.worst_inner_step},
                       {"trace", contain.worst_inner_trace},
                       {"face", contain.worst_inner_face},
                       {"source", "exponential"}};
    checks["inner_distributed"] = {{"informational", true},
                                   {"worst_margin", dist_inner_worst},
                                   {"agent", dist_inner_agent}};
    checks["samples"] = {{"pass", contain.samples_pass},
                         {"count", contain.samples},
                         {"seed", p.scenario.seed},
                         {"worst_margin", contain.worst_sample_margin},
                         {"sample", contain.worst_sample},
                         {"step", contain.worst_sample_step}};
    checks["gamma_agreement"] = {{"pass", gamma_pass},
                                 {"tol", gate},
                                 {"worst_gap", gap.value},
                                 {"agent", gap.agent},
                                 {"trace", gap.trace},
                                 {"step", gap.step},
                                 {"oracle", "implicit_euler"}};
    checks["exponential_gap"] = {{"worst_gap", egap.value}, {"informational", true}};
    if (opts.traces_path)
      checks["traces_audit"] = {{"pass", traces_pass},
                                {"path", *opts.traces_path},
                                {"detail", traces_detail}};
    json report;
    report["scenario"] = p.scenario.name;
    report["pass"] = pass;
    report["checks"] = checks;
    std::ofstream rep_out((std::filesystem::path(opts.out_dir) / "report.json").string(),
                          std::ios::binary);
    if (!rep_out) throw InvalidInput(opts.out_dir + "/report.json: cannot open for writing");
    rep_out << report.dump(2) << "\n";

    out << "inner containment (exponential oracle): " << verdict(contain.inner_pass)
        << ", worst margin " << contain.worst_inner_margin << "\n";
    out << "inner margin of distributed copies (informational): "
        << dist_inner_worst << "\n";
    out << "sampled containment: " << verdict(contain.samples_pass) << ", " << contain.samples
        << " samples, worst margin " << contain.worst_sample_margin << "\n";
    out << "gamma agreement vs implicit-euler oracle: " << verdict(gamma_pass) << ", worst gap "
        << gap.value << " (tol " << gate << ")\n";
    out << "exponential-flow gap (informational): " << egap.value << "\n";
    if (opts.traces_path)
      out << "traces audit: " << verdict(traces_pass) << ", " << traces_detail << "\n";
    out << "verdict: " << verdict(pass) << "\n";
    return pass ? 0 : 1;
  } catch (const NonConvergence& e) {
    err << "non-convergence: " << e.what() << "\n";
    return 3;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

int cmd_graphcheck(const GraphcheckOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    const Scenario sc = load_scenario(opts.scenario_path);
    const GraphSchedule& s = sc.schedule;
    if (s.mode() == GraphSchedule::Mode::fixed) {
      const Graph& g = s.at(0);
      out << "mode: fixed, nodes " << g.node_count() << ", edges " << g.edges().size() << "\n";
      if (is_connected(g)) {
        out << "connected, diam " << diameter(g) << "\n";
        out << "max-consensus round bound: " << consensus_round_bound(s) << "\n";
        return 0;
      }
      out << "NOT connected\n";
      return 1;
    }

    const int window = opts.window.value_or(s.period());
    if (window < 1) throw InvalidInput("window must be at least 1");
    const int span = std::lcm(s.period(), window);
    out << "mode: periodic, period " << s.period() << ", window " << window << "\n";
    bool all_connected = true;
    for (int start = 0; start < span; start += window) {
      std::vector<Graph> graphs;
      graphs.reserve(window);
      for (int r = start; r < start + window; ++r) graphs.push_back(s.at(r));
      const DiGraph comp = compose_window(graphs);
      out << "window rounds [" << start << ", " << start + window << "): ";
      if (is_strongly_connected(comp)) {
        out << "strongly connected, diam " << diameter(comp) << "\n";
      } else {
        out << "NOT strongly connected\n";
        all_connected = false;
      }
      out << "  support:";
      bool any = false;
      for (int i = 0; i < comp.node_count; ++i)
        for (int j = 0; j < comp.node_count; ++j)
          if (i != j && comp.adj[i][j]) {
            out << " " << i << "->" << j;
            any = true;
          }
      if (!any) out << " (none)";
      out << "\n";
    }
    if (all_connected) {
      out << "jointly connected, window " << window << "\n";
      if (window == s.period())
        out << "max-consensus round bound: " << consensus_round_bound(s) << "\n";
      return 0;
    }
    out << "NOT jointly connected\n";
    return 1;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace polyreach
