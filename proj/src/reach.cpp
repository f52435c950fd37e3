#include "polyreach/reach.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <utility>

#include "polyreach/consensus.hpp"
#include "polyreach/dle.hpp"
#include "polyreach/errors.hpp"

namespace polyreach {

namespace {

constexpr double support_identity_tol = 1e-9;
constexpr double costate_floor = 1e-14;

void require(bool ok, const std::string& msg) {
  if (!ok) throw InvalidInput(msg);
}

void check_costate_scale(const Vec& costate, int step, int trace) {
  if (two_norm(costate) < costate_floor)
    throw NonConvergence("costate norm collapsed at step " + std::to_string(step) + " trace " +
                             std::to_string(trace) + "; the halfspace is no longer meaningful",
                         step, two_norm(costate));
}

Vec slice(const Vec& v, int first, int count) {
  return Vec(v.begin() + first, v.begin() + first + count);
}

bool factors_consistent(const StackedSystem& sys) {
  if (static_cast<int>(sys.W_factors.size()) != sys.agent_count()) return false;
  std::size_t count = 1;
  for (const VPolytope& f : sys.W_factors) count *= f.vertices.size();
  return count == sys.W.vertices.size();
}

}  // namespace

int ReachConfig::steps() const {
  require(std::isfinite(t0) && std::isfinite(tau) && std::isfinite(dt), "times must be finite");
  require(dt > 0, "dt must be positive");
  require(tau >= t0, "tau must not precede t0");
  const double raw = (tau - t0) / dt;
  const int n = static_cast<int>(std::lround(raw));
  require(std::abs(raw - n) <= 1e-9 * std::max(1.0, raw),
          "horizon must be an integer number of steps");
  require(dle_tol > 0, "d-le tolerance must be positive");
  require(dle_max_iter >= 0, "d-le iteration budget must be non-negative");
  require(consensus_rounds >= 0, "consensus round count must be non-negative");
  return n;
}

HPolytope ReachResult::outer_at(int step) const {
  require(0 <= step && step <= steps(), "step out of range");
  std::vector<Halfspace> faces;
  faces.reserve(traces.size());
  for (const HyperplaneTrace& tr : traces)
    faces.emplace_back(tr.costate[step], tr.support_offset[step]);
  return HPolytope(std::move(faces), static_cast<int>(traces[0].costate[0].size()));
}

VPolytope ReachResult::inner_at(int step) const {
  require(0 <= step && step <= steps(), "step out of range");
  std::vector<Vec> points;
  points.reserve(traces.size());
  for (const HyperplaneTrace& tr : traces) points.push_back(tr.contact[step]);
  return dedup_vertices(points, static_cast<int>(traces[0].contact[0].size()));
}

std::vector<HyperplaneTrace> init_traces(const StackedSystem& sys) {
  std::vector<HyperplaneTrace> traces;
  const HPolytope& faces = sys.X0.faces;
  traces.reserve(faces.faces.size());
  for (int j = 0; j < static_cast<int>(faces.faces.size()); ++j) {
    const Halfspace& face = faces.faces[j];
    const SupportHit hit = support_vertex(sys.X0.vertices, face.normal);
    require(std::abs(hit.value - face.offset) <= support_identity_tol,
            "initial set face " + std::to_string(j) +
                ": support value disagrees with the face offset by " +
                std::to_string(std::abs(hit.value - face.offset)));
    HyperplaneTrace tr;
    tr.face = j;
    tr.costate.push_back(face.normal);
    tr.contact.push_back(hit.vertex);
    tr.support_offset.push_back(face.offset);
    traces.push_back(std::move(tr));
  }
  return traces;
}

Vec costate_step_centralized(const Vec& costate, const StackedSystem& sys, double dt) {
  const Matrix flow = state_transition(sys.A.transpose() * -1.0, dt);
  return flow * costate;
}

Vec contact_step_centralized(const Vec& contact, const Vec& disturbance,
                             const StackedSystem& sys, double dt) {
  const auto [ad, bd] = zoh_pair(sys.A, dt);
  return add_scaled(ad * contact, 1.0, bd * (sys.B * disturbance));
}

DisturbanceChoice optimal_disturbance(const Vec& costate, const StackedSystem& sys,
                                      DisturbanceMode mode) {
  require(costate.size() == static_cast<std::size_t>(sys.state_dim()),
          "costate dimension mismatch");
  const Vec direction = sys.B.transpose() * costate;

  DisturbanceChoice choice;
  if (mode == DisturbanceMode::stacked) {
    const SupportHit hit = support_vertex(sys.W, direction);
    choice.w = hit.vertex;
    choice.vertex_id = hit.index;
    if (factors_consistent(sys)) {
      // Joint ids enumerate factors with the last one fastest; peel from the
      // right to recover the per-factor picks.
      long long rest = hit.index;
      choice.factor_ids.assign(sys.agent_count(), 0);
      for (int i = sys.agent_count(); i-- > 0;) {
        const long long size = static_cast<long long>(sys.W_factors[i].vertices.size());
        choice.factor_ids[i] = static_cast<int>(rest % size);
        rest /= size;
      }
    }
    return choice;
  }

  require(factors_consistent(sys),
          "product-mode selection needs the per-agent disturbance vertex lists");
  choice.w.reserve(direction.size());
  choice.factor_ids.reserve(sys.agent_count());
  for (int i = 0; i < sys.agent_count(); ++i) {
    const Vec dir_i = slice(direction, sys.disturbance_offset(i), sys.disturbance_dims[i]);
    const SupportHit hit = support_vertex(sys.W_factors[i], dir_i);
    choice.vertex_id =
        choice.vertex_id * static_cast<long long>(sys.W_factors[i].vertices.size()) + hit.index;
    choice.factor_ids.push_back(hit.index);
    choice.w.insert(choice.w.end(), hit.vertex.begin(), hit.vertex.end());
  }
  return choice;
}

ReachResult reach_centralized(const StackedSystem& sys, const ReachConfig& cfg) {
  const int steps = cfg.steps();
  const int n = sys.state_dim();

  Matrix costate_op, contact_a, contact_b;
  if (cfg.integrator == Integrator::exponential) {
    costate_op = state_transition(sys.A.transpose() * -1.0, cfg.dt);
    auto [ad, bd] = zoh_pair(sys.A, cfg.dt);
    contact_a = std::move(ad);
    contact_b = bd * sys.B;
  } else {
    costate_op = inverse(Matrix::identity(n) + sys.A.transpose() * cfg.dt);
    contact_a = inverse(Matrix::identity(n) - sys.A * cfg.dt);
    contact_b = contact_a * sys.B * cfg.dt;
  }

  ReachResult res;
  res.agent = -1;
  res.traces = init_traces(sys);
  res.times.reserve(steps + 1);
  for (int k = 0; k <= steps; ++k) res.times.push_back(cfg.t0 + k * cfg.dt);

  for (int k = 0; k < steps; ++k) {
    for (int j = 0; j < static_cast<int>(res.traces.size()); ++j) {
      HyperplaneTrace& tr = res.traces[j];
      Vec lam = costate_op * tr.costate.back();
      check_costate_scale(lam, k + 1, j);
      DisturbanceChoice choice = optimal_disturbance(lam, sys, cfg.disturbance_mode);
      Vec xi = add_scaled(contact_a * tr.contact.back(), 1.0, contact_b * choice.w);
      tr.support_offset.push_back(dot(lam, xi));
      tr.costate.push_back(std::move(lam));
      tr.contact.push_back(std::move(xi));
      tr.disturbance.push_back(std::move(choice.w));
    }
  }
  return res;
}

std::vector<ReachResult> reach_distributed(const StackedSystem& sys,
                                           const std::vector<InformationSet>& agents,
                                           const GraphSchedule& schedule,
                                           const ReachConfig& cfg) {
  const int steps = cfg.steps();
  const int n_agents = static_cast<int>(agents.size());
  const int n = sys.state_dim();
  require(n_agents >= 1, "need at least one agent");
  require(static_cast<int>(sys.state_dims.size()) == n_agents,
          "stacked system does not match the agent count");
  require(schedule.node_count() == n_agents, "schedule node count must match the agent count");
  for (int i = 0; i < n_agents; ++i)
    require(agents[i].agent_id == i, "agents must be listed in id order");

  if (cfg.use_vertex_shares) {
    std::vector<bool> covered(sys.W.vertices.size(), false);
    for (const InformationSet& info : agents)
      for (int id : info.vertex_share) {
        require(0 <= id && id < static_cast<int>(sys.W.vertices.size()),
                "agent " + std::to_string(info.agent_id) + ": vertex share id out of range");
        covered[id] = true;
      }
    for (bool c : covered)
      require(c, "vertex shares must cover every disturbance vertex");
  } else {
    require(factors_consistent(sys),
            "per-factor selection needs the per-agent disturbance vertex lists");
  }

  std::vector<std::string> warnings;
  if (schedule.mode() == GraphSchedule::Mode::fixed) {
    if (!is_connected(schedule.at(0)))
      warnings.push_back("communication graph is not connected; consensus cannot complete");
  } else if (!is_repeatedly_jointly_strongly_connected(schedule, schedule.period())) {
    warnings.push_back(
        "schedule is not repeatedly jointly strongly connected over its period; "
        "consensus may stall");
  }

  const Matrix m_costate = Matrix::identity(n) + sys.A.transpose() * cfg.dt;
  const Matrix m_contact = Matrix::identity(n) - sys.A * cfg.dt;
  std::vector<Matrix> costate_rows, contact_rows, b1_t;
  costate_rows.reserve(n_agents);
  contact_rows.reserve(n_agents);
  b1_t.reserve(n_agents);
  for (int i = 0; i < n_agents; ++i) {
    const int off = sys.state_offset(i);
    const int cnt = sys.state_dims[i];
    costate_rows.push_back(m_costate.row_slice(off, off + cnt));
    contact_rows.push_back(m_contact.row_slice(off, off + cnt));
    b1_t.push_back(agents[i].model.B1.transpose());
  }
  const Matrix b_t = sys.B.transpose();

  const std::vector<HyperplaneTrace> seed = init_traces(sys);
  const int n_traces = static_cast<int>(seed.size());

  std::vector<ReachResult> results(n_agents);
  for (int a = 0; a < n_agents; ++a) {
    results[a].agent = a;
    results[a].traces = seed;
    results[a].warnings = warnings;
    results[a].times.reserve(steps + 1);
    for (int k = 0; k <= steps; ++k) results[a].times.push_back(cfg.t0 + k * cfg.dt);
  }

  const auto solve_named = [&](const DleProblem& p, const std::vector<Vec>& warm,
                               const char* what, int step, int trace) {
    try {
      return dle_solve(p, schedule, cfg.dle_tol, cfg.dle_max_iter, &warm, false);
    } catch (const NonConvergence& e) {
      throw NonConvergence("step " + std::to_string(step) + " trace " + std::to_string(trace) +
                               ": " + what + " equation did not reach agreement: " + e.what(),
                           e.iterations, e.last_residual);
    }
  };

  long long sweeps = 0;
  long long consensus_total = 0;
  for (int k = 0; k < steps; ++k) {
    for (int j = 0; j < n_traces; ++j) {
      DleProblem costate_problem;
      costate_problem.dimension = n;
      std::vector<Vec> warm;
      warm.reserve(n_agents);
      for (int a = 0; a < n_agents; ++a) {
        const Vec& prev = results[a].traces[j].costate.back();
        costate_problem.agents.push_back(
            DleRowBlock{costate_rows[a], slice(prev, sys.state_offset(a), sys.state_dims[a])});
        warm.push_back(prev);
      }
      const DleOutcome costate_out =
          solve_named(costate_problem, warm, "costate", k + 1, j);
      sweeps += costate_out.report.iterations;
      for (int a = 0; a < n_agents; ++a) check_costate_scale(costate_out.solutions[a], k + 1, j);

      std::vector<Vec> picks(n_agents);
      if (cfg.use_vertex_shares) {
        std::vector<Candidate> candidates;
        candidates.reserve(n_agents);
        for (int a = 0; a < n_agents; ++a)
          candidates.push_back(local_argmax(sys.W, agents[a].vertex_share,
                                            b_t * costate_out.solutions[a]));
        const int rounds =
            cfg.consensus_rounds > 0 ? cfg.consensus_rounds : consensus_round_bound(schedule);
        candidates = max_consensus(std::move(candidates), schedule, rounds);
        consensus_total += rounds;
        for (int a = 0; a < n_agents; ++a) picks[a] = candidates[a].payload;
      } else {
        Vec joint;
        joint.reserve(sys.disturbance_dim());
        for (int i = 0; i < n_agents; ++i) {
          const Vec dir_i =
              b1_t[i] * slice(costate_out.solutions[i], sys.state_offset(i), sys.state_dims[i]);
          const SupportHit hit = support_vertex(sys.W_factors[i], dir_i);
          joint.insert(joint.end(), hit.vertex.begin(), hit.vertex.end());
        }
        for (int a = 0; a < n_agents; ++a) picks[a] = joint;
      }

      DleProblem contact_problem;
      contact_problem.dimension = n;
      warm.clear();
      for (int a = 0; a < n_agents; ++a) {
        const Vec& prev = results[a].traces[j].contact.back();
        const Vec w_block = slice(picks[a], sys.disturbance_offset(a), sys.disturbance_dims[a]);
        Vec rhs = add_scaled(slice(prev, sys.state_offset(a), sys.state_dims[a]), cfg.dt,
                             agents[a].model.B1 * w_block);
        contact_problem.agents.push_back(DleRowBlock{contact_rows[a], std::move(rhs)});
        warm.push_back(prev);
      }
      const DleOutcome contact_out =
          solve_named(contact_problem, warm, "contact", k + 1, j);
      sweeps += contact_out.report.iterations;

      for (int a = 0; a < n_agents; ++a) {
        HyperplaneTrace& tr = results[a].traces[j];
        tr.support_offset.push_back(dot(costate_out.solutions[a], contact_out.solutions[a]));
        tr.costate.push_back(costate_out.solutions[a]);
        tr.contact.push_back(contact_out.solutions[a]);
        tr.disturbance.push_back(picks[a]);
      }
    }
  }
  for (int a = 0; a < n_agents; ++a) {
    results[a].dle_sweeps_total = sweeps;
    results[a].consensus_rounds_total = consensus_total;
  }
  return results;
}

std::vector<AgentView> per_agent_views(const ReachResult& result, const StackedSystem& sys) {
  require(!result.traces.empty(), "result has no traces");
  const int steps = result.steps();
  const int n = sys.state_dim();
  require(static_cast<int>(result.traces[0].costate[0].size()) == n,
          "result dimension does not match the system");

  std::vector<std::vector<Vec>> normals_by_step(steps + 1);
  std::vector<Vec> offsets_by_step(steps + 1);
  for (int s = 0; s <= steps; ++s) {
    for (const HyperplaneTrace& tr : result.traces) {
      normals_by_step[s].push_back(tr.costate[s]);
      offsets_by_step[s].push_back(tr.support_offset[s]);
    }
  }

  std::vector<AgentView> views;
  views.reserve(sys.agent_count());
  for (int a = 0; a < sys.agent_count(); ++a) {
    AgentView view;
    view.agent = a;
    const int off = sys.state_offset(a);
    const int cnt = sys.state_dims[a];
    for (int s = 0; s <= steps; ++s) {
      Vec lo(cnt), hi(cnt);
      bool degenerate = false;
      for (int c = 0; c < cnt; ++c) {
        Vec objective(n, 0.0);
        objective[off + c] = 1.0;
        LpProblem lp{objective, normals_by_step[s], offsets_by_step[s],
                     LpProblem::Sense::minimize};
        try {
          lo[c] = solve_lp(lp).value;
          lp.sense = LpProblem::Sense::maximize;
          hi[c] = solve_lp(lp).value;
        } catch (const InvalidInput&) {
          degenerate = true;
          lo[c] = std::numeric_limits<double>::quiet_NaN();
          hi[c] = std::numeric_limits<double>::quiet_NaN();
        }
      }
      std::vector<Vec> points;
      points.reserve(result.traces.size());
      for (const HyperplaneTrace& tr : result.traces)
        points.push_back(slice(tr.contact[s], off, cnt));
      view.lower.push_back(std::move(lo));
      view.upper.push_back(std::move(hi));
      view.points.push_back(dedup_vertices(points, cnt).vertices);
      view.degenerate.push_back(degenerate);
    }
    views.push_back(std::move(view));
  }
  return views;
}

ContainmentReport verify_containment(const ReachResult& result, const StackedSystem& sys,
                                     const ReachConfig& cfg, int n_samples, std::uint64_t seed) {
  const int steps = cfg.steps();
  require(result.steps() == steps, "result was produced with a different step count");
  require(n_samples >= 0, "sample count must be non-negative");

  ContainmentReport rep;
  rep.samples = n_samples;

  const double neg_inf = -std::numeric_limits<double>::infinity();
  rep.worst_inner_margin = neg_inf;
  for (int s = 0; s <= steps; ++s) {
    for (int t = 0; t < static_cast<int>(result.traces.size()); ++t) {
      const Vec& point = result.traces[t].contact[s];
      for (int f = 0; f < static_cast<int>(result.traces.size()); ++f) {
        const double margin =
            dot(result.traces[f].costate[s], point) - result.traces[f].support_offset[s];
        if (margin > rep.worst_inner_margin) {
          rep.worst_inner_margin = margin;
          rep.worst_inner_step = s;
          rep.worst_inner_trace = t;
          rep.worst_inner_face = f;
        }
      }
    }
  }
  rep.inner_pass = rep.worst_inner_margin <= rep.inner_tol;

  std::mt19937_64 engine(seed);
  const auto unit = [&engine]() {
    return (static_cast<double>(engine() >> 11) + 0.5) * 0x1p-53;
  };
  const auto [ad, bd] = zoh_pair(sys.A, cfg.dt);
  const Matrix bd_b = bd * sys.B;
  const std::vector<Vec>& starts = sys.X0.vertices.vertices;
  const std::size_t w_count = sys.W.vertices.size();

  rep.worst_sample_margin = neg_inf;
  for (int sample = 0; sample < n_samples; ++sample) {
    std::vector<double> weights(starts.size());
    double total = 0;
    for (double& w : weights) {
      w = -std::log(unit());
      total += w;
    }
    Vec x(sys.state_dim(), 0.0);
    for (std::size_t i = 0; i < starts.size(); ++i)
      x = add_scaled(x, weights[i] / total, starts[i]);

    for (int s = 0;; ++s) {
      for (const HyperplaneTrace& tr : result.traces) {
        const double margin = dot(tr.costate[s], x) - tr.support_offset[s];
        if (margin > rep.worst_sample_margin) {
          rep.worst_sample_margin = margin;
          rep.worst_sample = sample;
          rep.worst_sample_step = s;
        }
      }
      if (s == steps) break;
      const Vec& w = sys.W.vertices[static_cast<std::size_t>(engine() % w_count)];
      x = add_scaled(ad * x, 1.0, bd_b * w);
    }
  }
  if (rep.worst_sample < 0) rep.worst_sample_margin = 0;
  rep.samples_pass = rep.worst_sample_margin <= rep.sample_tol;
  rep.pass = rep.inner_pass && rep.samples_pass;
  return rep;
}

}  // namespace polyreach
