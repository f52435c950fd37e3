#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <utility>

#include "polyreach/errors.hpp"
#include "polyreach/model.hpp"
#include "polyreach/reach.hpp"
#include "polyreach/scenario.hpp"

namespace py = pybind11;
using namespace polyreach;

namespace {

struct Built {
  std::vector<InformationSet> agents;
  StackedSystem sys;
};

Built build(const Scenario& sc) {
  std::vector<InformationSet> agents = build_information_sets(sc.models, sc.graph);
  StackedSystem sys = assemble_stacked(agents, sc.graph);
  return Built{std::move(agents), std::move(sys)};
}

}  // namespace

PYBIND11_MODULE(_polyreach, m) {
  m.doc() = "polytopic reachable sets for coupled agent networks";

  py::register_exception<InvalidInput>(m, "InvalidInputError", PyExc_ValueError);
  py::register_exception<NonConvergence>(m, "NonConvergenceError", PyExc_RuntimeError);

  py::enum_<Integrator>(m, "Integrator")
      .value("exponential", Integrator::exponential)
      .value("implicit_euler", Integrator::implicit_euler);
  py::enum_<DisturbanceMode>(m, "DisturbanceMode")
      .value("stacked", DisturbanceMode::stacked)
      .value("product", DisturbanceMode::product);

  py::class_<ReachConfig>(m, "ReachConfig")
      .def(py::init<>())
      .def_readwrite("t0", &ReachConfig::t0)
      .def_readwrite("tau", &ReachConfig::tau)
      .def_readwrite("dt", &ReachConfig::dt)
      .def_readwrite("dle_tol", &ReachConfig::dle_tol)
      .def_readwrite("dle_max_iter", &ReachConfig::dle_max_iter)
      .def_readwrite("consensus_rounds", &ReachConfig::consensus_rounds)
      .def_readwrite("use_vertex_shares", &ReachConfig::use_vertex_shares)
      .def_readwrite("integrator", &ReachConfig::integrator)
      .def_readwrite("disturbance_mode", &ReachConfig::disturbance_mode)
      .def("steps", &ReachConfig::steps);

  py::class_<HyperplaneTrace>(m, "HyperplaneTrace")
      .def_readonly("face", &HyperplaneTrace::face)
      .def_readonly("costate", &HyperplaneTrace::costate)
      .def_readonly("contact", &HyperplaneTrace::contact)
      .def_readonly("support_offset", &HyperplaneTrace::support_offset)
      .def_readonly("disturbance", &HyperplaneTrace::disturbance);

  py::class_<ReachResult>(m, "ReachResult")
      .def_readonly("agent", &ReachResult::agent)
      .def_readonly("times", &ReachResult::times)
      .def_readonly("traces", &ReachResult::traces)
      .def_readonly("dle_sweeps_total", &ReachResult::dle_sweeps_total)
      .def_readonly("consensus_rounds_total", &ReachResult::consensus_rounds_total)
      .def_readonly("warnings", &ReachResult::warnings)
      .def("steps", &ReachResult::steps)
      .def("gammas",
           [](const ReachResult& r, int trace) { return r.traces.at(trace).support_offset; })
      .def("outer_normals",
           [](const ReachResult& r, int step) {
             std::vector<Vec> normals;
             for (const HyperplaneTrace& tr : r.traces) normals.push_back(tr.costate.at(step));
             return normals;
           })
      .def("outer_offsets",
           [](const ReachResult& r, int step) {
             Vec offsets;
             for (const HyperplaneTrace& tr : r.traces)
               offsets.push_back(tr.support_offset.at(step));
             return offsets;
           })
      .def("contacts", [](const ReachResult& r, int step) { return r.inner_at(step).vertices; });

  py::class_<AgentView>(m, "AgentView")
      .def_readonly("agent", &AgentView::agent)
      .def_readonly("lower", &AgentView::lower)
      .def_readonly("upper", &AgentView::upper)
      .def_readonly("points", &AgentView::points)
      .def_readonly("degenerate", &AgentView::degenerate);

  py::class_<ContainmentReport>(m, "ContainmentReport")
      .def_readonly("ok", &ContainmentReport::pass)
      .def_readonly("inner_ok", &ContainmentReport::inner_pass)
      .def_readonly("samples_ok", &ContainmentReport::samples_pass)
      .def_readonly("samples", &ContainmentReport::samples)
      .def_readonly("worst_sample_margin", &ContainmentReport::worst_sample_margin)
      .def_readonly("worst_inner_margin", &ContainmentReport::worst_inner_margin);

  py::class_<Scenario>(m, "Scenario")
      .def_readonly("name", &Scenario::name)
      .def_readwrite("config", &Scenario::config)
      .def_readwrite("seed", &Scenario::seed)
      .def_readwrite("samples", &Scenario::samples)
      .def("agent_count",
           [](const Scenario& sc) { return static_cast<int>(sc.models.size()); });

  m.def("load_scenario", &load_scenario, py::arg("path"));
  m.def("parse_scenario", &parse_scenario, py::arg("text"), py::arg("origin") = "<string>");
  m.def(
      "run_centralized",
      [](const Scenario& sc) {
        const Built b = build(sc);
        return reach_centralized(b.sys, sc.config);
      },
      py::arg("scenario"));
  m.def(
      "run_distributed",
      [](const Scenario& sc) {
        const Built b = build(sc);
        return reach_distributed(b.sys, b.agents, sc.schedule, sc.config);
      },
      py::arg("scenario"));
  m.def(
      "agent_views",
      [](const Scenario& sc, const ReachResult& r) {
        const Built b = build(sc);
        return per_agent_views(r, b.sys);
      },
      py::arg("scenario"), py::arg("result"));
  m.def(
      "check_containment",
      [](const Scenario& sc, const ReachResult& r, int samples, std::uint64_t seed) {
        const Built b = build(sc);
        return verify_containment(r, b.sys, sc.config, samples, seed);
      },
      py::arg("scenario"), py::arg("result"), py::arg("samples") = 1000, py::arg("seed") = 1);
}
