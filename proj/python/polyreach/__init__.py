"""Polytopic reachable sets for coupled agent networks."""

from ._polyreach import (
    AgentView,
    ContainmentReport,
    DisturbanceMode,
    HyperplaneTrace,
    Integrator,
    InvalidInputError,
    NonConvergenceError,
    ReachConfig,
    ReachResult,
    Scenario,
    agent_views,
    check_containment,
    load_scenario,
    parse_scenario,
    run_centralized,
    run_distributed,
)

__all__ = [
    "AgentView",
    "ContainmentReport",
    "DisturbanceMode",
    "HyperplaneTrace",
    "Integrator",
    "InvalidInputError",
    "NonConvergenceError",
    "ReachConfig",
    "ReachResult",
    "Scenario",
    "agent_views",
    "check_containment",
    "load_scenario",
    "parse_scenario",
    "run_centralized",
    "run_distributed",
]
