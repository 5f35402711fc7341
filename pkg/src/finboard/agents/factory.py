"""Build agents from JSON specs ({"type": ..., ...})."""

from __future__ import annotations

from ..core.rng import RngStream
from .base import Agent
from .baselines import BrokenAgent, PreferActionAgent, RandomAgent


def build_agent(spec: dict, rng: RngStream) -> Agent:
    kind = spec.get("type", "random")
    if kind == "random":
        agent = RandomAgent(rng)
    elif kind == "broken":
        agent = BrokenAgent()
    elif kind == "prefer":
        agent = PreferActionAgent(spec.get("prefer", []), rng)
    elif kind == "heuristic":
        from .heuristic import HeuristicAgent

        agent = HeuristicAgent.from_spec(spec, rng)
    elif kind == "remote":
        from .remote import RemoteAgent, RemoteAgentConfig

        agent = RemoteAgent(RemoteAgentConfig.from_spec(spec))
    else:
        raise ValueError(f"unknown agent type {kind!r}")
    agent.label = spec.get("label", kind)
    return agent


def is_deterministic(spec: dict) -> bool:
    """True when the agent type replays identically from the match seed."""
    return spec.get("type", "random") != "remote"
