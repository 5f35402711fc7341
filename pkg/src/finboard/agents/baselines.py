"""Baseline agents: uniform-random play, scripted replay, fault injection."""

from __future__ import annotations

from ..core.faults import AgentFailure
from ..core.protocol import ERR_FORMAT, ActionCatalog, Decision, Observation
from ..core.rng import RngStream
from .base import Agent


class RandomAgent(Agent):
    """Uniform choice over catalog actions, parameters uniform per slot.

    Uses its own seeded stream, independent of game randomness, so retry
    counts can never perturb the match.
    """

    label = "random"

    def __init__(self, rng: RngStream):
        self.rng = rng

    def decide(self, observation, catalog: ActionCatalog, memory) -> Decision:
        spec = self.rng.choice(catalog.actions)
        params = spec.sample_params(self.rng)
        return Decision(spec.name, params, rationale="uniform baseline")


class ScriptedAgent(Agent):
    """Plays a fixed decision sequence; falls back to the catalog fallback
    when the script runs dry.  Meant for tests and log-driven replay."""

    label = "scripted"

    def __init__(self, script: list[Decision], default_to_fallback: bool = True):
        self.script = list(script)
        self.default_to_fallback = default_to_fallback
        self._cursor = 0

    def decide(self, observation, catalog: ActionCatalog, memory) -> Decision:
        if self._cursor < len(self.script):
            decision = self.script[self._cursor]
            self._cursor += 1
            return decision
        if self.default_to_fallback:
            return catalog.fallback
        raise AgentFailure(ERR_FORMAT, "script exhausted")


class BrokenAgent(Agent):
    """Always errors: exercises retry feedback and system takeover paths."""

    label = "broken"

    def decide(self, observation: Observation, catalog, memory) -> Decision:
        raise AgentFailure(ERR_FORMAT, "unparseable agent output")


class PreferActionAgent(Agent):
    """Picks the first catalog action from a preference list, sampling
    parameters; otherwise behaves like the random baseline."""

    label = "prefer"

    def __init__(self, preferences: list[str], rng: RngStream):
        self.preferences = preferences
        self.rng = rng

    def decide(self, observation, catalog: ActionCatalog, memory) -> Decision:
        for name in self.preferences:
            spec = catalog.get(name)
            if spec is not None:
                return Decision(spec.name, spec.sample_params(self.rng))
        spec = self.rng.choice(catalog.actions)
        return Decision(spec.name, spec.sample_params(self.rng))
