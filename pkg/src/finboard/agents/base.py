"""Agent interface: all players answer sub-decisions through `decide`."""

from __future__ import annotations

from ..core.memory import TurnEntry
from ..core.protocol import ActionCatalog, Decision, Observation


class Agent:
    """A decision source bound to one seat for the duration of a match.

    Implementations must be stateless per call apart from their own RNG or
    transport handle; a decision may only reference catalog actions
    (violations are counted as failures by the retry wrapper).
    """

    label = "agent"

    def decide(
        self,
        observation: Observation,
        catalog: ActionCatalog,
        memory: tuple[TurnEntry, ...],
    ) -> Decision:
        raise NotImplementedError
