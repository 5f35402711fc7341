"""The agent-facing decision protocol: observations, action catalogs, decisions.

Each sub-decision presents the agent with an :class:`Observation` of the
current state and an :class:`ActionCatalog` of legal actions.  The agent
answers with a :class:`Decision`, checked by :func:`validate_decision`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable

# Machine-readable failure categories fed back to agents on retry.
ERR_UNKNOWN_ACTION = "unknown-action"
ERR_MISSING_PARAMETER = "missing-parameter"
ERR_OUT_OF_RANGE = "parameter-out-of-range"
ERR_FORMAT = "format"


@dataclass(frozen=True)
class DecisionError:
    """Categorized validation failure, returned rather than raised."""

    category: str
    reason: str

    def feedback(self) -> str:
        return f"[{self.category}] {self.reason}"


class Slot:
    """One named parameter of an action, with a legal value range."""

    required = True

    def contains(self, value) -> bool:
        raise NotImplementedError

    def sample(self, rng):
        raise NotImplementedError

    def describe(self) -> str:
        raise NotImplementedError


@dataclass
class IntSlot(Slot):
    low: int
    high: int
    step: int = 1
    required: bool = True
    default: int = 0

    def contains(self, value) -> bool:
        if isinstance(value, bool) or not isinstance(value, int):
            return False
        return self.low <= value <= self.high and (value - self.low) % self.step == 0

    def sample(self, rng):
        n_steps = (self.high - self.low) // self.step
        return self.low + rng.randint(0, n_steps) * self.step

    def describe(self) -> str:
        step = f" step {self.step}" if self.step != 1 else ""
        return f"integer in [{self.low}, {self.high}]{step}"


@dataclass
class ChoiceSlot(Slot):
    options: list
    required: bool = True

    def contains(self, value) -> bool:
        return value in self.options

    def sample(self, rng):
        return rng.choice(self.options)

    def describe(self) -> str:
        return "one of " + ", ".join(repr(o) for o in self.options)


@dataclass
class SubsetSlot(Slot):
    """A list of distinct values drawn from a fixed option pool."""

    options: list
    min_size: int = 0
    max_size: int | None = None
    required: bool = True

    def contains(self, value) -> bool:
        if not isinstance(value, list):
            return False
        if len(set(map(str, value))) != len(value):
            return False
        limit = self.max_size if self.max_size is not None else len(self.options)
        if not self.min_size <= len(value) <= limit:
            return False
        return all(v in self.options for v in value)

    def sample(self, rng):
        limit = self.max_size if self.max_size is not None else len(self.options)
        size = rng.randint(self.min_size, min(limit, len(self.options)))
        return rng.sample(self.options, size)

    def describe(self) -> str:
        return f"list of distinct values from {self.options}"


@dataclass
class ActionSpec:
    """One legal action: a name, parameter slots, and optional cross checks.

    `constraint` validates relationships between slots that single-slot
    ranges cannot express (e.g. a stock disposition summing to the holding);
    `sampler` lets baseline agents draw a jointly valid parameter set.
    """

    name: str
    description: str = ""
    slots: dict[str, Slot] = field(default_factory=dict)
    constraint: Callable[[dict], str | None] | None = None
    sampler: Callable[[Any], dict] | None = None

    def sample_params(self, rng) -> dict:
        if self.sampler is not None:
            return self.sampler(rng)
        return {name: slot.sample(rng) for name, slot in self.slots.items()}


@dataclass
class Decision:
    """An agent's answer to one sub-decision."""

    action: str
    params: dict = field(default_factory=dict)
    rationale: str = ""
    annotations: dict = field(default_factory=dict)

    def to_payload(self) -> dict:
        return {"action": self.action, "params": self.params}


@dataclass
class ActionCatalog:
    """The legal actions for one phase, with the engine-chosen fallback.

    The issuing engine guarantees every listed action is legal, that the
    catalog is non-empty, and that at least one listed action closes the
    phase (`ending`).  `fallback` is the conservative decision applied when
    an agent exhausts its retry budget or the sub-decision cap.
    """

    phase: str
    actions: list[ActionSpec]
    fallback: Decision
    ending: frozenset[str]
    loop_id: str = "main"

    def __post_init__(self) -> None:
        if not self.actions:
            raise ValueError(f"empty catalog for phase {self.phase}")
        names = {a.name for a in self.actions}
        if not self.ending or not set(self.ending) <= names:
            raise ValueError(f"catalog for {self.phase} lacks a phase-ending action")
        if self.fallback.action not in names:
            raise ValueError(f"fallback {self.fallback.action} not in catalog")

    def get(self, name: str) -> ActionSpec | None:
        for spec in self.actions:
            if spec.name == name:
                return spec
        return None

    def names(self) -> list[str]:
        return [a.name for a in self.actions]


@dataclass
class Observation:
    """Everything an agent sees for one sub-decision.

    State snapshots are built lazily: baseline agents that ignore them never
    pay the serialization cost.
    """

    game: str
    match_id: str
    round: int
    substep: int
    player: int
    phase: str
    trigger: str
    error_feedback: str | None = None
    public_builder: Callable[[], dict] | None = None
    private_builder: Callable[[], dict] | None = None
    _public: dict | None = field(default=None, repr=False)
    _private: dict | None = field(default=None, repr=False)

    @property
    def public_state(self) -> dict:
        if self._public is None:
            self._public = self.public_builder() if self.public_builder else {}
        return self._public

    @property
    def private_state(self) -> dict:
        if self._private is None:
            self._private = self.private_builder() if self.private_builder else {}
        return self._private

    def with_feedback(self, feedback: str | None) -> "Observation":
        return Observation(
            game=self.game,
            match_id=self.match_id,
            round=self.round,
            substep=self.substep,
            player=self.player,
            phase=self.phase,
            trigger=self.trigger,
            error_feedback=feedback,
            public_builder=self.public_builder,
            private_builder=self.private_builder,
        )


def validate_decision(decision: Decision, catalog: ActionCatalog) -> DecisionError | None:
    """Check a decision against a catalog; None means valid.

    Unknown parameters are tolerated; missing required slots, out-of-range
    values, and cross-slot constraint violations are rejected with a
    category the agent can act on.
    """
    spec = catalog.get(decision.action)
    if spec is None:
        return DecisionError(
            ERR_UNKNOWN_ACTION,
            f"action {decision.action!r} is not available; legal: {catalog.names()}",
        )
    if not isinstance(decision.params, dict):
        return DecisionError(ERR_FORMAT, "parameters must be an object")
    params = decision.params
    for name, slot in spec.slots.items():
        if name not in params:
            if slot.required:
                return DecisionError(
                    ERR_MISSING_PARAMETER, f"{decision.action} requires parameter {name!r}"
                )
            continue
        if not slot.contains(params[name]):
            return DecisionError(
                ERR_OUT_OF_RANGE,
                f"parameter {name!r}={params[name]!r} outside {slot.describe()}",
            )
    if spec.constraint is not None:
        filled = dict(params)
        for name, slot in spec.slots.items():
            if name not in filled and not slot.required:
                filled[name] = slot.default
        reason = spec.constraint(filled)
        if reason:
            return DecisionError(ERR_OUT_OF_RANGE, reason)
    return None
