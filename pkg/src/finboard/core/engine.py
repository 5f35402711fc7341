"""Game-agnostic turn machinery.

Engines expose each turn as a generator of :class:`DecisionRequest`s; the
:class:`TurnRunner` drives it, obtaining decisions through the fault-tolerant
retry wrapper, enforcing the per-loop sub-decision cap, and maintaining the
per-player memory buffer.  All state changes are emitted as events by the
engine itself, so the JSONL log is a complete account of the match.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Generator

from .events import KIND_ACTIVE, KIND_FORCED, KIND_PASSIVE, MatchRecorder, state_hash64
from .faults import FaultPolicy, decide_with_retries
from .memory import MemoryBuffer, TurnEntry
from .protocol import ActionCatalog, Decision, DecisionError, Observation

FORCED_RETRY_LIMIT = "retry-limit"
FORCED_SUBSTEP_LIMIT = "sub-decision-limit"


@dataclass
class DecisionRequest:
    """One pending sub-decision: who must act, on what, with which options."""

    player: int
    catalog: ActionCatalog
    trigger: str
    private_builder: Callable[[], dict] | None = None
    extra_validate: Callable[[Decision], DecisionError | None] | None = None

    @property
    def phase(self) -> str:
        return self.catalog.phase

    @property
    def loop_key(self) -> tuple[str, int]:
        return (self.catalog.loop_id, self.player)


@dataclass
class Applied:
    """How a decision reached the engine: its sub-step and forced status."""

    decision: Decision
    substep: int
    forced: bool
    attempts: int
    forced_reason: str | None = None


TurnGen = Generator[DecisionRequest, Applied, None]


class GameEngine:
    """Base class for the three game engines.

    Subclasses implement the turn generator plus snapshots, invariants and
    termination.  The base class owns event emission and round accounting.
    """

    game = "abstract"
    track_size = 0

    def __init__(self, match_id: str, num_players: int, recorder: MatchRecorder):
        self.match_id = match_id
        self.num_players = num_players
        self.recorder = recorder
        self.round = 0

    # -- emission -----------------------------------------------------------

    def _hash(self) -> str:
        return state_hash64(self.state_dict())

    def emit_passive(
        self,
        player: int | None,
        payload: dict,
        cash_delta: int | None = None,
        substep: int = 0,
    ):
        return self.recorder.emit(
            round=self.round,
            substep=substep,
            player=player,
            kind=KIND_PASSIVE,
            payload=payload,
            cash_delta=cash_delta,
            state_hash=self._hash(),
        )

    def emit_decision(
        self,
        request: DecisionRequest,
        applied: Applied,
        payload: dict,
        cash_delta: int | None = None,
    ):
        payload = dict(payload)
        payload["phase"] = request.phase
        payload["catalog"] = request.catalog.names()
        if applied.forced:
            payload["forced_reason"] = applied.forced_reason or FORCED_RETRY_LIMIT
        payload["attempts"] = applied.attempts
        if applied.decision.rationale:
            payload["rationale"] = applied.decision.rationale
        if applied.decision.annotations:
            payload["annotations"] = applied.decision.annotations
        return self.recorder.emit(
            round=self.round,
            substep=applied.substep,
            player=request.player,
            kind=KIND_FORCED if applied.forced else KIND_ACTIVE,
            action=applied.decision.action,
            params=applied.decision.params,
            payload=payload,
            cash_delta=cash_delta,
            state_hash=self._hash(),
        )

    # -- subclass surface ----------------------------------------------------

    def setup(self) -> TurnGen:
        """Pre-round decision phases (e.g. career selection)."""
        return
        yield  # pragma: no cover

    def turn(self, player: int) -> TurnGen:
        raise NotImplementedError

    def state_dict(self) -> dict:
        raise NotImplementedError

    def public_snapshot(self) -> dict:
        raise NotImplementedError

    def private_snapshot(self, player: int) -> dict:
        return {}

    def check_invariants(self) -> None:
        """Raise AssertionError when a conservation rule is violated."""

    def active_players(self) -> list[int]:
        raise NotImplementedError

    def turn_order(self) -> list[int]:
        """Seats in the order they take turns within a round."""
        return self.active_players()

    def is_over(self) -> bool:
        raise NotImplementedError

    def winner(self) -> int | None:
        raise NotImplementedError

    def ranking(self) -> list[int]:
        raise NotImplementedError

    def player_summary(self, player: int) -> dict:
        raise NotImplementedError


@dataclass
class TurnRecord:
    """Summary of one executed turn, reconstructible from the event log."""

    player: int
    round: int
    active_events: int
    passive_events: int
    forced_events: int
    event_lines: list[str] = field(default_factory=list)


class TurnRunner:
    """Drives engine turn generators through agents with fault tolerance.

    One runner per match.  Tracks, per player, the event cursor used to cut
    memory entries, and per decision loop the sub-step counter that enforces
    the K_max cap.
    """

    def __init__(
        self,
        engine: GameEngine,
        agents: list,
        policy: FaultPolicy,
        k_max: int,
        memory: MemoryBuffer | None = None,
        memory_window: int | None = None,
    ):
        if k_max < 1:
            raise ValueError("k_max must be >= 1")
        self.engine = engine
        self.agents = agents
        self.policy = policy
        self.k_max = k_max
        self.memory = memory or MemoryBuffer(engine.num_players)
        self.memory_window = memory_window
        self._mem_cursor = [0] * engine.num_players
        self.forced_decisions = 0

    def _observation(self, request: DecisionRequest, substep: int) -> Observation:
        engine = self.engine
        return Observation(
            game=engine.game,
            match_id=engine.match_id,
            round=engine.round,
            substep=substep,
            player=request.player,
            phase=request.phase,
            trigger=request.trigger,
            public_builder=engine.public_snapshot,
            private_builder=request.private_builder
            or (lambda: engine.private_snapshot(request.player)),
        )

    def _drive(self, gen: TurnGen) -> None:
        counters: dict[tuple[str, int], int] = {}
        try:
            request = next(gen)
        except StopIteration:
            return
        while True:
            key = request.loop_key
            k = counters.get(key, 0) + 1
            counters[key] = k
            if k > self.k_max:
                # Sub-decision cap: apply the phase fallback without
                # consulting the agent; the fallback always closes the loop.
                applied = Applied(
                    decision=request.catalog.fallback,
                    substep=k,
                    forced=True,
                    attempts=0,
                    forced_reason=FORCED_SUBSTEP_LIMIT,
                )
            else:
                observation = self._observation(request, k)
                memory_view = self.memory.view(request.player, self.memory_window)
                decision, attempts, forced = decide_with_retries(
                    self.agents[request.player],
                    observation,
                    request.catalog,
                    memory_view,
                    self.policy,
                    extra_validate=request.extra_validate,
                )
                applied = Applied(
                    decision=decision,
                    substep=k,
                    forced=forced,
                    attempts=attempts,
                    forced_reason=FORCED_RETRY_LIMIT if forced else None,
                )
            if applied.forced:
                self.forced_decisions += 1
            try:
                request = gen.send(applied)
            except StopIteration:
                return

    def run_setup(self) -> None:
        self._drive(self.engine.setup())
        for player in range(self.engine.num_players):
            self._mem_cursor[player] = len(self.engine.recorder.events)

    def run_turn(self, player: int) -> TurnRecord:
        engine = self.engine
        start = len(engine.recorder.events)
        self._drive(engine.turn(player))
        new_events = engine.recorder.events[start:]

        # Memory entry: everything involving this player since their last entry.
        cursor = self._mem_cursor[player]
        mine = [e for e in engine.recorder.events[cursor:] if e.player == player]
        passive = tuple(e for e in mine if e.kind == KIND_PASSIVE)
        active = tuple(e for e in mine if e.kind in (KIND_ACTIVE, KIND_FORCED))
        entry = TurnEntry(
            round=engine.round,
            final_observation=engine.public_snapshot(),
            passive_events=passive,
            active_actions=active,
        )
        self.memory.append(player, entry)
        self._mem_cursor[player] = len(engine.recorder.events)

        return TurnRecord(
            player=player,
            round=engine.round,
            active_events=sum(1 for e in new_events if e.kind == KIND_ACTIVE),
            passive_events=sum(1 for e in new_events if e.kind == KIND_PASSIVE),
            forced_events=sum(1 for e in new_events if e.kind == KIND_FORCED),
            event_lines=[e.to_line() for e in new_events],
        )
