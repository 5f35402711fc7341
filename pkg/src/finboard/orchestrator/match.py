"""Single-match execution: engine wiring, round loop, termination, result."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .. import __version__
from ..acquire import AcquireEngine, load_price_schedule
from ..agents.factory import build_agent
from ..cashflow import CashflowEngine, load_cashflow_data
from ..core.engine import GameEngine, TurnRunner
from ..core.events import MatchRecorder
from ..core.faults import EngineInconsistency
from ..core.rng import RngStream
from ..monopoly import MonopolyEngine, load_monopoly_data
from .config import MatchConfig, agent_label


@dataclass
class MatchResult:
    match_id: str
    game: str
    winner: int | None
    ranking: list[int]
    players: list[dict]
    rounds: int
    active_turns: int
    forced_decisions: int
    events: int
    log_path: str | None
    aborted: bool = False
    diagnostic: str = ""
    seat_labels: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "match_id": self.match_id,
            "game": self.game,
            "winner": self.winner,
            "ranking": self.ranking,
            "players": self.players,
            "rounds": self.rounds,
            "active_turns": self.active_turns,
            "forced_decisions": self.forced_decisions,
            "events": self.events,
            "log_path": self.log_path,
            "aborted": self.aborted,
            "diagnostic": self.diagnostic,
            "seat_labels": self.seat_labels,
        }


def build_engine(config: MatchConfig, recorder: MatchRecorder, rng: RngStream) -> GameEngine:
    policy = config.fault_policy()
    paths = config.data_paths
    if config.game == "cashflow":
        data = load_cashflow_data(paths.get("board"), paths.get("cards"))
        return CashflowEngine(config.match_id, 4, recorder, rng, data, policy)
    if config.game == "acquire":
        schedule = load_price_schedule(paths.get("prices"))
        return AcquireEngine(config.match_id, 4, recorder, rng, schedule, policy)
    data = load_monopoly_data(paths.get("board"), paths.get("cards"))
    return MonopolyEngine(config.match_id, 4, recorder, rng, data, policy)


def run_match(
    config: MatchConfig,
    log_path: str | Path | None = None,
    agents: list | None = None,
    check_invariants: bool = True,
) -> MatchResult:
    """Play one match to termination and return its result summary.

    `agents` overrides the configured seat specs (used by replay); the
    event log, when requested, is streamed to `log_path` as JSONL.
    """
    rng = RngStream(config.seed)
    recorder = MatchRecorder(config.match_id, config.game, log_path)
    engine = build_engine(config, recorder, rng)
    if check_invariants:
        recorder.invariant_check = lambda record: engine.check_invariants()
    engine.emit_passive(
        None,
        {
            "type": "match_start",
            "config": config.to_dict(),
            "version": __version__,
            "seat_labels": [agent_label(s) for s in config.seats],
        },
    )
    if agents is None:
        agents = [
            build_agent(spec, rng.derive(f"agent:{seat}"))
            for seat, spec in enumerate(config.seats)
        ]
    runner = TurnRunner(
        engine,
        agents,
        config.fault_policy(),
        config.k_max,
        memory_window=config.memory_window,
    )
    rounds = 0
    active_turns = 0
    aborted = False
    diagnostic = ""
    try:
        runner.run_setup()
        for round_index in range(1, config.round_cap + 1):
            engine.round = round_index
            rounds = round_index
            for seat in engine.turn_order():
                if engine.is_over():
                    break
                if seat not in engine.active_players():
                    continue
                runner.run_turn(seat)
                active_turns += 1
            if engine.is_over():
                break
    except EngineInconsistency as exc:
        aborted = True
        diagnostic = str(exc)
        engine.emit_passive(None, {"type": "match_aborted", "error": diagnostic})
    if not aborted:
        engine.emit_passive(
            None,
            {
                "type": "match_end",
                "winner": engine.winner(),
                "ranking": engine.ranking(),
                "rounds": rounds,
                "reason": "terminal" if engine.is_over() else "round_cap",
            },
        )
    recorder.close()
    return MatchResult(
        match_id=config.match_id,
        game=config.game,
        winner=engine.winner() if not aborted else None,
        ranking=engine.ranking(),
        players=[engine.player_summary(seat) for seat in range(4)],
        rounds=rounds,
        active_turns=active_turns,
        forced_decisions=runner.forced_decisions,
        events=len(recorder.events),
        log_path=str(log_path) if log_path else None,
        aborted=aborted,
        diagnostic=diagnostic,
        seat_labels=[agent_label(s) for s in config.seats],
    )
