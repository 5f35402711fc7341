"""Replay verification: re-execute a logged match and compare every event.

Matches played by seed-deterministic agents are fully re-run from the
logged config.  When a seat used a remote model, the logged decisions are
driven back through the engine instead, which still verifies every state
hash and event byte.
"""

from __future__ import annotations

import tempfile
from dataclasses import dataclass, field
from pathlib import Path

from .. import __version__
from ..agents.base import Agent
from ..agents.factory import is_deterministic
from ..core.events import EventRecord, KIND_ACTIVE, KIND_FORCED
from ..core.faults import AgentFailure
from ..core.protocol import Decision, ERR_FORMAT
from .config import MatchConfig
from .match import run_match


@dataclass
class ReplayReport:
    log_path: str
    verified: bool
    events: int
    replayed_events: int
    first_divergence: int | None = None
    detail: str = ""
    warnings: list[str] = field(default_factory=list)
    mode: str = "rerun"

    def to_dict(self) -> dict:
        return {
            "log_path": self.log_path,
            "verified": self.verified,
            "events": self.events,
            "replayed_events": self.replayed_events,
            "first_divergence": self.first_divergence,
            "detail": self.detail,
            "warnings": self.warnings,
            "mode": self.mode,
        }


class DrivenAgent(Agent):
    """Feeds a seat's logged decisions back to the engine.

    Retry-forced decisions are reproduced by failing until the wrapper's
    budget runs out, so the regenerated log carries the same kinds."""

    label = "driven"

    def __init__(self, records: list[EventRecord], max_failures: int):
        self.queue = [
            r
            for r in records
            if r.kind == KIND_ACTIVE
            or (r.kind == KIND_FORCED and r.payload.get("forced_reason") == "retry-limit")
        ]
        self.max_failures = max_failures
        self._cursor = 0
        self._failures = 0

    def decide(self, observation, catalog, memory) -> Decision:
        if self._cursor >= len(self.queue):
            raise AgentFailure(ERR_FORMAT, "log exhausted")
        record = self.queue[self._cursor]
        if record.kind == KIND_FORCED:
            self._failures += 1
            if self._failures >= self.max_failures:
                self._cursor += 1
                self._failures = 0
            raise AgentFailure(ERR_FORMAT, "reproducing logged system takeover")
        self._cursor += 1
        payload = record.payload or {}
        return Decision(
            record.action,
            record.params or {},
            rationale=payload.get("rationale", ""),
            annotations=payload.get("annotations", {}),
        )


def replay(log_path: str | Path) -> ReplayReport:
    """Re-execute a match from its log and report the first divergence."""
    log_path = Path(log_path)
    raw_lines = [line.rstrip("\n") for line in log_path.read_text().splitlines() if line.strip()]
    if not raw_lines:
        return ReplayReport(
            str(log_path), verified=False, events=0, replayed_events=0, detail="empty log"
        )
    records = [EventRecord.from_line(line) for line in raw_lines]
    head = records[0]
    if head.payload.get("type") != "match_start":
        return ReplayReport(
            str(log_path),
            verified=False,
            events=len(records),
            replayed_events=0,
            detail="log does not begin with a match_start event",
        )
    warnings = []
    logged_version = head.payload.get("version")
    if logged_version != __version__:
        warnings.append(
            f"version mismatch: log written by {logged_version}, replaying with {__version__}"
        )
    config = MatchConfig.from_dict(head.payload["config"])
    mode = "rerun"
    agents = None
    if not all(is_deterministic(spec) for spec in config.seats):
        mode = "drive"
        max_failures = config.fault_policy().max_action_failures
        agents = [
            DrivenAgent([r for r in records if r.player == seat], max_failures)
            for seat in range(4)
        ]
    with tempfile.TemporaryDirectory() as tmp:
        regen_path = Path(tmp) / "replay.jsonl"
        run_match(config, log_path=regen_path, agents=agents)
        regenerated = [
            line.rstrip("\n") for line in regen_path.read_text().splitlines() if line.strip()
        ]
    divergence = None
    for i, (old, new) in enumerate(zip(raw_lines, regenerated)):
        if old != new:
            divergence = i
            break
    if divergence is None and len(raw_lines) != len(regenerated):
        divergence = min(len(raw_lines), len(regenerated))
    verified = divergence is None
    return ReplayReport(
        log_path=str(log_path),
        verified=verified,
        events=len(records),
        replayed_events=len(regenerated),
        first_divergence=divergence,
        detail="" if verified else "event mismatch",
        warnings=warnings,
        mode=mode,
    )
