"""Event records and the JSONL match log.

One JSON object per line with fields exactly
{match_id, game, round, substep, player, kind, action, params, payload,
cash_delta, state_hash}.  state_hash is a 64-bit hash of the engine's
canonical state serialization, used by replay verification.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

KIND_PASSIVE = "passive"
KIND_ACTIVE = "active"
KIND_FORCED = "system-forced"

LOG_FIELDS = (
    "match_id",
    "game",
    "round",
    "substep",
    "player",
    "kind",
    "action",
    "params",
    "payload",
    "cash_delta",
    "state_hash",
)


def canonical_json(obj) -> str:
    """Deterministic JSON text: sorted keys, no whitespace."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def state_hash64(state: dict) -> str:
    """64-bit hex digest of a canonical state serialization."""
    digest = hashlib.blake2b(canonical_json(state).encode("utf-8"), digest_size=8)
    return digest.hexdigest()


@dataclass
class EventRecord:
    match_id: str
    game: str
    round: int
    substep: int
    player: int | None
    kind: str
    action: str | None
    params: dict | None
    payload: dict
    cash_delta: int | None
    state_hash: str

    def to_line(self) -> str:
        return canonical_json({name: getattr(self, name) for name in LOG_FIELDS})

    @classmethod
    def from_line(cls, line: str) -> "EventRecord":
        return cls(**json.loads(line))


@dataclass
class MatchRecorder:
    """Collects a match's events in order and optionally streams them to disk.

    An attached invariant check runs after every event so conservation bugs
    surface at the exact event that introduced them.
    """

    match_id: str
    game: str
    log_path: Path | None = None
    events: list[EventRecord] = field(default_factory=list)
    invariant_check: object = None
    _fh: object = field(default=None, repr=False)

    def __post_init__(self) -> None:
        if self.log_path is not None:
            self.log_path = Path(self.log_path)
            self.log_path.parent.mkdir(parents=True, exist_ok=True)
            self._fh = self.log_path.open("w", encoding="utf-8")

    def emit(
        self,
        *,
        round: int,
        substep: int,
        player: int | None,
        kind: str,
        payload: dict,
        state_hash: str,
        action: str | None = None,
        params: dict | None = None,
        cash_delta: int | None = None,
    ) -> EventRecord:
        record = EventRecord(
            match_id=self.match_id,
            game=self.game,
            round=round,
            substep=substep,
            player=player,
            kind=kind,
            action=action,
            params=params,
            payload=payload,
            cash_delta=cash_delta,
            state_hash=state_hash,
        )
        self.events.append(record)
        if self._fh is not None:
            self._fh.write(record.to_line() + "\n")
        if self.invariant_check is not None:
            self.invariant_check(record)
        return record

    def close(self) -> None:
        if self._fh is not None:
            self._fh.flush()
            self._fh.close()
            self._fh = None


def read_log(path: str | Path) -> list[EventRecord]:
    records = []
    with Path(path).open("r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                records.append(EventRecord.from_line(line))
    return records
