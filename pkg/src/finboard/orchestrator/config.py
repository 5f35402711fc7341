"""Match and tournament configuration, JSON in and out."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..core.faults import FaultPolicy

GAMES = ("cashflow", "acquire", "monopoly")
ROUND_CAPS = {"cashflow": 300, "acquire": 150, "monopoly": 200}
DEFAULT_K_MAX = 20


class ConfigError(ValueError):
    pass


@dataclass
class MatchConfig:
    game: str
    seats: list[dict]
    seed: int
    match_id: str = ""
    k_max: int = DEFAULT_K_MAX
    round_cap: int | None = None
    max_action_failures: int = 5
    memory_window: int | None = None
    data_paths: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.game not in GAMES:
            raise ConfigError(f"unknown game {self.game!r}; expected one of {GAMES}")
        if len(self.seats) != 4:
            raise ConfigError(f"exactly 4 seats required, got {len(self.seats)}")
        if self.round_cap is None:
            self.round_cap = ROUND_CAPS[self.game]
        if self.round_cap < 1:
            raise ConfigError("round cap must be >= 1")
        if not self.match_id:
            self.match_id = f"{self.game}-{self.seed:08x}"

    def fault_policy(self) -> FaultPolicy:
        return FaultPolicy(max_action_failures=self.max_action_failures)

    def to_dict(self) -> dict:
        return {
            "game": self.game,
            "seats": self.seats,
            "seed": self.seed,
            "match_id": self.match_id,
            "k_max": self.k_max,
            "round_cap": self.round_cap,
            "max_action_failures": self.max_action_failures,
            "memory_window": self.memory_window,
            "data_paths": self.data_paths,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "MatchConfig":
        return cls(
            game=raw["game"],
            seats=raw["seats"],
            seed=raw["seed"],
            match_id=raw.get("match_id", ""),
            k_max=raw.get("k_max", DEFAULT_K_MAX),
            round_cap=raw.get("round_cap"),
            max_action_failures=raw.get("max_action_failures", 5),
            memory_window=raw.get("memory_window"),
            data_paths=raw.get("data_paths", {}),
        )

    @classmethod
    def load(cls, path: str | Path) -> "MatchConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))


@dataclass
class TournamentPlan:
    """One focal agent per match, rotated across the four start positions,
    against a fixed three-agent opponent pool."""

    focal_agents: list[dict]
    opponents: list[dict]
    games: list[str]
    rotations: list[int] = field(default_factory=lambda: [1, 2, 3, 4])
    repetitions: int = 1
    seed: int = 0
    k_max: int = DEFAULT_K_MAX
    round_caps: dict[str, int] = field(default_factory=dict)
    max_action_failures: int = 5
    memory_window: int | None = None
    data_paths: dict[str, str] = field(default_factory=dict)
    name: str = "tournament"

    def __post_init__(self) -> None:
        if not self.focal_agents:
            raise ConfigError("at least one focal agent required")
        if len(self.opponents) != 3:
            raise ConfigError("exactly 3 opponents required")
        for game in self.games:
            if game not in GAMES:
                raise ConfigError(f"unknown game {game!r}")
        for rotation in self.rotations:
            if rotation not in (1, 2, 3, 4):
                raise ConfigError("rotations are seat positions 1..4")
        if self.repetitions < 1:
            raise ConfigError("repetitions must be >= 1")

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "focal_agents": self.focal_agents,
            "opponents": self.opponents,
            "games": self.games,
            "rotations": self.rotations,
            "repetitions": self.repetitions,
            "seed": self.seed,
            "k_max": self.k_max,
            "round_caps": self.round_caps,
            "max_action_failures": self.max_action_failures,
            "memory_window": self.memory_window,
            "data_paths": self.data_paths,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "TournamentPlan":
        return cls(
            focal_agents=raw["focal_agents"],
            opponents=raw["opponents"],
            games=raw["games"],
            rotations=raw.get("rotations", [1, 2, 3, 4]),
            repetitions=raw.get("repetitions", 1),
            seed=raw.get("seed", 0),
            k_max=raw.get("k_max", DEFAULT_K_MAX),
            round_caps=raw.get("round_caps", {}),
            max_action_failures=raw.get("max_action_failures", 5),
            memory_window=raw.get("memory_window"),
            data_paths=raw.get("data_paths", {}),
            name=raw.get("name", "tournament"),
        )

    @classmethod
    def load(cls, path: str | Path) -> "TournamentPlan":
        return cls.from_dict(json.loads(Path(path).read_text()))


def agent_label(spec: dict) -> str:
    return spec.get("label", spec.get("type", "agent"))
