"""Per-player feedback memory: one append-only entry per completed turn."""

from __future__ import annotations

from dataclasses import dataclass, field

from .events import EventRecord


@dataclass(frozen=True)
class TurnEntry:
    """What one turn left behind: final observation summary, passive events,
    and the active actions taken since the player's previous entry."""

    round: int
    final_observation: dict
    passive_events: tuple[EventRecord, ...]
    active_actions: tuple[EventRecord, ...]


class MemoryBuffer:
    """Append-only turn memory for every seat in a match."""

    def __init__(self, num_players: int):
        self._entries: list[list[TurnEntry]] = [[] for _ in range(num_players)]

    def append(self, player: int, entry: TurnEntry) -> None:
        self._entries[player].append(entry)

    def entries(self, player: int) -> tuple[TurnEntry, ...]:
        return tuple(self._entries[player])

    def view(self, player: int, window: int | None = None) -> tuple[TurnEntry, ...]:
        """Most recent `window` entries (all when window is None)."""
        entries = self._entries[player]
        if window is None or window >= len(entries):
            return tuple(entries)
        return tuple(entries[-window:])

    def __len__(self) -> int:
        return sum(len(e) for e in self._entries)
