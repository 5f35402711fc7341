"""Long-run landing distribution over the 40 Monopoly spaces.

Monte Carlo over the single-token walk honoring dice, consecutive-doubles
jailing, the Go-To-Jail corner, and card movements.  Each simulated step
accumulates the exact dice-and-card-conditional landing distribution of
the current walk state and then samples one transition, which cuts the
estimator variance far below naive per-roll counting; card draws are
treated as uniform over the deck.

Jail policy for the walk: sit and roll for doubles, paying the fine after
the third failure (the long-jail convention used by steady-state analyses).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..core.rng import RngStream
from ..monopoly.data import BOARD_SIZE, MonopolyData

# Walk states: ("free", position, consecutive_doubles) or ("jail", failures).
GO_TO_JAIL_REASONS = ("corner", "card", "triple")


@dataclass
class WalkModel:
    """Precomputed per-state landing and transition rows for the walk."""

    data: MonopolyData
    include_jail: bool = True
    include_cards: bool = True
    include_doubles: bool = True

    def __post_init__(self):
        self._rows: dict[tuple, tuple[np.ndarray, list, np.ndarray]] = {}
        self._jail = self.data.jail_index

    def _deck_for(self, kind: str) -> list[dict]:
        return self.data.chance if kind == "chance" else self.data.community_chest

    def _resolve_move(self, target: int) -> list[tuple[float, int, bool]]:
        """Resolve landing on `target`: list of (prob, final_pos, jailed)."""
        kind = self.data.space(target)["kind"]
        if kind == "go_to_jail" and self.include_jail:
            return [(1.0, self._jail, True)]
        if kind in ("chance", "community_chest") and self.include_cards:
            deck = self._deck_for("chance" if kind == "chance" else "community_chest")
            p_card = 1.0 / len(deck)
            outcomes: list[tuple[float, int, bool]] = []
            for card in deck:
                effect = card["effect"]
                if effect == "move":
                    outcomes.append((p_card, card["target"], False))
                elif effect == "go_to_jail" and self.include_jail:
                    outcomes.append((p_card, self._jail, True))
                else:
                    outcomes.append((p_card, target, False))
            return outcomes
        return [(1.0, target, False)]

    def row(self, state: tuple):
        """(landing vector over 40 spaces, next states, cumulative probs)."""
        cached = self._rows.get(state)
        if cached is not None:
            return cached
        landing = np.zeros(BOARD_SIZE)
        nxt: dict[tuple, float] = {}

        def add(prob: float, pos: int, jailed: bool, doubles: int):
            landing[pos] += prob
            if jailed:
                key = ("jail", 0) if self.include_jail else ("free", pos, 0)
            else:
                key = ("free", pos, doubles)
            nxt[key] = nxt.get(key, 0.0) + prob

        p_pair = 1.0 / 36.0
        if state[0] == "free":
            _, pos, doubles = state
            for d1 in range(1, 7):
                for d2 in range(1, 7):
                    is_double = d1 == d2 and self.include_doubles
                    if is_double and doubles == 2 and self.include_jail:
                        add(p_pair, self._jail, True, 0)
                        continue
                    target = (pos + d1 + d2) % BOARD_SIZE
                    next_doubles = doubles + 1 if is_double else 0
                    for prob, final, jailed in self._resolve_move(target):
                        add(p_pair * prob, final, jailed, 0 if jailed else next_doubles)
        else:
            _, failures = state
            for d1 in range(1, 7):
                for d2 in range(1, 7):
                    if d1 == d2:
                        target = (self._jail + d1 + d2) % BOARD_SIZE
                        for prob, final, jailed in self._resolve_move(target):
                            add(p_pair * prob, final, jailed, 0)
                    elif failures >= 2:
                        # Third failed attempt: pay the fine and move the roll.
                        target = (self._jail + d1 + d2) % BOARD_SIZE
                        for prob, final, jailed in self._resolve_move(target):
                            add(p_pair * prob, final, jailed, 0)
                    else:
                        landing[self._jail] += p_pair
                        key = ("jail", failures + 1)
                        nxt[key] = nxt.get(key, 0.0) + p_pair

        states = list(nxt.keys())
        cumulative = np.cumsum([nxt[s] for s in states])
        result = (landing, states, cumulative)
        self._rows[state] = result
        return result


def estimate_landing_probability(
    data: MonopolyData,
    samples: int,
    rng: RngStream,
    include_jail: bool = True,
    include_cards: bool = True,
    include_doubles: bool = True,
) -> np.ndarray:
    """Monte Carlo landing frequencies for a single token; sums to 1."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    model = WalkModel(data, include_jail, include_cards, include_doubles)
    accumulator = np.zeros(BOARD_SIZE)
    state = ("free", 0, 0)
    for _ in range(samples):
        landing, states, cumulative = model.row(state)
        accumulator += landing
        if len(states) == 1:
            state = states[0]
        else:
            u = rng.random() * cumulative[-1]
            state = states[int(np.searchsorted(cumulative, u, side="right"))]
    pi = accumulator / accumulator.sum()
    return pi
