"""Seeded randomness: a portable 64-bit generator with labeled sub-streams.

All game randomness flows through :class:`RngStream` so that matches replay
byte-identically from a seed.  Sub-streams are derived per purpose (dice,
deck order, tiles, per-seat agent noise) so consuming draws in one stream
never perturbs another.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

MASK64 = (1 << 64) - 1


def derive_seed(parent_seed: int, label: str) -> int:
    """Derive a child seed from a parent seed and a purpose label."""
    digest = hashlib.blake2b(
        f"{parent_seed & MASK64}/{label}".encode("utf-8"), digest_size=8
    ).digest()
    return int.from_bytes(digest, "big")


@dataclass
class RngStream:
    """SplitMix64 generator wrapper tracking how many draws were consumed.

    Two streams built from the same seed produce identical sequences, and
    every draw advances ``position`` by exactly one.
    """

    seed: int
    position: int = 0
    _state: int = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self.seed &= MASK64
        self._state = self.seed
        for _ in range(self.position):
            self._next_u64()

    def _next_u64(self) -> int:
        # SplitMix64 (Steele, Lea & Flood); one draw per call.
        self._state = (self._state + 0x9E3779B97F4A7C15) & MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def _draw(self) -> int:
        self.position += 1
        return self._next_u64()

    def randint(self, low: int, high: int) -> int:
        """Uniform integer in [low, high], inclusive."""
        if high < low:
            raise ValueError(f"empty range [{low}, {high}]")
        span = high - low + 1
        return low + self._draw() % span

    def random(self) -> float:
        """Uniform float in [0, 1)."""
        return (self._draw() >> 11) / float(1 << 53)

    def choice(self, seq):
        """Uniform element of a non-empty sequence."""
        if not seq:
            raise ValueError("choice from empty sequence")
        return seq[self.randint(0, len(seq) - 1)]

    def sample(self, seq, k: int) -> list:
        """k distinct elements, order determined by the stream."""
        if k > len(seq):
            raise ValueError("sample larger than population")
        pool = list(seq)
        out = []
        for _ in range(k):
            out.append(pool.pop(self.randint(0, len(pool) - 1)))
        return out

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randint(0, i)
            items[i], items[j] = items[j], items[i]

    def derive(self, label: str) -> "RngStream":
        """New independent stream keyed by (this seed, label)."""
        return RngStream(derive_seed(self.seed, label))


@dataclass(frozen=True)
class DiceRoll:
    """Outcome of rolling one to three six-sided dice."""

    die1: int
    die2: int | None = None
    die3: int | None = None

    @property
    def dice(self) -> tuple[int, ...]:
        return tuple(d for d in (self.die1, self.die2, self.die3) if d is not None)

    @property
    def total(self) -> int:
        return sum(self.dice)

    @property
    def is_double(self) -> bool:
        return self.die2 is not None and self.die3 is None and self.die1 == self.die2


def roll_dice(rng: RngStream, count: int) -> DiceRoll:
    """Roll `count` dice (1-3; three only for the Fast Track charity rule)."""
    if count not in (1, 2, 3):
        raise ValueError(f"dice count must be 1..3, got {count}")
    faces = [rng.randint(1, 6) for _ in range(count)]
    faces += [None] * (3 - count)
    return DiceRoll(*faces)


def advance_position(pos: int, distance: int, track_size: int) -> tuple[int, bool]:
    """Move `distance` spaces along a circular track of `track_size` spaces.

    Returns (new position, wrapped) where wrapped is True when space 0 was
    passed or reached.
    """
    if track_size < 2:
        raise ValueError(f"track size must be >= 2, got {track_size}")
    if not 0 <= pos < track_size:
        raise ValueError(f"position {pos} outside track of {track_size}")
    if distance < 0:
        raise ValueError("distance must be >= 0")
    raw = pos + distance
    return raw % track_size, raw >= track_size
