"""Share price schedule and merger bonus arithmetic for Acquire."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path


@dataclass(frozen=True)
class PriceSchedule:
    chains: tuple[str, ...]
    tiers: dict[str, str]
    brackets: tuple[tuple[int, int], ...]  # (min_size, base_price), ascending
    tier_premium: dict[str, int]
    majority_multiplier: int
    minority_multiplier: int
    shares_per_chain: int
    initial_cash: int
    hand_size: int
    safe_size: int
    end_size: int

    def share_price(self, chain: str, size: int) -> int:
        if size < self.brackets[0][0]:
            return 0
        base = 0
        for min_size, price in self.brackets:
            if size >= min_size:
                base = price
        return base + self.tier_premium[self.tiers[chain]]

    def bonuses(self, chain: str, size: int) -> tuple[int, int]:
        price = self.share_price(chain, size)
        return price * self.majority_multiplier, price * self.minority_multiplier


def load_price_schedule(path: str | Path | None = None) -> PriceSchedule:
    if path is None:
        path = Path(str(resources.files("finboard").joinpath("data", "acquire_prices.json")))
    raw = json.loads(Path(path).read_text())
    chains = tuple(c["name"] for c in raw["chains"])
    tiers = {c["name"]: c["tier"] for c in raw["chains"]}
    if len(chains) != 7:
        raise ValueError("exactly 7 chains required")
    brackets = tuple(sorted((b["min_size"], b["base_price"]) for b in raw["size_brackets"]))
    prices = [p for _, p in brackets]
    if prices != sorted(prices):
        raise ValueError("share price must be non-decreasing in size")
    if raw["majority_multiplier"] <= raw["minority_multiplier"] or raw["minority_multiplier"] <= 0:
        raise ValueError("majority multiplier must exceed minority multiplier > 0")
    return PriceSchedule(
        chains=chains,
        tiers=tiers,
        brackets=brackets,
        tier_premium=dict(raw["tier_premium"]),
        majority_multiplier=raw["majority_multiplier"],
        minority_multiplier=raw["minority_multiplier"],
        shares_per_chain=raw["shares_per_chain"],
        initial_cash=raw["initial_cash"],
        hand_size=raw["hand_size"],
        safe_size=raw["safe_size"],
        end_size=raw["end_size"],
    )


def split_bonuses(holdings: dict[int, int], majority: int, minority: int) -> dict[int, int]:
    """Distribute majority/minority bonuses among holders of a defunct chain.

    Sole holder takes both.  A tie for first place pools both bonuses and
    splits them evenly; a tie for second splits the minority.  Every split
    rounds up to a whole currency unit per head.
    """
    holders = {p: n for p, n in holdings.items() if n > 0}
    if not holders:
        return {}
    counts = sorted(set(holders.values()), reverse=True)
    top = [p for p, n in holders.items() if n == counts[0]]
    if len(holders) == 1:
        return {next(iter(holders)): majority + minority}
    if len(top) > 1:
        share = math.ceil((majority + minority) / len(top))
        return {p: share for p in top}
    payouts = {top[0]: majority}
    second = [p for p, n in holders.items() if n == counts[1]]
    share = math.ceil(minority / len(second))
    for p in second:
        payouts[p] = share
    return payouts
