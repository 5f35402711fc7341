"""Valuation and utility models used by the heuristic agents.

Two reconstructible record types anchor the arithmetic: the Acquire
expected-portfolio-value record (cash plus share holdings at estimated
future prices plus the expected merger premium) and the Monopoly utility
record (net worth minus a quadratic penalty on expected rent liability
beyond cash on hand).  Records always recompute exactly from their parts.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..acquire.board import neighbors
from ..acquire.pricing import split_bonuses
from ..monopoly.data import MonopolyData
from ..monopoly.rules import compute_net_worth, compute_rent


# -- Acquire: expected future portfolio value ------------------------------------


@dataclass(frozen=True)
class PortfolioValueRecord:
    """EV = cash + sum over chains of shares x estimated price + premium."""

    cash: float
    shares: dict[str, int]
    estimated_prices: dict[str, float]
    premium: float
    expected_value: float

    def recompute(self) -> float:
        return (
            self.cash
            + sum(self.shares[c] * self.estimated_prices[c] for c in self.shares)
            + self.premium
        )

    @classmethod
    def build(cls, cash, shares, estimated_prices, premium) -> "PortfolioValueRecord":
        record = cls(cash, dict(shares), dict(estimated_prices), premium, 0.0)
        return cls(cash, dict(shares), dict(estimated_prices), premium, record.recompute())


@dataclass
class AcquireValuation:
    """Board-driven estimators behind the portfolio value.

    Future prices project each chain's size forward by `horizon` turns at
    its frontier-share growth rate; merger probabilities are the fraction
    of a chain's frontier whose placement would fold it into a larger or
    equal active chain.
    """

    horizon: int = 3

    def _frontier(self, cells: dict[str, str], tiles: set[str] | frozenset[str]) -> set[str]:
        out = set()
        for tile in tiles:
            for n in neighbors(tile):
                if n not in cells:
                    out.add(n)
        return out

    def projected_price(self, snapshot_schedule: dict, chain: str, size: int) -> int:
        if size < snapshot_schedule["brackets"][0][0]:
            return 0
        base = 0
        for min_size, price in snapshot_schedule["brackets"]:
            if size >= min_size:
                base = price
        return base + snapshot_schedule["premium"][snapshot_schedule["tiers"][chain]]

    def estimate_price(
        self,
        schedule: dict,
        cells: dict[str, str],
        chain_tiles: dict[str, set[str]],
        chain: str,
        board_cells: int = 108,
        players: int = 4,
    ) -> float:
        size = len(chain_tiles[chain])
        if size == 0:
            return 0.0
        empty = board_cells - len(cells)
        frontier = len(self._frontier(cells, chain_tiles[chain]))
        growth = frontier / max(1.0, float(empty)) * players
        projected = size + int(self.horizon * growth + 0.5)
        return float(self.projected_price(schedule, chain, projected))

    def merger_probability(
        self,
        cells: dict[str, str],
        chain_tiles: dict[str, set[str]],
        chain: str,
        acquirer: str,
    ) -> float:
        """Fraction of `chain`'s frontier whose placement merges it into
        `acquirer` (the larger or equal active chain)."""
        if len(chain_tiles[acquirer]) < max(2, len(chain_tiles[chain])):
            return 0.0
        frontier = self._frontier(cells, chain_tiles[chain])
        if not frontier:
            return 0.0
        acquirer_frontier = self._frontier(cells, chain_tiles[acquirer])
        return len(frontier & acquirer_frontier) / len(frontier)

    def projected_bonus(
        self,
        schedule: dict,
        chain_tiles: dict[str, set[str]],
        holdings: list[dict[str, int]],
        chain: str,
        player: int,
    ) -> float:
        """Bonus the player would collect if `chain` were acquired now,
        given the current holder ranking."""
        size = len(chain_tiles[chain])
        price = self.projected_price(schedule, chain, size)
        majority = price * schedule["majority"]
        minority = price * schedule["minority"]
        payouts = split_bonuses(
            {p: holdings[p].get(chain, 0) for p in range(len(holdings))}, majority, minority
        )
        return float(payouts.get(player, 0))

    def premium(
        self,
        schedule: dict,
        cells: dict[str, str],
        chain_tiles: dict[str, set[str]],
        holdings: list[dict[str, int]],
        player: int,
    ) -> float:
        active = [c for c, tiles in chain_tiles.items() if len(tiles) >= 2]
        total = 0.0
        for chain in active:
            bonus = self.projected_bonus(schedule, chain_tiles, holdings, chain, player)
            if bonus == 0.0:
                continue
            for acquirer in active:
                if acquirer == chain:
                    continue
                p = self.merger_probability(cells, chain_tiles, chain, acquirer)
                total += p * bonus
        return total

    def expected_value(
        self,
        schedule: dict,
        cells: dict[str, str],
        chain_tiles: dict[str, set[str]],
        holdings: list[dict[str, int]],
        cash: int,
        player: int,
    ) -> PortfolioValueRecord:
        active = [c for c, tiles in chain_tiles.items() if len(tiles) >= 2]
        prices = {
            c: self.estimate_price(schedule, cells, chain_tiles, c)
            for c in active
        }
        shares = {c: holdings[player].get(c, 0) for c in active}
        omega = self.premium(schedule, cells, chain_tiles, holdings, player)
        return PortfolioValueRecord.build(float(cash), shares, prices, omega)


# -- Monopoly: utility with a liquidity-risk penalty ---------------------------------


@dataclass(frozen=True)
class UtilityRecord:
    """U = net worth - risk_aversion * max(0, expected_liability - cash)^2."""

    net_worth: float
    expected_liability: float
    cash: float
    risk_aversion: float
    utility: float

    def recompute(self) -> float:
        shortfall = max(0.0, self.expected_liability - self.cash)
        return self.net_worth - self.risk_aversion * shortfall**2

    @classmethod
    def build(cls, net_worth, expected_liability, cash, risk_aversion) -> "UtilityRecord":
        record = cls(net_worth, expected_liability, cash, risk_aversion, 0.0)
        return cls(net_worth, expected_liability, cash, risk_aversion, record.recompute())


@dataclass
class MonopolyUtilityModel:
    """Landing distribution, horizon, and risk aversion for Eq.-style utility."""

    landing: np.ndarray
    horizon: int = 4
    risk_aversion: float = 0.005

    def expected_liability(
        self, data: MonopolyData, opponent_deeds: list[dict[int, dict]]
    ) -> float:
        """Expected rent paid over the next `horizon` rounds: for every
        opponent-owned rentable space, landing probability times rent
        (expected dice total 7 for utilities); mortgaged spaces charge 0."""
        per_round = 0.0
        for deeds in opponent_deeds:
            for index in deeds:
                rent = compute_rent(data, index, deeds, dice_total=7)
                per_round += float(self.landing[index]) * rent
        return self.horizon * per_round

    def utility(
        self,
        data: MonopolyData,
        cash: int,
        deeds: dict[int, dict],
        opponent_deeds: list[dict[int, dict]],
    ) -> UtilityRecord:
        net_worth = float(compute_net_worth(data, cash, deeds))
        liability = self.expected_liability(data, opponent_deeds)
        return UtilityRecord.build(net_worth, liability, float(cash), self.risk_aversion)

    def rent_income_prospect(
        self, data: MonopolyData, deeds: dict[int, dict], opponents: int
    ) -> float:
        """Expected rent collected from `opponents` tokens over the horizon;
        this is what makes monopolies worth trading toward."""
        per_round = 0.0
        for index in deeds:
            rent = compute_rent(data, index, deeds, dice_total=7)
            per_round += float(self.landing[index]) * rent
        return self.horizon * opponents * per_round
