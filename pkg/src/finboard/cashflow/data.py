"""Cashflow board, career, dream, and card-deck data.

All values ship as JSON data files (synthetic, balance-tuned, fully
configurable); this module loads and schema-checks them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

RAT_RACE_SIZE = 24
FAST_TRACK_SIZE = 40

RR_KINDS = {"opportunity", "doodad", "charity", "paycheck", "offer", "child", "downsize"}
FT_KINDS = {"cashflow_day", "dream", "charity", "risk", "business"}
RISK_KINDS = {"all_cash", "half_cash", "lose_lowest_asset", "repair"}
STOCK_KINDS = {"stock", "mutual_fund", "preferred_stock"}
ASSET_KINDS = STOCK_KINDS | {
    "real_estate",
    "business",
    "cd",
    "coin",
    "limited_partnership",
    "contract",
}


class DataError(ValueError):
    """A shipped or user-provided data file violates its schema."""


def _default_path(name: str) -> Path:
    return Path(str(resources.files("finboard").joinpath("data", name)))


@dataclass(frozen=True)
class LiabilityData:
    kind: str
    name: str
    principal: int
    payment: int


@dataclass(frozen=True)
class CareerData:
    name: str
    salary: int
    taxes: int
    other_expenses: int
    per_child_expense: int
    savings: int
    liabilities: tuple[LiabilityData, ...]


@dataclass(frozen=True)
class DreamData:
    name: str
    cost: int
    space: int


@dataclass(frozen=True)
class CashflowData:
    rat_race: list[dict]
    fast_track: list[dict]
    careers: list[CareerData]
    dreams: list[DreamData]
    small_deals: list[dict]
    big_deals: list[dict]
    doodads: list[dict]
    offers: list[dict]
    paycheck_spaces: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        object.__setattr__(
            self,
            "paycheck_spaces",
            tuple(s["index"] for s in self.rat_race if s["kind"] == "paycheck"),
        )


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise DataError(message)


def _check_deal(card: dict, deck: str) -> None:
    kind = card.get("kind")
    _require(kind in ASSET_KINDS, f"{deck}: unknown asset kind {kind!r}")
    if kind in STOCK_KINDS:
        _require(
            isinstance(card.get("price"), int) and card["price"] > 0,
            f"{deck}: stock card {card.get('name')!r} needs a positive price",
        )
        _require("symbol" in card, f"{deck}: stock card needs a symbol")
        _require(card.get("dividend", 0) >= 0, f"{deck}: dividend must be >= 0")
    else:
        cost = card.get("cost", 0)
        down = card.get("down_payment", cost)
        _require(cost > 0, f"{deck}: card {card.get('name')!r} needs a positive cost")
        _require(0 < down <= cost, f"{deck}: down payment must be in (0, cost]")
        _require(card.get("financing", 0) >= 0, f"{deck}: financing must be >= 0")
        _require(card.get("cash_flow", 0) >= 0, f"{deck}: cash flow must be >= 0")


def load_cashflow_data(
    board_path: str | Path | None = None, cards_path: str | Path | None = None
) -> CashflowData:
    board_path = Path(board_path) if board_path else _default_path("cashflow_board.json")
    cards_path = Path(cards_path) if cards_path else _default_path("cashflow_cards.json")
    board = json.loads(board_path.read_text())
    cards = json.loads(cards_path.read_text())

    rat_race = board.get("rat_race", [])
    fast_track = board.get("fast_track", [])
    _require(len(rat_race) == RAT_RACE_SIZE, f"rat race must have {RAT_RACE_SIZE} spaces")
    _require(len(fast_track) == FAST_TRACK_SIZE, f"fast track must have {FAST_TRACK_SIZE} spaces")
    for i, space in enumerate(rat_race):
        _require(space.get("index") == i, "rat race indices must be 0..23 in order")
        _require(space.get("kind") in RR_KINDS, f"unknown rat race kind {space.get('kind')!r}")
    for i, space in enumerate(fast_track):
        _require(space.get("index") == i, "fast track indices must be 0..39 in order")
        kind = space.get("kind")
        _require(kind in FT_KINDS, f"unknown fast track kind {kind!r}")
        if kind == "business":
            _require(space.get("cost", 0) > 0, "fast track business needs a cost")
            _require(space.get("cfd_income", 0) > 0, "fast track business needs cfd_income")
        if kind == "risk":
            _require(space.get("risk") in RISK_KINDS, f"unknown risk {space.get('risk')!r}")

    careers = []
    for c in cards.get("careers", []):
        liabilities = tuple(
            LiabilityData(l["kind"], l["name"], l["principal"], l["payment"])
            for l in c.get("liabilities", [])
        )
        career = CareerData(
            name=c["name"],
            salary=c["salary"],
            taxes=c["taxes"],
            other_expenses=c["other_expenses"],
            per_child_expense=c["per_child_expense"],
            savings=c["savings"],
            liabilities=liabilities,
        )
        _require(
            min(career.salary, career.taxes, career.other_expenses, career.savings) >= 0,
            f"career {career.name!r} has negative currency fields",
        )
        careers.append(career)
    _require(len(careers) >= 6, "need at least 6 careers")

    dream_spaces = {i for i, s in enumerate(fast_track) if s["kind"] == "dream"}
    dreams = [DreamData(d["name"], d["cost"], d["space"]) for d in cards.get("dreams", [])]
    for dream in dreams:
        _require(dream.cost >= 0, f"dream {dream.name!r} has a negative cost")
        _require(dream.space in dream_spaces, f"dream {dream.name!r} not on a dream space")
    _require(len(dreams) >= 8, "need at least 8 dreams")

    small = cards.get("small_deals", [])
    big = cards.get("big_deals", [])
    doodads = cards.get("doodads", [])
    offers = cards.get("offers", [])
    _require(len(small) >= 12, "need at least 12 small deals")
    _require(len(big) >= 8, "need at least 8 big deals")
    _require(len(doodads) >= 12, "need at least 12 doodads")
    _require(len(offers) >= 8, "need at least 8 offers")
    for card in small:
        _check_deal(card, "small_deals")
    for card in big:
        _check_deal(card, "big_deals")
    for card in doodads:
        _require(card.get("cost", -1) >= 0, "doodad needs a non-negative cost")
    for card in offers:
        kind = card.get("kind")
        _require(kind in {"per_unit", "fixed", "multiplier"}, f"unknown offer kind {kind!r}")
        if kind == "per_unit":
            _require(card.get("unit_price", 0) > 0 and "symbol" in card, "bad per-unit offer")
        elif kind == "fixed":
            _require(card.get("price", 0) > 0 and "asset_kind" in card, "bad fixed offer")
        else:
            _require(card.get("factor", 0) > 0 and "asset_kind" in card, "bad multiplier offer")

    return CashflowData(
        rat_race=rat_race,
        fast_track=fast_track,
        careers=careers,
        dreams=dreams,
        small_deals=small,
        big_deals=big,
        doodads=doodads,
        offers=offers,
    )
