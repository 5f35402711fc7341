"""Monopoly board and card data: the standard 40-space layout as JSON."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

BOARD_SIZE = 40
CARD_EFFECTS = {"cash", "move", "go_to_jail", "jail_card", "repairs"}


class DataError(ValueError):
    pass


@dataclass(frozen=True)
class MonopolyData:
    spaces: list[dict]
    chance: list[dict]
    community_chest: list[dict]
    initial_cash: int
    go_credit: int
    jail_fine: int
    income_tax: int
    luxury_tax: int
    houses: int
    hotels: int
    groups: dict[str, tuple[int, ...]] = field(init=False)
    railroads: tuple[int, ...] = field(init=False)
    utilities: tuple[int, ...] = field(init=False)
    jail_index: int = field(init=False)

    def __post_init__(self):
        groups: dict[str, list[int]] = {}
        railroads = []
        utilities = []
        jail_index = 10
        for space in self.spaces:
            kind = space["kind"]
            if kind == "street":
                groups.setdefault(space["group"], []).append(space["index"])
            elif kind == "railroad":
                railroads.append(space["index"])
            elif kind == "utility":
                utilities.append(space["index"])
            elif kind == "jail":
                jail_index = space["index"]
        object.__setattr__(self, "groups", {g: tuple(v) for g, v in groups.items()})
        object.__setattr__(self, "railroads", tuple(railroads))
        object.__setattr__(self, "utilities", tuple(utilities))
        object.__setattr__(self, "jail_index", jail_index)

    def space(self, index: int) -> dict:
        return self.spaces[index]

    def mortgage_value(self, index: int) -> int:
        return self.spaces[index]["price"] // 2

    def ownable(self, index: int) -> bool:
        return self.spaces[index]["kind"] in ("street", "railroad", "utility")


def load_monopoly_data(
    board_path: str | Path | None = None, cards_path: str | Path | None = None
) -> MonopolyData:
    if board_path is None:
        board_path = Path(str(resources.files("finboard").joinpath("data", "monopoly_board.json")))
    if cards_path is None:
        cards_path = Path(str(resources.files("finboard").joinpath("data", "monopoly_cards.json")))
    board = json.loads(Path(board_path).read_text())
    cards = json.loads(Path(cards_path).read_text())

    spaces = board["spaces"]
    if len(spaces) != BOARD_SIZE:
        raise DataError(f"board must have {BOARD_SIZE} spaces")
    census = {}
    for i, space in enumerate(spaces):
        if space.get("index") != i:
            raise DataError("space indices must be 0..39 in order")
        kind = space["kind"]
        census[kind] = census.get(kind, 0) + 1
        if kind == "street":
            if len(space.get("rent", [])) != 6:
                raise DataError(f"street {space['name']} needs a 6-level rent schedule")
            if space["price"] <= 0 or space["house_cost"] <= 0:
                raise DataError(f"street {space['name']} needs positive price and house cost")
    expected = {
        "street": 22,
        "railroad": 4,
        "utility": 2,
        "chance": 3,
        "community_chest": 3,
        "income_tax": 1,
        "luxury_tax": 1,
        "go": 1,
        "jail": 1,
        "free_parking": 1,
        "go_to_jail": 1,
    }
    if census != expected:
        raise DataError(f"space census {census} does not match the standard layout {expected}")
    groups: dict[str, int] = {}
    for space in spaces:
        if space["kind"] == "street":
            groups[space["group"]] = groups.get(space["group"], 0) + 1
    if len(groups) != 8:
        raise DataError(f"expected 8 color groups, got {len(groups)}")

    for deck_name in ("chance", "community_chest"):
        deck = cards.get(deck_name, [])
        if len(deck) != 16:
            raise DataError(f"{deck_name} deck must have 16 cards")
        for card in deck:
            if card.get("effect") not in CARD_EFFECTS:
                raise DataError(f"unknown card effect {card.get('effect')!r}")
            if card["effect"] == "move" and not 0 <= card.get("target", -1) < BOARD_SIZE:
                raise DataError("move card needs a board target")
            if card["effect"] == "repairs" and (
                card.get("per_house", 0) <= 0 or card.get("per_hotel", 0) <= 0
            ):
                raise DataError("repairs card needs per_house and per_hotel charges")

    return MonopolyData(
        spaces=spaces,
        chance=cards["chance"],
        community_chest=cards["community_chest"],
        initial_cash=board["initial_cash"],
        go_credit=board["go_credit"],
        jail_fine=board["jail_fine"],
        income_tax=board["income_tax"],
        luxury_tax=board["luxury_tax"],
        houses=board["houses"],
        hotels=board["hotels"],
    )
