"""Pure Monopoly rule arithmetic: rent, mortgage figures, net worth.

Kept free of engine state so the tables can be unit-checked directly
against the rule book figures (railroad 25/50/100/200, utility 4x/10x,
mortgage = half price, redemption = ceil(1.1 x half price)).
"""

from __future__ import annotations

import math

from .data import MonopolyData

RAILROAD_RENTS = (25, 50, 100, 200)
UTILITY_MULTIPLIERS = (4, 10)
HOTEL_LEVEL = 5


def mortgage_credit(price: int) -> int:
    return price // 2


def unmortgage_cost(price: int) -> int:
    """Redemption: the mortgage value plus 10% interest, rounded up."""
    return math.ceil(mortgage_credit(price) * 1.1)


def mortgage_transfer_fee(price: int) -> int:
    """Keeping a traded property mortgaged costs 10% of its mortgage value."""
    return math.ceil(mortgage_credit(price) * 0.1)


def compute_rent(
    data: MonopolyData,
    space_index: int,
    owner_deeds: dict[int, dict],
    dice_total: int,
) -> int:
    """Rent owed for landing on `space_index` owned via `owner_deeds`
    (index -> {"mortgaged": bool, "level": int}).  Mortgaged: no rent."""
    deed = owner_deeds[space_index]
    if deed["mortgaged"]:
        return 0
    space = data.space(space_index)
    kind = space["kind"]
    if kind == "railroad":
        count = sum(1 for i in data.railroads if i in owner_deeds)
        return RAILROAD_RENTS[count - 1]
    if kind == "utility":
        count = sum(1 for i in data.utilities if i in owner_deeds)
        return UTILITY_MULTIPLIERS[count - 1] * dice_total
    level = deed["level"]
    rent = space["rent"][level]
    if level == 0:
        group = data.groups[space["group"]]
        if all(i in owner_deeds for i in group):
            rent *= 2
    return rent


def building_value(data: MonopolyData, index: int, level: int) -> int:
    """Buildings valued at purchase cost; a hotel counts as five house buys."""
    if level == 0:
        return 0
    return data.space(index)["house_cost"] * level


def compute_net_worth(data: MonopolyData, cash: int, deeds: dict[int, dict]) -> int:
    worth = cash
    for index, deed in deeds.items():
        price = data.space(index)["price"]
        worth += mortgage_credit(price) if deed["mortgaged"] else price
        worth += building_value(data, index, deed["level"])
    return worth
