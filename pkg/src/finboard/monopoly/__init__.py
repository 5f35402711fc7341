from .data import MonopolyData, load_monopoly_data
from .engine import MonopolyEngine, MonopolyPlayer
from .rules import (
    compute_net_worth,
    compute_rent,
    mortgage_credit,
    mortgage_transfer_fee,
    unmortgage_cost,
)

__all__ = [
    "MonopolyData",
    "MonopolyEngine",
    "MonopolyPlayer",
    "compute_net_worth",
    "compute_rent",
    "load_monopoly_data",
    "mortgage_credit",
    "mortgage_transfer_fee",
    "unmortgage_cost",
]
