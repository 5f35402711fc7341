from .data import CashflowData, load_cashflow_data
from .engine import CashflowEngine
from .sheet import Asset, FastTrackSheet, Liability, PlayerSheet, SheetError

__all__ = [
    "Asset",
    "CashflowData",
    "CashflowEngine",
    "FastTrackSheet",
    "Liability",
    "PlayerSheet",
    "SheetError",
    "load_cashflow_data",
]
