from .board import ALL_TILES, ORPHAN, classify_placement, connected_component, neighbors, parse_tile
from .engine import AcquireEngine
from .pricing import PriceSchedule, load_price_schedule, split_bonuses

__all__ = [
    "ALL_TILES",
    "AcquireEngine",
    "ORPHAN",
    "PriceSchedule",
    "classify_placement",
    "connected_component",
    "load_price_schedule",
    "neighbors",
    "parse_tile",
    "split_bonuses",
]
