"""Acquire board geometry: 12x9 grid, tile labels, placement classification.

Cells hold either nothing, an unchained placed tile ("orphan"), or a chain
name.  Placement of a tile is classified as orphan / founds / grows /
merges / illegal purely from the grid, so the classifier can be checked
against an independent flood-fill oracle.
"""

from __future__ import annotations

COLS = 12
ROWS = 9
ORPHAN = "*"

ALL_TILES = tuple(f"{c}{chr(ord('A') + r)}" for c in range(1, COLS + 1) for r in range(ROWS))


def parse_tile(label: str) -> tuple[int, int]:
    col = int(label[:-1])
    row = ord(label[-1]) - ord("A")
    if not (1 <= col <= COLS and 0 <= row < ROWS):
        raise ValueError(f"bad tile {label!r}")
    return col, row


def tile_sort_key(label: str) -> tuple[int, int]:
    return parse_tile(label)


def neighbors(label: str) -> list[str]:
    col, row = parse_tile(label)
    out = []
    if col > 1:
        out.append(f"{col - 1}{chr(ord('A') + row)}")
    if col < COLS:
        out.append(f"{col + 1}{chr(ord('A') + row)}")
    if row > 0:
        out.append(f"{col}{chr(ord('A') + row - 1)}")
    if row < ROWS - 1:
        out.append(f"{col}{chr(ord('A') + row + 1)}")
    return out


def classify_placement(
    cells: dict[str, str],
    tile: str,
    chain_sizes: dict[str, int],
    available_chains: list[str],
    safe_size: int,
) -> dict:
    """Classify placing `tile` onto the grid described by `cells`.

    Returns {"kind": ..., "chains": adjacent chain names largest-first}.
    Illegal placements: joining two safe chains, or founding when all seven
    chains are already on the board.
    """
    if tile in cells:
        return {"kind": "illegal", "chains": [], "reason": "tile already on board"}
    adjacent_chains: list[str] = []
    adjacent_orphans = 0
    for n in neighbors(tile):
        occupant = cells.get(n)
        if occupant is None:
            continue
        if occupant == ORPHAN:
            adjacent_orphans += 1
        elif occupant not in adjacent_chains:
            adjacent_chains.append(occupant)
    if not adjacent_chains:
        if adjacent_orphans == 0:
            return {"kind": "orphan", "chains": []}
        if not available_chains:
            return {"kind": "illegal", "chains": [], "reason": "no chain available to found"}
        return {"kind": "founds", "chains": []}
    if len(adjacent_chains) == 1:
        return {"kind": "grows", "chains": adjacent_chains}
    safe = [c for c in adjacent_chains if chain_sizes[c] >= safe_size]
    if len(safe) >= 2:
        return {"kind": "illegal", "chains": adjacent_chains, "reason": "would merge safe chains"}
    ordered = sorted(adjacent_chains, key=lambda c: (-chain_sizes[c], c))
    return {"kind": "merges", "chains": ordered}


def connected_component(cells: dict[str, str], start: str, member) -> set[str]:
    """Flood fill from `start` over cells whose occupant satisfies `member`."""
    seen = {start}
    frontier = [start]
    while frontier:
        current = frontier.pop()
        for n in neighbors(current):
            if n not in seen and n in cells and member(cells[n]):
                seen.add(n)
                frontier.append(n)
    return seen
