"""Acquire rules engine: tile placement, chains, mergers, stock, endgame.

Turn shape: place a tile (founding, growing, or merging chains), buy up to
three shares of active chains, optionally declare the end of the game when
the condition holds, then redraw to six tiles.  Mergers pay majority and
minority bonuses and let every holder of a defunct chain sell, trade
(two-for-one), or keep their shares.
"""

from __future__ import annotations

from ..core.engine import DecisionRequest, GameEngine, TurnGen
from ..core.faults import FaultPolicy
from ..core.protocol import (
    ActionCatalog,
    ActionSpec,
    ChoiceSlot,
    Decision,
    IntSlot,
)
from ..core.rng import RngStream
from .board import ALL_TILES, ORPHAN, classify_placement, connected_component, neighbors, tile_sort_key
from .pricing import PriceSchedule, split_bonuses

BUY_QUOTA = 3


class AcquireEngine(GameEngine):
    game = "acquire"

    def __init__(
        self,
        match_id: str,
        num_players: int,
        recorder,
        rng: RngStream,
        schedule: PriceSchedule,
        policy: FaultPolicy | None = None,
    ):
        super().__init__(match_id, num_players, recorder)
        self.schedule = schedule
        self.policy = policy or FaultPolicy()
        self.cells: dict[str, str] = {}
        self.chain_tiles: dict[str, set[str]] = {c: set() for c in schedule.chains}
        self.bag: list[str] = list(ALL_TILES)
        rng.derive("tiles").shuffle(self.bag)
        self._bag_pos = 0
        self.hands: list[list[str]] = [[] for _ in range(num_players)]
        self.cash = [schedule.initial_cash] * num_players
        self.bank_shares = {c: schedule.shares_per_chain for c in schedule.chains}
        self.holdings = [{c: 0 for c in schedule.chains} for _ in range(num_players)]
        self.discarded: list[str] = []
        self.turn_seq: list[int] = list(range(num_players))
        self.game_over = False
        self.match_winner: int | None = None
        self._ever_safe: set[str] = set()
        self._exchanged_this_turn = False
        self._schedule_public = {
            "tiers": dict(schedule.tiers),
            "brackets": [list(b) for b in schedule.brackets],
            "premium": dict(schedule.tier_premium),
            "majority": schedule.majority_multiplier,
            "minority": schedule.minority_multiplier,
            "safe_size": schedule.safe_size,
        }

    # -- bag and chains ---------------------------------------------------------

    def _draw_tile(self) -> str | None:
        if self._bag_pos >= len(self.bag):
            return None
        tile = self.bag[self._bag_pos]
        self._bag_pos += 1
        return tile

    def bag_count(self) -> int:
        return len(self.bag) - self._bag_pos

    def chain_sizes(self) -> dict[str, int]:
        return {c: len(tiles) for c, tiles in self.chain_tiles.items()}

    def active_chains(self) -> list[str]:
        return [c for c in self.schedule.chains if len(self.chain_tiles[c]) >= 2]

    def available_chains(self) -> list[str]:
        return [c for c in self.schedule.chains if not self.chain_tiles[c]]

    def price_of(self, chain: str) -> int:
        return self.schedule.share_price(chain, len(self.chain_tiles[chain]))

    def classify(self, tile: str) -> dict:
        return classify_placement(
            self.cells, tile, self.chain_sizes(), self.available_chains(), self.schedule.safe_size
        )

    def _assign(self, tile: str, chain: str) -> None:
        self.cells[tile] = chain
        self.chain_tiles[chain].add(tile)
        if len(self.chain_tiles[chain]) >= self.schedule.safe_size:
            self._ever_safe.add(chain)

    def _absorb_orphans(self, seed_tile: str, chain: str) -> list[str]:
        """Pull every orphan connected to the chain component into the chain."""
        absorbed = []
        component = connected_component(
            self.cells, seed_tile, lambda occ: occ == ORPHAN or occ == chain
        )
        for tile in sorted(component, key=tile_sort_key):
            if self.cells.get(tile) == ORPHAN:
                self._assign(tile, chain)
                absorbed.append(tile)
        return absorbed

    # -- snapshots and invariants --------------------------------------------------

    def state_dict(self) -> dict:
        return {
            "game": self.game,
            "round": self.round,
            "cells": dict(sorted(self.cells.items())),
            "bank_shares": dict(self.bank_shares),
            "holdings": [dict(h) for h in self.holdings],
            "cash": list(self.cash),
            "hands": [sorted(h, key=tile_sort_key) for h in self.hands],
            "bag": self.bag[self._bag_pos :],
            "discarded": sorted(self.discarded, key=tile_sort_key),
            "turn_order": list(self.turn_seq),
            "game_over": self.game_over,
            "winner": self.match_winner,
        }

    def public_snapshot(self) -> dict:
        sizes = self.chain_sizes()
        return {
            "game": self.game,
            "round": self.round,
            "cells": dict(sorted(self.cells.items())),
            "chains": {
                c: {
                    "size": sizes[c],
                    "price": self.price_of(c),
                    "safe": sizes[c] >= self.schedule.safe_size,
                    "bank_shares": self.bank_shares[c],
                }
                for c in self.schedule.chains
            },
            "holdings": [dict(h) for h in self.holdings],
            "cash": list(self.cash),
            "hand_sizes": [len(h) for h in self.hands],
            "bag_count": self.bag_count(),
            "turn_order": list(self.turn_seq),
            "schedule": self._schedule_public,
            "end_condition_met": self.end_condition_met(),
        }

    def private_snapshot(self, player: int) -> dict:
        return {"hand": sorted(self.hands[player], key=tile_sort_key)}

    def check_invariants(self) -> None:
        total = self.schedule.shares_per_chain
        for chain in self.schedule.chains:
            held = sum(h[chain] for h in self.holdings)
            if self.bank_shares[chain] + held != total:
                raise AssertionError(
                    f"share conservation broken for {chain}: bank {self.bank_shares[chain]} + held {held}"
                )
        on_board = len(self.cells)
        in_hands = sum(len(h) for h in self.hands)
        if self.bag_count() + in_hands + on_board + len(self.discarded) != len(ALL_TILES):
            raise AssertionError("tile conservation broken")
        for chain, tiles in self.chain_tiles.items():
            if not tiles:
                continue
            if len(tiles) == 1:
                raise AssertionError(f"chain {chain} has a single tile")
            start = next(iter(tiles))
            component = connected_component(self.cells, start, lambda occ, c=chain: occ == c)
            if component != tiles:
                raise AssertionError(f"chain {chain} is not connected")

    def active_players(self) -> list[int]:
        return list(range(self.num_players))

    def turn_order(self) -> list[int]:
        return list(self.turn_seq)

    def is_over(self) -> bool:
        return self.game_over

    def winner(self) -> int | None:
        return self.match_winner

    def _liquidation_value(self, player: int) -> int:
        value = self.cash[player]
        for chain in self.active_chains():
            value += self.holdings[player][chain] * self.price_of(chain)
        return value

    def ranking(self) -> list[int]:
        return sorted(
            range(self.num_players), key=lambda p: (self._liquidation_value(p), -p), reverse=True
        )

    def player_summary(self, player: int) -> dict:
        return {
            "seat": player,
            "cash": self.cash[player],
            "holdings": dict(self.holdings[player]),
            "net_worth": self._liquidation_value(player),
        }

    def _transfer(self, player: int, delta: int) -> list:
        return [[f"p{player}", delta], ["bank", -delta]]

    # -- setup: board seeding and turn order -------------------------------------------

    def setup(self) -> TurnGen:
        draws = []
        for seat in range(self.num_players):
            tile = self._draw_tile()
            draws.append((tile, seat))
            self.cells[tile] = ORPHAN
            self.emit_passive(seat, {"type": "initial_placement", "tile": tile})
        draws.sort(key=lambda d: tile_sort_key(d[0]))
        self.turn_seq = [seat for _, seat in draws]
        self.emit_passive(None, {"type": "turn_order", "order": list(self.turn_seq)})
        for seat in range(self.num_players):
            while len(self.hands[seat]) < self.schedule.hand_size:
                tile = self._draw_tile()
                if tile is None:
                    break
                self.hands[seat].append(tile)
            self.emit_passive(
                seat, {"type": "hand_dealt", "count": len(self.hands[seat]), "bag": self.bag_count()}
            )
        return
        yield  # pragma: no cover

    # -- the turn ----------------------------------------------------------------------

    def turn(self, player: int) -> TurnGen:
        if self.game_over:
            return
        self._exchanged_this_turn = False
        self.emit_passive(
            player,
            {"type": "turn_start", "cash": self.cash[player], "hand_size": len(self.hands[player])},
        )
        yield from self._placement_phase(player)
        if not self.game_over:
            yield from self._buy_phase(player)
        if not self.game_over and self.end_condition_met():
            yield from self._declare_phase(player)
        if not self.game_over:
            self._refill_hand(player)
            self._dead_tile_exchange(player)
            if self._auto_end_due():
                self._final_accounting(None)
        self.emit_passive(
            player,
            {"type": "turn_end", "cash": self.cash[player], "hand_size": len(self.hands[player])},
        )

    # -- placement ------------------------------------------------------------------------

    def _playable_tiles(self, player: int) -> list[str]:
        return sorted(
            (t for t in self.hands[player] if self.classify(t)["kind"] != "illegal"),
            key=tile_sort_key,
        )

    def _placement_phase(self, player: int) -> TurnGen:
        playable = self._playable_tiles(player)
        if not playable:
            self.emit_passive(
                player, {"type": "no_playable_tile", "hand_size": len(self.hands[player])}
            )
            return
        catalog = ActionCatalog(
            phase="PLAY_TILE",
            actions=[
                ActionSpec(
                    "PLAY_TILE",
                    "Place one tile from your hand on its board space.",
                    slots={"tile": ChoiceSlot(playable)},
                )
            ],
            fallback=Decision("PLAY_TILE", {"tile": playable[0]}),
            ending=frozenset({"PLAY_TILE"}),
        )
        request = DecisionRequest(
            player,
            catalog,
            trigger="place a building tile",
            private_builder=lambda: self.private_snapshot(player),
        )
        applied = yield request
        tile = applied.decision.params["tile"]
        self.hands[player].remove(tile)
        cls = self.classify(tile)
        kind = cls["kind"]

        if kind == "orphan":
            self.cells[tile] = ORPHAN
            self.emit_decision(
                request, applied, {"type": "placement", "tile": tile, "classification": "orphan"}
            )
            return

        if kind == "grows":
            chain = cls["chains"][0]
            self._assign(tile, chain)
            absorbed = self._absorb_orphans(tile, chain)
            shares = self.holdings[player][chain]
            top = max(h[chain] for h in self.holdings)
            self.emit_decision(
                request,
                applied,
                {
                    "type": "placement",
                    "tile": tile,
                    "classification": "grows",
                    "chain": chain,
                    "absorbed": absorbed,
                    "size": len(self.chain_tiles[chain]),
                    "shares_held": shares,
                    "top_holder": shares > 0 and shares == top,
                    "sole_top": shares > 0
                    and all(h[chain] < shares for i, h in enumerate(self.holdings) if i != player),
                },
            )
            return

        if kind == "founds":
            self.cells[tile] = ORPHAN
            self.emit_decision(
                request, applied, {"type": "placement", "tile": tile, "classification": "founds"}
            )
            yield from self._found_chain(player, tile)
            return

        # merger
        self.cells[tile] = ORPHAN
        self.emit_decision(
            request,
            applied,
            {
                "type": "placement",
                "tile": tile,
                "classification": "merges",
                "chains": cls["chains"],
            },
        )
        yield from self._resolve_merger(player, tile, cls["chains"])

    def _found_chain(self, player: int, tile: str) -> TurnGen:
        options = self.available_chains()
        catalog = ActionCatalog(
            phase="FOUND_CHAIN",
            actions=[
                ActionSpec(
                    "FOUND_CHAIN",
                    "Choose which hotel chain to found.",
                    slots={"chain": ChoiceSlot(options)},
                )
            ],
            fallback=Decision("FOUND_CHAIN", {"chain": options[0]}),
            ending=frozenset({"FOUND_CHAIN"}),
        )
        request = DecisionRequest(player, catalog, trigger=f"tile {tile} founds a new chain")
        applied = yield request
        chain = applied.decision.params["chain"]
        self.cells.pop(tile)
        self._assign(tile, chain)
        absorbed = self._absorb_orphans(tile, chain)
        founder_share = False
        if self.bank_shares[chain] > 0:
            self.bank_shares[chain] -= 1
            self.holdings[player][chain] += 1
            founder_share = True
        self.emit_decision(
            request,
            applied,
            {
                "type": "chain_founded",
                "chain": chain,
                "tile": tile,
                "absorbed": absorbed,
                "size": len(self.chain_tiles[chain]),
                "founder_share": founder_share,
            },
        )

    # -- mergers ------------------------------------------------------------------------------

    def _resolve_merger(self, player: int, tile: str, chains: list[str]) -> TurnGen:
        sizes = self.chain_sizes()
        top_size = sizes[chains[0]]
        tied = [c for c in chains if sizes[c] == top_size]
        if len(tied) > 1:
            catalog = ActionCatalog(
                phase="CHOOSE_MERGER_SURVIVOR",
                actions=[
                    ActionSpec(
                        "CHOOSE_MERGER_SURVIVOR",
                        "Equal-sized chains: choose which one survives.",
                        slots={"surviving_chain": ChoiceSlot(sorted(tied))},
                    )
                ],
                fallback=Decision("CHOOSE_MERGER_SURVIVOR", {"surviving_chain": sorted(tied)[0]}),
                ending=frozenset({"CHOOSE_MERGER_SURVIVOR"}),
            )
            request = DecisionRequest(player, catalog, trigger="merger tie: pick the survivor")
            applied = yield request
            survivor = applied.decision.params["surviving_chain"]
            self.emit_decision(request, applied, {"type": "survivor_choice", "chain": survivor})
        else:
            survivor = tied[0]
        defuncts = sorted((c for c in chains if c != survivor), key=lambda c: (-sizes[c], c))
        self.emit_passive(
            player,
            {
                "type": "merger",
                "survivor": survivor,
                "defunct": defuncts,
                "sizes": {c: sizes[c] for c in chains},
                "trigger_player": player,
            },
        )
        # The merging tile joins the survivor first: it is the connector
        # through which every absorbed chain reaches the survivor.
        self.cells.pop(tile)
        self._assign(tile, survivor)
        for defunct in defuncts:
            if defunct in self._ever_safe:
                raise AssertionError(f"safe chain {defunct} cannot be acquired")
            yield from self._retire_chain(player, defunct, survivor, sizes[defunct])
        self._absorb_orphans(tile, survivor)
        self.emit_passive(
            player,
            {
                "type": "merger_complete",
                "survivor": survivor,
                "size": len(self.chain_tiles[survivor]),
            },
        )

    def _retire_chain(self, trigger: int, defunct: str, survivor: str, size: int) -> TurnGen:
        price = self.schedule.share_price(defunct, size)
        majority, minority = self.schedule.bonuses(defunct, size)
        payouts = split_bonuses(
            {p: self.holdings[p][defunct] for p in range(self.num_players)}, majority, minority
        )
        for shift in range(self.num_players):
            seat = (trigger + shift) % self.num_players
            if seat in payouts:
                amount = payouts[seat]
                self.cash[seat] += amount
                self.emit_passive(
                    seat,
                    {
                        "type": "bonus",
                        "chain": defunct,
                        "amount": amount,
                        "price": price,
                        "trigger_player": trigger,
                        "self_triggered": seat == trigger,
                        "transfers": self._transfer(seat, amount),
                    },
                    cash_delta=amount,
                )
        for shift in range(self.num_players):
            seat = (trigger + shift) % self.num_players
            holding = self.holdings[seat][defunct]
            if holding == 0:
                continue
            yield from self._disposition(seat, defunct, survivor, holding, price)
        for t in sorted(self.chain_tiles[defunct], key=tile_sort_key):
            self.cells[t] = survivor
            self.chain_tiles[survivor].add(t)
        self.chain_tiles[defunct].clear()

    def _disposition(
        self, seat: int, defunct: str, survivor: str, holding: int, price: int
    ) -> TurnGen:
        def constraint(params: dict) -> str | None:
            sell, trade, keep = params["sell"], params["trade"], params["keep"]
            if sell + trade + keep != holding:
                return f"sell+trade+keep must equal your {holding} shares"
            if trade % 2 != 0:
                return "trade counts must be even (two defunct shares per survivor share)"
            if trade // 2 > self.bank_shares[survivor]:
                return f"only {self.bank_shares[survivor]} {survivor} shares remain in the bank"
            return None

        def sampler(rng) -> dict:
            max_trade = min(holding, 2 * self.bank_shares[survivor])
            trade = 2 * rng.randint(0, max_trade // 2)
            rest = holding - trade
            sell = rng.randint(0, rest)
            return {"sell": sell, "trade": trade, "keep": rest - sell}

        catalog = ActionCatalog(
            phase="STOCK_DISPOSITION",
            actions=[
                ActionSpec(
                    "STOCK_DISPOSITION",
                    f"Dispose of your {holding} {defunct} shares: sell at ${price}, "
                    f"trade two-for-one into {survivor}, or keep.",
                    slots={
                        "sell": IntSlot(0, holding),
                        "trade": IntSlot(0, holding),
                        "keep": IntSlot(0, holding),
                    },
                    constraint=constraint,
                    sampler=sampler,
                )
            ],
            fallback=Decision("STOCK_DISPOSITION", {"sell": 0, "trade": 0, "keep": holding}),
            ending=frozenset({"STOCK_DISPOSITION"}),
        )
        request = DecisionRequest(
            seat, catalog, trigger=f"{defunct} was acquired by {survivor}: dispose of shares"
        )
        applied = yield request
        params = applied.decision.params
        sell, trade = params["sell"], params["trade"]
        proceeds = sell * price
        gained = trade // 2
        self.holdings[seat][defunct] -= sell + trade
        self.bank_shares[defunct] += sell + trade
        self.bank_shares[survivor] -= gained
        self.holdings[seat][survivor] += gained
        self.cash[seat] += proceeds
        self.emit_decision(
            request,
            applied,
            {
                "type": "disposition",
                "chain": defunct,
                "survivor": survivor,
                "price": price,
                "proceeds": proceeds,
                "survivor_shares_gained": gained,
                "transfers": self._transfer(seat, proceeds) if proceeds else [],
            },
            cash_delta=proceeds if proceeds else None,
        )

    # -- stock purchase -------------------------------------------------------------------------

    def _buy_phase(self, player: int) -> TurnGen:
        cash = self.cash[player]
        options = {
            c: self.price_of(c)
            for c in self.active_chains()
            if self.bank_shares[c] > 0 and self.price_of(c) <= cash
        }
        if not options:
            return
        self.emit_passive(
            player,
            {
                "type": "stock_purchase_opportunity",
                "cash_before": cash,
                "prices": options,
            },
        )
        slots = {
            c: IntSlot(
                0,
                min(BUY_QUOTA, self.bank_shares[c], cash // price),
                required=False,
            )
            for c, price in options.items()
        }

        def constraint(params: dict) -> str | None:
            total = sum(params.get(c, 0) for c in options)
            if total < 1:
                return "buy at least one share or end the turn"
            if total > BUY_QUOTA:
                return f"at most {BUY_QUOTA} shares per turn"
            cost = sum(params.get(c, 0) * options[c] for c in options)
            if cost > self.cash[player]:
                return f"cost {cost} exceeds cash {self.cash[player]}"
            return None

        def sampler(rng) -> dict:
            params = {c: 0 for c in options}
            budget = self.cash[player]
            for _ in range(rng.randint(1, BUY_QUOTA)):
                affordable = [
                    c
                    for c in options
                    if options[c] <= budget and params[c] < min(BUY_QUOTA, self.bank_shares[c])
                ]
                if not affordable:
                    break
                chain = rng.choice(affordable)
                params[chain] += 1
                budget -= options[chain]
            if sum(params.values()) == 0:
                cheapest = min(options, key=lambda c: (options[c], c))
                params[cheapest] = 1
            return params

        catalog = ActionCatalog(
            phase="BUY_STOCKS",
            actions=[
                ActionSpec(
                    "BUY_STOCKS",
                    "Buy up to three shares of active chains (quantity per chain).",
                    slots=slots,
                    constraint=constraint,
                    sampler=sampler,
                ),
                ActionSpec("END_TURN", "Buy nothing this turn."),
            ],
            fallback=Decision("END_TURN"),
            ending=frozenset({"BUY_STOCKS", "END_TURN"}),
        )
        request = DecisionRequest(player, catalog, trigger="stock purchase phase")
        applied = yield request
        if applied.decision.action == "END_TURN":
            self.emit_decision(request, applied, {"type": "stock_purchase_skipped"})
            return
        purchases = {
            c: applied.decision.params.get(c, 0)
            for c in options
            if applied.decision.params.get(c, 0) > 0
        }
        cost = sum(q * options[c] for c, q in purchases.items())
        for c, q in purchases.items():
            self.bank_shares[c] -= q
            self.holdings[player][c] += q
        self.cash[player] -= cost
        self.emit_decision(
            request,
            applied,
            {
                "type": "stock_purchase",
                "purchases": purchases,
                "prices": {c: options[c] for c in purchases},
                "total_cost": cost,
                "transfers": self._transfer(player, -cost),
            },
            cash_delta=-cost,
        )

    # -- endgame -----------------------------------------------------------------------------------

    def end_condition_met(self) -> bool:
        active = self.active_chains()
        if not active:
            return False
        if any(len(self.chain_tiles[c]) >= self.schedule.end_size for c in active):
            return True
        return all(len(self.chain_tiles[c]) >= self.schedule.safe_size for c in active)

    def _declare_phase(self, player: int) -> TurnGen:
        catalog = ActionCatalog(
            phase="DECLARE_END_GAME",
            actions=[
                ActionSpec(
                    "DECLARE_END_GAME",
                    "The end condition holds: declare the end of the game?",
                    slots={"declare_end_game": ChoiceSlot([True, False])},
                )
            ],
            fallback=Decision("DECLARE_END_GAME", {"declare_end_game": False}),
            ending=frozenset({"DECLARE_END_GAME"}),
        )
        request = DecisionRequest(player, catalog, trigger="end condition met")
        applied = yield request
        declare = applied.decision.params["declare_end_game"]
        self.emit_decision(request, applied, {"type": "end_declared", "declare": declare})
        if declare:
            self._final_accounting(player)

    def _auto_end_due(self) -> bool:
        if self.bag_count() > 0:
            return False
        if all(not hand for hand in self.hands):
            return True
        return all(not self._playable_tiles(p) for p in range(self.num_players))

    def _final_accounting(self, declarer: int | None) -> None:
        self.game_over = True
        sizes = self.chain_sizes()
        for chain in self.schedule.chains:
            size = sizes[chain]
            active = size >= 2
            price = self.schedule.share_price(chain, size) if active else 0
            if active:
                majority, minority = self.schedule.bonuses(chain, size)
                payouts = split_bonuses(
                    {p: self.holdings[p][chain] for p in range(self.num_players)},
                    majority,
                    minority,
                )
                for seat in range(self.num_players):
                    if seat in payouts:
                        amount = payouts[seat]
                        self.cash[seat] += amount
                        self.emit_passive(
                            seat,
                            {
                                "type": "bonus",
                                "chain": chain,
                                "amount": amount,
                                "price": price,
                                "trigger_player": declarer,
                                "self_triggered": False,
                                "final": True,
                                "transfers": self._transfer(seat, amount),
                            },
                            cash_delta=amount,
                        )
            for seat in range(self.num_players):
                shares = self.holdings[seat][chain]
                if shares == 0:
                    continue
                value = shares * price
                self.holdings[seat][chain] = 0
                self.bank_shares[chain] += shares
                self.cash[seat] += value
                self.emit_passive(
                    seat,
                    {
                        "type": "share_conversion",
                        "chain": chain,
                        "shares": shares,
                        "price": price,
                        "value": value,
                        "transfers": self._transfer(seat, value) if value else [],
                    },
                    cash_delta=value if value else None,
                )
        best = max(self.cash)
        self.match_winner = self.cash.index(best)
        self.emit_passive(
            None,
            {"type": "match_over", "winner": self.match_winner, "cash": list(self.cash)},
        )

    # -- draws ---------------------------------------------------------------------------------------

    def _refill_hand(self, player: int) -> None:
        drawn = 0
        while len(self.hands[player]) < self.schedule.hand_size:
            tile = self._draw_tile()
            if tile is None:
                break
            self.hands[player].append(tile)
            drawn += 1
        if drawn:
            self.emit_passive(
                player,
                {
                    "type": "tiles_drawn",
                    "count": drawn,
                    "hand_size": len(self.hands[player]),
                    "bag": self.bag_count(),
                },
            )

    def _permanently_dead(self, tile: str) -> bool:
        cls = self.classify(tile)
        return cls["kind"] == "illegal" and cls.get("reason") == "would merge safe chains"

    def _dead_tile_exchange(self, player: int) -> None:
        """Swap one permanently unplayable tile per turn for a fresh draw."""
        if self._exchanged_this_turn or self.bag_count() == 0:
            return
        for tile in sorted(self.hands[player], key=tile_sort_key):
            if self._permanently_dead(tile):
                self.hands[player].remove(tile)
                self.discarded.append(tile)
                replacement = self._draw_tile()
                if replacement is not None:
                    self.hands[player].append(replacement)
                self._exchanged_this_turn = True
                self.emit_passive(
                    player,
                    {
                        "type": "dead_tile_exchange",
                        "tile": tile,
                        "replaced": replacement is not None,
                        "bag": self.bag_count(),
                    },
                )
                return
