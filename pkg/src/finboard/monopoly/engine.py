"""Monopoly rules engine.

Turn shape: jail handling or dice movement (doubles grant extra rolls,
three in a row jail the player), landing resolution (rent, taxes, cards,
purchase-or-auction), then an open management phase (building, mortgages,
trades) until END_TURN.  Payments a player cannot cover enter the
fund-raising flow; failure there resolves into bankruptcy with the estate
passing to the creditor or back to the bank.
"""

from __future__ import annotations

from ..core.engine import DecisionRequest, GameEngine, TurnGen
from ..core.faults import EngineInconsistency, FaultPolicy
from ..core.protocol import (
    ActionCatalog,
    ActionSpec,
    ChoiceSlot,
    Decision,
    IntSlot,
    SubsetSlot,
)
from ..core.rng import RngStream, advance_position, roll_dice
from .data import BOARD_SIZE, MonopolyData
from .rules import (
    HOTEL_LEVEL,
    building_value,
    compute_net_worth,
    compute_rent,
    mortgage_credit,
    mortgage_transfer_fee,
    unmortgage_cost,
)

NEGOTIATION_ROUND_CAP = 6
MAX_JAIL_FAILURES = 3


class MonopolyPlayer:
    def __init__(self, seat: int, cash: int):
        self.seat = seat
        self.cash = cash
        self.position = 0
        self.deeds: dict[int, dict] = {}
        self.in_jail = False
        self.jail_failures = 0
        self.jail_cards: list[str] = []
        self.doubles = 0
        self.bankrupt = False

    def to_dict(self) -> dict:
        return {
            "seat": self.seat,
            "cash": self.cash,
            "position": self.position,
            "deeds": {str(i): dict(d) for i, d in sorted(self.deeds.items())},
            "in_jail": self.in_jail,
            "jail_failures": self.jail_failures,
            "jail_cards": list(self.jail_cards),
            "bankrupt": self.bankrupt,
        }


class MonopolyEngine(GameEngine):
    game = "monopoly"
    track_size = BOARD_SIZE

    def __init__(
        self,
        match_id: str,
        num_players: int,
        recorder,
        rng: RngStream,
        data: MonopolyData,
        policy: FaultPolicy | None = None,
    ):
        super().__init__(match_id, num_players, recorder)
        self.data = data
        self.policy = policy or FaultPolicy()
        self.rng_dice = rng.derive("dice")
        self.players = [MonopolyPlayer(i, data.initial_cash) for i in range(num_players)]
        self.bank_cash = 0
        self.bank_houses = data.houses
        self.bank_hotels = data.hotels
        self.decks: dict[str, list[int]] = {}
        for deck_name, size in (("chance", len(data.chance)), ("community_chest", len(data.community_chest))):
            order = list(range(size))
            rng.derive(f"cards:{deck_name}").shuffle(order)
            self.decks[deck_name] = order
        self.game_over = False
        self.match_winner: int | None = None
        self._trade_seq = 0
        self.pending_trade: dict | None = None
        self.pending_auction: dict | None = None
        self._board_public = [
            {
                k: space.get(k)
                for k in ("index", "kind", "name", "group", "price", "house_cost", "rent")
                if k in space
            }
            for space in data.spaces
        ]

    # -- snapshots and invariants ---------------------------------------------------

    def state_dict(self) -> dict:
        return {
            "game": self.game,
            "round": self.round,
            "players": [p.to_dict() for p in self.players],
            "bank_cash": self.bank_cash,
            "bank_houses": self.bank_houses,
            "bank_hotels": self.bank_hotels,
            "decks": {k: list(v) for k, v in self.decks.items()},
            "game_over": self.game_over,
            "winner": self.match_winner,
        }

    def public_snapshot(self) -> dict:
        snap = self.state_dict()
        snap["ownership"] = {
            str(i): owner.seat
            for owner in self.players
            for i in owner.deeds
        }
        snap["net_worth"] = [self.net_worth(p.seat) for p in self.players]
        snap["board"] = self._board_public
        snap["pending_trade"] = self.pending_trade
        snap["pending_auction"] = self.pending_auction
        return snap

    def check_invariants(self) -> None:
        total = sum(p.cash for p in self.players) + self.bank_cash
        expected = self.data.initial_cash * self.num_players
        if total != expected:
            raise AssertionError(f"cash ledger broken: players+bank={total}, expected {expected}")
        houses_on_board = 0
        hotels_on_board = 0
        owners: dict[int, int] = {}
        for p in self.players:
            for index, deed in p.deeds.items():
                if index in owners:
                    raise AssertionError(f"deed {index} has two owners")
                owners[index] = p.seat
                level = deed["level"]
                if deed["mortgaged"] and level > 0:
                    raise AssertionError(f"deed {index} is mortgaged and built")
                if level > 0 and self.data.space(index)["kind"] != "street":
                    raise AssertionError(f"non-street {index} has buildings")
                if level == HOTEL_LEVEL:
                    hotels_on_board += 1
                else:
                    houses_on_board += level
        if houses_on_board + self.bank_houses != self.data.houses:
            raise AssertionError("house stock conservation broken")
        if hotels_on_board + self.bank_hotels != self.data.hotels:
            raise AssertionError("hotel stock conservation broken")
        if self.bank_houses < 0 or self.bank_hotels < 0:
            raise AssertionError("negative building stock")
        for group, members in self.data.groups.items():
            group_owners = {owners.get(i) for i in members}
            if len(group_owners) == 1 and None not in group_owners:
                owner = self.players[group_owners.pop()]
                levels = [owner.deeds[i]["level"] for i in members]
                if max(levels) - min(levels) > 1:
                    raise AssertionError(f"uneven building in group {group}: {levels}")

    def active_players(self) -> list[int]:
        return [p.seat for p in self.players if not p.bankrupt]

    def is_over(self) -> bool:
        return self.game_over

    def winner(self) -> int | None:
        return self.match_winner

    def net_worth(self, seat: int) -> int:
        p = self.players[seat]
        return compute_net_worth(self.data, p.cash, p.deeds)

    def ranking(self) -> list[int]:
        return sorted(
            range(self.num_players),
            key=lambda s: (not self.players[s].bankrupt, self.net_worth(s), -s),
            reverse=True,
        )

    def player_summary(self, seat: int) -> dict:
        p = self.players[seat]
        return {
            "seat": seat,
            "cash": p.cash,
            "net_worth": self.net_worth(seat),
            "deeds": sorted(p.deeds),
            "bankrupt": p.bankrupt,
        }

    # -- cash plumbing -----------------------------------------------------------------

    def _move_cash(self, giver: int | None, taker: int | None, amount: int) -> list:
        """Move cash between accounts (None = bank); returns the transfer list."""
        if giver is not None:
            self.players[giver].cash -= amount
        else:
            self.bank_cash -= amount
        if taker is not None:
            self.players[taker].cash += amount
        else:
            self.bank_cash += amount
        give_name = "bank" if giver is None else f"p{giver}"
        take_name = "bank" if taker is None else f"p{taker}"
        return [[give_name, -amount], [take_name, amount]]

    # -- the turn --------------------------------------------------------------------------

    def turn(self, seat: int) -> TurnGen:
        p = self.players[seat]
        if self.game_over or p.bankrupt:
            return
        p.doubles = 0
        self.emit_passive(
            seat,
            {"type": "turn_start", "cash": p.cash, "position": p.position, "in_jail": p.in_jail},
        )
        if p.in_jail:
            yield from self._jail_turn(seat)
        else:
            yield from self._movement_sequence(seat)
        if not p.bankrupt and not self.game_over:
            yield from self._main_phase(seat)
        self.emit_passive(
            seat,
            {
                "type": "turn_end",
                "cash": p.cash,
                "net_worth": self.net_worth(seat),
                "bankrupt": p.bankrupt,
            },
        )

    # -- movement ------------------------------------------------------------------------------

    def _movement_sequence(self, seat: int) -> TurnGen:
        p = self.players[seat]
        while True:
            roll = roll_dice(self.rng_dice, 2)
            self.emit_passive(
                seat,
                {
                    "type": "dice_roll",
                    "dice": list(roll.dice),
                    "total": roll.total,
                    "double": roll.is_double,
                },
            )
            if roll.is_double:
                p.doubles += 1
                if p.doubles >= 3:
                    self._send_to_jail(seat, "three consecutive doubles")
                    return
            yield from self._move_token(seat, roll.total, roll.total)
            if p.bankrupt or self.game_over or p.in_jail:
                return
            if not roll.is_double:
                p.doubles = 0
                return

    def _move_token(self, seat: int, distance: int, dice_total: int) -> TurnGen:
        p = self.players[seat]
        start = p.position
        p.position, wrapped = advance_position(start, distance, BOARD_SIZE)
        self.emit_passive(
            seat,
            {
                "type": "move",
                "from": start,
                "to": p.position,
                "space": self.data.space(p.position)["name"],
            },
        )
        if wrapped:
            self._credit_go(seat)
        yield from self._resolve_landing(seat, dice_total)

    def _credit_go(self, seat: int) -> None:
        transfers = self._move_cash(None, seat, self.data.go_credit)
        self.emit_passive(
            seat,
            {"type": "go_credit", "amount": self.data.go_credit, "transfers": transfers},
            cash_delta=self.data.go_credit,
        )

    def _send_to_jail(self, seat: int, reason: str) -> None:
        p = self.players[seat]
        p.position = self.data.jail_index
        p.in_jail = True
        p.jail_failures = 0
        p.doubles = 0
        self.emit_passive(seat, {"type": "go_to_jail", "reason": reason})

    def _owner_of(self, index: int) -> MonopolyPlayer | None:
        for p in self.players:
            if index in p.deeds:
                return p
        return None

    def _resolve_landing(self, seat: int, dice_total: int) -> TurnGen:
        p = self.players[seat]
        space = self.data.space(p.position)
        kind = space["kind"]
        if kind in ("go", "free_parking", "jail"):
            self.emit_passive(seat, {"type": "landed", "space": space["name"], "effect": "none"})
            return
        if kind == "go_to_jail":
            self._send_to_jail(seat, "landed on Go To Jail")
            return
        if kind == "income_tax":
            yield from self._charge(seat, self.data.income_tax, None, "tax", space["name"])
            return
        if kind == "luxury_tax":
            yield from self._charge(seat, self.data.luxury_tax, None, "tax", space["name"])
            return
        if kind in ("chance", "community_chest"):
            yield from self._draw_card(seat, kind, dice_total)
            return
        # ownable property
        owner = self._owner_of(p.position)
        if owner is None:
            yield from self._purchase_or_auction(seat, p.position)
            return
        if owner.seat == seat:
            self.emit_passive(seat, {"type": "landed", "space": space["name"], "effect": "own"})
            return
        rent = compute_rent(self.data, p.position, owner.deeds, dice_total)
        if rent == 0:
            self.emit_passive(
                seat,
                {"type": "rent_suppressed", "space": space["name"], "owner": owner.seat},
            )
            return
        yield from self._charge(seat, rent, owner.seat, "rent", space["name"])

    # -- cards -------------------------------------------------------------------------------------

    def _draw_card(self, seat: int, deck_name: str, dice_total: int) -> TurnGen:
        cards = self.data.chance if deck_name == "chance" else self.data.community_chest
        order = self.decks[deck_name]
        card_id = order.pop(0)
        card = cards[card_id]
        effect = card["effect"]
        if effect != "jail_card":
            order.append(card_id)
        self.emit_passive(
            seat, {"type": "card_drawn", "deck": deck_name, "card": card["name"], "effect": effect}
        )
        if effect == "cash":
            amount = card["amount"]
            if amount >= 0:
                transfers = self._move_cash(None, seat, amount)
                self.emit_passive(
                    seat,
                    {"type": "card_cash", "amount": amount, "transfers": transfers},
                    cash_delta=amount,
                )
            else:
                yield from self._charge(seat, -amount, None, "card", card["name"])
        elif effect == "move":
            p = self.players[seat]
            distance = (card["target"] - p.position) % BOARD_SIZE
            if distance == 0:
                distance = BOARD_SIZE
            yield from self._move_token(seat, distance, dice_total)
        elif effect == "go_to_jail":
            self._send_to_jail(seat, "card")
        elif effect == "jail_card":
            self.players[seat].jail_cards.append(deck_name)
            self.emit_passive(seat, {"type": "jail_card_gained", "deck": deck_name})
        elif effect == "repairs":
            houses = 0
            hotels = 0
            for index, deed in self.players[seat].deeds.items():
                if deed["level"] == HOTEL_LEVEL:
                    hotels += 1
                else:
                    houses += deed["level"]
            amount = houses * card["per_house"] + hotels * card["per_hotel"]
            if amount > 0:
                yield from self._charge(seat, amount, None, "repairs", card["name"])
            else:
                self.emit_passive(seat, {"type": "repairs_free", "card": card["name"]})

    # -- purchase and auction --------------------------------------------------------------------------

    def _purchase_or_auction(self, seat: int, index: int) -> TurnGen:
        p = self.players[seat]
        space = self.data.space(index)
        price = space["price"]
        self.emit_passive(
            seat,
            {
                "type": "purchase_opportunity",
                "space": space["name"],
                "index": index,
                "price": price,
                "cash_before": p.cash,
            },
        )
        actions = []
        if p.cash >= price:
            actions.append(
                ActionSpec("BUY", f"Buy {space['name']} from the bank for ${price}.")
            )
        actions.append(ActionSpec("DECLINE", "Decline; the bank auctions the property."))
        catalog = ActionCatalog(
            phase="PURCHASE_DECISION",
            actions=actions,
            fallback=Decision("DECLINE"),
            ending=frozenset(a.name for a in actions),
        )
        request = DecisionRequest(seat, catalog, trigger=f"landed on unowned {space['name']}")
        applied = yield request
        if applied.decision.action == "BUY":
            transfers = self._move_cash(seat, None, price)
            p.deeds[index] = {"mortgaged": False, "level": 0}
            self.emit_decision(
                request,
                applied,
                {
                    "type": "property_bought",
                    "space": space["name"],
                    "index": index,
                    "price": price,
                    "cash_after": p.cash,
                    "transfers": transfers,
                },
                cash_delta=-price,
            )
            return
        self.emit_decision(
            request, applied, {"type": "purchase_declined", "space": space["name"], "index": index}
        )
        yield from self._auction(index, starter=(seat + 1) % self.num_players)

    def _auction(self, index: int, starter: int) -> TurnGen:
        space = self.data.space(index)
        order = [
            (starter + i) % self.num_players
            for i in range(self.num_players)
            if not self.players[(starter + i) % self.num_players].bankrupt
        ]
        active = set(order)
        high_bid = 0
        high_bidder: int | None = None
        self.emit_passive(
            None,
            {"type": "auction_start", "space": space["name"], "index": index, "order": order},
        )
        auction_round = 0
        while active:
            auction_round += 1
            for seat in order:
                if seat not in active:
                    continue
                if high_bidder is not None and active == {high_bidder}:
                    break
                min_next = high_bid + 1
                bidder = self.players[seat]
                if bidder.cash < min_next:
                    active.discard(seat)
                    self.emit_passive(
                        seat, {"type": "auction_autopass", "index": index, "min_bid": min_next}
                    )
                    continue
                self.pending_auction = {
                    "index": index,
                    "space": space["name"],
                    "price": space["price"],
                    "current_bid": high_bid,
                    "current_bidder": high_bidder,
                    "min_next": min_next,
                    "round": auction_round,
                    "active": sorted(active),
                }
                catalog = ActionCatalog(
                    phase="AUCTION",
                    actions=[
                        ActionSpec(
                            "BID",
                            f"Bid on {space['name']} (minimum ${min_next}, at most your cash).",
                            slots={"amount": IntSlot(min_next, bidder.cash)},
                        ),
                        ActionSpec("PASS", "Leave this auction."),
                    ],
                    fallback=Decision("PASS"),
                    ending=frozenset({"BID", "PASS"}),
                )
                request = DecisionRequest(
                    seat,
                    catalog,
                    trigger=(
                        f"auction for {space['name']}: current bid ${high_bid} "
                        f"(round {auction_round})"
                    ),
                )
                applied = yield request
                if applied.decision.action == "PASS":
                    active.discard(seat)
                    self.emit_decision(
                        request, applied, {"type": "auction_pass", "index": index}
                    )
                else:
                    high_bid = applied.decision.params["amount"]
                    high_bidder = seat
                    self.emit_decision(
                        request,
                        applied,
                        {"type": "auction_bid", "index": index, "amount": high_bid},
                    )
            if high_bidder is not None and active == {high_bidder}:
                break
            if high_bidder is None and not active:
                break
        self.pending_auction = None
        if high_bidder is None:
            self.emit_passive(None, {"type": "auction_unsold", "index": index})
            return
        winner = self.players[high_bidder]
        transfers = self._move_cash(high_bidder, None, high_bid)
        winner.deeds[index] = {"mortgaged": False, "level": 0}
        self.emit_passive(
            high_bidder,
            {
                "type": "auction_won",
                "space": space["name"],
                "index": index,
                "price": high_bid,
                "transfers": transfers,
            },
            cash_delta=-high_bid,
        )

    # -- charges, fund raising, bankruptcy ------------------------------------------------------------------

    def _charge(self, seat: int, amount: int, creditor: int | None, reason: str, detail: str):
        """Charge `seat`; fund-raise when short; bankruptcy on failure.
        Returns True when the payment was made in full."""
        p = self.players[seat]
        if p.cash < amount:
            survived = yield from self._raise_funds(seat, amount, creditor, reason, detail)
            if not survived:
                return False
        transfers = self._move_cash(seat, creditor, amount)
        self.emit_passive(
            seat,
            {
                "type": f"{reason}_paid",
                "detail": detail,
                "amount": amount,
                "to": "bank" if creditor is None else creditor,
                "transfers": transfers,
            },
            cash_delta=-amount,
        )
        return True

    def _mortgageable(self, p: MonopolyPlayer) -> list[int]:
        return sorted(
            i for i, d in p.deeds.items() if not d["mortgaged"] and d["level"] == 0
        )

    def _sellable_buildings(self, p: MonopolyPlayer) -> list[int]:
        """Streets whose building may be removed, preserving even building."""
        out = []
        for index, deed in p.deeds.items():
            level = deed["level"]
            if level == 0:
                continue
            group = self.data.groups[self.data.space(index)["group"]]
            group_levels = [p.deeds[i]["level"] for i in group if i in p.deeds]
            if level != max(group_levels):
                continue
            if level == HOTEL_LEVEL and self.bank_houses < 4:
                continue
            out.append(index)
        return sorted(out)

    def _max_liquidatable(self, p: MonopolyPlayer) -> int:
        value = p.cash
        for index, deed in p.deeds.items():
            price = self.data.space(index)["price"]
            if not deed["mortgaged"]:
                value += mortgage_credit(price)
            value += building_value(self.data, index, deed["level"]) // 2
        return value

    def _raise_funds(self, seat: int, due: int, creditor: int | None, reason: str, detail: str):
        p = self.players[seat]
        self.emit_passive(
            seat,
            {
                "type": "fundraising_start",
                "due": due,
                "reason": reason,
                "detail": detail,
                "cash": p.cash,
            },
        )
        while p.cash < due:
            mortgageable = self._mortgageable(p)
            sellable = self._sellable_buildings(p)
            hopeless = self._max_liquidatable(p) < due
            actions: list[ActionSpec] = []
            if mortgageable:
                actions.append(
                    ActionSpec(
                        "MORTGAGE",
                        "Mortgage a property for half its price.",
                        slots={"space_id": ChoiceSlot(mortgageable)},
                    )
                )
            if sellable:
                actions.append(
                    ActionSpec(
                        "SELL_BUILDING",
                        "Sell a building back to the bank at half cost.",
                        slots={"space_id": ChoiceSlot(sellable)},
                    )
                )
            if hopeless or not actions:
                actions.append(
                    ActionSpec("DECLARE_BANKRUPTCY", "Concede: the debt cannot be covered.")
                )
            fallback = self._fundraising_fallback(p, mortgageable, sellable, hopeless)
            catalog = ActionCatalog(
                phase="FUND_RAISING",
                actions=actions,
                fallback=fallback,
                ending=frozenset({"DECLARE_BANKRUPTCY"})
                if any(a.name == "DECLARE_BANKRUPTCY" for a in actions)
                else frozenset({actions[0].name}),
            )
            request = DecisionRequest(
                seat,
                catalog,
                trigger=f"must raise ${due} for {reason} ({detail}); cash ${p.cash}",
            )
            applied = yield request
            action = applied.decision.action
            if action == "DECLARE_BANKRUPTCY":
                self.emit_decision(request, applied, {"type": "bankruptcy_declared", "due": due})
                yield from self._resolve_bankruptcy(seat, creditor)
                return False
            if action == "MORTGAGE":
                self._apply_mortgage(seat, applied.decision.params["space_id"], request, applied)
            elif action == "SELL_BUILDING":
                self._apply_sell_building(
                    seat, applied.decision.params["space_id"], request, applied
                )
        self.emit_passive(seat, {"type": "fundraising_end", "cash": p.cash, "due": due})
        return True

    def _fundraising_fallback(self, p, mortgageable, sellable, hopeless) -> Decision:
        # Forced takeover liquidates in descending recovery order.
        best_building = None
        if sellable:
            best_building = max(
                sellable, key=lambda i: self.data.space(i)["house_cost"] // 2
            )
        best_mortgage = None
        if mortgageable:
            best_mortgage = max(mortgageable, key=lambda i: mortgage_credit(self.data.space(i)["price"]))
        if best_building is not None and (
            best_mortgage is None
            or self.data.space(best_building)["house_cost"] // 2
            >= mortgage_credit(self.data.space(best_mortgage)["price"])
        ):
            return Decision("SELL_BUILDING", {"space_id": best_building})
        if best_mortgage is not None:
            return Decision("MORTGAGE", {"space_id": best_mortgage})
        return Decision("DECLARE_BANKRUPTCY")

    def _resolve_bankruptcy(self, seat: int, creditor: int | None) -> TurnGen:
        p = self.players[seat]
        p.bankrupt = True
        self.emit_passive(
            seat,
            {
                "type": "bankruptcy",
                "creditor": "bank" if creditor is None else creditor,
                "cash": p.cash,
                "deeds": sorted(p.deeds),
            },
        )
        deeds = dict(sorted(p.deeds.items()))
        p.deeds = {}
        if creditor is None:
            # Buildings return to stock uncredited; deeds reset and auctioned.
            for index, deed in deeds.items():
                self._return_buildings(index, deed)
            if p.cash > 0:
                transfers = self._move_cash(seat, None, p.cash)
                self.emit_passive(
                    seat,
                    {"type": "estate_to_bank", "amount": -transfers[0][1], "transfers": transfers},
                    cash_delta=transfers[0][1],
                )
            self._check_game_over()
            if not self.game_over:
                for index in deeds:
                    yield from self._auction(index, starter=(seat + 1) % self.num_players)
        else:
            receiver = self.players[creditor]
            proceeds = 0
            for index, deed in deeds.items():
                level = deed["level"]
                if level > 0:
                    proceeds += (self.data.space(index)["house_cost"] * level) // 2
                    self._return_buildings(index, deed)
                receiver.deeds[index] = {"mortgaged": deed["mortgaged"], "level": 0}
            if proceeds:
                transfers = self._move_cash(None, seat, proceeds)
                self.emit_passive(
                    seat,
                    {"type": "building_sale", "amount": proceeds, "transfers": transfers},
                    cash_delta=proceeds,
                )
            estate = p.cash
            if estate > 0:
                transfers = self._move_cash(seat, creditor, estate)
                self.emit_passive(
                    seat,
                    {
                        "type": "estate_transfer",
                        "amount": estate,
                        "to": creditor,
                        "transfers": transfers,
                    },
                    cash_delta=-estate,
                )
            if p.jail_cards:
                receiver.jail_cards.extend(p.jail_cards)
                self.emit_passive(
                    seat, {"type": "jail_cards_transfer", "count": len(p.jail_cards), "to": creditor}
                )
                p.jail_cards = []
            self._check_game_over()
            mortgaged = sorted(i for i, d in receiver.deeds.items() if d["mortgaged"])
            received_mortgaged = [i for i in mortgaged if i in deeds]
            if not self.game_over:
                yield from self._mortgage_transfer_decisions(creditor, received_mortgaged)
        self.emit_passive(seat, {"type": "eliminated"})

    def _return_buildings(self, index: int, deed: dict) -> None:
        level = deed["level"]
        if level == HOTEL_LEVEL:
            self.bank_hotels += 1
        else:
            self.bank_houses += level
        deed["level"] = 0

    def _check_game_over(self) -> None:
        alive = self.active_players()
        if len(alive) <= 1:
            self.game_over = True
            self.match_winner = alive[0] if alive else None
            self.emit_passive(
                None,
                {
                    "type": "match_over",
                    "winner": self.match_winner,
                    "net_worth": [self.net_worth(s) for s in range(self.num_players)],
                },
            )

    def _mortgage_transfer_decisions(self, seat: int, indices: list[int]) -> TurnGen:
        """The new owner of each mortgaged deed immediately redeems it or pays
        the 10% transfer fee to keep the mortgage."""
        p = self.players[seat]
        for index in indices:
            if p.bankrupt or self.game_over:
                return
            price = self.data.space(index)["price"]
            redeem = unmortgage_cost(price)
            fee = mortgage_transfer_fee(price)
            actions = []
            if p.cash >= redeem:
                actions.append(
                    ActionSpec(
                        "UNMORTGAGE_NOW",
                        f"Repay the mortgage plus 10% interest (${redeem}).",
                    )
                )
            actions.append(
                ActionSpec(
                    "KEEP_MORTGAGED",
                    f"Keep the mortgage, paying the 10% transfer fee (${fee}).",
                )
            )
            catalog = ActionCatalog(
                phase="MORTGAGE_TRANSFER",
                actions=actions,
                fallback=Decision("KEEP_MORTGAGED"),
                ending=frozenset(a.name for a in actions),
            )
            request = DecisionRequest(
                seat,
                catalog,
                trigger=f"received mortgaged {self.data.space(index)['name']}",
            )
            applied = yield request
            if applied.decision.action == "UNMORTGAGE_NOW":
                transfers = self._move_cash(seat, None, redeem)
                p.deeds[index]["mortgaged"] = False
                self.emit_decision(
                    request,
                    applied,
                    {
                        "type": "unmortgage",
                        "index": index,
                        "cost": redeem,
                        "via": "transfer",
                        "transfers": transfers,
                    },
                    cash_delta=-redeem,
                )
            else:
                self.emit_decision(
                    request, applied, {"type": "mortgage_kept", "index": index, "fee": fee}
                )
                yield from self._charge(seat, fee, None, "fee", f"mortgage transfer {index}")

    # -- jail ----------------------------------------------------------------------------------------------------

    def _jail_turn(self, seat: int) -> TurnGen:
        p = self.players[seat]
        actions = []
        if p.cash >= self.data.jail_fine:
            actions.append(
                ActionSpec("PAY_JAIL_FINE", f"Pay the ${self.data.jail_fine} fine and move.")
            )
        for deck_name in sorted(set(p.jail_cards)):
            actions.append(
                ActionSpec(
                    "USE_JAIL_CARD",
                    f"Use the get-out-of-jail card from the {deck_name} deck.",
                    slots={"card_type": ChoiceSlot(sorted(set(p.jail_cards)))},
                )
            )
            break
        actions.append(ActionSpec("END_TURN", "Stay and try to roll a double."))
        catalog = ActionCatalog(
            phase="JAIL",
            actions=actions,
            fallback=Decision("END_TURN"),
            ending=frozenset({a.name for a in actions}),
        )
        request = DecisionRequest(
            seat,
            catalog,
            trigger=f"in jail (failed double attempts: {p.jail_failures})",
        )
        applied = yield request
        action = applied.decision.action
        if action == "PAY_JAIL_FINE":
            self.emit_decision(request, applied, {"type": "jail_decision", "choice": "pay"})
            paid = yield from self._charge(seat, self.data.jail_fine, None, "fine", "jail fine")
            if not paid:
                return
            self._exit_jail(seat, "paid fine")
            yield from self._movement_sequence(seat)
            return
        if action == "USE_JAIL_CARD":
            deck_name = applied.decision.params["card_type"]
            p.jail_cards.remove(deck_name)
            self.decks[deck_name].append(self._jail_card_id(deck_name))
            self.emit_decision(
                request, applied, {"type": "jail_decision", "choice": "card", "deck": deck_name}
            )
            self._exit_jail(seat, "used card")
            yield from self._movement_sequence(seat)
            return
        # stay and roll for a double
        self.emit_decision(request, applied, {"type": "jail_decision", "choice": "roll"})
        roll = roll_dice(self.rng_dice, 2)
        self.emit_passive(
            seat,
            {
                "type": "jail_roll",
                "dice": list(roll.dice),
                "double": roll.is_double,
                "attempt": p.jail_failures + 1,
            },
        )
        if roll.is_double:
            self._exit_jail(seat, "rolled a double")
            # Exit by doubles moves the token but grants no extra turn.
            yield from self._move_token(seat, roll.total, roll.total)
            return
        p.jail_failures += 1
        if p.jail_failures >= MAX_JAIL_FAILURES:
            # Third failed attempt: the fine is mandatory, then move the roll.
            if "chance" in p.jail_cards or "community_chest" in p.jail_cards:
                deck_name = sorted(set(p.jail_cards))[0]
                p.jail_cards.remove(deck_name)
                self.decks[deck_name].append(self._jail_card_id(deck_name))
                self.emit_passive(seat, {"type": "jail_forced_card", "deck": deck_name})
            else:
                paid = yield from self._charge(
                    seat, self.data.jail_fine, None, "fine", "mandatory jail fine"
                )
                if not paid:
                    return
            self._exit_jail(seat, "forced out after three failures")
            yield from self._move_token(seat, roll.total, roll.total)
            return
        self.emit_passive(seat, {"type": "jail_stay", "failures": p.jail_failures})

    def _jail_card_id(self, deck_name: str) -> int:
        cards = self.data.chance if deck_name == "chance" else self.data.community_chest
        for i, card in enumerate(cards):
            if card["effect"] == "jail_card":
                return i
        raise EngineInconsistency(f"no jail card defined in {deck_name}")

    def _exit_jail(self, seat: int, how: str) -> None:
        p = self.players[seat]
        p.in_jail = False
        p.jail_failures = 0
        self.emit_passive(seat, {"type": "jail_exit", "how": how})

    # -- the management phase ----------------------------------------------------------------------------------------

    def _buildable(self, p: MonopolyPlayer) -> list[int]:
        out = []
        for group, members in self.data.groups.items():
            if not all(i in p.deeds for i in members):
                continue
            if any(p.deeds[i]["mortgaged"] for i in members):
                continue
            levels = {i: p.deeds[i]["level"] for i in members}
            floor = min(levels.values())
            if floor >= HOTEL_LEVEL:
                continue
            needs_hotel = floor == HOTEL_LEVEL - 1
            if needs_hotel and self.bank_hotels < 1:
                continue
            if not needs_hotel and self.bank_houses < 1:
                continue
            for i in members:
                if levels[i] == floor and p.cash >= self.data.space(i)["house_cost"]:
                    out.append(i)
        return sorted(out)

    def _unmortgageable(self, p: MonopolyPlayer) -> list[int]:
        return sorted(
            i
            for i, d in p.deeds.items()
            if d["mortgaged"] and p.cash >= unmortgage_cost(self.data.space(i)["price"])
        )

    def _tradable(self, p: MonopolyPlayer) -> list[int]:
        return sorted(i for i, d in p.deeds.items() if d["level"] == 0)

    def _main_catalog(self, seat: int) -> ActionCatalog:
        p = self.players[seat]
        actions: list[ActionSpec] = []
        buildable = self._buildable(p)
        if buildable:
            actions.append(
                ActionSpec(
                    "UPGRADE",
                    "Add a building to an eligible street (even-building rule).",
                    slots={"space_id": ChoiceSlot(buildable)},
                )
            )
        sellable = self._sellable_buildings(p)
        if sellable:
            actions.append(
                ActionSpec(
                    "SELL_BUILDING",
                    "Sell a building back to the bank at half cost.",
                    slots={"space_id": ChoiceSlot(sellable)},
                )
            )
        mortgageable = self._mortgageable(p)
        if mortgageable:
            actions.append(
                ActionSpec(
                    "MORTGAGE",
                    "Mortgage an unbuilt property for half its price.",
                    slots={"space_id": ChoiceSlot(mortgageable)},
                )
            )
        unmortgageable = self._unmortgageable(p)
        if unmortgageable:
            actions.append(
                ActionSpec(
                    "UNMORTGAGE",
                    "Repay a mortgage plus 10% interest.",
                    slots={"space_id": ChoiceSlot(unmortgageable)},
                )
            )
        trade_spec = self._trade_spec(seat)
        if trade_spec is not None:
            actions.append(trade_spec)
        actions.append(ActionSpec("END_TURN", "End your turn."))
        return ActionCatalog(
            phase="MAIN",
            actions=actions,
            fallback=Decision("END_TURN"),
            ending=frozenset({"END_TURN"}),
        )

    def _main_phase(self, seat: int) -> TurnGen:
        p = self.players[seat]
        while not p.bankrupt and not self.game_over:
            catalog = self._main_catalog(seat)
            request = DecisionRequest(seat, catalog, trigger="management phase")
            applied = yield request
            action = applied.decision.action
            params = applied.decision.params
            if action == "END_TURN":
                self.emit_decision(request, applied, {"type": "phase_end"})
                return
            if action == "UPGRADE":
                self._apply_build(seat, params["space_id"], request, applied)
            elif action == "SELL_BUILDING":
                self._apply_sell_building(seat, params["space_id"], request, applied)
            elif action == "MORTGAGE":
                self._apply_mortgage(seat, params["space_id"], request, applied)
            elif action == "UNMORTGAGE":
                self._apply_unmortgage(seat, params["space_id"], request, applied)
            elif action == "TRADE":
                yield from self._trade_protocol(seat, applied, request)

    def _apply_build(self, seat: int, index: int, request, applied) -> None:
        p = self.players[seat]
        cost = self.data.space(index)["house_cost"]
        deed = p.deeds[index]
        deed["level"] += 1
        if deed["level"] == HOTEL_LEVEL:
            self.bank_hotels -= 1
            self.bank_houses += 4
        else:
            self.bank_houses -= 1
        transfers = self._move_cash(seat, None, cost)
        self.emit_decision(
            request,
            applied,
            {
                "type": "build",
                "index": index,
                "space": self.data.space(index)["name"],
                "level": deed["level"],
                "cost": cost,
                "transfers": transfers,
            },
            cash_delta=-cost,
        )

    def _apply_sell_building(self, seat: int, index: int, request, applied) -> None:
        p = self.players[seat]
        deed = p.deeds[index]
        refund = self.data.space(index)["house_cost"] // 2
        if deed["level"] == HOTEL_LEVEL:
            self.bank_hotels += 1
            self.bank_houses -= 4
        else:
            self.bank_houses += 1
        deed["level"] -= 1
        transfers = self._move_cash(None, seat, refund)
        self.emit_decision(
            request,
            applied,
            {
                "type": "building_sold",
                "index": index,
                "level": deed["level"],
                "refund": refund,
                "transfers": transfers,
            },
            cash_delta=refund,
        )

    def _apply_mortgage(self, seat: int, index: int, request, applied) -> None:
        p = self.players[seat]
        credit = mortgage_credit(self.data.space(index)["price"])
        p.deeds[index]["mortgaged"] = True
        transfers = self._move_cash(None, seat, credit)
        self.emit_decision(
            request,
            applied,
            {
                "type": "mortgage",
                "index": index,
                "space": self.data.space(index)["name"],
                "credit": credit,
                "transfers": transfers,
            },
            cash_delta=credit,
        )

    def _apply_unmortgage(self, seat: int, index: int, request, applied) -> None:
        p = self.players[seat]
        cost = unmortgage_cost(self.data.space(index)["price"])
        p.deeds[index]["mortgaged"] = False
        transfers = self._move_cash(seat, None, cost)
        self.emit_decision(
            request,
            applied,
            {
                "type": "unmortgage",
                "index": index,
                "cost": cost,
                "via": "redeem",
                "transfers": transfers,
            },
            cash_delta=-cost,
        )

    # -- trades -------------------------------------------------------------------------------------------------------------

    def _trade_spec(self, seat: int) -> ActionSpec | None:
        p = self.players[seat]
        opponents = [q.seat for q in self.players if q.seat != seat and not q.bankrupt]
        if not opponents:
            return None
        own_pool = self._tradable(p)
        opp_pools = {q: self._tradable(self.players[q]) for q in opponents}
        if not own_pool and not any(opp_pools.values()):
            return None
        all_opp = sorted({i for pool in opp_pools.values() for i in pool})
        max_opp_cash = max(self.players[q].cash for q in opponents)

        def constraint(params: dict) -> str | None:
            target = params["target"]
            offered = params.get("offered_properties", [])
            requested = params.get("requested_properties", [])
            tgt = self.players[target]
            for i in requested:
                if i not in tgt.deeds:
                    return f"space {i} is not owned by player {target}"
                if tgt.deeds[i]["level"] > 0:
                    return f"space {i} has buildings and cannot be traded"
            if params.get("requested_cash", 0) > tgt.cash:
                return f"player {target} has only ${tgt.cash}"
            if params.get("requested_jail_cards", 0) > len(tgt.jail_cards):
                return f"player {target} holds {len(tgt.jail_cards)} jail cards"
            if (
                not offered
                and not requested
                and params.get("offered_cash", 0) == 0
                and params.get("requested_cash", 0) == 0
                and params.get("offered_jail_cards", 0) == 0
                and params.get("requested_jail_cards", 0) == 0
            ):
                return "the trade offer is empty"
            return None

        def sampler(rng) -> dict:
            target = rng.choice(opponents)
            pool = opp_pools[target]
            offered = rng.sample(own_pool, rng.randint(0, min(2, len(own_pool))))
            requested = rng.sample(pool, rng.randint(0, min(2, len(pool))))
            params = {
                "target": target,
                "offered_properties": offered,
                "requested_properties": requested,
                "offered_cash": rng.randint(0, min(p.cash, 200)) if p.cash > 0 else 0,
                "requested_cash": (
                    rng.randint(0, min(self.players[target].cash, 200))
                    if self.players[target].cash > 0
                    else 0
                ),
                "offered_jail_cards": 0,
                "requested_jail_cards": 0,
            }
            if not offered and not requested:
                if pool:
                    params["requested_properties"] = [rng.choice(pool)]
                elif own_pool:
                    params["offered_properties"] = [rng.choice(own_pool)]
                elif params["offered_cash"] == 0 and params["requested_cash"] == 0:
                    if p.cash > 0:
                        params["offered_cash"] = 1
                    else:
                        params["requested_cash"] = 1
            return params

        return ActionSpec(
            "TRADE",
            "Propose a trade of properties, cash, and jail cards.",
            slots={
                "target": ChoiceSlot(opponents),
                "offered_properties": SubsetSlot(own_pool, required=False),
                "requested_properties": SubsetSlot(all_opp, required=False),
                "offered_cash": IntSlot(0, max(p.cash, 0), required=False),
                "requested_cash": IntSlot(0, max(max_opp_cash, 0), required=False),
                "offered_jail_cards": IntSlot(0, len(p.jail_cards), required=False),
                "requested_jail_cards": IntSlot(0, 2, required=False),
            },
            constraint=constraint,
            sampler=sampler,
        )

    def _offer_dict(self, proposer: int, params: dict) -> dict:
        return {
            "proposer": proposer,
            "target": params["target"],
            "offered_properties": sorted(params.get("offered_properties", [])),
            "requested_properties": sorted(params.get("requested_properties", [])),
            "offered_cash": params.get("offered_cash", 0),
            "requested_cash": params.get("requested_cash", 0),
            "offered_jail_cards": params.get("offered_jail_cards", 0),
            "requested_jail_cards": params.get("requested_jail_cards", 0),
        }

    def _trade_protocol(self, seat: int, applied, request) -> TurnGen:
        self._trade_seq += 1
        trade_id = f"t{self._trade_seq}"
        offer = self._offer_dict(seat, applied.decision.params)
        target = offer["target"]
        self.emit_decision(
            request,
            applied,
            {"type": "trade_proposed", "trade_id": trade_id, "offer": offer},
        )
        self.pending_trade = {"trade_id": trade_id, "offer": offer, "round": 0}
        gate_catalog = ActionCatalog(
            phase="TRADE_REQUEST",
            actions=[
                ActionSpec("ACCEPT", "Enter negotiation over this offer."),
                ActionSpec("REJECT", "Refuse to negotiate."),
            ],
            fallback=Decision("REJECT"),
            ending=frozenset({"ACCEPT", "REJECT"}),
        )
        gate_request = DecisionRequest(
            target,
            gate_catalog,
            trigger=f"player {seat} proposes trade {trade_id}: {offer}",
        )
        gate_applied = yield gate_request
        self.emit_decision(
            gate_request,
            gate_applied,
            {
                "type": "trade_gate",
                "trade_id": trade_id,
                "answer": gate_applied.decision.action,
            },
        )
        if gate_applied.decision.action == "REJECT":
            self.pending_trade = None
            return
        # Negotiation: the receiver of the current offer answers each round.
        responder = target
        negotiation_round = 0
        while True:
            negotiation_round += 1
            if negotiation_round > NEGOTIATION_ROUND_CAP:
                self.emit_passive(
                    None,
                    {"type": "negotiation_capped", "trade_id": trade_id, "rounds": negotiation_round - 1},
                )
                self.pending_trade = None
                return
            self.pending_trade = {"trade_id": trade_id, "offer": offer, "round": negotiation_round}
            counter_spec = self._counter_spec(responder, offer)
            actions = [
                ActionSpec("ACCEPT", "Execute the offer on the table."),
                ActionSpec("REJECT", "Abort the negotiation."),
            ]
            if counter_spec is not None:
                actions.append(counter_spec)
            catalog = ActionCatalog(
                phase="TRADE_NEGOTIATION",
                actions=actions,
                fallback=Decision("REJECT"),
                ending=frozenset({"ACCEPT", "REJECT"}),
            )
            neg_request = DecisionRequest(
                responder,
                catalog,
                trigger=f"negotiation round {negotiation_round} of {trade_id}: offer {offer}",
            )
            neg_applied = yield neg_request
            action = neg_applied.decision.action
            self.emit_decision(
                neg_request,
                neg_applied,
                {
                    "type": "trade_negotiation",
                    "trade_id": trade_id,
                    "round": negotiation_round,
                    "answer": action,
                },
            )
            if action == "REJECT":
                self.pending_trade = None
                return
            if action == "ACCEPT":
                self.pending_trade = None
                yield from self._execute_trade(trade_id, offer, negotiation_round)
                return
            # COUNTER: the responder becomes the proposer of a fresh offer.
            offer = self._offer_dict(responder, {**neg_applied.decision.params, "target": offer["proposer"]})
            responder = offer["target"]

    def _counter_spec(self, seat: int, current_offer: dict) -> ActionSpec | None:
        p = self.players[seat]
        other = current_offer["proposer"]
        own_pool = self._tradable(p)
        other_pool = self._tradable(self.players[other])
        if not own_pool and not other_pool:
            return None
        tgt = self.players[other]

        def constraint(params: dict) -> str | None:
            for i in params.get("requested_properties", []):
                if i not in tgt.deeds:
                    return f"space {i} is not owned by player {other}"
                if tgt.deeds[i]["level"] > 0:
                    return f"space {i} has buildings and cannot be traded"
            if params.get("requested_cash", 0) > tgt.cash:
                return f"player {other} has only ${tgt.cash}"
            if params.get("requested_jail_cards", 0) > len(tgt.jail_cards):
                return f"player {other} holds {len(tgt.jail_cards)} jail cards"
            return None

        def sampler(rng) -> dict:
            offered = rng.sample(own_pool, rng.randint(0, min(2, len(own_pool))))
            requested = rng.sample(other_pool, rng.randint(0, min(2, len(other_pool))))
            params = {
                "offered_properties": offered,
                "requested_properties": requested,
                "offered_cash": rng.randint(0, min(p.cash, 200)) if p.cash > 0 else 0,
                "requested_cash": rng.randint(0, min(tgt.cash, 200)) if tgt.cash > 0 else 0,
                "offered_jail_cards": 0,
                "requested_jail_cards": 0,
            }
            if not offered and not requested:
                if other_pool:
                    params["requested_properties"] = [rng.choice(other_pool)]
                elif own_pool:
                    params["offered_properties"] = [rng.choice(own_pool)]
            return params

        return ActionSpec(
            "COUNTER",
            "Put a different offer on the table.",
            slots={
                "offered_properties": SubsetSlot(own_pool, required=False),
                "requested_properties": SubsetSlot(other_pool, required=False),
                "offered_cash": IntSlot(0, max(p.cash, 0), required=False),
                "requested_cash": IntSlot(0, max(tgt.cash, 0), required=False),
                "offered_jail_cards": IntSlot(0, len(p.jail_cards), required=False),
                "requested_jail_cards": IntSlot(0, len(tgt.jail_cards), required=False),
            },
            constraint=constraint,
            sampler=sampler,
        )

    def _execute_trade(self, trade_id: str, offer: dict, rounds: int) -> TurnGen:
        a = self.players[offer["proposer"]]
        b = self.players[offer["target"]]
        pre_hash = self._hash()
        for i in offer["offered_properties"]:
            if i not in a.deeds or a.deeds[i]["level"] > 0:
                raise EngineInconsistency(f"trade {trade_id} moves an invalid deed {i}")
            b.deeds[i] = a.deeds.pop(i)
        for i in offer["requested_properties"]:
            if i not in b.deeds or b.deeds[i]["level"] > 0:
                raise EngineInconsistency(f"trade {trade_id} moves an invalid deed {i}")
            a.deeds[i] = b.deeds.pop(i)
        transfers = []
        net_to_b = offer["offered_cash"] - offer["requested_cash"]
        if net_to_b > 0:
            transfers = self._move_cash(a.seat, b.seat, net_to_b)
        elif net_to_b < 0:
            transfers = self._move_cash(b.seat, a.seat, -net_to_b)
        for _ in range(offer["offered_jail_cards"]):
            b.jail_cards.append(a.jail_cards.pop())
        for _ in range(offer["requested_jail_cards"]):
            a.jail_cards.append(b.jail_cards.pop())
        self.emit_passive(
            None,
            {
                "type": "trade_executed",
                "trade_id": trade_id,
                "offer": offer,
                "rounds": rounds,
                "pre_state_hash": pre_hash,
                "post_state_hash": self._hash(),
                "transfers": transfers,
            },
        )
        # New owners settle received mortgages: redeem or pay the 10% fee.
        got_a = [i for i in offer["requested_properties"] if a.deeds.get(i, {}).get("mortgaged")]
        got_b = [i for i in offer["offered_properties"] if b.deeds.get(i, {}).get("mortgaged")]
        yield from self._mortgage_transfer_decisions(a.seat, got_a)
        if not self.game_over:
            yield from self._mortgage_transfer_decisions(b.seat, got_b)
