"""Cashflow rules engine: Rat Race, Fast Track, decks, loans, bankruptcy.

Turn shape: an optional financial-operation phase, dice movement with
paychecks paid on pass or landing, space resolution (deals, doodads,
charity, offers, children, downsizing), then a second financial-operation
phase.  A player whose passive income exceeds total expenses immediately
escapes to the Fast Track, where victory is the dream purchase or a
+$50,000 gain in Cashflow-Day income.
"""

from __future__ import annotations

from ..core.engine import DecisionRequest, GameEngine, TurnGen
from ..core.faults import FaultPolicy
from ..core.protocol import ActionCatalog, ActionSpec, ChoiceSlot, Decision, IntSlot
from ..core.rng import RngStream, advance_position, roll_dice
from .data import CashflowData, RAT_RACE_SIZE, FAST_TRACK_SIZE, STOCK_KINDS
from .sheet import Liability, PlayerSheet

BORROW_CAP = 50_000  # single-decision bank loan ceiling
WIN_GAP = 50_000


def _end_spec(name: str, description: str) -> ActionSpec:
    return ActionSpec(name=name, description=description)


class CashflowEngine(GameEngine):
    game = "cashflow"
    track_size = RAT_RACE_SIZE

    def __init__(
        self,
        match_id: str,
        num_players: int,
        recorder,
        rng: RngStream,
        data: CashflowData,
        policy: FaultPolicy | None = None,
    ):
        super().__init__(match_id, num_players, recorder)
        self.data = data
        self.policy = policy or FaultPolicy()
        self.rng_dice = rng.derive("dice")
        self._deck_orders = {}
        self._deck_pos = {}
        for deck, cards in (
            ("small", data.small_deals),
            ("big", data.big_deals),
            ("doodad", data.doodads),
            ("offer", data.offers),
        ):
            order = list(range(len(cards)))
            rng.derive(f"deck:{deck}").shuffle(order)
            self._deck_orders[deck] = order
            self._deck_pos[deck] = 0
        self.sheets: list[PlayerSheet | None] = [None] * num_players
        self.eliminated: set[int] = set()
        self.match_winner: int | None = None
        self.ft_claimed: dict[int, int] = {}
        self.pending_deal: dict | None = None
        self.pending_offer: dict | None = None

    # -- deck handling ---------------------------------------------------------

    def _draw(self, deck: str) -> dict:
        cards = {
            "small": self.data.small_deals,
            "big": self.data.big_deals,
            "doodad": self.data.doodads,
            "offer": self.data.offers,
        }[deck]
        order = self._deck_orders[deck]
        card = cards[order[self._deck_pos[deck] % len(order)]]
        self._deck_pos[deck] += 1
        return card

    # -- snapshots and invariants ------------------------------------------------

    def state_dict(self) -> dict:
        return {
            "game": self.game,
            "round": self.round,
            "players": [s.to_dict() if s else None for s in self.sheets],
            "deck_pos": dict(self._deck_pos),
            "ft_claimed": {str(k): v for k, v in self.ft_claimed.items()},
            "eliminated": sorted(self.eliminated),
            "winner": self.match_winner,
        }

    def public_snapshot(self) -> dict:
        snap = self.state_dict()
        snap["rat_race_board"] = [s["kind"] for s in self.data.rat_race]
        snap["fast_track_board"] = [
            {k: v for k, v in s.items() if k != "index"} for s in self.data.fast_track
        ]
        snap["pending_deal"] = self.pending_deal
        snap["pending_offer"] = self.pending_offer
        return snap

    def check_invariants(self) -> None:
        for sheet in self.sheets:
            if sheet is not None:
                sheet.check_identity()

    def active_players(self) -> list[int]:
        return [p for p in range(self.num_players) if p not in self.eliminated]

    def is_over(self) -> bool:
        return self.match_winner is not None or not self.active_players()

    def winner(self) -> int | None:
        return self.match_winner

    def _score(self, player: int):
        sheet = self.sheets[player]
        if sheet is None:
            return (-2, 0.0, 0)
        if sheet.won:
            return (3, 0.0, sheet.cash)
        if sheet.bankrupt:
            return (-1, 0.0, sheet.cash)
        if sheet.track == "fast_track":
            gain = sheet.fast_track.current_cfd_income - sheet.fast_track.beginning_cfd_income
            return (2, float(gain), sheet.cash)
        coverage = sheet.passive_income / sheet.total_expenses if sheet.total_expenses else 0.0
        return (1, coverage, sheet.cash)

    def ranking(self) -> list[int]:
        return sorted(range(self.num_players), key=lambda p: (self._score(p), -p), reverse=True)

    def player_summary(self, player: int) -> dict:
        sheet = self.sheets[player]
        if sheet is None:
            return {"seat": player}
        return {
            "seat": player,
            "cash": sheet.cash,
            "passive_income": sheet.passive_income,
            "total_expenses": sheet.total_expenses,
            "loan_payment": sheet.loan_payment,
            "escape_round": sheet.escape_round,
            "bankrupt": sheet.bankrupt,
            "won": sheet.won,
            "track": sheet.track,
        }

    # -- helpers -----------------------------------------------------------------

    def _transfer(self, player: int, delta: int) -> list:
        return [[f"p{player}", delta], ["bank", -delta]]

    def _fallback_rule(self, phase: str, default: str) -> str:
        return self.policy.rule_for(phase, default)

    def _sheet(self, player: int) -> PlayerSheet:
        sheet = self.sheets[player]
        assert sheet is not None
        return sheet

    # -- setup: careers and dreams -------------------------------------------------

    def setup(self) -> TurnGen:
        taken_careers: set[str] = set()
        taken_dreams: set[str] = set()
        for player in range(self.num_players):
            names = [c.name for c in self.data.careers if c.name not in taken_careers]
            catalog = ActionCatalog(
                phase="CHOOSE_CAREER",
                actions=[
                    ActionSpec(
                        "CHOOSE_CAREER",
                        "Pick the career that sets your starting finances.",
                        slots={"career": ChoiceSlot(names)},
                    )
                ],
                fallback=Decision("CHOOSE_CAREER", {"career": names[0]}),
                ending=frozenset({"CHOOSE_CAREER"}),
            )
            req = DecisionRequest(player, catalog, trigger="match setup: choose a career")
            applied = yield req
            career_name = applied.decision.params["career"]
            taken_careers.add(career_name)
            career = next(c for c in self.data.careers if c.name == career_name)

            dream_names = [d.name for d in self.data.dreams if d.name not in taken_dreams]
            dream_catalog = ActionCatalog(
                phase="CHOOSE_DREAM",
                actions=[
                    ActionSpec(
                        "CHOOSE_DREAM",
                        "Pick the dream you will chase on the Fast Track.",
                        slots={"dream": ChoiceSlot(dream_names)},
                    )
                ],
                fallback=Decision("CHOOSE_DREAM", {"dream": dream_names[0]}),
                ending=frozenset({"CHOOSE_DREAM"}),
            )
            dream_req = DecisionRequest(player, dream_catalog, trigger="match setup: choose a dream")

            sheet = PlayerSheet(
                player=player,
                career=career,
                dream=self.data.dreams[0],  # placeholder until the dream decision lands
                cash=career.savings,
            )
            for l in career.liabilities:
                sheet.liabilities.append(
                    Liability(sheet._take_id(), l.kind, l.name, l.principal, l.payment)
                )
            sheet._sync()
            self.sheets[player] = sheet
            self.emit_decision(
                req,
                applied,
                {"type": "career_assigned", "career": career_name, "savings": career.savings},
            )

            applied = yield dream_req
            dream_name = applied.decision.params["dream"]
            taken_dreams.add(dream_name)
            sheet.dream = next(d for d in self.data.dreams if d.name == dream_name)
            self.emit_decision(dream_req, applied, {"type": "dream_assigned", "dream": dream_name})

    # -- the turn --------------------------------------------------------------------

    def turn(self, player: int) -> TurnGen:
        sheet = self._sheet(player)
        sheet.begin_turn()
        self.emit_passive(
            player,
            {"type": "turn_start", "cash": sheet.cash, "track": sheet.track, "position": sheet.position},
        )
        if sheet.skip_turns > 0:
            sheet.skip_turns -= 1
            self.emit_passive(player, {"type": "turn_skipped", "remaining": sheet.skip_turns})
            self._emit_turn_end(player)
            return

        if sheet.track == "fast_track":
            yield from self._fast_track_turn(player, sheet)
            self._emit_turn_end(player)
            return

        yield from self._financial_ops(player, sheet, "pre_roll")
        if self._after_mutation(player, sheet):
            self._emit_turn_end(player)
            return

        dice_count = 1
        if sheet.charity_turns > 0:
            request = self._dice_count_request(player, (1, 2), "CHOOSE_DICE_COUNT")
            applied = yield request
            dice_count = applied.decision.params["count"]
            self.emit_decision(request, applied, {"type": "dice_count", "count": dice_count})
            sheet.charity_turns -= 1

        roll = roll_dice(self.rng_dice, dice_count)
        self.emit_passive(player, {"type": "dice_roll", "dice": list(roll.dice), "total": roll.total})
        survived = yield from self._walk(player, sheet, roll.total)
        if not survived:
            self._emit_turn_end(player)
            return

        yield from self._resolve_space(player, sheet)
        if (
            player in self.eliminated
            or self.match_winner is not None
            or sheet.track == "fast_track"
        ):
            self._emit_turn_end(player)
            return

        yield from self._financial_ops(player, sheet, "post_resolution")
        self._after_mutation(player, sheet)
        self._emit_turn_end(player)

    def _emit_turn_end(self, player: int) -> None:
        sheet = self.sheets[player]
        payload = {"type": "turn_end"}
        if sheet is not None:
            payload.update(
                cash=sheet.cash,
                passive_income=sheet.passive_income,
                total_expenses=sheet.total_expenses,
                loan_payment=sheet.loan_payment,
                salary=sheet.salary,
                track=sheet.track,
                bankrupt=sheet.bankrupt,
            )
        self.emit_passive(player, payload)

    def _after_mutation(self, player: int, sheet: PlayerSheet) -> bool:
        """Escape check, run after every sheet mutation; True ends the turn."""
        if not sheet.escape_ready():
            return False
        ft = sheet.enter_fast_track(self.round)
        self.emit_passive(
            player,
            {
                "type": "escape",
                "tau": self.round,
                "beginning_cfd_income": ft.beginning_cfd_income,
                "win_target": ft.win_target,
            },
        )
        return True

    def _dice_count_request(self, player: int, options: tuple, phase: str):
        catalog = ActionCatalog(
            phase=phase,
            actions=[
                ActionSpec(
                    phase,
                    "Choose how many dice to roll this turn.",
                    slots={"count": ChoiceSlot(list(options))},
                )
            ],
            fallback=Decision(phase, {"count": options[0]}),
            ending=frozenset({phase}),
        )
        request = DecisionRequest(player, catalog, trigger="charity is active: choose dice count")
        return request

    # -- financial operations ----------------------------------------------------------

    def _financial_catalog(self, sheet: PlayerSheet) -> ActionCatalog:
        actions = [
            ActionSpec(
                "BORROW_MONEY",
                "Take a bank loan (multiples of $1,000; monthly payment is 10%).",
                slots={"amount": IntSlot(1000, BORROW_CAP, step=1000)},
            )
        ]
        repayable = self._repayable(sheet)
        if repayable:
            actions.append(self._repay_spec(sheet, repayable))
        actions.append(_end_spec("END_FINANCIAL_OPERATION", "Close the financial phase."))
        return ActionCatalog(
            phase="FINANCIAL_OP",
            actions=actions,
            fallback=Decision("END_FINANCIAL_OPERATION"),
            ending=frozenset({"END_FINANCIAL_OPERATION"}),
        )

    def _repayable(self, sheet: PlayerSheet) -> list:
        out = []
        for l in sheet.liabilities:
            if l.kind == "bank_loan":
                if sheet.cash >= 1000 and l.principal >= 1000:
                    out.append(l)
            elif 0 < l.principal <= sheet.cash:
                out.append(l)
        return out

    def _repay_spec(self, sheet: PlayerSheet, repayable: list) -> ActionSpec:
        ids = [l.liability_id for l in repayable]
        by_id = {l.liability_id: l for l in repayable}
        max_amount = max(
            min(l.principal, sheet.cash) if l.kind == "bank_loan" else l.principal
            for l in repayable
        )

        def constraint(params: dict) -> str | None:
            liability = by_id.get(params["liability_id"])
            if liability is None:
                return "unknown liability id"
            amount = params["amount"]
            if amount > sheet.cash:
                return f"cash {sheet.cash} cannot cover {amount}"
            if liability.kind == "bank_loan":
                if amount % 1000 != 0 or amount < 1000:
                    return "bank loans are repaid in $1,000 units"
                if amount > liability.principal:
                    return "repayment exceeds principal"
            elif amount != liability.principal:
                return f"{liability.kind} requires full repayment of {liability.principal}"
            return None

        def sampler(rng) -> dict:
            liability = by_id[rng.choice(ids)]
            if liability.kind == "bank_loan":
                units = min(liability.principal, sheet.cash) // 1000
                amount = rng.randint(1, units) * 1000
            else:
                amount = liability.principal
            return {"liability_id": liability.liability_id, "amount": amount}

        return ActionSpec(
            "REPAY_LIABILITY",
            "Repay a liability (bank loans partially in $1,000 units, others in full).",
            slots={"liability_id": ChoiceSlot(ids), "amount": IntSlot(1, max(max_amount, 1))},
            constraint=constraint,
            sampler=sampler,
        )

    def _financial_ops(self, player: int, sheet: PlayerSheet, stage: str) -> TurnGen:
        while True:
            catalog = self._financial_catalog(sheet)
            request = DecisionRequest(
                player, catalog, trigger=f"financial operations ({stage.replace('_', ' ')})"
            )
            applied = yield request
            decision = applied.decision
            if decision.action == "END_FINANCIAL_OPERATION":
                self.emit_decision(request, applied, {"type": "financial_op_end", "stage": stage})
                return
            if decision.action == "BORROW_MONEY":
                loan = sheet.borrow(decision.params["amount"])
                self.emit_decision(
                    request,
                    applied,
                    {
                        "type": "borrow",
                        "stage": stage,
                        "amount": loan.principal,
                        "payment": loan.payment,
                        "transfers": self._transfer(player, loan.principal),
                    },
                    cash_delta=loan.principal,
                )
            elif decision.action == "REPAY_LIABILITY":
                amount = decision.params["amount"]
                liability = sheet.repay(decision.params["liability_id"], amount)
                self.emit_decision(
                    request,
                    applied,
                    {
                        "type": "repay",
                        "stage": stage,
                        "liability": liability.name,
                        "amount": amount,
                        "remaining": liability.principal,
                        "transfers": self._transfer(player, -amount),
                    },
                    cash_delta=-amount,
                )
            if self._after_mutation(player, sheet):
                return

    # -- movement ---------------------------------------------------------------------

    def _walk(self, player: int, sheet: PlayerSheet, distance: int):
        """Move step by step, paying every paycheck passed or landed on.
        Returns False when the player was eliminated mid-move."""
        start = sheet.position
        for step in range(1, distance + 1):
            pos = (start + step) % RAT_RACE_SIZE
            if pos in self.data.paycheck_spaces:
                survived = yield from self._paycheck(player, sheet)
                if not survived:
                    return False
        sheet.position, wrapped = advance_position(start, distance, RAT_RACE_SIZE)
        self.emit_passive(
            player,
            {
                "type": "move",
                "from": start,
                "to": sheet.position,
                "wrapped": wrapped,
                "space": self.data.rat_race[sheet.position]["kind"],
            },
        )
        return True

    def _paycheck(self, player: int, sheet: PlayerSheet):
        result = sheet.apply_paycheck()
        self.emit_passive(
            player,
            {
                "type": "paycheck",
                "amount": result["amount"],
                "cash": sheet.cash,
                "transfers": self._transfer(player, result["amount"]),
            },
            cash_delta=result["amount"],
        )
        if result["bankruptcy"]:
            survived = yield from self._bankruptcy_resolution(player, sheet)
            return survived
        return True

    # -- landing resolution ----------------------------------------------------------------

    def _resolve_space(self, player: int, sheet: PlayerSheet) -> TurnGen:
        kind = self.data.rat_race[sheet.position]["kind"]
        if kind == "paycheck":
            return  # paid during the walk
        if kind == "child":
            added = sheet.add_child()
            self.emit_passive(
                player,
                {"type": "child", "added": added, "children": sheet.children},
            )
            return
        if kind == "downsize":
            cost = sheet.apply_downsize()
            self.emit_passive(
                player,
                {
                    "type": "downsize",
                    "cost": cost,
                    "skip_turns": 2,
                    "transfers": self._transfer(player, -cost),
                },
                cash_delta=-cost,
            )
            return
        if kind == "doodad":
            card = self._draw("doodad")
            result = sheet.apply_doodad(card)
            self.emit_passive(
                player,
                {
                    "type": "doodad",
                    "card": card["name"],
                    "cost": result["cost"],
                    "debt": result["debt"],
                    "transfers": self._transfer(player, -result["cost"]),
                },
                cash_delta=-result["cost"],
            )
            return
        if kind == "charity":
            yield from self._regular_phase(player, sheet, charity=True)
            return
        if kind == "opportunity":
            request = self._opportunity_choice(player)
            applied = yield request
            deck = "small" if applied.decision.action == "CHOOSE_SMALL_DEAL" else "big"
            self.emit_decision(request, applied, {"type": "deal_choice", "deck": deck})
            card = self._draw(deck)
            self.emit_passive(
                player,
                {"type": "deal_drawn", "deck": deck, "card": card["name"], "kind": card["kind"]},
            )
            self.emit_passive(
                player,
                {
                    "type": "purchase_opportunity",
                    "game_area": "rat_race",
                    "card": card["name"],
                    "kind": card["kind"],
                    "cash_before": sheet.cash,
                },
            )
            yield from self._regular_phase(player, sheet, deal=card)
            return
        if kind == "offer":
            card = self._draw("offer")
            self.emit_passive(
                player,
                {"type": "offer_drawn", "card": card["name"], "global": card.get("global", False)},
            )
            if card.get("global", False):
                yield from self._global_offer(player, card)
            else:
                yield from self._regular_phase(player, sheet, offer=card)
            return

    def _opportunity_choice(self, player: int):
        catalog = ActionCatalog(
            phase="OPPORTUNITY_CHOICE",
            actions=[
                _end_spec("CHOOSE_SMALL_DEAL", "Draw from the Small Deal pool."),
                _end_spec("CHOOSE_BIG_DEAL", "Draw from the Big Deal pool."),
            ],
            fallback=Decision("CHOOSE_SMALL_DEAL"),
            ending=frozenset({"CHOOSE_SMALL_DEAL", "CHOOSE_BIG_DEAL"}),
        )
        return DecisionRequest(player, catalog, trigger="landed on an Opportunity space")

    # -- the open decision phase -------------------------------------------------------------

    def _regular_catalog(
        self, sheet: PlayerSheet, deal: dict | None, offer: dict | None, charity: bool
    ) -> ActionCatalog:
        actions: list[ActionSpec] = []
        if deal is not None:
            if deal["kind"] in STOCK_KINDS:
                affordable = max(1, sheet.cash // deal["price"]) if deal["price"] else 1
                actions.append(
                    ActionSpec(
                        "BUY_OPPORTUNITY",
                        f"Buy units of {deal['name']} at ${deal['price']} each.",
                        slots={"units": IntSlot(1, max(affordable, 1))},
                    )
                )
                held = [
                    a.asset_id
                    for a in sheet.assets
                    if a.symbol == deal.get("symbol") and a.units > 0
                ]
                if held:
                    actions.append(
                        ActionSpec(
                            "SELL_ASSET",
                            f"Sell a held {deal['symbol']} position at ${deal['price']} per unit.",
                            slots={"asset_id": ChoiceSlot(held)},
                        )
                    )
            else:
                actions.append(
                    ActionSpec(
                        "BUY_OPPORTUNITY",
                        f"Buy {deal['name']} (down payment ${deal.get('down_payment', deal['cost'])}).",
                    )
                )
        if offer is not None:
            eligible = [a.asset_id for a in sheet.assets if sheet.offer_eligible(a, offer)]
            if eligible:
                actions.append(
                    ActionSpec(
                        "ACCEPT_OFFER",
                        f"Sell an eligible asset to: {offer['name']}.",
                        slots={"asset_id": ChoiceSlot(eligible)},
                    )
                )
        if charity and sheet.charity_turns == 0:
            actions.append(
                ActionSpec(
                    "DONATE_CHARITY",
                    "Donate 10% of total income to choose dice count for three turns.",
                )
            )
        actions.append(_end_spec("END_TURN", "Finish this decision phase."))
        return ActionCatalog(
            phase="REGULAR",
            actions=actions,
            fallback=Decision("END_TURN"),
            ending=frozenset({"END_TURN"}),
        )

    def _regular_phase(
        self,
        player: int,
        sheet: PlayerSheet,
        deal: dict | None = None,
        offer: dict | None = None,
        charity: bool = False,
    ) -> TurnGen:
        pending_deal = deal
        pending_offer = offer
        charity_open = charity
        while True:
            self.pending_deal = pending_deal
            self.pending_offer = pending_offer
            catalog = self._regular_catalog(sheet, pending_deal, pending_offer, charity_open)
            if len(catalog.actions) == 1 and pending_deal is None:
                self.pending_deal = self.pending_offer = None
                return  # nothing but END_TURN would be offered
            trigger = "resolve the drawn card" if (pending_deal or pending_offer) else "landed space"
            request = DecisionRequest(player, catalog, trigger=trigger)
            applied = yield request
            action = applied.decision.action
            if action == "END_TURN":
                self.emit_decision(request, applied, {"type": "phase_end"})
                self.pending_deal = self.pending_offer = None
                return
            if action == "BUY_OPPORTUNITY":
                units = applied.decision.params.get("units", 0)
                result = sheet.buy_deal(pending_deal, units)
                if result["ok"]:
                    paid = result["paid"]
                    self.emit_decision(
                        request,
                        applied,
                        {
                            "type": "buy",
                            "result": "ok",
                            "card": pending_deal["name"],
                            "kind": pending_deal["kind"],
                            "paid": paid,
                            "cash_flow": result["asset"].cash_flow,
                            "transfers": self._transfer(player, -paid),
                        },
                        cash_delta=-paid,
                    )
                    pending_deal = None
                    if self._after_mutation(player, sheet):
                        self.pending_deal = self.pending_offer = None
                        return
                else:
                    self.emit_decision(
                        request,
                        applied,
                        {
                            "type": "buy",
                            "result": "insufficient-cash",
                            "card": pending_deal["name"],
                            "shortfall": result["shortfall"],
                        },
                    )
                    yield from self._purchase_loan_offer(player, sheet, result["shortfall"])
            elif action == "SELL_ASSET":
                pseudo_offer = {
                    "kind": "per_unit",
                    "symbol": pending_deal["symbol"],
                    "unit_price": pending_deal["price"],
                }
                sale = sheet.sell_asset(applied.decision.params["asset_id"], pseudo_offer)
                self.emit_decision(
                    request,
                    applied,
                    {
                        "type": "asset_sale",
                        "asset": sale["asset"].name,
                        "price": sale["price"],
                        "net": sale["net"],
                        "transfers": self._transfer(player, sale["net"]),
                    },
                    cash_delta=sale["net"],
                )
            elif action == "ACCEPT_OFFER":
                sale = sheet.sell_asset(applied.decision.params["asset_id"], pending_offer)
                self.emit_decision(
                    request,
                    applied,
                    {
                        "type": "offer_sale",
                        "asset": sale["asset"].name,
                        "price": sale["price"],
                        "net": sale["net"],
                        "transfers": self._transfer(player, sale["net"]),
                    },
                    cash_delta=sale["net"],
                )
            elif action == "DONATE_CHARITY":
                donation = sheet.donate_charity()
                charity_open = False
                self.emit_decision(
                    request,
                    applied,
                    {
                        "type": "charity_donation",
                        "amount": donation,
                        "charity_turns": sheet.charity_turns,
                        "transfers": self._transfer(player, -donation),
                    },
                    cash_delta=-donation,
                )

    def _purchase_loan_offer(self, player: int, sheet: PlayerSheet, shortfall: int) -> TurnGen:
        need = ((max(shortfall, 1) + 999) // 1000) * 1000
        catalog = ActionCatalog(
            phase="PURCHASE_LOAN_OFFER",
            actions=[
                ActionSpec(
                    "BORROW_MONEY",
                    f"Borrow to cover the ${shortfall} shortfall (multiples of $1,000).",
                    slots={"amount": IntSlot(need, max(need, min(need + 10_000, BORROW_CAP)), step=1000)},
                ),
                _end_spec("DECLINE_LOAN", "Walk away from the purchase."),
            ],
            fallback=Decision("DECLINE_LOAN"),
            ending=frozenset({"BORROW_MONEY", "DECLINE_LOAN"}),
        )
        request = DecisionRequest(
            player, catalog, trigger=f"purchase failed: ${shortfall} short; a loan is offered"
        )
        applied = yield request
        if applied.decision.action == "BORROW_MONEY":
            loan = sheet.borrow(applied.decision.params["amount"])
            self.emit_decision(
                request,
                applied,
                {
                    "type": "borrow",
                    "stage": "purchase_loan_offer",
                    "amount": loan.principal,
                    "payment": loan.payment,
                    "transfers": self._transfer(player, loan.principal),
                },
                cash_delta=loan.principal,
            )
        else:
            self.emit_decision(request, applied, {"type": "loan_declined"})

    def _global_offer(self, lander: int, offer: dict) -> TurnGen:
        """All eligible players resolve the market offer in seat order from
        the drawing player."""
        self.pending_offer = offer
        for shift in range(self.num_players):
            seat = (lander + shift) % self.num_players
            if seat in self.eliminated:
                continue
            sheet = self._sheet(seat)
            if sheet.track != "rat_race":
                continue
            while True:
                eligible = [a.asset_id for a in sheet.assets if sheet.offer_eligible(a, offer)]
                if not eligible:
                    break
                catalog = ActionCatalog(
                    phase="GLOBAL_OFFER",
                    actions=[
                        ActionSpec(
                            "ACCEPT_OFFER",
                            f"Sell an eligible asset to: {offer['name']}.",
                            slots={"asset_id": ChoiceSlot(eligible)},
                        ),
                        _end_spec("DECLINE_OFFER", "Keep your assets."),
                    ],
                    fallback=Decision("DECLINE_OFFER"),
                    ending=frozenset({"DECLINE_OFFER"}),
                )
                request = DecisionRequest(
                    seat, catalog, trigger=f"global market offer: {offer['name']}"
                )
                applied = yield request
                if applied.decision.action == "DECLINE_OFFER":
                    self.emit_decision(request, applied, {"type": "offer_declined"})
                    break
                sale = sheet.sell_asset(applied.decision.params["asset_id"], offer)
                self.emit_decision(
                    request,
                    applied,
                    {
                        "type": "offer_sale",
                        "asset": sale["asset"].name,
                        "price": sale["price"],
                        "net": sale["net"],
                        "transfers": self._transfer(seat, sale["net"]),
                    },
                    cash_delta=sale["net"],
                )
        self.pending_offer = None

    # -- bankruptcy ---------------------------------------------------------------------------

    def _solvent(self, sheet: PlayerSheet) -> bool:
        return sheet.cash >= 0 or sheet.monthly_cash_flow >= 0

    def _bankruptcy_resolution(self, player: int, sheet: PlayerSheet):
        self.emit_passive(
            player,
            {
                "type": "bankruptcy_start",
                "cash": sheet.cash,
                "monthly_cash_flow": sheet.monthly_cash_flow,
            },
        )
        ended = False
        while not self._solvent(sheet) and not ended:
            actions: list[ActionSpec] = []
            if sheet.assets:
                ids = [a.asset_id for a in sheet.assets]
                actions.append(
                    ActionSpec(
                        "LIQUIDATE_ASSET",
                        "Sell an asset at its liquidation value; financing is forgiven.",
                        slots={"asset_id": ChoiceSlot(ids)},
                    )
                )
            repayable = self._repayable(sheet)
            if repayable:
                actions.append(self._repay_spec(sheet, repayable))
            actions.append(
                _end_spec("END_RESOLUTION", "Stop resolving (elimination if still insolvent).")
            )
            if len(actions) == 1:
                break
            fallback = self._resolution_fallback(sheet)
            catalog = ActionCatalog(
                phase="BANKRUPTCY_RESOLUTION",
                actions=actions,
                fallback=fallback,
                ending=frozenset({"END_RESOLUTION"}),
            )
            request = DecisionRequest(
                player,
                catalog,
                trigger=(
                    f"bankruptcy: cash {sheet.cash}, monthly cash flow "
                    f"{sheet.monthly_cash_flow}; liquidate or repay"
                ),
            )
            applied = yield request
            action = applied.decision.action
            if action == "END_RESOLUTION":
                self.emit_decision(request, applied, {"type": "resolution_end"})
                ended = True
            elif action == "LIQUIDATE_ASSET":
                result = sheet.liquidate(applied.decision.params["asset_id"])
                self.emit_decision(
                    request,
                    applied,
                    {
                        "type": "liquidation",
                        "asset": result["asset"].name,
                        "recovered": result["recovered"],
                        "transfers": self._transfer(player, result["recovered"]),
                    },
                    cash_delta=result["recovered"],
                )
            elif action == "REPAY_LIABILITY":
                amount = applied.decision.params["amount"]
                liability = sheet.repay(applied.decision.params["liability_id"], amount)
                self.emit_decision(
                    request,
                    applied,
                    {
                        "type": "repay",
                        "stage": "bankruptcy_resolution",
                        "liability": liability.name,
                        "amount": amount,
                        "remaining": liability.principal,
                        "transfers": self._transfer(player, -amount),
                    },
                    cash_delta=-amount,
                )
        if self._solvent(sheet):
            self.emit_passive(player, {"type": "bankruptcy_resolved", "cash": sheet.cash})
            return True
        sheet.bankrupt = True
        self.eliminated.add(player)
        self.emit_passive(player, {"type": "eliminated", "cash": sheet.cash})
        return False

    def _resolution_fallback(self, sheet: PlayerSheet) -> Decision:
        # Forced takeover liquidates in descending cash-recovery order.
        if sheet.assets:
            best = max(sheet.assets, key=lambda a: (sheet.liquidation_value(a), -a.asset_id))
            return Decision("LIQUIDATE_ASSET", {"asset_id": best.asset_id})
        return Decision("END_RESOLUTION")

    # -- fast track -----------------------------------------------------------------------------

    def _fast_track_turn(self, player: int, sheet: PlayerSheet) -> TurnGen:
        ft = sheet.fast_track
        dice_count = 2
        if ft.charity_unlocked:
            request = self._dice_count_request(player, (1, 2, 3), "CHOOSE_FT_DICE_COUNT")
            applied = yield request
            dice_count = applied.decision.params["count"]
            self.emit_decision(request, applied, {"type": "ft_dice_count", "count": dice_count})
        roll = roll_dice(self.rng_dice, dice_count)
        self.emit_passive(
            player, {"type": "dice_roll", "dice": list(roll.dice), "total": roll.total}
        )

        start = sheet.position
        for step in range(1, roll.total + 1):
            pos = (start + step) % FAST_TRACK_SIZE
            if self.data.fast_track[pos]["kind"] == "cashflow_day":
                amount = ft.current_cfd_income
                sheet.cash += amount
                sheet._sync()
                self.emit_passive(
                    player,
                    {
                        "type": "ft_cashflow_day",
                        "amount": amount,
                        "transfers": self._transfer(player, amount),
                    },
                    cash_delta=amount,
                )
        sheet.position, _ = advance_position(start, roll.total, FAST_TRACK_SIZE)
        space = self.data.fast_track[sheet.position]
        self.emit_passive(
            player,
            {"type": "move", "from": start, "to": sheet.position, "space": space["kind"]},
        )

        kind = space["kind"]
        if kind == "risk":
            self._apply_ft_risk(player, sheet, space)
            return
        if kind == "business" and sheet.position not in self.ft_claimed:
            if sheet.cash >= space["cost"]:
                self.emit_passive(
                    player,
                    {
                        "type": "purchase_opportunity",
                        "game_area": "fast_track",
                        "card": space["name"],
                        "kind": "ft_business",
                        "cash_before": sheet.cash,
                    },
                )
                yield from self._ft_action(player, sheet, space, buy="business")
            return
        if kind == "charity" and not ft.charity_unlocked:
            if sheet.cash >= ft.current_cfd_income // 10:
                yield from self._ft_action(player, sheet, space, buy="charity")
            return
        if kind == "dream" and sheet.position == sheet.dream.space:
            if sheet.cash >= sheet.dream.cost:
                yield from self._ft_action(player, sheet, space, buy="dream")
            return

    def _ft_action(self, player: int, sheet: PlayerSheet, space: dict, buy: str) -> TurnGen:
        ft = sheet.fast_track
        actions: list[ActionSpec] = []
        if buy == "business":
            actions.append(
                ActionSpec(
                    "BUY_FT_OPPORTUNITY",
                    f"Buy {space['name']} for ${space['cost']} "
                    f"(+${space['cfd_income']} Cashflow-Day income).",
                )
            )
        elif buy == "charity":
            actions.append(
                ActionSpec(
                    "DONATE_FT_CHARITY",
                    "Donate 10% of Cashflow-Day income to unlock the 1/2/3-dice choice.",
                )
            )
        elif buy == "dream":
            actions.append(
                ActionSpec("BUY_FT_DREAM", f"Buy your dream ({sheet.dream.name}) and win.")
            )
        actions.append(_end_spec("END_FT_TURN", "Pass on this space."))
        catalog = ActionCatalog(
            phase="FT_ACTION",
            actions=actions,
            fallback=Decision("END_FT_TURN"),
            ending=frozenset({a.name for a in actions}),
        )
        request = DecisionRequest(
            player, catalog, trigger=f"fast track: landed on {space['kind']}"
        )
        applied = yield request
        action = applied.decision.action
        if action == "END_FT_TURN":
            self.emit_decision(request, applied, {"type": "phase_end"})
            return
        if action == "BUY_FT_OPPORTUNITY":
            cost = space["cost"]
            sheet.cash -= cost
            sheet.turn_decision_delta -= cost
            sheet._sync()
            success = True
            roll_face = None
            if space.get("success_roll"):
                roll_face = roll_dice(self.rng_dice, 1).die1
                success = roll_face in space["success_roll"]
            if success:
                self.ft_claimed[sheet.position] = player
                ft.current_cfd_income += space["cfd_income"]
                ft.businesses.append({"name": space["name"], "cfd_income": space["cfd_income"]})
            self.emit_decision(
                request,
                applied,
                {
                    "type": "ft_buy",
                    "card": space["name"],
                    "cost": cost,
                    "cfd_income": space["cfd_income"] if success else 0,
                    "roll": roll_face,
                    "success": success,
                    "transfers": self._transfer(player, -cost),
                },
                cash_delta=-cost,
            )
            self._check_ft_victory(player, sheet)
        elif action == "DONATE_FT_CHARITY":
            donation = ft.current_cfd_income // 10
            sheet.cash -= donation
            sheet.turn_decision_delta -= donation
            ft.charity_unlocked = True
            sheet._sync()
            self.emit_decision(
                request,
                applied,
                {
                    "type": "ft_charity",
                    "amount": donation,
                    "transfers": self._transfer(player, -donation),
                },
                cash_delta=-donation,
            )
        elif action == "BUY_FT_DREAM":
            cost = sheet.dream.cost
            sheet.cash -= cost
            sheet.turn_decision_delta -= cost
            sheet.won = True
            sheet._sync()
            self.match_winner = player
            self.emit_decision(
                request,
                applied,
                {
                    "type": "victory",
                    "how": "dream",
                    "dream": sheet.dream.name,
                    "cost": cost,
                    "transfers": self._transfer(player, -cost),
                },
                cash_delta=-cost,
            )

    def _apply_ft_risk(self, player: int, sheet: PlayerSheet, space: dict) -> None:
        ft = sheet.fast_track
        risk = space["risk"]
        delta = 0
        detail: dict = {}
        if risk == "all_cash" and sheet.cash > 0:
            delta = -sheet.cash
        elif risk == "half_cash" and sheet.cash > 0:
            delta = -(sheet.cash // 2)
        elif risk == "repair":
            delta = -space["amount"]
        elif risk == "lose_lowest_asset" and ft.businesses:
            lowest = min(ft.businesses, key=lambda b: b["cfd_income"])
            ft.businesses.remove(lowest)
            ft.current_cfd_income -= lowest["cfd_income"]
            detail["lost"] = lowest["name"]
        sheet.cash += delta
        sheet._sync()
        payload = {
            "type": "ft_risk",
            "risk": risk,
            "name": space.get("name"),
            "amount": delta,
            **detail,
        }
        if delta:
            payload["transfers"] = self._transfer(player, delta)
        self.emit_passive(player, payload, cash_delta=delta if delta else None)

    def _check_ft_victory(self, player: int, sheet: PlayerSheet) -> None:
        ft = sheet.fast_track
        if ft.current_cfd_income - ft.beginning_cfd_income >= WIN_GAP:
            sheet.won = True
            self.match_winner = player
            self.emit_passive(
                player,
                {
                    "type": "victory",
                    "how": "cfd_income",
                    "gain": ft.current_cfd_income - ft.beginning_cfd_income,
                },
            )
