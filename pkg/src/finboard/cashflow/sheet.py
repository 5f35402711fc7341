"""Income statement / balance sheet for one Cashflow player.

The sheet maintains the net-flow identity
``pi == salary + passive_income - total_expenses + turn_decision_delta``
redundantly: `pi` and `stored_passive_income` are updated by every
operation and `check_identity` recomputes both from parts.  Decision-driven
cash moves accrue to `turn_decision_delta` (reset each turn); paychecks pay
the monthly cash flow, shocks arrive through cards and risk spaces.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .data import CareerData, DreamData, STOCK_KINDS

BANK_LOAN_UNIT = 1000
BANK_LOAN_RATE = 10  # monthly payment = principal / 10
MAX_CHILDREN = 3


class SheetError(ValueError):
    """An operation that violates a financial statement rule."""


@dataclass
class Asset:
    asset_id: int
    kind: str
    name: str
    cost: int
    down_payment: int
    financing: int
    cash_flow: int
    units: int = 0
    symbol: str | None = None

    def to_dict(self) -> dict:
        return {
            "id": self.asset_id,
            "kind": self.kind,
            "name": self.name,
            "cost": self.cost,
            "down_payment": self.down_payment,
            "financing": self.financing,
            "cash_flow": self.cash_flow,
            "units": self.units,
            "symbol": self.symbol,
        }


@dataclass
class Liability:
    liability_id: int
    kind: str
    name: str
    principal: int
    payment: int

    def to_dict(self) -> dict:
        return {
            "id": self.liability_id,
            "kind": self.kind,
            "name": self.name,
            "principal": self.principal,
            "payment": self.payment,
        }


@dataclass
class FastTrackSheet:
    beginning_cfd_income: int
    current_cfd_income: int
    win_target: int
    businesses: list[dict] = field(default_factory=list)
    charity_unlocked: bool = False

    def to_dict(self) -> dict:
        return {
            "beginning_cfd_income": self.beginning_cfd_income,
            "current_cfd_income": self.current_cfd_income,
            "win_target": self.win_target,
            "businesses": list(self.businesses),
            "charity_unlocked": self.charity_unlocked,
        }


@dataclass
class PlayerSheet:
    player: int
    career: CareerData
    dream: DreamData
    cash: int
    children: int = 0
    charity_turns: int = 0
    skip_turns: int = 0
    track: str = "rat_race"
    position: int = 0
    assets: list[Asset] = field(default_factory=list)
    liabilities: list[Liability] = field(default_factory=list)
    turn_decision_delta: int = 0
    escape_round: int | None = None
    bankrupt: bool = False
    won: bool = False
    fast_track: FastTrackSheet | None = None
    pi: int = field(init=False)
    stored_passive_income: int = field(init=False)
    _next_id: int = 1

    def __post_init__(self) -> None:
        self._sync()

    # -- derived figures ------------------------------------------------------

    @property
    def salary(self) -> int:
        return self.career.salary

    @property
    def passive_income(self) -> int:
        return sum(a.cash_flow for a in self.assets)

    @property
    def total_income(self) -> int:
        return self.salary + self.passive_income

    @property
    def loan_payment(self) -> int:
        return sum(l.payment for l in self.liabilities)

    @property
    def total_expenses(self) -> int:
        return (
            self.career.taxes
            + self.career.other_expenses
            + self.children * self.career.per_child_expense
            + self.loan_payment
        )

    @property
    def monthly_cash_flow(self) -> int:
        return self.total_income - self.total_expenses

    def _sync(self) -> None:
        self.stored_passive_income = self.passive_income
        self.pi = self.monthly_cash_flow + self.turn_decision_delta

    def check_identity(self) -> None:
        expected_pi = (
            self.salary + self.passive_income - self.total_expenses + self.turn_decision_delta
        )
        if self.pi != expected_pi:
            raise AssertionError(
                f"sheet identity broken for player {self.player}: "
                f"pi={self.pi} expected={expected_pi}"
            )
        if self.stored_passive_income != self.passive_income:
            raise AssertionError(
                f"passive income mismatch for player {self.player}: "
                f"{self.stored_passive_income} != {self.passive_income}"
            )
        if not 0 <= self.children <= MAX_CHILDREN:
            raise AssertionError(f"children out of range: {self.children}")

    def begin_turn(self) -> None:
        self.turn_decision_delta = 0
        self._sync()

    # -- financial operations --------------------------------------------------

    def _take_id(self) -> int:
        nid = self._next_id
        self._next_id += 1
        return nid

    def borrow(self, amount: int) -> Liability:
        """Bank loan: multiples of $1,000, monthly payment 10% of principal."""
        if amount < BANK_LOAN_UNIT or amount % BANK_LOAN_UNIT != 0:
            raise SheetError(f"loans are multiples of ${BANK_LOAN_UNIT:,}, got {amount}")
        loan = Liability(
            liability_id=self._take_id(),
            kind="bank_loan",
            name="Bank loan",
            principal=amount,
            payment=amount // BANK_LOAN_RATE,
        )
        self.liabilities.append(loan)
        self.cash += amount
        self.turn_decision_delta += amount
        self._sync()
        return loan

    def find_liability(self, liability_id: int) -> Liability | None:
        for liability in self.liabilities:
            if liability.liability_id == liability_id:
                return liability
        return None

    def repay(self, liability_id: int, amount: int) -> Liability:
        liability = self.find_liability(liability_id)
        if liability is None:
            raise SheetError(f"no liability {liability_id}")
        if amount > self.cash:
            raise SheetError(f"cash {self.cash} cannot cover repayment {amount}")
        if liability.kind == "bank_loan":
            if amount < BANK_LOAN_UNIT or amount % BANK_LOAN_UNIT != 0:
                raise SheetError("bank loans are repaid in $1,000 units")
            if amount > liability.principal:
                raise SheetError("repayment exceeds principal")
            liability.principal -= amount
            liability.payment = liability.principal // BANK_LOAN_RATE
        else:
            if amount != liability.principal:
                raise SheetError(f"{liability.kind} requires full repayment")
            liability.principal = 0
        if liability.principal == 0:
            self.liabilities.remove(liability)
        self.cash -= amount
        self.turn_decision_delta -= amount
        self._sync()
        return liability

    def buy_deal(self, card: dict, units: int = 0):
        """Purchase a deal card.  Insufficient cash returns a failure value
        (the agent may borrow and retry in the same turn), never raises."""
        if card["kind"] in STOCK_KINDS:
            if units < 1:
                raise SheetError("stock purchases need a positive unit count")
            price = card["price"] * units
            if price > self.cash:
                return {"ok": False, "reason": "insufficient-cash", "shortfall": price - self.cash}
            asset = Asset(
                asset_id=self._take_id(),
                kind=card["kind"],
                name=card["name"],
                cost=price,
                down_payment=price,
                financing=0,
                cash_flow=card.get("dividend", 0) * units,
                units=units,
                symbol=card["symbol"],
            )
            self.assets.append(asset)
            self.cash -= price
            self.turn_decision_delta -= price
            self._sync()
            return {"ok": True, "asset": asset, "paid": price}

        down = card.get("down_payment", card["cost"])
        if down > self.cash:
            return {"ok": False, "reason": "insufficient-cash", "shortfall": down - self.cash}
        asset = Asset(
            asset_id=self._take_id(),
            kind=card["kind"],
            name=card["name"],
            cost=card["cost"],
            down_payment=down,
            financing=card.get("financing", 0),
            cash_flow=card.get("cash_flow", 0),
        )
        self.assets.append(asset)
        if asset.financing:
            # Deal financing is serviced inside the card's net cash flow, so
            # it carries no separate monthly payment; it is settled on sale.
            self.liabilities.append(
                Liability(
                    liability_id=self._take_id(),
                    kind="mortgage" if card["kind"] == "real_estate" else "business_loan",
                    name=f"Financing: {card['name']}",
                    principal=asset.financing,
                    payment=0,
                )
            )
        self.cash -= down
        self.turn_decision_delta -= down
        self._sync()
        return {"ok": True, "asset": asset, "paid": down}

    def find_asset(self, asset_id: int) -> Asset | None:
        for asset in self.assets:
            if asset.asset_id == asset_id:
                return asset
        return None

    def offer_eligible(self, asset: Asset, offer: dict) -> bool:
        if offer["kind"] == "per_unit":
            return asset.symbol == offer["symbol"]
        return asset.kind == offer["asset_kind"]

    def sell_asset(self, asset_id: int, offer: dict) -> dict:
        asset = self.find_asset(asset_id)
        if asset is None:
            raise SheetError(f"no asset {asset_id}")
        if not self.offer_eligible(asset, offer):
            raise SheetError(f"asset {asset.name!r} not eligible for this offer")
        if offer["kind"] == "per_unit":
            price = offer["unit_price"] * asset.units
        elif offer["kind"] == "fixed":
            price = offer["price"]
        else:
            price = int(round(asset.cost * offer["factor"]))
        net = price - self._settle_financing(asset)
        self.assets.remove(asset)
        self.cash += net
        self.turn_decision_delta += net
        self._sync()
        return {"asset": asset, "price": price, "net": net}

    def _settle_financing(self, asset: Asset) -> int:
        """Remove the liability attached to an asset; returns its principal."""
        if not asset.financing:
            return 0
        for liability in self.liabilities:
            if liability.name == f"Financing: {asset.name}" and liability.principal > 0:
                self.liabilities.remove(liability)
                return liability.principal
        return asset.financing

    def apply_paycheck(self) -> dict:
        """Credit the monthly cash flow; flag bankruptcy when both the
        resulting cash and the monthly cash flow are negative."""
        amount = self.monthly_cash_flow
        self.cash += amount
        self._sync()
        return {
            "amount": amount,
            "bankruptcy": self.cash < 0 and self.monthly_cash_flow < 0,
        }

    def add_child(self) -> bool:
        if self.children >= MAX_CHILDREN:
            return False
        self.children += 1
        self._sync()
        return True

    def apply_doodad(self, card: dict) -> dict:
        self.cash -= card["cost"]
        debt = card.get("debt")
        if debt:
            self.liabilities.append(
                Liability(
                    liability_id=self._take_id(),
                    kind=debt["kind"],
                    name=debt["name"],
                    principal=debt["principal"],
                    payment=debt["payment"],
                )
            )
        self._sync()
        return {"cost": card["cost"], "debt": debt}

    def donate_charity(self) -> int:
        """Donate 10% of monthly total income for three turns of dice choice."""
        donation = self.total_income // 10
        self.cash -= donation
        self.turn_decision_delta -= donation
        self.charity_turns = 3
        self._sync()
        return donation

    def apply_downsize(self) -> int:
        cost = self.total_expenses
        self.cash -= cost
        self.charity_turns = 0
        self.skip_turns = 2
        self._sync()
        return cost

    # -- escape and fast track -------------------------------------------------

    def escape_ready(self) -> bool:
        return self.track == "rat_race" and self.passive_income > self.total_expenses

    def enter_fast_track(self, round_index: int) -> FastTrackSheet:
        beginning = 100 * self.passive_income
        self.fast_track = FastTrackSheet(
            beginning_cfd_income=beginning,
            current_cfd_income=beginning,
            win_target=beginning + 50_000,
        )
        self.track = "fast_track"
        self.position = 0
        self.escape_round = round_index
        self.charity_turns = 0
        self._sync()
        return self.fast_track

    def liquidation_value(self, asset: Asset) -> int:
        """Bankruptcy recovery: half the cash sunk into the asset; attached
        financing is forgiven (debt relief), never billed."""
        return asset.down_payment // 2

    def liquidate(self, asset_id: int) -> dict:
        asset = self.find_asset(asset_id)
        if asset is None:
            raise SheetError(f"no asset {asset_id}")
        recover = self.liquidation_value(asset)
        self._settle_financing(asset)
        self.assets.remove(asset)
        self.cash += recover
        self.turn_decision_delta += recover
        self._sync()
        return {"asset": asset, "recovered": recover}

    def to_dict(self) -> dict:
        return {
            "player": self.player,
            "career": self.career.name,
            "dream": self.dream.name,
            "cash": self.cash,
            "salary": self.salary,
            "passive_income": self.stored_passive_income,
            "total_expenses": self.total_expenses,
            "monthly_cash_flow": self.monthly_cash_flow,
            "pi": self.pi,
            "turn_decision_delta": self.turn_decision_delta,
            "children": self.children,
            "charity_turns": self.charity_turns,
            "skip_turns": self.skip_turns,
            "track": self.track,
            "position": self.position,
            "assets": [a.to_dict() for a in self.assets],
            "liabilities": [l.to_dict() for l in self.liabilities],
            "escape_round": self.escape_round,
            "bankrupt": self.bankrupt,
            "won": self.won,
            "fast_track": self.fast_track.to_dict() if self.fast_track else None,
        }
