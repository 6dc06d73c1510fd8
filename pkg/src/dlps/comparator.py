"""Billing comparison across tariff signals: flat, RTP, TOU, and demand-linked.

The reference signals are derived from the same day the demand-linked
schedule prices, so comparisons are apples-to-apples:

* flat: one day-long price, the load-weighted mean market price, which
  makes flat billing revenue-neutral against RTP billing over the day;
* rtp: the market clearing price, state by state;
* tou: one load-weighted mean price per window (peak, off-peak), with an
  optional multiplier stressing the peak block;
* proposed: the demand-linked schedule, whose prices already embed the
  assured margin.

Billing under flat/rtp/tou optionally marks revenue up by each category's
profit factor so the retailer take matches across columns. A
demand-response event (a scenario scoped to some window) reshapes demand
inside that window only; reference signals stay as derived from the base
day, which mirrors how a utility would publish prices before the event.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping

import numpy as np

from .domain import Category, Customer, Dataset, DayProfile, SystemState, demand_at_state
from .pricing import PriceSchedule, build_schedule, off_peak_price, on_peak_prices
from .scenario import Scenario, perturbation_at

__all__ = [
    "SignalKind",
    "TariffSignal",
    "SignalBilling",
    "BillingComparison",
    "rtp_signal",
    "derive_flat",
    "derive_tou",
    "proposed_signal",
    "bill_under_signal",
    "compare_signals",
    "compare_to_reference",
    "event_schedule",
    "standard_comparison",
]


def _effective_demand(
    customer: Customer,
    state: SystemState,
    profile: DayProfile,
    dr_event: Scenario | None,
) -> float:
    demand = demand_at_state(customer, state)
    if dr_event is not None:
        demand *= 1.0 + perturbation_at(dr_event, customer.id, state.index, profile)
    return demand


class SignalKind(str, Enum):
    FLAT = "flat"
    RTP = "rtp"
    TOU = "tou"
    PROPOSED = "proposed"


@dataclass(frozen=True)
class TariffSignal:
    """One price signal over the day.

    ``values`` maps state index to unit price for flat/rtp/tou kinds; the
    proposed kind delegates to its per-customer ``schedule`` instead.
    """

    kind: SignalKind
    values: Mapping[int, float] | None = None
    schedule: PriceSchedule | None = None

    def __post_init__(self) -> None:
        if self.kind is SignalKind.PROPOSED:
            if self.schedule is None:
                raise ValueError("proposed signal needs a price schedule")
        else:
            if self.values is None:
                raise ValueError(f"{self.kind.value} signal needs per-state values")
            if any(v <= 0 for v in self.values.values()):
                raise ValueError("signal prices must be > 0")

    def price_at(self, customer: Customer, state: SystemState) -> float:
        if self.kind is SignalKind.PROPOSED:
            assert self.schedule is not None
            return self.schedule.price(customer, state)
        assert self.values is not None
        try:
            return self.values[state.index]
        except KeyError:
            raise KeyError(
                f"{self.kind.value} signal has no price for state {state.index}"
            ) from None


def _state_totals(ds: Dataset) -> dict[int, float]:
    totals: dict[int, float] = {}
    for state in ds.profile.states:
        totals[state.index] = sum(demand_at_state(c, state) for c in ds.customers)
    return totals


def _weighted_mean_price(states: Iterable[SystemState], totals: Mapping[int, float]) -> float:
    states = tuple(states)
    energy = sum(totals[s.index] for s in states)
    if energy <= 0:
        raise ValueError("window carries no energy, no mean price exists")
    return sum(s.mcp * totals[s.index] for s in states) / energy


def rtp_signal(profile: DayProfile) -> TariffSignal:
    """Real-time price signal: the market clearing price at each state."""
    return TariffSignal(
        kind=SignalKind.RTP, values={s.index: s.mcp for s in profile.states}
    )


def derive_flat(ds: Dataset) -> TariffSignal:
    """Day-long flat price: load-weighted mean of the market price.

    Weighting by total demand makes flat billing over the whole day equal
    RTP billing over the whole day for the same demands.
    """
    totals = _state_totals(ds)
    value = _weighted_mean_price(ds.profile.states, totals)
    return TariffSignal(
        kind=SignalKind.FLAT, values={s.index: value for s in ds.profile.states}
    )


def derive_tou(ds: Dataset, peak_multiplier: float = 1.0) -> TariffSignal:
    """Two-block time-of-use price: one load-weighted mean per window.

    At multiplier 1.0 each block is revenue-neutral against RTP within its
    own window; larger multipliers stress the peak block. The peak block
    must not price below the off-peak block.
    """
    if peak_multiplier < 1.0:
        raise ValueError(f"peak multiplier must be >= 1, got {peak_multiplier}")
    totals = _state_totals(ds)
    peak_value = peak_multiplier * _weighted_mean_price(ds.profile.peak_states, totals)
    off_value = _weighted_mean_price(ds.profile.off_peak_states, totals)
    if peak_value < off_value:
        raise ValueError(
            f"time-of-use peak price {peak_value:.6g} fell below "
            f"off-peak price {off_value:.6g}"
        )
    values = {
        s.index: (peak_value if s.is_peak else off_value) for s in ds.profile.states
    }
    return TariffSignal(kind=SignalKind.TOU, values=values)


def proposed_signal(schedule: PriceSchedule) -> TariffSignal:
    """Wrap a demand-linked price schedule as a comparable signal."""
    return TariffSignal(kind=SignalKind.PROPOSED, schedule=schedule)


@dataclass(frozen=True)
class SignalBilling:
    """Billing (Rs) under one signal, keyed by (category, state index)."""

    kind: SignalKind
    with_profit: bool
    by_category_state: Mapping[tuple[Category, int], float]

    def total(
        self,
        categories: Iterable[Category] | None = None,
        states: Iterable[int] | None = None,
    ) -> float:
        """Aggregate billing; None selects everything, empty selects nothing."""
        cats = None if categories is None else set(categories)
        idx = None if states is None else set(states)
        return sum(
            v
            for (cat, t), v in self.by_category_state.items()
            if (cats is None or cat in cats) and (idx is None or t in idx)
        )


def bill_under_signal(
    ds: Dataset,
    signal: TariffSignal,
    with_profit: bool = True,
    dr_event: Scenario | None = None,
) -> SignalBilling:
    """Bill every (category, state) cell of the day under one signal.

    Reference signals (flat/rtp/tou) are marked up by each category's
    profit factor when ``with_profit`` is set, putting them on the same
    retailer-revenue footing as the proposed signal, which embeds its
    margin already. A demand-response event scales each customer's demand
    inside the event's scope before billing.
    """
    out: dict[tuple[Category, int], float] = {}
    for category in ds.categories_present:
        kp = ds.profit_factor(category)
        markup = 1.0 + kp if (with_profit and signal.kind is not SignalKind.PROPOSED) else 1.0
        customers = ds.customers_in(category)
        for state in ds.profile.states:
            cell = 0.0
            for c in customers:
                demand = _effective_demand(c, state, ds.profile, dr_event)
                cell += signal.price_at(c, state) * demand
            out[(category, state.index)] = markup * cell
    return SignalBilling(kind=signal.kind, with_profit=with_profit, by_category_state=out)


@dataclass(frozen=True)
class BillingComparison:
    """Billing under several signals over the same day and demands."""

    billings: tuple[SignalBilling, ...]

    def billing(self, kind: SignalKind) -> SignalBilling:
        for b in self.billings:
            if b.kind is kind:
                return b
        raise KeyError(f"comparison has no {kind.value} column")

    @property
    def kinds(self) -> tuple[SignalKind, ...]:
        return tuple(b.kind for b in self.billings)


def compare_signals(
    ds: Dataset,
    signals: Iterable[TariffSignal],
    with_profit: bool = True,
    dr_event: Scenario | None = None,
) -> BillingComparison:
    """Bill the same day under each signal; one column per signal kind."""
    billings = []
    seen: set[SignalKind] = set()
    for signal in signals:
        if signal.kind in seen:
            raise ValueError(f"duplicate signal kind {signal.kind.value}")
        seen.add(signal.kind)
        billings.append(bill_under_signal(ds, signal, with_profit, dr_event))
    if not billings:
        raise ValueError("nothing to compare, no signals given")
    return BillingComparison(billings=tuple(billings))


def compare_to_reference(
    comparison: BillingComparison,
    reference: SignalKind = SignalKind.RTP,
) -> dict[tuple[SignalKind, Category, int], float]:
    """Percentage billing deltas of every cell against the reference signal.

    Raises when a reference cell is zero, since a relative delta against
    zero billing has no meaning.
    """
    ref = comparison.billing(reference)
    out: dict[tuple[SignalKind, Category, int], float] = {}
    for billing in comparison.billings:
        for key, value in billing.by_category_state.items():
            base = ref.by_category_state[key]
            if base == 0.0:
                category, state = key
                raise ValueError(
                    f"reference billing is zero for {category.value} at state {state}"
                )
            out[(billing.kind, *key)] = 100.0 * (value - base) / base
    return out


def event_schedule(ds: Dataset, dr_event: Scenario | None) -> PriceSchedule:
    """Demand-linked schedule for the event-shaped day.

    Prices each group from the demands actually in effect, so peak prices
    respond to the event while windows outside its scope keep their base
    demands. With no event this is exactly ``pricing.build_schedule``.
    """
    if dr_event is None:
        return build_schedule(ds)
    on_peak: dict[tuple[str, int], float] = {}
    off_peak: dict[Category, float] = {}
    for category in ds.categories_present:
        kp = ds.profit_factor(category)
        customers = ds.customers_in(category)
        for state in ds.profile.peak_states:
            demands = np.array(
                [_effective_demand(c, state, ds.profile, dr_event) for c in customers],
                dtype=float,
            )
            prices = on_peak_prices(demands, kp, state.mcp)
            for c, price in zip(customers, prices):
                on_peak[(c.id, state.index)] = float(price)
        window = ds.profile.off_peak_states
        matrix = np.array(
            [
                [_effective_demand(c, s, ds.profile, dr_event) for c in customers]
                for s in window
            ],
            dtype=float,
        )
        mcps = np.array([s.mcp for s in window], dtype=float)
        off_peak[category] = off_peak_price(matrix, mcps, kp)
    base = build_schedule(ds).provenance
    return PriceSchedule(
        on_peak=on_peak,
        off_peak=off_peak,
        provenance=f"{base}; event={dr_event.label}",
    )


def standard_comparison(
    ds: Dataset,
    tou_peak_multiplier: float = 1.0,
    with_profit: bool = True,
    dr_event: Scenario | None = None,
) -> BillingComparison:
    """The four-way comparison: flat, RTP, TOU, and the demand-linked schedule.

    Reference signals derive from the base day, the way a utility would
    publish them ahead of any event; the demand-linked schedule is built
    from the demands actually in effect, since it responds to them.
    """
    schedule = event_schedule(ds, dr_event)
    signals = (
        derive_flat(ds),
        rtp_signal(ds.profile),
        derive_tou(ds, tou_peak_multiplier),
        proposed_signal(schedule),
    )
    return compare_signals(ds, signals, with_profit=with_profit, dr_event=dr_event)
