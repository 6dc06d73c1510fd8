"""Demand-linked price signals and economic-balance accounting.

During peak states each customer of a category pays a unit price
proportional to their own demand, scaled so that the category's billing
exactly recovers the energy purchase cost plus the assured margin:

    price_j = (1 + profit_factor) * mcp * demand_j * total / sum_sq

where ``total`` is the category's demand at the state and ``sum_sq`` the sum
of squared demands. Customers demanding more than the group's
contraharmonic mean (sum_sq / total) pay more than the flat benchmark
price; lighter customers pay less, which is the demand-response incentive.

During off-peak states every customer of a category pays one uniform
price: the demand-weighted average market price over the off-peak window,
marked up by the same profit factor, so the balance holds over the window
as a whole rather than state by state.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .domain import (
    Category,
    Customer,
    Dataset,
    SystemState,
    category_demands,
    select_states,
)

__all__ = [
    "DegenerateGroupError",
    "DegenerateWindowError",
    "PriceSchedule",
    "FinancialSummary",
    "fixed_price",
    "on_peak_prices",
    "proportionality_constant",
    "off_peak_price",
    "build_schedule",
    "verify_ebe",
]


class DegenerateGroupError(ValueError):
    """A pricing group has no demand (sum of squared demands is zero)."""


class DegenerateWindowError(ValueError):
    """A pricing window carries no energy, so no average price exists."""


def _as_demand_vector(demands) -> np.ndarray:
    d = np.asarray(demands, dtype=float)
    if d.ndim != 1:
        raise ValueError(f"expected a 1-D demand vector, got shape {d.shape}")
    if d.size == 0:
        raise DegenerateGroupError("empty demand group")
    if np.any(d < 0):
        raise ValueError("demands must be >= 0")
    return d


def _check_price_inputs(mcp: float, profit_factor: float) -> None:
    if mcp <= 0:
        raise ValueError(f"mcp must be > 0, got {mcp}")
    if not 0.0 <= profit_factor < 1.0:
        raise ValueError(f"profit factor must be in [0, 1), got {profit_factor}")


def fixed_price(mcp: float, profit_factor: float) -> float:
    """Flat benchmark price: market price marked up by the profit factor."""
    _check_price_inputs(mcp, profit_factor)
    return (1.0 + profit_factor) * mcp


def on_peak_prices(demands, profit_factor: float, mcp: float) -> np.ndarray:
    """Per-customer unit prices (Rs/kWh) for one group at one peak state.

    Prices are proportional to each customer's demand; a zero-demand entry
    prices at zero. Raises DegenerateGroupError when the whole group has no
    demand, since no price can recover the (zero) purchase cost ratio.
    """
    _check_price_inputs(mcp, profit_factor)
    d = _as_demand_vector(demands)
    sum_sq = float(np.dot(d, d))
    if sum_sq == 0.0:
        raise DegenerateGroupError("every demand in the group is zero")
    total = float(d.sum())
    return (1.0 + profit_factor) * mcp * (total / sum_sq) * d


def proportionality_constant(demands, profit_factor: float, mcp: float) -> float:
    """Scale factor linking unit price to demand share.

    Each on-peak price equals this constant times the customer's share of
    group demand: (1 + profit_factor) * mcp * total**2 / sum_sq.
    """
    _check_price_inputs(mcp, profit_factor)
    d = _as_demand_vector(demands)
    sum_sq = float(np.dot(d, d))
    if sum_sq == 0.0:
        raise DegenerateGroupError("every demand in the group is zero")
    total = float(d.sum())
    return (1.0 + profit_factor) * mcp * total * total / sum_sq


def off_peak_price(demands, mcps, profit_factor: float) -> float:
    """Uniform off-peak price for one group over a window of states.

    ``demands`` is either a matrix (state rows, customer columns) or a
    vector of per-state total demands; ``mcps`` holds the matching per-state
    market prices. The result is the demand-weighted average market price
    marked up by the profit factor, so the group's billing over the window
    equals purchase cost plus margin.
    """
    if not 0.0 <= profit_factor < 1.0:
        raise ValueError(f"profit factor must be in [0, 1), got {profit_factor}")
    d = np.asarray(demands, dtype=float)
    m = np.asarray(mcps, dtype=float)
    if m.ndim != 1 or m.size == 0:
        raise ValueError("mcps must be a non-empty 1-D sequence")
    if np.any(m <= 0):
        raise ValueError("mcps must be > 0")
    if d.ndim == 2:
        totals = d.sum(axis=1)
    elif d.ndim == 1:
        totals = d
    else:
        raise ValueError(f"expected 1-D or 2-D demands, got shape {d.shape}")
    if totals.shape != m.shape:
        raise ValueError(
            f"demands cover {totals.shape[0]} states but {m.size} mcps given"
        )
    if np.any(totals < 0):
        raise ValueError("demands must be >= 0")
    energy = float(totals.sum())
    if energy <= 0.0:
        raise DegenerateWindowError("window carries no energy")
    return (1.0 + profit_factor) * float(np.dot(totals, m)) / energy


@dataclass(frozen=True)
class PriceSchedule:
    """Complete day-ahead price schedule for a dataset.

    ``on_peak`` maps (customer id, state index) to the customer's unit
    price at that peak state; ``off_peak`` maps each category to its single
    off-peak window price. ``provenance`` records the inputs the schedule
    was built from. Treat instances as immutable.
    """

    on_peak: Mapping[tuple[str, int], float]
    off_peak: Mapping[Category, float]
    provenance: str = ""

    def price(self, customer: Customer, state: SystemState) -> float:
        """Unit price (Rs/kWh) this customer pays at this state."""
        if state.is_peak:
            try:
                return self.on_peak[(customer.id, state.index)]
            except KeyError:
                raise KeyError(
                    f"schedule has no on-peak price for {customer.id} "
                    f"at state {state.index}"
                ) from None
        try:
            return self.off_peak[customer.category]
        except KeyError:
            raise KeyError(
                f"schedule has no off-peak price for category {customer.category.value}"
            ) from None


@dataclass(frozen=True)
class FinancialSummary:
    """Purchase cost, revenue, and margin over some scope of the day.

    ``profit_fraction`` is profit over purchase cost, or None when the
    scope carries no purchase cost (empty scope), where the fraction is
    undefined.
    """

    purchase_cost: float
    revenue: float
    profit: float
    profit_fraction: float | None
    scope: str


def build_schedule(ds: Dataset) -> PriceSchedule:
    """Price every (customer, peak state) pair and each category's off-peak window.

    Raises DegenerateGroupError or DegenerateWindowError with the offending
    category and state named when a group cannot be priced.
    """
    on_peak: dict[tuple[str, int], float] = {}
    off_peak: dict[Category, float] = {}
    for category in ds.categories_present:
        cfg = ds.config_for(category)
        customers = ds.customers_in(category)
        for state in ds.profile.peak_states:
            demands = category_demands(ds, category, state)
            try:
                prices = on_peak_prices(demands, cfg.profit_factor, state.mcp)
            except DegenerateGroupError as exc:
                raise DegenerateGroupError(
                    f"category {category.value} at state {state.index}: {exc}"
                ) from None
            for customer, price in zip(customers, prices):
                on_peak[(customer.id, state.index)] = float(price)
        window = ds.profile.off_peak_states
        matrix = np.array(
            [category_demands(ds, category, s) for s in window], dtype=float
        )
        mcps = np.array([s.mcp for s in window], dtype=float)
        try:
            off_peak[category] = off_peak_price(matrix, mcps, cfg.profit_factor)
        except DegenerateWindowError as exc:
            raise DegenerateWindowError(
                f"category {category.value} off-peak window: {exc}"
            ) from None
    factors = ", ".join(
        f"{cfg.category.value}={cfg.profit_factor}" for cfg in ds.categories
    )
    provenance = (
        f"dataset={ds.label or 'unlabelled'}; profile={ds.profile.source or 'unlabelled'}; "
        f"profit_factors=({factors}); peak_states={list(ds.profile.peak_indices)}"
    )
    return PriceSchedule(on_peak=on_peak, off_peak=off_peak, provenance=provenance)


def verify_ebe(
    ds: Dataset,
    schedule: PriceSchedule,
    category: Category | None = None,
    states: str | int = "day",
) -> FinancialSummary:
    """Check the economic balance by re-billing a scope from schedule prices.

    Purchase cost is market price times demand summed over the scope;
    revenue is schedule price times demand. For a single category over any
    peak state, over the off-peak window as a whole, or over the whole day,
    the profit fraction lands on that category's profit factor; the sums
    here are computed independently of the closed form so tests can assert
    that identity.
    """
    selected = select_states(ds.profile, states)
    customers = ds.customers if category is None else ds.customers_in(category)
    purchase = 0.0
    revenue = 0.0
    for state in selected:
        for customer in customers:
            demand = customer.base_demand * state.load_factor
            purchase += state.mcp * demand
            revenue += schedule.price(customer, state) * demand
    profit = revenue - purchase
    fraction = profit / purchase if purchase > 0 else None
    scope = f"{category.value if category else 'all'}/{states}"
    return FinancialSummary(
        purchase_cost=purchase,
        revenue=revenue,
        profit=profit,
        profit_fraction=fraction,
        scope=scope,
    )
