"""Demand-change scenarios: what-if analysis around a base dataset.

A scenario names relative demand changes for some customers, together with
the scope (state or window) where those changes are in effect. Changes may
be one fraction per customer, or one fraction per (customer, state) as
produced by random demand-response events. Applying a scenario never
mutates the base dataset; deltas are computed by pricing both datasets
exactly and comparing.

Sign conventions: a perturbation of +0.10 means demand rises 10%; deltas
are reported in percent, positive when the scenario value exceeds the base
value.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from typing import Mapping

import numpy as np

from .domain import Category, Dataset, DayProfile, category_demands, select_states
from .pricing import FinancialSummary, on_peak_prices

__all__ = [
    "Scenario",
    "CustomerDelta",
    "ScenarioDeltas",
    "PRESET_NAMES",
    "analysis_state",
    "perturbation_at",
    "apply_scenario",
    "scenario_deltas",
    "financial_summary",
    "random_dr_event",
    "preset_scenario",
    "load_scenario",
    "scenario_to_json",
]

# Relative demand change per customer: one fraction applied across the
# scenario scope, or a per-state-index map of fractions.
Perturbation = float | Mapping[int, float]


@dataclass(frozen=True)
class Scenario:
    """Named set of relative demand changes with the scope they apply to.

    ``scope`` is a state index or one of the window names accepted by
    ``domain.select_states`` and marks where the perturbations are in
    effect; outside it the base demands stand.
    """

    label: str
    perturbations: Mapping[str, Perturbation]
    scope: int | str = "peak"


@dataclass(frozen=True)
class CustomerDelta:
    """Relative changes (percent) for one customer at the analysed state."""

    customer_id: str
    demand_pct: float
    unit_price_pct: float
    billing_pct: float
    demand_contribution_pct: float


@dataclass(frozen=True)
class ScenarioDeltas:
    """Per-customer deltas for one category at one peak state."""

    state: int
    category: Category
    deltas: tuple[CustomerDelta, ...]
    financials: FinancialSummary

    def delta_for(self, customer_id: str) -> CustomerDelta:
        for d in self.deltas:
            if d.customer_id == customer_id:
                return d
        raise KeyError(f"no delta row for customer {customer_id}")


def analysis_state(profile: DayProfile) -> int:
    """Default state for scenario tables: the peak state with the highest load factor."""
    peaks = profile.peak_states
    if not peaks:
        raise ValueError("profile has no peak states")
    best = max(peaks, key=lambda s: (s.load_factor, -s.index))
    return best.index


def _scope_indices(sc: Scenario, profile: DayProfile) -> frozenset[int]:
    return frozenset(s.index for s in select_states(profile, sc.scope))


def perturbation_at(sc: Scenario, customer_id: str, state_index: int, profile: DayProfile) -> float:
    """Relative demand change for a customer at a state; 0 outside the scope."""
    if state_index not in _scope_indices(sc, profile):
        return 0.0
    p = sc.perturbations.get(customer_id, 0.0)
    if isinstance(p, Mapping):
        return float(p.get(state_index, 0.0))
    return float(p)


def _resolve_factor(sc: Scenario, customer_id: str, at_state: int | None) -> float:
    p = sc.perturbations.get(customer_id, 0.0)
    if isinstance(p, Mapping):
        if at_state is None:
            raise ValueError(
                f"scenario {sc.label!r} has per-state perturbations; "
                "pass at_state to pick the state to realize"
            )
        return float(p.get(at_state, 0.0))
    return float(p)


def apply_scenario(ds: Dataset, sc: Scenario, at_state: int | None = None) -> Dataset:
    """Return a new dataset with the scenario's demand changes applied.

    Changes land on base demands, so the result models demands within the
    scenario's scope; evaluate it there. For scenarios with per-state
    perturbations, ``at_state`` picks the state to realize (defaults to the
    scope when that is a single state index).
    """
    if at_state is None and isinstance(sc.scope, int):
        at_state = sc.scope
    known = {c.id for c in ds.customers}
    unknown = sorted(set(sc.perturbations) - known)
    if unknown:
        raise ValueError(f"scenario {sc.label!r} perturbs unknown customer ids: {unknown}")
    customers = []
    for c in ds.customers:
        factor = 1.0 + _resolve_factor(sc, c.id, at_state)
        demand = c.base_demand * factor
        if demand <= 0:
            raise ValueError(
                f"scenario {sc.label!r} drives demand of {c.id} to {demand} kW"
            )
        customers.append(replace(c, base_demand=demand) if factor != 1.0 else c)
    label = f"{ds.label}+{sc.label}" if ds.label else sc.label
    return replace(ds, customers=tuple(customers), label=label)


def scenario_deltas(
    base: Dataset,
    perturbed: Dataset,
    state_index: int,
    category: Category,
) -> ScenarioDeltas:
    """Per-customer relative changes between two datasets at one peak state.

    Reports demand, unit price, billing, and demand-contribution changes in
    percent, each computed from exact repricing of both datasets. Customers
    must match one-to-one; the state must be a peak state in both profiles
    with the same market price.
    """
    b_state = base.profile.state(state_index)
    p_state = perturbed.profile.state(state_index)
    if not (b_state.is_peak and p_state.is_peak):
        raise ValueError(f"state {state_index} is not a peak state")
    if b_state.mcp != p_state.mcp or b_state.load_factor != p_state.load_factor:
        raise ValueError("base and perturbed datasets disagree on the state itself")
    b_customers = base.customers_in(category)
    p_customers = perturbed.customers_in(category)
    if [c.id for c in b_customers] != [c.id for c in p_customers]:
        raise ValueError("base and perturbed datasets list different customers")
    if not b_customers:
        raise ValueError(f"no customers in category {category.value}")
    kp = base.profit_factor(category)
    if kp != perturbed.profit_factor(category):
        raise ValueError("base and perturbed datasets disagree on the profit factor")

    d_base = category_demands(base, category, b_state)
    d_pert = category_demands(perturbed, category, p_state)
    prices_base = on_peak_prices(d_base, kp, b_state.mcp)
    prices_pert = on_peak_prices(d_pert, kp, p_state.mcp)
    dc_base = d_base / d_base.sum()
    dc_pert = d_pert / d_pert.sum()

    def pct(new: float, old: float) -> float:
        return 100.0 * (new - old) / old

    deltas = tuple(
        CustomerDelta(
            customer_id=c.id,
            demand_pct=pct(d_pert[i], d_base[i]),
            unit_price_pct=pct(prices_pert[i], prices_base[i]),
            billing_pct=pct(prices_pert[i] * d_pert[i], prices_base[i] * d_base[i]),
            demand_contribution_pct=pct(dc_pert[i], dc_base[i]),
        )
        for i, c in enumerate(b_customers)
    )
    financials = financial_summary(perturbed, state_index, category)
    return ScenarioDeltas(
        state=state_index, category=category, deltas=deltas, financials=financials
    )


def financial_summary(
    ds: Dataset,
    states: str | int = "day",
    category: Category | None = None,
) -> FinancialSummary:
    """Closed-form finances over a scope: purchase cost, revenue, margin.

    Purchase cost sums market price times demand; revenue marks each
    category's purchase cost up by its profit factor. This is the identity
    the price signal is built to satisfy, computed without touching any
    schedule, which makes it the cross-check partner of the schedule-based
    accounting in ``pricing.verify_ebe``.
    """
    selected = select_states(ds.profile, states)
    categories = (
        [category] if category is not None else list(ds.categories_present)
    )
    purchase = 0.0
    revenue = 0.0
    for cat in categories:
        kp = ds.profit_factor(cat)
        cat_purchase = 0.0
        for state in selected:
            demand = float(category_demands(ds, cat, state).sum())
            cat_purchase += state.mcp * demand
        purchase += cat_purchase
        revenue += (1.0 + kp) * cat_purchase
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


def random_dr_event(
    ds: Dataset,
    max_reduction: float,
    seed: int,
    symmetric: bool = False,
) -> Scenario:
    """Random demand-response event over the peak window.

    Every customer draws an independent relative demand change at every
    peak state: a reduction uniform on [0, max_reduction], or uniform on
    [-max_reduction, +max_reduction] when ``symmetric``. Draw order is
    dataset customer order, then ascending peak state, so a seed fully
    determines the scenario.
    """
    if not 0.0 <= max_reduction < 1.0:
        raise ValueError(f"max reduction must be in [0, 1), got {max_reduction}")
    rng = np.random.default_rng(seed)
    peak = ds.profile.peak_indices
    perturbations: dict[str, dict[int, float]] = {}
    for c in ds.customers:
        if symmetric:
            draws = rng.uniform(-max_reduction, max_reduction, size=len(peak))
        else:
            draws = -rng.uniform(0.0, max_reduction, size=len(peak))
        perturbations[c.id] = {t: float(e) for t, e in zip(peak, draws)}
    mode = "symmetric" if symmetric else "reduction"
    label = f"dr-event({mode} {max_reduction:g}, seed {seed})"
    return Scenario(label=label, perturbations=perturbations, scope="peak")


PRESET_NAMES = ("s1", "s2", "s3", "s4")


def preset_scenario(name: str, ds: Dataset, seed: int = 0) -> Scenario:
    """Benchmark demand-change presets over the industrial category.

    s1: largest and smallest industrial customers both raise demand 10%.
    s2: both cut demand 10%.
    s3: the largest cuts 10% while the smallest raises 10%.
    s4: every customer moves randomly within +/-10% at every peak state.
    Presets s1..s3 are scoped to the default analysis state.
    """
    key = name.strip().lower()
    if key not in PRESET_NAMES:
        raise ValueError(f"unknown preset {name!r}; expected one of {PRESET_NAMES}")
    if key == "s4":
        sc = random_dr_event(ds, 0.10, seed, symmetric=True)
        return replace(sc, label="s4")
    industrial = ds.customers_in(Category.INDUSTRIAL)
    if not industrial:
        raise ValueError("presets need at least one industrial customer")
    largest = max(industrial, key=lambda c: (c.base_demand, c.id))
    smallest = min(industrial, key=lambda c: (c.base_demand, c.id))
    if largest.id == smallest.id:
        raise ValueError("presets need two distinct industrial customers")
    moves = {
        "s1": {largest.id: +0.10, smallest.id: +0.10},
        "s2": {largest.id: -0.10, smallest.id: -0.10},
        "s3": {largest.id: -0.10, smallest.id: +0.10},
    }[key]
    return Scenario(label=key, perturbations=moves, scope=analysis_state(ds.profile))


def load_scenario(data: str | Mapping, ds: Dataset | None = None) -> Scenario:
    """Build a scenario from its JSON document (text or parsed object).

    Explicit mode carries the perturbations directly; random mode carries
    {max_reduction, seed, symmetric} and needs the dataset to draw against.
    """
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise ValueError(f"scenario document is not valid JSON: {exc}") from None
    if not isinstance(data, Mapping):
        raise ValueError("scenario document must be a JSON object")
    label = str(data.get("label", "scenario"))
    mode = data.get("mode", "explicit")
    scope = data.get("scope", "peak")
    if isinstance(scope, str) and scope not in ("peak", "off_peak", "day"):
        raise ValueError(f"unknown scenario scope {scope!r}")
    if not isinstance(scope, (str, int)) or isinstance(scope, bool):
        raise ValueError("scenario scope must be a state index or window name")
    if mode == "random":
        if ds is None:
            raise ValueError("random scenarios need a dataset to draw against")
        sc = random_dr_event(
            ds,
            max_reduction=float(data.get("max_reduction", 0.15)),
            seed=int(data.get("seed", 0)),
            symmetric=bool(data.get("symmetric", False)),
        )
        return replace(sc, label=label)
    if mode != "explicit":
        raise ValueError(f"unknown scenario mode {mode!r}")
    raw = data.get("perturbations")
    if not isinstance(raw, Mapping):
        raise ValueError("explicit scenarios need a perturbations object")
    perturbations: dict[str, Perturbation] = {}
    for cid, value in raw.items():
        if isinstance(value, Mapping):
            try:
                perturbations[str(cid)] = {
                    int(t): float(e) for t, e in value.items()
                }
            except (TypeError, ValueError):
                raise ValueError(
                    f"per-state perturbations for {cid!r} must map state index to fraction"
                ) from None
        else:
            try:
                perturbations[str(cid)] = float(value)
            except (TypeError, ValueError):
                raise ValueError(f"perturbation for {cid!r} is not a number") from None
    return Scenario(label=label, perturbations=perturbations, scope=scope)


def scenario_to_json(sc: Scenario) -> str:
    """Serialize a scenario to its canonical explicit-mode JSON document."""
    perturbations: dict[str, object] = {}
    for cid, p in sc.perturbations.items():
        if isinstance(p, Mapping):
            perturbations[cid] = {str(t): p[t] for t in sorted(p)}
        else:
            perturbations[cid] = p
    doc = {
        "label": sc.label,
        "mode": "explicit",
        "perturbations": perturbations,
        "scope": sc.scope,
    }
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"
