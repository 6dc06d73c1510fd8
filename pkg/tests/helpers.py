"""Builders for small synthetic datasets used across the test modules."""

from __future__ import annotations

from dlps import Category, CategoryConfig, Customer, Dataset, DayProfile, SystemState

DEFAULT_PROFIT = {
    Category.RESIDENTIAL: 0.03,
    Category.COMMERCIAL: 0.02,
    Category.INDUSTRIAL: 0.01,
}


def build_profile(
    mcps=None,
    load_factors=None,
    peak=tuple(range(18, 24)),
    source="test-profile",
) -> DayProfile:
    """24-state profile; scalar or per-state mcps/load factors."""
    if mcps is None:
        mcps = 3.0
    if load_factors is None:
        load_factors = 1.0
    if isinstance(mcps, (int, float)):
        mcps = [float(mcps)] * 24
    if isinstance(load_factors, (int, float)):
        load_factors = [float(load_factors)] * 24
    peak = set(peak)
    states = tuple(
        SystemState(
            index=i,
            mcp=mcps[i - 1],
            load_factor=load_factors[i - 1],
            is_peak=i in peak,
        )
        for i in range(1, 25)
    )
    return DayProfile(states=states, source=source)


def build_dataset(
    industrial=(),
    commercial=(),
    residential=(),
    profile: DayProfile | None = None,
    profit: dict | None = None,
    label="test-dataset",
) -> Dataset:
    """Dataset from per-category demand lists, ids numbered from 1."""
    profit = {**DEFAULT_PROFIT, **(profit or {})}
    customers = []
    for cat, demands in (
        (Category.RESIDENTIAL, residential),
        (Category.COMMERCIAL, commercial),
        (Category.INDUSTRIAL, industrial),
    ):
        for i, demand in enumerate(demands, start=1):
            customers.append(
                Customer(id=f"{cat.prefix}{i}", category=cat, base_demand=float(demand))
            )
    present = {c.category for c in customers}
    categories = tuple(
        CategoryConfig(category=cat, profit_factor=profit[cat])
        for cat in Category
        if cat in present
    )
    return Dataset(
        customers=tuple(customers),
        categories=categories,
        profile=profile or build_profile(),
        label=label,
    )
