"""Core data model for demand-linked tariff studies.

Units used throughout the package:

* demand: kW (states last one hour, so kW and kWh coincide per state)
* price: Rs/kWh
* profit factor: dimensionless fraction (0.01 means a 1% assured margin)

A day is modelled as 24 hourly states. Each state carries the market
clearing price and a system load factor; a customer's demand at a state is
their base demand scaled by that load factor. All domain values are
immutable after construction; derived quantities are computed on demand.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable

import numpy as np

__all__ = [
    "Category",
    "Customer",
    "CategoryConfig",
    "SystemState",
    "DayProfile",
    "Dataset",
    "Violation",
    "demand_at_state",
    "category_demands",
    "select_states",
    "validate_dataset",
]

STATES_PER_DAY = 24


class Category(str, Enum):
    """Customer category; determines the assured profit margin."""

    RESIDENTIAL = "residential"
    COMMERCIAL = "commercial"
    INDUSTRIAL = "industrial"

    @classmethod
    def parse(cls, text: str) -> "Category":
        """Parse a category name or single-letter code (case-insensitive)."""
        key = text.strip().lower()
        aliases = {
            "r": cls.RESIDENTIAL,
            "residential": cls.RESIDENTIAL,
            "c": cls.COMMERCIAL,
            "commercial": cls.COMMERCIAL,
            "i": cls.INDUSTRIAL,
            "industrial": cls.INDUSTRIAL,
        }
        if key not in aliases:
            raise ValueError(f"unknown category {text!r}")
        return aliases[key]

    @property
    def prefix(self) -> str:
        """Customer-id letter conventionally used for this category."""
        return {"residential": "R", "commercial": "C", "industrial": "I"}[self.value]


@dataclass(frozen=True)
class Customer:
    """One metered customer.

    ``base_demand`` is the demand (kW) at a state whose load factor is 1.0;
    demand at any other state scales with the profile's load factor.
    """

    id: str
    category: Category
    base_demand: float


@dataclass(frozen=True)
class CategoryConfig:
    """Per-category tariff parameters.

    ``profit_factor`` is the assured margin as a fraction of purchase cost;
    prices carry the multiplier (1 + profit_factor).
    """

    category: Category
    profit_factor: float


@dataclass(frozen=True)
class SystemState:
    """One hourly system state of the day."""

    index: int  # 1..24
    mcp: float  # market clearing price, Rs/kWh
    load_factor: float  # scales every customer's base demand
    is_peak: bool
    duration: float = 1.0  # hours; the engine assumes 1.0 throughout


@dataclass(frozen=True)
class DayProfile:
    """Ordered 24-state day with a label describing where it came from."""

    states: tuple[SystemState, ...]
    source: str = ""

    def state(self, index: int) -> SystemState:
        for s in self.states:
            if s.index == index:
                return s
        raise KeyError(f"no state with index {index}")

    @property
    def peak_states(self) -> tuple[SystemState, ...]:
        return tuple(s for s in self.states if s.is_peak)

    @property
    def off_peak_states(self) -> tuple[SystemState, ...]:
        return tuple(s for s in self.states if not s.is_peak)

    @property
    def peak_indices(self) -> tuple[int, ...]:
        return tuple(s.index for s in self.peak_states)


@dataclass(frozen=True)
class Dataset:
    """Customers, category parameters, and the day profile they share."""

    customers: tuple[Customer, ...]
    categories: tuple[CategoryConfig, ...]
    profile: DayProfile
    label: str = ""

    def customers_in(self, category: Category) -> tuple[Customer, ...]:
        """Customers of one category, in dataset order."""
        return tuple(c for c in self.customers if c.category == category)

    def config_for(self, category: Category) -> CategoryConfig:
        for cfg in self.categories:
            if cfg.category == category:
                return cfg
        raise KeyError(f"no configuration for category {category.value}")

    def profit_factor(self, category: Category) -> float:
        return self.config_for(category).profit_factor

    @property
    def categories_present(self) -> tuple[Category, ...]:
        """Categories that have at least one customer, in config order."""
        present = {c.category for c in self.customers}
        return tuple(cfg.category for cfg in self.categories if cfg.category in present)


@dataclass(frozen=True)
class Violation:
    """One validation finding: the offending entity and what is wrong."""

    entity: str
    message: str

    def __str__(self) -> str:
        return f"{self.entity}: {self.message}"


def demand_at_state(customer: Customer, state: SystemState) -> float:
    """Demand (kW) of a customer at a state: base demand times load factor."""
    return customer.base_demand * state.load_factor


def category_demands(ds: Dataset, category: Category, state: SystemState) -> np.ndarray:
    """Demands of one category at one state, in dataset customer order."""
    return np.array(
        [demand_at_state(c, state) for c in ds.customers_in(category)], dtype=float
    )


def select_states(
    profile: DayProfile, scope: str | int | Iterable[int]
) -> tuple[SystemState, ...]:
    """Resolve a state scope to a tuple of states.

    ``scope`` may be ``"day"``, ``"peak"``, ``"off_peak"``, one state index,
    or an iterable of state indices.
    """
    if scope == "day":
        return profile.states
    if scope == "peak":
        return profile.peak_states
    if scope == "off_peak":
        return profile.off_peak_states
    if isinstance(scope, int):
        return (profile.state(scope),)
    if isinstance(scope, str):
        raise ValueError(f"unknown state scope {scope!r}")
    return tuple(profile.state(i) for i in scope)


_PREFIXED_ID = re.compile(r"^([RCI])\d+$")


def validate_dataset(ds: Dataset) -> list[Violation]:
    """Check structural invariants; an empty list means the dataset is valid.

    A dataset that passes validation is accepted by every downstream module
    without raising: positive demands and load factors keep every pricing
    group non-degenerate, and the non-empty peak and off-peak windows keep
    both schedule sides defined.
    """
    out: list[Violation] = []

    seen_ids: set[str] = set()
    for c in ds.customers:
        tag = f"customer {c.id}"
        if c.base_demand <= 0:
            out.append(Violation(tag, f"base demand must be > 0, got {c.base_demand}"))
        if c.id in seen_ids:
            out.append(Violation(tag, "duplicate customer id"))
        seen_ids.add(c.id)
        m = _PREFIXED_ID.match(c.id)
        if m and m.group(1) != c.category.prefix:
            out.append(
                Violation(
                    tag,
                    f"id prefix {m.group(1)!r} does not match category "
                    f"{c.category.value!r}",
                )
            )

    seen_categories: set[Category] = set()
    for cfg in ds.categories:
        tag = f"category {cfg.category.value}"
        if cfg.category in seen_categories:
            out.append(Violation(tag, "duplicate category configuration"))
        seen_categories.add(cfg.category)
        if not 0.0 <= cfg.profit_factor < 1.0:
            out.append(
                Violation(
                    tag, f"profit factor must be in [0, 1), got {cfg.profit_factor}"
                )
            )
        if not any(c.category == cfg.category for c in ds.customers):
            out.append(Violation(tag, "configured category has no customers"))

    for c in ds.customers:
        if c.category not in seen_categories:
            out.append(
                Violation(
                    f"customer {c.id}",
                    f"no configuration for category {c.category.value}",
                )
            )

    states = ds.profile.states
    if len(states) != STATES_PER_DAY:
        out.append(
            Violation("profile", f"expected {STATES_PER_DAY} states, got {len(states)}")
        )
    seen_indices: set[int] = set()
    for s in states:
        tag = f"state {s.index}"
        if not 1 <= s.index <= STATES_PER_DAY:
            out.append(Violation(tag, "state index out of range 1..24"))
        if s.index in seen_indices:
            out.append(Violation(tag, "duplicate state index"))
        seen_indices.add(s.index)
        if s.mcp <= 0:
            out.append(Violation(tag, f"mcp must be > 0, got {s.mcp}"))
        if s.load_factor <= 0:
            out.append(Violation(tag, f"load factor must be > 0, got {s.load_factor}"))
        if s.duration != 1.0:
            out.append(
                Violation(tag, f"state duration is fixed at 1 h, got {s.duration}")
            )
    if states and not any(s.is_peak for s in states):
        out.append(Violation("profile", "no peak states"))
    if states and all(s.is_peak for s in states):
        out.append(Violation("profile", "no off-peak states"))

    return out
