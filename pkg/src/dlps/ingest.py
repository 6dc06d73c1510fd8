"""Input parsing, canonical serialization, and the bundled benchmark.

Tabular inputs are CSV with fixed headers; configuration and scenarios are
JSON. Parse errors always name the source, line, and field so a bad file
in a batch run can be fixed without guesswork.

The bundled benchmark is a 177-customer feeder (106 residential, 48
commercial, 23 industrial) with a 24-state day profile. Its market price
and load factor at state 22 are the reference operating point the built-in
checks are anchored to; the other 23 states are synthetic placeholders
shaped like a typical exchange day, present so day-level mechanics
(off-peak pricing, tariff comparison) have a full day to work on. The
profile's source label says as much.
"""

from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import dataclass
from importlib import resources
from typing import Iterable, Mapping

from .domain import (
    STATES_PER_DAY,
    Category,
    CategoryConfig,
    Customer,
    Dataset,
    DayProfile,
    SystemState,
)

__all__ = [
    "ParseError",
    "StateRow",
    "RunConfig",
    "CUSTOMERS_HEADER",
    "MCP_HEADER",
    "parse_customers",
    "parse_mcp",
    "parse_config",
    "default_config",
    "assemble_profile",
    "assemble_dataset",
    "bundled_benchmark",
    "customers_to_csv",
    "profile_to_csv",
    "config_to_json",
]

CUSTOMERS_HEADER = ("id", "category", "base_demand_kw")
MCP_HEADER = ("state", "mcp_rs_per_kwh", "load_factor")

DEFAULT_PROFIT_FACTORS = {
    Category.RESIDENTIAL: 0.03,
    Category.COMMERCIAL: 0.02,
    Category.INDUSTRIAL: 0.01,
}
DEFAULT_PEAK_STATES = frozenset(range(18, 24))


class ParseError(ValueError):
    """Input rejected; carries source name, line number, and field name."""

    def __init__(
        self,
        message: str,
        *,
        source: str = "<string>",
        line: int | None = None,
        field: str | None = None,
    ) -> None:
        self.source = source
        self.line = line
        self.field = field
        where = source if line is None else f"{source}:{line}"
        prefix = f"{where}: " if where else ""
        middle = f"field {field!r}: " if field else ""
        super().__init__(f"{prefix}{middle}{message}")


@dataclass(frozen=True)
class StateRow:
    """One parsed day-profile row, before the peak window is known."""

    index: int
    mcp: float
    load_factor: float


@dataclass(frozen=True)
class RunConfig:
    """Category profit factors plus the peak window definition."""

    categories: tuple[CategoryConfig, ...]
    peak_states: frozenset[int]

    def profit_factor(self, category: Category) -> float:
        for cfg in self.categories:
            if cfg.category == category:
                return cfg.profit_factor
        raise KeyError(f"no profit factor for {category.value}")


def _rows(text: str, header: tuple[str, ...], source: str):
    """Yield (line_number, row) for a CSV body after checking the header."""
    reader = csv.reader(io.StringIO(text))
    try:
        first = next(reader)
    except StopIteration:
        raise ParseError(
            f"missing header; expected {','.join(header)}", source=source, line=1
        ) from None
    if tuple(cell.strip() for cell in first) != header:
        raise ParseError(
            f"bad header {','.join(first)!r}; expected {','.join(header)}",
            source=source,
            line=1,
        )
    for row in reader:
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(header):
            raise ParseError(
                f"expected {len(header)} fields, got {len(row)}",
                source=source,
                line=reader.line_num,
            )
        yield reader.line_num, [cell.strip() for cell in row]


def _parse_float(cell: str, field: str, source: str, line: int) -> float:
    try:
        return float(cell)
    except ValueError:
        raise ParseError(
            f"not a number: {cell!r}", source=source, line=line, field=field
        ) from None


def parse_customers(text: str, source: str = "<string>") -> list[Customer]:
    """Parse the customers table; empty body gives an empty list."""
    customers: list[Customer] = []
    seen: set[str] = set()
    for line, (cid, cat_text, demand_text) in _rows(text, CUSTOMERS_HEADER, source):
        if not cid:
            raise ParseError("empty customer id", source=source, line=line, field="id")
        if cid in seen:
            raise ParseError(
                f"duplicate customer id {cid!r}", source=source, line=line, field="id"
            )
        seen.add(cid)
        try:
            category = Category.parse(cat_text)
        except ValueError as exc:
            raise ParseError(str(exc), source=source, line=line, field="category") from None
        demand = _parse_float(demand_text, "base_demand_kw", source, line)
        if demand <= 0:
            raise ParseError(
                f"base demand must be > 0, got {demand}",
                source=source,
                line=line,
                field="base_demand_kw",
            )
        customers.append(Customer(id=cid, category=category, base_demand=demand))
    return customers


def parse_mcp(text: str, source: str = "<string>") -> list[StateRow]:
    """Parse the 24-state day profile table, returned in state order."""
    rows: dict[int, StateRow] = {}
    for line, (state_text, mcp_text, lf_text) in _rows(text, MCP_HEADER, source):
        try:
            index = int(state_text)
        except ValueError:
            raise ParseError(
                f"not an integer: {state_text!r}",
                source=source,
                line=line,
                field="state",
            ) from None
        if not 1 <= index <= STATES_PER_DAY:
            raise ParseError(
                f"state index must be in 1..{STATES_PER_DAY}, got {index}",
                source=source,
                line=line,
                field="state",
            )
        if index in rows:
            raise ParseError(
                f"duplicate state {index}", source=source, line=line, field="state"
            )
        mcp = _parse_float(mcp_text, "mcp_rs_per_kwh", source, line)
        if mcp <= 0:
            raise ParseError(
                f"mcp must be > 0, got {mcp}",
                source=source,
                line=line,
                field="mcp_rs_per_kwh",
            )
        load_factor = _parse_float(lf_text, "load_factor", source, line)
        if load_factor <= 0:
            raise ParseError(
                f"load factor must be > 0, got {load_factor}",
                source=source,
                line=line,
                field="load_factor",
            )
        rows[index] = StateRow(index=index, mcp=mcp, load_factor=load_factor)
    if len(rows) != STATES_PER_DAY:
        raise ParseError(
            f"expected {STATES_PER_DAY} states, found {len(rows)}", source=source
        )
    return [rows[i] for i in range(1, STATES_PER_DAY + 1)]


def parse_config(text: str, source: str = "<string>") -> RunConfig:
    """Parse the JSON run configuration; an empty object means all defaults."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}", source=source) from None
    if not isinstance(data, Mapping):
        raise ParseError("configuration must be a JSON object", source=source)
    unknown = set(data) - {"profit_factors", "peak_states"}
    if unknown:
        raise ParseError(
            f"unknown configuration keys: {sorted(unknown)}", source=source
        )

    factors = dict(DEFAULT_PROFIT_FACTORS)
    raw_factors = data.get("profit_factors", {})
    if not isinstance(raw_factors, Mapping):
        raise ParseError(
            "profit_factors must be an object", source=source, field="profit_factors"
        )
    for key, value in raw_factors.items():
        try:
            category = Category.parse(str(key))
        except ValueError as exc:
            raise ParseError(str(exc), source=source, field="profit_factors") from None
        try:
            factor = float(value)
        except (TypeError, ValueError):
            raise ParseError(
                f"profit factor for {key!r} is not a number",
                source=source,
                field="profit_factors",
            ) from None
        if not 0.0 <= factor < 1.0:
            raise ParseError(
                f"profit factor for {key!r} must be in [0, 1), got {factor}",
                source=source,
                field="profit_factors",
            )
        factors[category] = factor

    peak: Iterable = data.get("peak_states", sorted(DEFAULT_PEAK_STATES))
    if not isinstance(peak, list) or isinstance(peak, (str, bytes)):
        raise ParseError(
            "peak_states must be a list of state indices",
            source=source,
            field="peak_states",
        )
    indices: list[int] = []
    for item in peak:
        if not isinstance(item, int) or isinstance(item, bool):
            raise ParseError(
                f"peak state {item!r} is not an integer",
                source=source,
                field="peak_states",
            )
        if not 1 <= item <= STATES_PER_DAY:
            raise ParseError(
                f"peak state {item} out of range 1..{STATES_PER_DAY}",
                source=source,
                field="peak_states",
            )
        if item in indices:
            raise ParseError(
                f"duplicate peak state {item}", source=source, field="peak_states"
            )
        indices.append(item)
    if not indices:
        raise ParseError("peak_states must not be empty", source=source, field="peak_states")
    if len(indices) >= STATES_PER_DAY:
        raise ParseError(
            "peak_states must leave at least one off-peak state",
            source=source,
            field="peak_states",
        )

    categories = tuple(
        CategoryConfig(category=cat, profit_factor=factors[cat]) for cat in Category
    )
    return RunConfig(categories=categories, peak_states=frozenset(indices))


def default_config() -> RunConfig:
    """Built-in defaults: 3%/2%/1% margins, peak window at states 18..23."""
    categories = tuple(
        CategoryConfig(category=cat, profit_factor=DEFAULT_PROFIT_FACTORS[cat])
        for cat in Category
    )
    return RunConfig(categories=categories, peak_states=DEFAULT_PEAK_STATES)


def assemble_profile(
    rows: Iterable[StateRow], peak_states: Iterable[int], source: str = ""
) -> DayProfile:
    """Combine parsed profile rows with a peak window definition."""
    peak = set(peak_states)
    states = tuple(
        SystemState(
            index=row.index,
            mcp=row.mcp,
            load_factor=row.load_factor,
            is_peak=row.index in peak,
        )
        for row in rows
    )
    return DayProfile(states=states, source=source)


def assemble_dataset(
    customers: Iterable[Customer],
    config: RunConfig,
    rows: Iterable[StateRow],
    label: str = "",
    profile_source: str = "",
) -> Dataset:
    """Assemble parsed parts into a dataset, keeping only configured categories
    that actually have customers."""
    customers = tuple(customers)
    present = {c.category for c in customers}
    categories = tuple(cfg for cfg in config.categories if cfg.category in present)
    profile = assemble_profile(rows, config.peak_states, source=profile_source)
    return Dataset(customers=customers, categories=categories, profile=profile, label=label)


def _read_data_file(name: str) -> str:
    override = os.environ.get("DLPS_DATA_DIR")
    if override:
        path = os.path.join(override, name)
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    return (resources.files("dlps") / "data" / name).read_text(encoding="utf-8")


def bundled_benchmark() -> Dataset:
    """The embedded 177-customer benchmark dataset.

    Honours the DLPS_DATA_DIR environment variable: when set, customers.csv,
    mcp.csv, and config.json are read from that directory instead of the
    packaged copies, letting a deployment swap the data without reinstalling.
    """
    customers = parse_customers(_read_data_file("customers.csv"), "customers.csv")
    rows = parse_mcp(_read_data_file("mcp.csv"), "mcp.csv")
    config = parse_config(_read_data_file("config.json"), "config.json")
    return assemble_dataset(
        customers,
        config,
        rows,
        label="bundled-benchmark",
        profile_source=(
            "bundled-benchmark day (state 22 is the reference operating point; "
            "other states are synthetic placeholders)"
        ),
    )


def _number(value: float) -> str:
    """Lossless numeric cell: integers without the trailing .0."""
    text = repr(float(value))
    return text[:-2] if text.endswith(".0") else text


def customers_to_csv(customers: Iterable[Customer]) -> str:
    """Serialize customers to the canonical CSV form parse_customers accepts."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CUSTOMERS_HEADER)
    for c in customers:
        # repr keeps the shortest digit string that parses back exactly
        writer.writerow([c.id, c.category.value, _number(c.base_demand)])
    return out.getvalue()


def profile_to_csv(rows: Iterable[StateRow] | DayProfile) -> str:
    """Serialize a day profile (or parsed rows) to canonical CSV."""
    if isinstance(rows, DayProfile):
        rows = [
            StateRow(index=s.index, mcp=s.mcp, load_factor=s.load_factor)
            for s in rows.states
        ]
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(MCP_HEADER)
    for row in sorted(rows, key=lambda r: r.index):
        writer.writerow([row.index, _number(row.mcp), _number(row.load_factor)])
    return out.getvalue()


def config_to_json(config: RunConfig) -> str:
    """Serialize a run configuration to canonical JSON."""
    doc = {
        "profit_factors": {
            cfg.category.value: cfg.profit_factor for cfg in config.categories
        },
        "peak_states": sorted(config.peak_states),
    }
    return json.dumps(doc, indent=2) + "\n"
