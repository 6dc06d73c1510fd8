"""Batch command-line front end.

Subcommands: ``price`` emits the day's price tables, ``scenario`` replays a
demand-change scenario and reports deltas, ``compare`` bills the same day
under flat/RTP/TOU and the demand-linked schedule, and ``validate`` runs
the built-in reference checks against the bundled benchmark.

Exit codes: 0 success, 1 validation or domain errors (invalid dataset,
failed checks, degenerate pricing groups), 2 I/O and parse errors. Output
is deterministic for fixed inputs and seeds: tables keep a fixed row
order, floats are formatted the same way every run, and no timestamps are
emitted, so runs can be diffed byte for byte.

Monetary and percentage cells in CSV output are rounded to two decimals
with ties away from zero; JSON output carries full precision.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal

from .comparator import SignalKind, compare_to_reference, standard_comparison
from .domain import (
    Category,
    Dataset,
    category_demands,
    demand_at_state,
    validate_dataset,
)
from .ingest import (
    ParseError,
    assemble_dataset,
    bundled_benchmark,
    default_config,
    parse_config,
    parse_customers,
    parse_mcp,
)
from .pricing import build_schedule, fixed_price, verify_ebe
from .scenario import (
    PRESET_NAMES,
    Scenario,
    analysis_state,
    apply_scenario,
    financial_summary,
    load_scenario,
    preset_scenario,
    random_dr_event,
    scenario_deltas,
)

__all__ = ["main", "run_validation", "CheckResult"]


# ---------------------------------------------------------------------------
# table plumbing

# column kinds: "rs" and "pct" round to 2 decimals for CSV, "num" keeps
# 10 significant digits, "int" and "str" pass through
@dataclass(frozen=True)
class Table:
    name: str
    columns: tuple[tuple[str, str], ...]  # (key, kind)
    rows: tuple[dict, ...]


def _round2(value: float) -> str:
    cell = Decimal(repr(float(value))).quantize(Decimal("0.01"), ROUND_HALF_UP)
    if cell == 0:
        cell = abs(cell)  # avoid "-0.00" from tiny negatives
    return str(cell)


def _cell(value, kind: str) -> str:
    if value is None:
        return ""
    if kind in ("rs", "pct"):
        return _round2(value)
    if kind == "num":
        return format(float(value), ".10g")
    return str(value)


def _table_csv(table: Table) -> str:
    lines = [",".join(key for key, _ in table.columns)]
    for row in table.rows:
        lines.append(",".join(_cell(row[key], kind) for key, kind in table.columns))
    return "\n".join(lines) + "\n"


def _table_json(table: Table) -> str:
    doc = {"table": table.name, "rows": list(table.rows)}
    return json.dumps(doc, indent=2) + "\n"


def _emit(tables: list[Table], out_dir: str | None, fmt: str = "csv") -> None:
    """Write tables to out_dir (with a manifest) or print them to stdout."""
    if out_dir is None:
        for i, table in enumerate(tables):
            if i:
                print()
            print(f"# {table.name}")
            text = _table_csv(table) if fmt == "csv" else _table_json(table)
            print(text, end="")
        return
    os.makedirs(out_dir, exist_ok=True)
    ext = "csv" if fmt == "csv" else "json"
    manifest: dict[str, str] = {}
    for table in tables:
        filename = f"{table.name}.{ext}"
        text = _table_csv(table) if fmt == "csv" else _table_json(table)
        with open(os.path.join(out_dir, filename), "w", encoding="utf-8") as fh:
            fh.write(text)
        manifest[table.name] = filename
    with open(os.path.join(out_dir, "manifest.json"), "w", encoding="utf-8") as fh:
        fh.write(json.dumps({"tables": manifest}, indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# input loading

def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _load_dataset(args) -> Dataset:
    if getattr(args, "benchmark", False):
        ds = bundled_benchmark()
    else:
        if not args.customers or not args.mcp:
            raise ParseError(
                "no input: pass --benchmark, or --customers and --mcp "
                "(with an optional --config)",
                source="arguments",
            )
        paths = [args.customers, args.mcp, getattr(args, "config", None)]
        if [p for p in paths if p == "-"].count("-") > 1:
            raise ParseError(
                "at most one input may come from standard input", source="arguments"
            )
        customers = parse_customers(
            _read_input(args.customers), source=args.customers
        )
        rows = parse_mcp(_read_input(args.mcp), source=args.mcp)
        if getattr(args, "config", None):
            config = parse_config(_read_input(args.config), source=args.config)
        else:
            config = default_config()
        ds = assemble_dataset(
            customers,
            config,
            rows,
            label=os.path.basename(args.customers),
            profile_source=os.path.basename(args.mcp),
        )
    violations = validate_dataset(ds)
    if violations:
        for v in violations:
            print(f"invalid dataset: {v}", file=sys.stderr)
        raise ValueError(f"dataset failed validation with {len(violations)} violation(s)")
    return ds


# ---------------------------------------------------------------------------
# price

def _price_state_table(ds: Dataset, schedule, state_index: int) -> Table:
    state = ds.profile.state(state_index)
    totals = {
        cat: float(category_demands(ds, cat, state).sum())
        for cat in ds.categories_present
    }
    rows = []
    for c in ds.customers:
        demand = demand_at_state(c, state)
        price = schedule.price(c, state)
        flat = fixed_price(state.mcp, ds.profit_factor(c.category))
        rows.append(
            {
                "id": c.id,
                "category": c.category.value,
                "demand_kw": demand,
                "demand_contribution_pct": 100.0 * demand / totals[c.category],
                "unit_price_rs": price,
                "fixed_price_rs": flat,
                "billing_rs": price * demand,
                "billing_fixed_rs": flat * demand,
            }
        )
    columns = (
        ("id", "str"),
        ("category", "str"),
        ("demand_kw", "num"),
        ("demand_contribution_pct", "pct"),
        ("unit_price_rs", "rs"),
        ("fixed_price_rs", "rs"),
        ("billing_rs", "rs"),
        ("billing_fixed_rs", "rs"),
    )
    return Table(name=f"price_state{state_index}", columns=columns, rows=tuple(rows))


def cmd_price(args) -> int:
    ds = _load_dataset(args)
    schedule = build_schedule(ds)
    if args.state is not None:
        tables = [_price_state_table(ds, schedule, args.state)]
    else:
        on_rows = []
        for state in ds.profile.peak_states:
            for c in ds.customers:
                on_rows.append(
                    {
                        "id": c.id,
                        "category": c.category.value,
                        "state": state.index,
                        "demand_kw": demand_at_state(c, state),
                        "unit_price_rs": schedule.price(c, state),
                    }
                )
        off_rows = [
            {"category": cat.value, "unit_price_rs": schedule.off_peak[cat]}
            for cat in ds.categories_present
        ]
        tables = [
            Table(
                name="on_peak",
                columns=(
                    ("id", "str"),
                    ("category", "str"),
                    ("state", "int"),
                    ("demand_kw", "num"),
                    ("unit_price_rs", "rs"),
                ),
                rows=tuple(on_rows),
            ),
            Table(
                name="off_peak",
                columns=(("category", "str"), ("unit_price_rs", "rs")),
                rows=tuple(off_rows),
            ),
        ]
    _emit(tables, args.out, args.format)
    return 0


# ---------------------------------------------------------------------------
# scenario

def cmd_scenario(args) -> int:
    ds = _load_dataset(args)
    if args.preset:
        sc = preset_scenario(args.preset, ds, seed=args.seed)
    else:
        text = _read_input(args.scenario)
        try:
            sc = load_scenario(text, ds)
        except ValueError as exc:
            raise ParseError(str(exc), source=args.scenario) from None
    state = sc.scope if isinstance(sc.scope, int) else analysis_state(ds.profile)
    category = Category.parse(args.category)
    perturbed = apply_scenario(ds, sc, at_state=state)
    deltas = scenario_deltas(ds, perturbed, state, category)
    base_fin = financial_summary(ds, state, category)
    pert_fin = deltas.financials

    delta_rows = tuple(
        {
            "id": d.customer_id,
            "demand_pct": d.demand_pct,
            "unit_price_pct": d.unit_price_pct,
            "billing_pct": d.billing_pct,
            "demand_contribution_pct": d.demand_contribution_pct,
        }
        for d in deltas.deltas
    )
    deltas_table = Table(
        name="deltas",
        columns=(
            ("id", "str"),
            ("demand_pct", "pct"),
            ("unit_price_pct", "pct"),
            ("billing_pct", "pct"),
            ("demand_contribution_pct", "pct"),
        ),
        rows=delta_rows,
    )

    base_state = ds.profile.state(state)
    pert_state = perturbed.profile.state(state)
    base_demand = float(category_demands(ds, category, base_state).sum())
    pert_demand = float(category_demands(perturbed, category, pert_state).sum())
    measures = (
        ("demand_kw", base_demand, pert_demand),
        ("purchase_cost_rs", base_fin.purchase_cost, pert_fin.purchase_cost),
        ("revenue_rs", base_fin.revenue, pert_fin.revenue),
        ("profit_rs", base_fin.profit, pert_fin.profit),
        (
            "profit_pct_of_purchase",
            None if base_fin.profit_fraction is None else 100 * base_fin.profit_fraction,
            None if pert_fin.profit_fraction is None else 100 * pert_fin.profit_fraction,
        ),
    )
    fin_rows = tuple(
        {
            "measure": name,
            "base": base,
            "scenario": new,
            "difference": None if base is None or new is None else new - base,
        }
        for name, base, new in measures
    )
    financials_table = Table(
        name="financials",
        columns=(
            ("measure", "str"),
            ("base", "rs"),
            ("scenario", "rs"),
            ("difference", "rs"),
        ),
        rows=fin_rows,
    )
    _emit([deltas_table, financials_table], args.out, args.format)
    return 0


# ---------------------------------------------------------------------------
# compare

def cmd_compare(args) -> int:
    ds = _load_dataset(args)
    if not 0.0 <= args.dr_max < 1.0:
        raise ValueError(f"--dr-max must be in [0, 1), got {args.dr_max}")
    dr_event = (
        random_dr_event(ds, args.dr_max, args.seed) if args.dr_max > 0 else None
    )
    comparison = standard_comparison(
        ds,
        tou_peak_multiplier=args.tou_multiplier,
        with_profit=not args.no_profit,
        dr_event=dr_event,
    )
    deltas = compare_to_reference(comparison, SignalKind.RTP)

    comp_rows = []
    for billing in comparison.billings:
        for cat in ds.categories_present:
            for state in ds.profile.states:
                key = (cat, state.index)
                comp_rows.append(
                    {
                        "signal": billing.kind.value,
                        "category": cat.value,
                        "state": state.index,
                        "billing_rs": billing.by_category_state[key],
                        "delta_vs_rtp_pct": deltas[(billing.kind, cat, state.index)],
                    }
                )
    comparison_table = Table(
        name="comparison",
        columns=(
            ("signal", "str"),
            ("category", "str"),
            ("state", "int"),
            ("billing_rs", "rs"),
            ("delta_vs_rtp_pct", "pct"),
        ),
        rows=tuple(comp_rows),
    )

    windows = (
        ("day", None),
        ("peak", set(ds.profile.peak_indices)),
        ("off_peak", {s.index for s in ds.profile.off_peak_states}),
    )
    agg_rows = []
    for billing in comparison.billings:
        for cat in (*ds.categories_present, None):
            for window, indices in windows:
                agg_rows.append(
                    {
                        "signal": billing.kind.value,
                        "category": cat.value if cat else "all",
                        "window": window,
                        "billing_rs": billing.total(
                            categories=None if cat is None else [cat], states=indices
                        ),
                    }
                )
    aggregates_table = Table(
        name="aggregates",
        columns=(
            ("signal", "str"),
            ("category", "str"),
            ("window", "str"),
            ("billing_rs", "rs"),
        ),
        rows=tuple(agg_rows),
    )

    if args.out is None:
        _emit([comparison_table, aggregates_table], None, "csv")
        return 0
    os.makedirs(args.out, exist_ok=True)
    files = {
        "comparison.csv": _table_csv(comparison_table),
        "comparison.json": _table_json(comparison_table),
        "aggregates.csv": _table_csv(aggregates_table),
    }
    for filename, text in files.items():
        with open(os.path.join(args.out, filename), "w", encoding="utf-8") as fh:
            fh.write(text)
    manifest = {"tables": {"comparison": "comparison.csv", "aggregates": "aggregates.csv"},
                "mirrors": {"comparison": "comparison.json"}}
    with open(os.path.join(args.out, "manifest.json"), "w", encoding="utf-8") as fh:
        fh.write(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return 0


# ---------------------------------------------------------------------------
# validate: built-in reference checks over the bundled benchmark

@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


# Published reference results for the bundled benchmark at its reference
# operating point (industrial category, state 22, market price 4.845626).
REFERENCE_PEAK_PRICES = {
    "I1": 3.22, "I2": 4.02, "I3": 3.70, "I4": 4.34, "I5": 5.23, "I6": 6.03,
    "I7": 7.07, "I8": 7.40, "I9": 2.41, "I10": 3.38, "I11": 4.34, "I12": 4.99,
    "I13": 5.47, "I14": 5.95, "I15": 7.24, "I16": 2.41, "I17": 2.41,
    "I18": 4.82, "I19": 2.01, "I20": 2.81, "I21": 3.22, "I22": 3.06,
    "I23": 3.38,
}
REFERENCE_FIXED_PRICE = 4.89
REFERENCE_BASE_FINANCIALS = (5960.12, 6019.73, 59.60)  # purchase, revenue, profit
# scenario -> {customer id or "others": (unit price %, billing %, contribution %)}
REFERENCE_SCENARIO_DELTAS = {
    "s1": {"I8": (8.29, 19.11, 8.96), "I19": (8.29, 19.11, 8.96),
           "others": (-1.56, -1.56, -0.94)},
    "s2": {"I8": (-8.75, -17.88, -9.13), "I19": (-8.75, -17.88, -9.13),
           "others": (1.39, 1.39, 0.96)},
    "s3": {"I8": (-8.69, -17.82, -9.51), "I19": (11.60, 22.76, 10.60),
           "others": (1.46, 1.46, 0.55)},
}
REFERENCE_SCENARIO_FINANCIALS = {
    "s1": (6016.82, 6076.99),
    "s2": (5903.43, 5962.47),
    "s3": (5927.66, 5986.94),
}
# uniformly scaled industrial demand: total, purchase, revenue, profit
REFERENCE_SCALED_FINANCIALS = (1236.42, 5991.21, 6051.12, 59.91)
REFERENCE_BREAKEVEN_KW = 60.87
REFERENCE_ABOVE_BREAKEVEN = {"I5", "I6", "I7", "I8", "I12", "I13", "I14", "I15"}
REFERENCE_BILLING_EXTREMES = (-58.9, 51.1)  # % vs fixed billing: smallest, largest

PRICE_TOL = 0.01
RS_TOL = 0.05
PP_TOL = 0.02
WIDE_RS_TOL = 0.1
EXACT_TOL = 1e-9


def _check_census(ds: Dataset) -> CheckResult:
    counts = {
        cat: len(ds.customers_in(cat)) for cat in Category
    }
    expected = {Category.RESIDENTIAL: 106, Category.COMMERCIAL: 48, Category.INDUSTRIAL: 23}
    passed = counts == expected and len(ds.customers) == 177
    detail = (
        f"{len(ds.customers)} customers "
        f"(residential {counts[Category.RESIDENTIAL]}, commercial "
        f"{counts[Category.COMMERCIAL]}, industrial {counts[Category.INDUSTRIAL]}); "
        "expected 177 (106/48/23)"
    )
    return CheckResult("customer-census", passed, detail)


def _check_industrial_aggregates(ds: Dataset) -> CheckResult:
    state = ds.profile.state(analysis_state(ds.profile))
    demands = category_demands(ds, Category.INDUSTRIAL, state)
    total = float(demands.sum())
    sum_sq = float((demands**2).sum())
    passed = abs(total - 1230.0) <= EXACT_TOL and abs(sum_sq - 74872.0) <= EXACT_TOL
    detail = (
        f"industrial demand at state {state.index}: total {total:.6g} kW "
        f"(expected 1230), squared sum {sum_sq:.6g} (expected 74872)"
    )
    return CheckResult("industrial-aggregates", passed, detail)


def _check_unit_prices(ds: Dataset) -> CheckResult:
    schedule = build_schedule(ds)
    state = analysis_state(ds.profile)
    devs = {
        cid: abs(schedule.on_peak[(cid, state)] - expected)
        for cid, expected in REFERENCE_PEAK_PRICES.items()
    }
    ok = sum(1 for d in devs.values() if d <= PRICE_TOL + 1e-12)
    worst = max(devs, key=devs.get)
    passed = ok == len(devs)
    detail = (
        f"{ok}/{len(devs)} industrial prices at state {state} within "
        f"{PRICE_TOL} Rs of reference (largest deviation {devs[worst]:.4f} at {worst})"
    )
    return CheckResult("unit-prices", passed, detail)


def _check_fixed_price(ds: Dataset) -> CheckResult:
    state = ds.profile.state(analysis_state(ds.profile))
    kp = ds.profit_factor(Category.INDUSTRIAL)
    observed = fixed_price(state.mcp, kp)
    passed = abs(observed - REFERENCE_FIXED_PRICE) <= PRICE_TOL + 1e-12
    detail = (
        f"industrial flat benchmark price {observed:.4f} Rs vs reference "
        f"{REFERENCE_FIXED_PRICE} (tol {PRICE_TOL})"
    )
    return CheckResult("fixed-price", passed, detail)


def _check_base_financials(ds: Dataset) -> CheckResult:
    schedule = build_schedule(ds)
    state = analysis_state(ds.profile)
    fin = verify_ebe(ds, schedule, Category.INDUSTRIAL, state)
    pc, rv, pf = REFERENCE_BASE_FINANCIALS
    kp = ds.profit_factor(Category.INDUSTRIAL)
    passed = (
        abs(fin.purchase_cost - pc) <= RS_TOL
        and abs(fin.revenue - rv) <= RS_TOL
        and abs(fin.profit - pf) <= RS_TOL
        and fin.profit_fraction is not None
        and abs(fin.profit_fraction - kp) <= EXACT_TOL
    )
    detail = (
        f"industrial at state {state}: purchase {fin.purchase_cost:.2f} vs {pc}, "
        f"revenue {fin.revenue:.2f} vs {rv}, profit {fin.profit:.2f} vs {pf} "
        f"(tol {RS_TOL}); margin {fin.profit_fraction:.10f} vs {kp}"
    )
    return CheckResult("base-financials", passed, detail)


def _preset_deltas(ds: Dataset, name: str):
    sc = preset_scenario(name, ds)
    state = sc.scope if isinstance(sc.scope, int) else analysis_state(ds.profile)
    perturbed = apply_scenario(ds, sc, at_state=state)
    return scenario_deltas(ds, perturbed, state, Category.INDUSTRIAL)


def _check_scenario_deltas(ds: Dataset, name: str) -> CheckResult:
    deltas = _preset_deltas(ds, name)
    expected = REFERENCE_SCENARIO_DELTAS[name]
    worst = 0.0
    ok = True
    for cid, (up, billing, dc) in expected.items():
        if cid == "others":
            rows = [d for d in deltas.deltas if d.customer_id not in expected]
            spread = max(r.unit_price_pct for r in rows) - min(
                r.unit_price_pct for r in rows
            )
            if spread > EXACT_TOL:
                ok = False
            row = rows[0]
        else:
            row = deltas.delta_for(cid)
        devs = (
            abs(row.unit_price_pct - up),
            abs(row.billing_pct - billing),
            abs(row.demand_contribution_pct - dc),
        )
        worst = max(worst, *devs)
        if any(d > PP_TOL for d in devs):
            ok = False
    detail = (
        f"unit price/billing/contribution changes within {PP_TOL} pp of "
        f"reference (largest deviation {worst:.4f} pp)"
    )
    return CheckResult(f"{name}-deltas", ok, detail)


def _check_scenario_financials(ds: Dataset, name: str) -> CheckResult:
    deltas = _preset_deltas(ds, name)
    fin = deltas.financials
    pc, rv = REFERENCE_SCENARIO_FINANCIALS[name]
    kp = ds.profit_factor(Category.INDUSTRIAL)
    passed = (
        abs(fin.purchase_cost - pc) <= RS_TOL
        and abs(fin.revenue - rv) <= RS_TOL
        and fin.profit_fraction is not None
        and abs(fin.profit_fraction - kp) <= EXACT_TOL
    )
    detail = (
        f"purchase {fin.purchase_cost:.2f} vs {pc}, revenue {fin.revenue:.2f} "
        f"vs {rv} (tol {RS_TOL}); margin {fin.profit_fraction:.10f} vs {kp}"
    )
    return CheckResult(f"{name}-financials", passed, detail)


def _check_scaled_financials(ds: Dataset) -> CheckResult:
    target, pc, rv, pf = REFERENCE_SCALED_FINANCIALS
    state_index = analysis_state(ds.profile)
    state = ds.profile.state(state_index)
    base_total = float(category_demands(ds, Category.INDUSTRIAL, state).sum())
    factor = target / base_total - 1.0
    sc = Scenario(
        label="uniform-scale",
        perturbations={c.id: factor for c in ds.customers_in(Category.INDUSTRIAL)},
        scope=state_index,
    )
    perturbed = apply_scenario(ds, sc)
    fin = financial_summary(perturbed, state_index, Category.INDUSTRIAL)
    passed = (
        abs(fin.purchase_cost - pc) <= WIDE_RS_TOL
        and abs(fin.revenue - rv) <= WIDE_RS_TOL
        and abs(fin.profit - pf) <= WIDE_RS_TOL
    )
    detail = (
        f"industrial demand scaled to {target} kW: purchase {fin.purchase_cost:.2f} "
        f"vs {pc}, revenue {fin.revenue:.2f} vs {rv}, profit {fin.profit:.2f} "
        f"vs {pf} (tol {WIDE_RS_TOL})"
    )
    return CheckResult("scaled-financials", passed, detail)


def _check_breakeven(ds: Dataset) -> CheckResult:
    state = ds.profile.state(analysis_state(ds.profile))
    demands = category_demands(ds, Category.INDUSTRIAL, state)
    threshold = float((demands**2).sum() / demands.sum())
    above = {
        c.id
        for c in ds.customers_in(Category.INDUSTRIAL)
        if demand_at_state(c, state) > threshold
    }
    passed = (
        abs(threshold - REFERENCE_BREAKEVEN_KW) <= 0.01
        and above == REFERENCE_ABOVE_BREAKEVEN
    )
    detail = (
        f"breakeven demand {threshold:.4f} kW vs {REFERENCE_BREAKEVEN_KW} "
        f"(tol 0.01); {len(above)} customers above it vs "
        f"{len(REFERENCE_ABOVE_BREAKEVEN)} expected"
    )
    return CheckResult("breakeven-threshold", passed, detail)


def _check_billing_extremes(ds: Dataset) -> CheckResult:
    schedule = build_schedule(ds)
    state_index = analysis_state(ds.profile)
    state = ds.profile.state(state_index)
    kp = ds.profit_factor(Category.INDUSTRIAL)
    flat = fixed_price(state.mcp, kp)
    industrial = ds.customers_in(Category.INDUSTRIAL)
    smallest = min(industrial, key=lambda c: (c.base_demand, c.id))
    largest = max(industrial, key=lambda c: (c.base_demand, c.id))
    low = 100.0 * (schedule.on_peak[(smallest.id, state_index)] / flat - 1.0)
    high = 100.0 * (schedule.on_peak[(largest.id, state_index)] / flat - 1.0)
    exp_low, exp_high = REFERENCE_BILLING_EXTREMES
    passed = abs(low - exp_low) <= 0.1 and abs(high - exp_high) <= 0.1
    detail = (
        f"billing vs flat benchmark: {smallest.id} {low:.2f}% (expected {exp_low}), "
        f"{largest.id} {high:+.2f}% (expected +{exp_high}) (tol 0.1 pp)"
    )
    return CheckResult("billing-extremes", passed, detail)


def run_validation(ds: Dataset | None = None) -> list[CheckResult]:
    """Run every reference check; a dataset can be injected for testing."""
    if ds is None:
        ds = bundled_benchmark()
    checks = [
        _check_census,
        _check_industrial_aggregates,
        _check_unit_prices,
        _check_fixed_price,
        _check_base_financials,
        lambda d: _check_scenario_deltas(d, "s1"),
        lambda d: _check_scenario_deltas(d, "s2"),
        lambda d: _check_scenario_deltas(d, "s3"),
        lambda d: _check_scenario_financials(d, "s1"),
        lambda d: _check_scenario_financials(d, "s2"),
        lambda d: _check_scenario_financials(d, "s3"),
        _check_scaled_financials,
        _check_breakeven,
        _check_billing_extremes,
    ]
    names = [
        "customer-census",
        "industrial-aggregates",
        "unit-prices",
        "fixed-price",
        "base-financials",
        "s1-deltas",
        "s2-deltas",
        "s3-deltas",
        "s1-financials",
        "s2-financials",
        "s3-financials",
        "scaled-financials",
        "breakeven-threshold",
        "billing-extremes",
    ]
    results = []
    for name, check in zip(names, checks):
        try:
            results.append(check(ds))
        except Exception as exc:  # a broken dataset must fail, not crash
            results.append(CheckResult(name, False, f"error: {exc}"))
    return results


def cmd_validate(args) -> int:
    results = run_validation()
    if args.json:
        doc = {
            "passed": all(r.passed for r in results),
            "checks": [
                {"name": r.name, "passed": r.passed, "detail": r.detail}
                for r in results
            ],
        }
        print(json.dumps(doc, indent=2))
    else:
        for r in results:
            print(f"[{'PASS' if r.passed else 'FAIL'}] {r.name}: {r.detail}")
        failed = sum(1 for r in results if not r.passed)
        print(
            f"{len(results) - failed}/{len(results)} checks passed"
            + (f", {failed} failed" if failed else "")
        )
    return 0 if all(r.passed for r in results) else 1


# ---------------------------------------------------------------------------
# parser

def _add_input_args(sp) -> None:
    sp.add_argument(
        "--benchmark",
        action="store_true",
        help="use the bundled 177-customer benchmark dataset",
    )
    sp.add_argument("--customers", help="customers CSV (id,category,base_demand_kw); - for stdin")
    sp.add_argument("--mcp", help="day profile CSV (state,mcp_rs_per_kwh,load_factor); - for stdin")
    sp.add_argument("--config", help="JSON run configuration; omitted means defaults")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dlps",
        description="Demand-linked dynamic price signals for demand-response studies.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    price = sub.add_parser("price", help="emit price tables for a dataset")
    _add_input_args(price)
    which = price.add_mutually_exclusive_group(required=True)
    which.add_argument("--state", type=int, help="price one state (1..24)")
    which.add_argument("--all", action="store_true", help="price every peak state plus the off-peak windows")
    price.add_argument("--out", help="directory to write tables to (default: stdout)")
    price.add_argument("--format", choices=("csv", "json"), default="csv")
    price.set_defaults(func=cmd_price)

    scenario = sub.add_parser("scenario", help="replay a demand-change scenario")
    _add_input_args(scenario)
    which = scenario.add_mutually_exclusive_group(required=True)
    which.add_argument("--preset", choices=PRESET_NAMES, help="built-in scenario")
    which.add_argument("--scenario", help="scenario JSON file; - for stdin")
    scenario.add_argument("--seed", type=int, default=0, help="seed for random scenarios")
    scenario.add_argument(
        "--category",
        choices=tuple(c.value for c in Category),
        default=Category.INDUSTRIAL.value,
        help="category to report deltas for",
    )
    scenario.add_argument("--out", help="directory to write tables to (default: stdout)")
    scenario.add_argument("--format", choices=("csv", "json"), default="csv")
    scenario.set_defaults(func=cmd_scenario)

    compare = sub.add_parser(
        "compare", help="bill the day under flat, RTP, TOU, and the demand-linked schedule"
    )
    _add_input_args(compare)
    compare.add_argument("--tou-multiplier", type=float, default=1.0, help="TOU peak block multiplier (>= 1)")
    compare.add_argument(
        "--dr-max",
        type=float,
        default=0.15,
        help="largest random peak demand reduction; 0 disables the event",
    )
    compare.add_argument("--seed", type=int, default=0, help="seed for the demand-response event")
    compare.add_argument(
        "--no-profit",
        action="store_true",
        help="bill reference signals at raw prices without the profit markup",
    )
    compare.add_argument("--out", help="directory to write tables to (default: stdout)")
    compare.set_defaults(func=cmd_compare)

    validate = sub.add_parser("validate", help="run built-in reference checks on the bundled benchmark")
    validate.add_argument("--json", action="store_true", help="machine-readable results")
    validate.set_defaults(func=cmd_validate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError) as exc:
        message = exc.args[0] if exc.args else exc
        print(f"error: {message}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
