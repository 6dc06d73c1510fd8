"""Acceptance gate: every shipping requirement, one pass/fail line each.

Each criterion prints its verdict straight to the terminal (bypassing
pytest capture) so a plain ``pytest -v`` run shows the checklist. The
reference numbers here are this module's own frozen copies, kept separate
from the library's built-in validate command on purpose: if one side
drifts, the other catches it.
"""

import json
import subprocess
import sys
import time
from contextlib import contextmanager

import numpy as np
import pytest

from dlps import (
    Category,
    Scenario,
    SignalKind,
    apply_scenario,
    bill_under_signal,
    build_schedule,
    bundled_benchmark,
    derive_flat,
    derive_tou,
    elasticity_probe,
    financial_summary,
    fixed_price,
    on_peak_prices,
    preset_scenario,
    price_demand_slope,
    proportionality_constant,
    proposed_signal,
    rtp_signal,
    scenario_deltas,
    verify_ebe,
)

# --- frozen reference results for the bundled 177-customer benchmark ------

PEAK_PRICES = {
    "I1": 3.22, "I2": 4.02, "I3": 3.70, "I4": 4.34, "I5": 5.23, "I6": 6.03,
    "I7": 7.07, "I8": 7.40, "I9": 2.41, "I10": 3.38, "I11": 4.34, "I12": 4.99,
    "I13": 5.47, "I14": 5.95, "I15": 7.24, "I16": 2.41, "I17": 2.41,
    "I18": 4.82, "I19": 2.01, "I20": 2.81, "I21": 3.22, "I22": 3.06,
    "I23": 3.38,
}
BASE_FINANCIALS = (5960.12, 6019.73, 59.60)
SCENARIO_DELTAS = {
    "s1": {"I8": (10.0, 8.29, 19.11, 8.96), "I19": (10.0, 8.29, 19.11, 8.96),
           "others": (0.0, -1.56, -1.56, -0.94)},
    "s2": {"I8": (-10.0, -8.75, -17.88, -9.13), "I19": (-10.0, -8.75, -17.88, -9.13),
           "others": (0.0, 1.39, 1.39, 0.96)},
    "s3": {"I8": (-10.0, -8.69, -17.82, -9.51), "I19": (10.0, 11.60, 22.76, 10.60),
           "others": (0.0, 1.46, 1.46, 0.55)},
}
SCENARIO_FINANCIALS = {
    "s1": (6016.82, 6076.99),
    "s2": (5903.43, 5962.47),
    "s3": (5927.66, 5986.94),
}
SCALED_TOTAL = 1236.42
SCALED_FINANCIALS = (5991.21, 6051.12, 59.91)
BREAKEVEN_KW = 60.87
ABOVE_BREAKEVEN = {"I5", "I6", "I7", "I8", "I12", "I13", "I14", "I15"}
BILLING_EXTREMES = (-58.9, 51.1)
ELASTICITY_GAP_I1 = 0.011

PRICE_TOL = 0.01
RS_TOL = 0.05
PP_TOL = 0.02
WIDE_RS_TOL = 0.1
EXACT = 1e-9
BILLING_REL = 1e-7


@contextmanager
def criterion(name: str, capsys):
    try:
        yield
    except Exception:
        with capsys.disabled():
            print(f"[FAIL] {name}", flush=True)
        raise
    with capsys.disabled():
        print(f"[PASS] {name}", flush=True)


@pytest.fixture(scope="module")
def ds():
    return bundled_benchmark()


@pytest.fixture(scope="module")
def schedule(ds):
    return build_schedule(ds)


def test_c1_reference_prices_and_runtime(ds, capsys):
    with criterion(
        "C1 reference-state unit prices within 0.01 Rs, priced in under 1 s",
        capsys,
    ):
        start = time.perf_counter()
        fresh = build_schedule(ds)
        elapsed = time.perf_counter() - start
        assert elapsed < 1.0, f"schedule build took {elapsed:.3f} s"
        for cid, expected in PEAK_PRICES.items():
            observed = fresh.on_peak[(cid, 22)]
            assert observed == pytest.approx(expected, abs=PRICE_TOL), cid
        assert len(PEAK_PRICES) == 23


def test_c2_base_financials(ds, schedule, capsys):
    with criterion(
        "C2 reference-state financial balance within 0.05 Rs", capsys
    ):
        purchase, revenue, profit = BASE_FINANCIALS
        for fin in (
            verify_ebe(ds, schedule, Category.INDUSTRIAL, 22),
            financial_summary(ds, 22, Category.INDUSTRIAL),
        ):
            assert fin.purchase_cost == pytest.approx(purchase, abs=RS_TOL)
            assert fin.revenue == pytest.approx(revenue, abs=RS_TOL)
            assert fin.profit == pytest.approx(profit, abs=RS_TOL)
            assert fin.profit_fraction == pytest.approx(0.01, abs=EXACT)


def test_c3_scenario_tables(ds, capsys):
    with criterion(
        "C3 scenario delta tables within 0.02 pp and financials within 0.05 Rs",
        capsys,
    ):
        for name, expected in SCENARIO_DELTAS.items():
            sc = preset_scenario(name, ds)
            perturbed = apply_scenario(ds, sc)
            table = scenario_deltas(ds, perturbed, 22, Category.INDUSTRIAL)
            for row in table.deltas:
                want = expected.get(row.customer_id, expected["others"])
                got = (
                    row.demand_pct,
                    row.unit_price_pct,
                    row.billing_pct,
                    row.demand_contribution_pct,
                )
                for g, w in zip(got, want):
                    assert g == pytest.approx(w, abs=PP_TOL), (name, row.customer_id)
            purchase, revenue = SCENARIO_FINANCIALS[name]
            fin = table.financials
            assert fin.purchase_cost == pytest.approx(purchase, abs=RS_TOL), name
            assert fin.revenue == pytest.approx(revenue, abs=RS_TOL), name
            assert fin.profit_fraction == pytest.approx(0.01, abs=EXACT), name


def test_c4_scaled_demand_financials(ds, capsys):
    with criterion(
        "C4 uniformly scaled demand financials within 0.1 Rs", capsys
    ):
        state = ds.profile.state(22)
        industrial = ds.customers_in(Category.INDUSTRIAL)
        base_total = sum(c.base_demand for c in industrial) * state.load_factor
        factor = SCALED_TOTAL / base_total - 1.0
        sc = Scenario(
            label="scaled",
            perturbations={c.id: factor for c in industrial},
            scope=22,
        )
        fin = financial_summary(apply_scenario(ds, sc), 22, Category.INDUSTRIAL)
        purchase, revenue, profit = SCALED_FINANCIALS
        assert fin.purchase_cost == pytest.approx(purchase, abs=WIDE_RS_TOL)
        assert fin.revenue == pytest.approx(revenue, abs=WIDE_RS_TOL)
        assert fin.profit == pytest.approx(profit, abs=WIDE_RS_TOL)


def test_c5_economic_properties(ds, schedule, capsys):
    with criterion(
        "C5 balance, neutrality, and breakeven properties hold", capsys
    ):
        # (a) exact cost-plus-margin recovery on 1,000 random groups
        rng = np.random.default_rng(2024)
        for _ in range(1000):
            n = int(rng.integers(1, 501))
            demands = rng.uniform(1e-6, 1000.0, n)
            kp = float(rng.uniform(0.0, 0.2))
            mcp = float(rng.uniform(1e-6, 100.0))
            revenue = float(on_peak_prices(demands, kp, mcp) @ demands)
            target = (1.0 + kp) * mcp * float(demands.sum())
            assert abs(revenue - target) / target <= EXACT

        # (b) the demand-linked schedule bills like marked-up RTP
        proposed = bill_under_signal(ds, proposed_signal(schedule))
        rtp = bill_under_signal(ds, rtp_signal(ds.profile))
        for category in ds.categories_present:
            for t in ds.profile.peak_indices:
                key = (category, t)
                a, b = proposed.by_category_state[key], rtp.by_category_state[key]
                assert abs(a - b) / b <= BILLING_REL
            day_a = proposed.total(categories=[category])
            day_b = rtp.total(categories=[category])
            assert abs(day_a - day_b) / day_b <= BILLING_REL

        # (c) derived flat and TOU signals are revenue-neutral against RTP
        flat = bill_under_signal(ds, derive_flat(ds), with_profit=False)
        tou = bill_under_signal(ds, derive_tou(ds), with_profit=False)
        raw_rtp = bill_under_signal(ds, rtp_signal(ds.profile), with_profit=False)
        assert flat.total() == pytest.approx(raw_rtp.total(), rel=EXACT)
        peak = set(ds.profile.peak_indices)
        off = {s.index for s in ds.profile.off_peak_states}
        for states in (peak, off):
            assert tou.total(states=states) == pytest.approx(
                raw_rtp.total(states=states), rel=EXACT
            )

        # (d) breakeven demand and the billing extremes around it
        state = ds.profile.state(22)
        demands = np.array(
            [c.base_demand * state.load_factor
             for c in ds.customers_in(Category.INDUSTRIAL)]
        )
        threshold = float(demands @ demands / demands.sum())
        assert threshold == pytest.approx(BREAKEVEN_KW, abs=0.01)
        above = {
            c.id
            for c in ds.customers_in(Category.INDUSTRIAL)
            if c.base_demand * state.load_factor > threshold
        }
        assert above == ABOVE_BREAKEVEN
        flat_price = fixed_price(state.mcp, ds.profit_factor(Category.INDUSTRIAL))
        low = 100.0 * (schedule.on_peak[("I19", 22)] / flat_price - 1.0)
        high = 100.0 * (schedule.on_peak[("I8", 22)] / flat_price - 1.0)
        assert low == pytest.approx(BILLING_EXTREMES[0], abs=0.1)
        assert high == pytest.approx(BILLING_EXTREMES[1], abs=0.1)


def test_c6_elasticity(ds, capsys):
    with criterion(
        "C6 near-unit price elasticity for groups of 50 and up", capsys
    ):
        for n in (50, 100, 200, 400):
            gap = elasticity_probe(np.full(n, 10.0), 0, 0.01, 0.02, 3.0)
            assert gap <= 0.05, n
        demands = [c.base_demand for c in ds.customers_in(Category.INDUSTRIAL)]
        gap = elasticity_probe(demands, 0, 0.01, 0.01, 4.845626)
        assert gap == pytest.approx(ELASTICITY_GAP_I1, abs=1e-3)


def test_c7_proportionality_identity(ds, capsys):
    with criterion(
        "C7 price-demand proportionality identity exact to 1e-9", capsys
    ):
        rng = np.random.default_rng(4096)
        cases = [
            (
                rng.uniform(1e-3, 1000.0, int(rng.integers(1, 301))),
                float(rng.uniform(0.0, 0.2)),
                float(rng.uniform(1e-3, 100.0)),
            )
            for _ in range(1000)
        ]
        cases.append(
            (
                np.array(
                    [c.base_demand for c in ds.customers_in(Category.INDUSTRIAL)]
                ),
                0.01,
                4.845626,
            )
        )
        for demands, kp, mcp in cases:
            alpha = proportionality_constant(demands, kp, mcp)
            slope = price_demand_slope(demands, kp, mcp)
            gap = abs(alpha - slope * float(demands.sum())) / alpha
            assert gap <= EXACT


def test_c8_cli_determinism(tmp_path, capsys):
    with criterion(
        "C8 command line output is byte-identical across reruns", capsys
    ):
        runs = []
        for tag in ("a", "b"):
            out_dir = tmp_path / tag
            result = subprocess.run(
                [
                    sys.executable, "-m", "dlps", "compare", "--benchmark",
                    "--dr-max", "0.15", "--seed", "7", "--out", str(out_dir),
                ],
                capture_output=True, text=True, timeout=120,
            )
            assert result.returncode == 0, result.stderr
            runs.append(
                {p.name: p.read_bytes() for p in sorted(out_dir.iterdir())}
            )
        assert runs[0] == runs[1]
        assert set(runs[0]) == {
            "aggregates.csv", "comparison.csv", "comparison.json", "manifest.json",
        }

        outputs = []
        for _ in range(2):
            result = subprocess.run(
                [
                    sys.executable, "-m", "dlps", "scenario", "--benchmark",
                    "--preset", "s4", "--seed", "11",
                ],
                capture_output=True, text=True, timeout=120,
            )
            assert result.returncode == 0, result.stderr
            outputs.append(result.stdout)
        assert outputs[0] == outputs[1]
        json.loads(
            subprocess.run(
                [sys.executable, "-m", "dlps", "validate", "--json"],
                capture_output=True, text=True, timeout=120,
            ).stdout
        )
