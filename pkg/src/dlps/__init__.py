"""Demand-linked price signal engine for demand-response tariff studies.

The package prices a day of electricity retail in which each customer's
peak unit price scales with their share of their category's demand, so
that every category's billing recovers energy purchase cost plus an
assured margin, state by state during peak hours and window-wide off-peak.

Typical use::

    from dlps import bundled_benchmark, build_schedule

    ds = bundled_benchmark()
    schedule = build_schedule(ds)
    price = schedule.on_peak[("I8", 22)]
"""

from .domain import (
    Category,
    CategoryConfig,
    Customer,
    Dataset,
    DayProfile,
    SystemState,
    Violation,
    category_demands,
    demand_at_state,
    select_states,
    validate_dataset,
)
from .pricing import (
    DegenerateGroupError,
    DegenerateWindowError,
    FinancialSummary,
    PriceSchedule,
    build_schedule,
    fixed_price,
    off_peak_price,
    on_peak_prices,
    proportionality_constant,
    verify_ebe,
)
from .sensitivity import (
    SensitivityReport,
    elasticity_probe,
    price_demand_slope,
    proportionality_identity_gap,
    sensitivity_report,
)
from .scenario import (
    CustomerDelta,
    PRESET_NAMES,
    Scenario,
    ScenarioDeltas,
    analysis_state,
    perturbation_at,
    apply_scenario,
    financial_summary,
    load_scenario,
    preset_scenario,
    random_dr_event,
    scenario_deltas,
    scenario_to_json,
)
from .comparator import (
    BillingComparison,
    SignalBilling,
    SignalKind,
    TariffSignal,
    bill_under_signal,
    compare_signals,
    compare_to_reference,
    derive_flat,
    derive_tou,
    event_schedule,
    proposed_signal,
    rtp_signal,
    standard_comparison,
)
from .ingest import (
    ParseError,
    RunConfig,
    StateRow,
    assemble_dataset,
    assemble_profile,
    bundled_benchmark,
    config_to_json,
    customers_to_csv,
    default_config,
    parse_config,
    parse_customers,
    parse_mcp,
    profile_to_csv,
)

__version__ = "0.1.0"
