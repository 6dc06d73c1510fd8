"""Price a small feeder defined inline, no files needed.

The same CSV and JSON forms work from the command line via
--customers/--mcp/--config. Run with: python3 demos/custom_dataset.py
"""

from dlps import (
    assemble_dataset,
    build_schedule,
    parse_config,
    parse_customers,
    parse_mcp,
    validate_dataset,
)

CUSTOMERS = """\
id,category,base_demand_kw
I1,industrial,30
I2,industrial,45
I3,industrial,90
C1,commercial,25
C2,commercial,40
"""

# a flat-ish market day with an evening price ramp; states 18..23 are peak
PROFILE = "state,mcp_rs_per_kwh,load_factor\n" + "".join(
    f"{i},{2.5 + (1.8 if 18 <= i <= 23 else 0.0):g},"
    f"{0.7 + (0.3 if 18 <= i <= 23 else 0.0):g}\n"
    for i in range(1, 25)
)

CONFIG = '{"profit_factors": {"industrial": 0.01, "commercial": 0.02}}'

ds = assemble_dataset(
    parse_customers(CUSTOMERS),
    parse_config(CONFIG),
    parse_mcp(PROFILE),
    label="toy-feeder",
)

problems = validate_dataset(ds)
print(f"validation: {'clean' if not problems else problems}")

schedule = build_schedule(ds)
state = ds.profile.state(20)
print(f"\npeak state 20 (market price {state.mcp} Rs/kWh):")
for c in ds.customers:
    print(
        f"  {c.id}: {c.base_demand * state.load_factor:.0f} kW -> "
        f"{schedule.price(c, state):.3f} Rs/kWh"
    )

print("\noff-peak window prices:")
for category, price in schedule.off_peak.items():
    print(f"  {category.value}: {price:.3f} Rs/kWh")

print(f"\nprovenance: {schedule.provenance}")
