"""Tour of the demand-linked price signal on the bundled benchmark.

Run with: python3 demos/pricing_basics.py
"""

from dlps import (
    Category,
    build_schedule,
    bundled_benchmark,
    fixed_price,
    verify_ebe,
)

ds = bundled_benchmark()
schedule = build_schedule(ds)

state = ds.profile.state(22)
industrial = ds.customers_in(Category.INDUSTRIAL)
kp = ds.profit_factor(Category.INDUSTRIAL)
flat = fixed_price(state.mcp, kp)

print(f"dataset: {ds.label} with {len(ds.customers)} customers")
print(f"reference state 22: market price {state.mcp} Rs/kWh, load factor {state.load_factor}")
print(f"industrial flat benchmark price: {flat:.4f} Rs/kWh (1% margin)\n")

# Each industrial customer's peak price scales with their own demand.
# Heavier customers land above the flat benchmark, lighter ones below it;
# the crossover sits at the group's contraharmonic mean demand.
demands = [c.base_demand for c in industrial]
breakeven = sum(d * d for d in demands) / sum(demands)
print(f"breakeven demand: {breakeven:.2f} kW\n")

print(f"{'customer':>10} {'demand kW':>10} {'price Rs':>9} {'vs flat':>8}")
for c in sorted(industrial, key=lambda c: c.base_demand):
    price = schedule.price(c, state)
    marker = "above" if c.base_demand > breakeven else "below"
    print(f"{c.id:>10} {c.base_demand:>10.0f} {price:>9.2f} {marker:>8}")

# However the billing redistributes, the category's books always close on
# cost plus the assured margin. verify_ebe re-bills from schedule prices.
fin = verify_ebe(ds, schedule, Category.INDUSTRIAL, 22)
print(f"\nindustrial at state 22: purchase {fin.purchase_cost:.2f} Rs, "
      f"revenue {fin.revenue:.2f} Rs, margin {100 * fin.profit_fraction:.4f}%")

fin_day = verify_ebe(ds, schedule, Category.INDUSTRIAL, "day")
print(f"industrial over the day: margin {100 * fin_day.profit_fraction:.4f}% "
      "(the same, by construction)")
