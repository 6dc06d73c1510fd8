"""What happens when the biggest and smallest industrial customers move.

The three named presets push the extremes of the industrial group around
by 10% at the analysis state; the fourth draws a random event. Run with:
python3 demos/scenario_walkthrough.py
"""

from dlps import (
    Category,
    analysis_state,
    apply_scenario,
    bundled_benchmark,
    preset_scenario,
    random_dr_event,
    scenario_deltas,
)

ds = bundled_benchmark()
state = analysis_state(ds.profile)
print(f"analysis state: {state} (peak state with the highest load factor)\n")

for name, story in (
    ("s1", "both extremes raise demand 10%"),
    ("s2", "both extremes cut demand 10%"),
    ("s3", "the largest cuts 10%, the smallest raises 10%"),
):
    sc = preset_scenario(name, ds)
    perturbed = apply_scenario(ds, sc)
    table = scenario_deltas(ds, perturbed, state, Category.INDUSTRIAL)
    print(f"{name}: {story}")
    for cid in ("I8", "I19", "I1"):
        row = table.delta_for(cid)
        role = "mover" if cid in sc.perturbations else "bystander"
        print(
            f"  {cid:>4} ({role}): demand {row.demand_pct:+6.2f}%  "
            f"price {row.unit_price_pct:+6.2f}%  billing {row.billing_pct:+6.2f}%"
        )
    fin = table.financials
    print(
        f"  margin stays put: {100 * fin.profit_fraction:.4f}% of a "
        f"{fin.purchase_cost:.2f} Rs purchase\n"
    )

# A random demand-response event draws an independent change for every
# customer at every peak state; a fixed seed pins the whole scenario.
event = random_dr_event(ds, max_reduction=0.15, seed=7)
shaped = apply_scenario(ds, event, at_state=state)
table = scenario_deltas(ds, shaped, state, Category.INDUSTRIAL)
biggest = max(table.deltas, key=lambda r: abs(r.demand_pct))
print(f"random event {event.label!r}:")
print(
    f"  deepest industrial response at state {state}: {biggest.customer_id} "
    f"{biggest.demand_pct:+.2f}% demand, {biggest.billing_pct:+.2f}% billing"
)
