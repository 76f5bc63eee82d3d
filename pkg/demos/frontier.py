"""Cheapest fuel on a grid of 45Z duration, LCFS price and RIN prices."""
from fuelpath.analysis import competitiveness_frontier
from fuelpath.reports import render_panel
from fuelpath.techdata import load_default_dataset

ds = load_default_dataset()
grid = competitiveness_frontier(ds, lcfs_prices=range(0, 201, 10))

for d5, d3 in grid.rin_scenarios:
    print(render_panel(grid, d5, d3))
    print()

print("pathways that win somewhere:", ", ".join(sorted(grid.winners())))
