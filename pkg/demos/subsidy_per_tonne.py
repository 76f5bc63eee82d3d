"""Levelized subsidy per tonne of CO2e mitigated, against social cost of carbon bands."""
import math

from fuelpath.analysis import subsidy_regression
from fuelpath.reports import lscm_row
from fuelpath.techdata import load_default_dataset

ds = load_default_dataset()
low, high = ds.scc_bands["2030"]
print(f"2030 SCC band: {low:g}-{high:g} $/t\n")

for pid in ds.pathway_ids():
    row = lscm_row(ds, pid)
    if math.isnan(row["lscm"]):
        print(f"{pid:4} not applicable")
    else:
        print(f"{pid:4} {row['lscm']:7.1f} $/t  ({row['class_2030']})")

# Reforming subsidies fall on a line; electrolysis sits well above it
reg = subsidy_regression(ds)
print(f"\nreforming pathways: {reg.line.slope:.1f} $/t per unit CI cut")
print(f"electrolysis: {reg.electrolysis_total:.1f} $/t, {reg.electrolysis_bonus:.1f} $/t above the line")
