"""Liquid fuel costs under different market credit assumptions."""
from fuelpath.lcof import lcof_slf
from fuelpath.policy import FuelCreditScenario
from fuelpath.techdata import load_default_dataset

ds = load_default_dataset()
scenarios = {
    "no market credits": FuelCreditScenario(0),
    "45Z for 10 years": FuelCreditScenario(10),
    "45Z 10y + LCFS 100 + RINs": FuelCreditScenario(10, 100, {"D3": 2.0, "D5": 1.5, "D6": 1.5}),
}

print(f"jet fuel median {ds.jet_price['median']} $/gal, 90th percentile {ds.jet_price['p90']} $/gal\n")
print(f"{'':4} {'CI kg/MMBtu':>11}  " + "  ".join(f"{k:>26}" for k in scenarios))
for pid in ds.pathway_ids("slf"):
    costs = [lcof_slf(ds, pid, s) for s in scenarios.values()]
    print(f"{pid:4} {costs[0].ci:11.1f}  " + "  ".join(f"{c.net:26.3f}" for c in costs))
