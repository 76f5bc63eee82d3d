"""How many years of 45Z does each fuel need to reach the jet-fuel price band?"""
from fuelpath.analysis import sweep_45z_duration
from fuelpath.techdata import load_default_dataset

ds = load_default_dataset()
ceiling = ds.jet_price["p90"]
sweep = sweep_45z_duration(ds)

for pid, curve in sweep.curves.items():
    years = sweep.min_duration(pid, ceiling)
    reach = f"{years} yr" if years is not None else "never"
    print(f"{pid:4} {curve[0]:6.2f} -> {curve[-1]:6.2f} $/gal over 0..15 years; below {ceiling} after {reach}")
