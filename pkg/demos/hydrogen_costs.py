"""Itemized levelized cost and carbon intensity of the six hydrogen pathways."""
from fuelpath.lcof import CO2Sale, lcof_h2
from fuelpath.techdata import load_default_dataset

ds = load_default_dataset()

print(f"{'':4} {'name':14} {'$/kg':>7} {'kgCO2e/kg':>10}  credit")
for pid in ds.pathway_ids("h2"):
    b = lcof_h2(ds, pid)
    print(f"{pid:4} {ds.pathway(pid).name:14} {b.net:7.3f} {b.ci:10.3f}  {'+'.join(b.selected) or '-'}")

# Where does the money go for SMR with capture?
b = lcof_h2(ds, "P2")
print("\nP2 breakdown, $/kg")
for label, value in b.items:
    if value:
        print(f"  {label:24} {value:+.4f}")
print(f"  45V would have paid {b.credit_options['45V']:.4f}, 45Q pays {b.credit_options['45Q']:.4f}")

# Biomass gasification with capture can earn both credits if the law allowed it
single = lcof_h2(ds, "P6")
dual = lcof_h2(ds, "P6", dual_credit=True)
print(f"\nP6 takes {single.selected[0]} alone: {single.net:.3f} $/kg; stacked: {dual.net:.3f} $/kg")

# Or it can sell most of its CO2 instead of storing it
for price in (0, 25, 50, 75):
    sold = lcof_h2(ds, "P6", co2_sale=CO2Sale(price))
    print(f"  selling 95% of the CO2 at {price:3} $/t -> {sold.net:.3f} $/kg")
