"""Does 45Z reward burning more biomass per gallon?

A less efficient plant puts more biomass carbon underground, so its fuel
has a lower CI and earns more 45Z per gallon, but it makes fewer gallons.
"""
from fuelpath.analysis import (
    EfficiencyStudy,
    efficiency_incentive_analysis,
    net_value_spread,
    required_fixed_cost_reduction,
)
from fuelpath.techdata import load_default_dataset

study = EfficiencyStudy.from_dataset(load_default_dataset())
cases = efficiency_incentive_analysis(study=study)

print(f"{'eta':>4} {'CI':>8} {'45Z':>7} {'fuel':>7} {'fixed':>7} {'net $/t':>8}")
for c in cases:
    print(f"{c.eta:4.1f} {c.ci:8.1f} {c.credit_45z:7.1f} {c.revenue_slf:7.1f} {c.fixed:7.1f} {c.net_value:8.2f}")

print(f"\nnet value spread across efficiencies: {net_value_spread(cases):.2%}")
cut = required_fixed_cost_reduction(study=study)
print(f"fixed cost cut that makes eta=0.2 as good as eta=0.5 without scale savings: {cut:.1%}")
