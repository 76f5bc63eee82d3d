"""What CO2 price lets biomass hydrogen sell its CO2 and still match SMR?"""
from fuelpath.analysis import breakeven_all_conventions, breakeven_biogenic_co2_price, with_scaled_service_cost
from fuelpath.techdata import load_default_dataset

ds = load_default_dataset()

for avoided, price in breakeven_all_conventions(ds).items():
    print(f"sold CO2 avoids {avoided:18}: breakeven {price:6.2f} $/t")

for factor in (0.5, 1.0, 2.0):
    price = breakeven_biogenic_co2_price(with_scaled_service_cost(ds, factor))
    print(f"transport and storage x{factor}: breakeven {price:6.2f} $/t")
