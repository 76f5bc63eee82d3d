"""Technology, feedstock and policy dataset plus the derivations behind its rows."""

from fuelpath.techdata.dataset import (
    CIBenchmarks,
    Dataset,
    Facility,
    Feedstock,
    PathwayChain,
    TechnologySpec,
    default_dataset_path,
    default_document,
    load_dataset,
    load_default_dataset,
    schema,
    validate_document,
)
from fuelpath.techdata.derivations import (
    check_dataset,
    derive_compression_cost,
    derive_ethanol_to_jet_params,
    derive_integrated_capex,
    derive_integrated_costs,
    derive_integrated_ifi,
    mole_balance_factor,
    powerlaw_cost,
)

__all__ = [
    "CIBenchmarks",
    "Dataset",
    "Facility",
    "Feedstock",
    "PathwayChain",
    "TechnologySpec",
    "check_dataset",
    "default_dataset_path",
    "default_document",
    "derive_compression_cost",
    "derive_ethanol_to_jet_params",
    "derive_integrated_capex",
    "derive_integrated_costs",
    "derive_integrated_ifi",
    "load_dataset",
    "load_default_dataset",
    "mole_balance_factor",
    "powerlaw_cost",
    "schema",
    "validate_document",
]
