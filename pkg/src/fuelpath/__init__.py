"""Techno-economic model of hydrogen and synthetic liquid fuel pathways under US fuel policy."""

from fuelpath.techdata import load_dataset, load_default_dataset

__version__ = "0.1.0"

__all__ = ["load_dataset", "load_default_dataset", "__version__"]
