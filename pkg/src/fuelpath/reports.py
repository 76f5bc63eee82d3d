"""Tabular reports: rows for each exhibit and deterministic CSV/JSON writers."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from fuelpath.analysis import FOSSIL, DurationSweep, SweepGrid
from fuelpath.errors import NoMitigation
from fuelpath.lcof import LABELS, SALE_LABEL, LcofBreakdown, lscm
from fuelpath.techdata.dataset import Dataset

DECIMALS = 4
LCOF_COLUMNS = ("pathway", "unit", *LABELS, SALE_LABEL, "net", "ci", "ci_unit", "selected_credits", "what_if")
LSCM_INSTRUMENTS = ("45V", "45Q", "45Z", "45Y", "methane_fee")
LSCM_COLUMNS = ("pathway", "unit", "lscm", "total_subsidy", "ci_delta",
                *(f"subsidy_{i}" for i in LSCM_INSTRUMENTS),
                "scc_2030_low", "scc_2030_high", "class_2030", "scc_2040_low", "scc_2040_high", "class_2040")


def fmt(value) -> str:
    """Fixed four-decimal text for numbers; other values pass through as strings."""
    if isinstance(value, bool) or value is None:
        return "" if value is None else str(value).lower()
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return ""
        text = f"{value:.{DECIMALS}f}"
        return "0.0000" if text == "-0.0000" else text
    return str(value)


def lcof_row(b: LcofBreakdown) -> dict[str, object]:
    row: dict[str, object] = {"pathway": b.pathway, "unit": b.unit}
    for label in LABELS:
        row[label] = b[label]
    row[SALE_LABEL] = b.as_dict().get(SALE_LABEL, 0.0)
    row.update(net=b.net, ci=b.ci, ci_unit=b.ci_unit, selected_credits="+".join(b.selected),
               what_if="+".join(b.what_if))
    return row


def classify(value: float, band: tuple[float, float]) -> str:
    low, high = band
    if value < low:
        return "below"
    if value > high:
        return "above"
    return "within"


def lscm_row(ds: Dataset, pathway: str, z45_years: int | None = None, dual_credit: bool = False) -> dict[str, object]:
    """One LSCM row; pathways with no incentive or no CI reduction are marked not applicable."""
    chain = ds.pathway(pathway)
    row: dict[str, object] = {"pathway": pathway, "unit": "USD/kg" if chain.product == "h2" else "USD/gal"}
    bands = {year: ds.scc_bands[year] for year in ("2030", "2040")}
    for year, (low, high) in bands.items():
        row[f"scc_{year}_low"] = low
        row[f"scc_{year}_high"] = high
    try:
        result = lscm(ds, pathway, z45_years=z45_years, dual_credit=dual_credit)
    except NoMitigation:
        result = None
    if result is None or not result.applicable:
        row.update(lscm=math.nan, total_subsidy=math.nan, ci_delta=math.nan,
                   class_2030="not_applicable", class_2040="not_applicable")
        for inst in LSCM_INSTRUMENTS:
            row[f"subsidy_{inst}"] = math.nan
        return row
    row.update(lscm=result.lscm, total_subsidy=result.total_subsidy, ci_delta=result.ci_delta)
    for inst in LSCM_INSTRUMENTS:
        row[f"subsidy_{inst}"] = result.components.get(inst, 0.0)
    for year, band in bands.items():
        row[f"class_{year}"] = classify(result.lscm, band)
    return row


def sweep_rows(sweep: DurationSweep) -> list[dict[str, object]]:
    """Long format: one row per (pathway, duration)."""
    return [
        {"pathway": pid, "z45_years": d, "lcof": value}
        for pid, curve in sweep.curves.items()
        for d, value in zip(sweep.durations, curve)
    ]


def frontier_rows(grid: SweepGrid, d5: float, d3: float) -> list[dict[str, object]]:
    rows = []
    for d in grid.durations:
        for price in grid.lcfs_prices:
            cell = grid.cells[(d5, d3, d, price)]
            row: dict[str, object] = {"rin_d5": d5, "rin_d3": d3, "z45_years": d, "lcfs_price": float(price),
                                      "fossil_price": grid.fossil_price, "winner": cell.winner}
            row.update({f"lcof_{p}": cell.lcof_by_pathway[p] for p in grid.pathways})
            rows.append(row)
    return rows


def frontier_columns(grid: SweepGrid) -> tuple[str, ...]:
    return ("rin_d5", "rin_d3", "z45_years", "lcfs_price", "fossil_price", "winner",
            *(f"lcof_{p}" for p in grid.pathways))


def frontier_filename(d5: float, d3: float, fmt_ext: str = "csv") -> str:
    return f"frontier_{d5:g}_{d3:g}.{fmt_ext}"


def _json_value(value):
    if isinstance(value, float):
        return None if math.isnan(value) else round(value, DECIMALS) + 0.0
    return value


def write_table(path: Path, columns: Sequence[str], rows: Iterable[Mapping[str, object]], fmt_name: str = "csv") -> Path:
    """Write rows as CSV (four-decimal text) or JSON (a list of objects)."""
    path = Path(path)
    rows = list(rows)
    if fmt_name == "csv":
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(columns)
            for row in rows:
                writer.writerow([fmt(row.get(c)) for c in columns])
    elif fmt_name == "json":
        payload = [{c: _json_value(row.get(c)) for c in columns} for row in rows]
        path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    else:
        raise ValueError(f"unknown format {fmt_name!r}")
    return path


def winner_symbol(winner: str) -> str:
    return "F" if winner == FOSSIL else winner.lstrip("P")


def render_panel(grid: SweepGrid, d5: float, d3: float) -> str:
    """Plain-text winner map: rows are 45Z durations, columns LCFS prices."""
    lines = [f"RIN D5={d5:g} D3={d3:g}  (F = fossil; columns LCFS {grid.lcfs_prices[0]:g}..{grid.lcfs_prices[-1]:g} $/t)"]
    for d, row in zip(grid.durations, grid.panel(d5, d3)):
        lines.append(f"{d:>3} " + "".join(winner_symbol(w).rjust(3) for w in row))
    return "\n".join(lines)
