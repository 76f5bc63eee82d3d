"""The ``fuelpath`` command line: lcof, sweep, lscm and verify."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import warnings
from dataclasses import dataclass, field
from pathlib import Path

from fuelpath import analysis, checks, reports
from fuelpath.errors import FuelpathError
from fuelpath.lcof import CO2Sale, lcof_h2, lcof_slf
from fuelpath.policy import FuelCreditScenario
from fuelpath.techdata.dataset import Dataset, load_dataset, load_default_dataset

log = logging.getLogger("fuelpath")

EXIT_OK, EXIT_INVALID, EXIT_ACCEPTANCE = 0, 1, 2


@dataclass(frozen=True)
class RunConfig:
    command: str
    dataset_path: str | None = None
    z45_years: int | None = None
    lcfs_price: float | None = None
    rin: dict = field(default_factory=dict)
    fossil_price: float | None = None
    p6_dual_credit: bool = False
    p6_co2_sale: float | None = None
    pathways: tuple[str, ...] = ()
    output_dir: Path = Path(".")
    format: str = "csv"

    def scenario(self, z45_default: int = 0) -> FuelCreditScenario:
        """Fuel-credit scenario from the overrides; raises on invalid values."""
        z = z45_default if self.z45_years is None else self.z45_years
        return FuelCreditScenario(z, self.lcfs_price or 0.0, dict(self.rin))

    def selected(self, ids: list[str]) -> list[str]:
        return [p for p in ids if not self.pathways or p in self.pathways]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--dataset", default=os.environ.get("FUELPATH_DATASET"),
                        help="dataset JSON (default: $FUELPATH_DATASET or the bundled dataset)")
    common.add_argument("--z45-years", type=int, help="45Z credit duration in years")
    common.add_argument("--lcfs", type=float, help="LCFS credit price, $/t CO2e")
    common.add_argument("--rin-d5", type=float, help="D5 RIN price, $/RIN")
    common.add_argument("--rin-d3", type=float, help="D3 RIN price, $/RIN")
    common.add_argument("--rin-d6", type=float, help="D6 RIN price, $/RIN (defaults to the D5 price)")
    common.add_argument("--fossil-price", type=float, help="fossil jet fuel price, $/gal")
    common.add_argument("--p6-dual-credit", action="store_true", help="what-if: P6 stacks 45V and 45Q")
    common.add_argument("--p6-co2-sale", type=float, metavar="PRICE",
                        help="what-if: P6 sells 95%% of its captured CO2 at PRICE $/t")
    common.add_argument("--pathways", default="", help="comma-separated pathway ids (default: all)")
    common.add_argument("--out", default=".", help="output directory")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="fuelpath", description="Levelized cost, CI and subsidy model for hydrogen and synthetic fuels.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("lcof", parents=[common], help="itemized LCOF of every pathway")
    sub.add_parser("sweep", parents=[common], help="45Z duration sweep and competitiveness frontiers")
    sub.add_parser("lscm", parents=[common], help="levelized subsidy per tonne CO2e mitigated")
    sub.add_parser("verify", parents=[common], help="re-run derivations and acceptance checks")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    rin = {}
    if args.rin_d5 is not None:
        rin["D5"] = rin["D6"] = args.rin_d5
    if args.rin_d3 is not None:
        rin["D3"] = args.rin_d3
    if args.rin_d6 is not None:
        rin["D6"] = args.rin_d6
    pathways = tuple(p.strip() for p in args.pathways.split(",") if p.strip())
    return RunConfig(args.command, args.dataset, args.z45_years, args.lcfs, rin, args.fossil_price,
                     args.p6_dual_credit, args.p6_co2_sale, pathways, Path(args.out), args.format)


def _load(cfg: RunConfig) -> Dataset:
    if cfg.dataset_path:
        return load_dataset(cfg.dataset_path)
    return load_default_dataset()


def _ext(cfg: RunConfig) -> str:
    return cfg.format


def cmd_lcof(cfg: RunConfig, ds: Dataset) -> list[Path]:
    scenario = cfg.scenario()
    scenario.check(ds.finance.book_life_years)
    unknown = [p for p in cfg.pathways if p not in ds.pathways]
    if unknown:
        raise FuelpathError(f"unknown pathways: {', '.join(unknown)}")
    h2_rows = []
    for pid in cfg.selected(ds.pathway_ids("h2")):
        kwargs = {}
        if pid == "P6":
            kwargs["dual_credit"] = cfg.p6_dual_credit
            if cfg.p6_co2_sale is not None:
                kwargs["co2_sale"] = CO2Sale(cfg.p6_co2_sale)
        h2_rows.append(reports.lcof_row(lcof_h2(ds, pid, **kwargs)))
    slf_rows = [reports.lcof_row(lcof_slf(ds, pid, scenario)) for pid in cfg.selected(ds.pathway_ids("slf"))]
    ext = _ext(cfg)
    return [
        reports.write_table(cfg.output_dir / f"h2_lcof.{ext}", reports.LCOF_COLUMNS, h2_rows, cfg.format),
        reports.write_table(cfg.output_dir / f"slf_lcof.{ext}", reports.LCOF_COLUMNS, slf_rows, cfg.format),
    ]


def cmd_sweep(cfg: RunConfig, ds: Dataset) -> list[Path]:
    cfg.scenario().check(ds.finance.book_life_years)
    pathways = cfg.selected(ds.pathway_ids("slf")) or None
    durations = None if cfg.z45_years is None else [cfg.z45_years]
    sweep = analysis.sweep_45z_duration(ds, pathways, durations, cfg.lcfs_price or 0.0, cfg.rin)
    ext = _ext(cfg)
    files = [reports.write_table(cfg.output_dir / f"sweep_45z.{ext}", ("pathway", "z45_years", "lcof"),
                                 reports.sweep_rows(sweep), cfg.format)]
    if "D5" in cfg.rin and "D3" in cfg.rin:
        rins = [(cfg.rin["D5"], cfg.rin["D3"])]
    else:
        rins = list(analysis.DEFAULT_RIN_SCENARIOS)
    lcfs = analysis.DEFAULT_LCFS_PRICES if cfg.lcfs_price is None else (cfg.lcfs_price,)
    grid = analysis.competitiveness_frontier(ds, cfg.fossil_price, durations, lcfs, rins, pathways)
    for d5, d3 in grid.rin_scenarios:
        path = cfg.output_dir / reports.frontier_filename(d5, d3, ext)
        files.append(reports.write_table(path, reports.frontier_columns(grid), reports.frontier_rows(grid, d5, d3), cfg.format))
        log.info("%s", reports.render_panel(grid, d5, d3))
    return files


def cmd_lscm(cfg: RunConfig, ds: Dataset) -> list[Path]:
    rows = []
    for pid in cfg.selected(ds.pathway_ids()):
        rows.append(reports.lscm_row(ds, pid, cfg.z45_years, dual_credit=cfg.p6_dual_credit and pid == "P6"))
    path = cfg.output_dir / f"lscm.{_ext(cfg)}"
    return [reports.write_table(path, reports.LSCM_COLUMNS, rows, cfg.format)]


def cmd_verify(cfg: RunConfig, ds: Dataset) -> int:
    results = checks.run_acceptance(ds, cfg.dataset_path)
    if cfg.format == "json":
        payload = [{"criterion": c.criterion, "name": c.name, "observed": str(c.observed),
                    "expected": c.expected, "passed": c.passed} for c in results]
        print(json.dumps(payload, indent=2))
    else:
        print(checks.format_report(results))
    return EXIT_OK if all(c.passed for c in results) else EXIT_ACCEPTANCE


COMMANDS = {"lcof": cmd_lcof, "sweep": cmd_sweep, "lscm": cmd_lscm}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    cfg = config_from_args(args)
    try:
        cfg.scenario()
        ds = _load(cfg)
        if cfg.command == "verify":
            return cmd_verify(cfg, ds)
        cfg.output_dir.mkdir(parents=True, exist_ok=True)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore" if not args.verbose else "default")
            files = COMMANDS[cfg.command](cfg, ds)
    except (FuelpathError, OSError, json.JSONDecodeError) as exc:
        print(f"fuelpath: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    for f in files:
        log.info("wrote %s", f)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
