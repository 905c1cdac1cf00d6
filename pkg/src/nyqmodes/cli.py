"""Command-line interface.

Every leaf of the experiment config is addressable as a dotted flag
(--grid.h 0.05, --potential.A -3); the short flags are aliases for the common
ones. Exit codes: 0 success, 2 bad arguments or config, 3 solver failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Dict, List, Optional, Sequence

from ._version import VERSION
from .config import ExperimentConfig, apply_overrides, from_file
from .errors import NyqmodesError, SolverError
from .experiments import (
    Table,
    render_csv,
    render_stdout,
    run_figure,
    run_predict,
    run_spectrum,
    run_sweep,
    run_wkb,
    table_records,
)

#: fallback output directory when neither --out nor the config names one
OUT_DIR_ENV = "NYQMODES_OUT_DIR"

_DOTTED_FLAGS = (
    # (dotted path, extra aliases, help)
    ("grid.x_min", (), "left edge of the periodic box"),
    ("grid.L", (), "box length"),
    ("grid.h", (), "grid spacing (L/h must be a whole, even sample count)"),
    ("potential.kind", (), "potential family (sech)"),
    ("potential.A", (), "potential amplitude (sign selects repulsive/attractive)"),
    ("potential.w", (), "potential inverse width"),
    ("scheme", (), "stencil: cd or numerov"),
    ("k", (), "number of top modes to analyze"),
    ("refine", (), "grid refinement for the envelope reference solve"),
    ("output.format", ("--format",), "output file format: csv or json"),
    ("output.path", ("--out",), "output directory (default $%s or .)" % OUT_DIR_ENV),
)


def _common_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", metavar="PATH", help="JSON config file")
    for dotted, aliases, text in _DOTTED_FLAGS:
        names = [f"--{dotted}", *aliases]
        p.add_argument(*names, dest=dotted.replace(".", "__"), metavar="V", help=text)
    return p


def _build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="nyqmodes",
        description="High-mode envelope analysis of discretized Schrodinger operators",
    )
    parser.add_argument("--version", action="version", version=f"nyqmodes {VERSION}")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("spectrum", parents=[common],
                   help="top-k eigenvalues with demodulation diagnostics")
    pr = sub.add_parser("reproduce", parents=[common],
                        help="emit a reference figure dataset")
    pr.add_argument("figure", choices=["fig1", "fig2"])
    sub.add_parser("predict", parents=[common],
                   help="compare demodulated modes against the envelope reference")
    ps = sub.add_parser("sweep", parents=[common],
                        help="localized-mode counts across a parameter family")
    ps.add_argument("--param", required=True, choices=["A", "w", "h"])
    ps.add_argument("--values", required=True,
                    help="comma-separated parameter values, e.g. 1,3,6")
    ps.add_argument("--workers", type=int, default=1,
                    help="solver threads (output is identical for any count)")
    pw = sub.add_parser("wkb", parents=[common],
                        help="semiclassical amplitude check for one mode")
    pw.add_argument("--rank", type=int, required=True,
                    help="1-based mode index from the top of the spectrum")
    return parser


def _load_config(args: argparse.Namespace) -> ExperimentConfig:
    cfg = from_file(args.config) if args.config else ExperimentConfig().validate()
    overrides: Dict[str, str] = {}
    for dotted, _, _ in _DOTTED_FLAGS:
        value = getattr(args, dotted.replace(".", "__"))
        if value is not None:
            overrides[dotted] = value
    return apply_overrides(cfg, overrides)


def _out_dir(cfg: ExperimentConfig) -> str:
    return cfg.output.path or os.environ.get(OUT_DIR_ENV) or "."


def _write_outputs(cfg: ExperimentConfig, name: str, tables: List[Table], meta: Dict) -> List[str]:
    out = _out_dir(cfg)
    os.makedirs(out, exist_ok=True)
    written = []
    if cfg.output.format == "csv":
        for t in tables:
            path = os.path.join(out, f"{t.name}.csv")
            with open(path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(render_csv(t))
            written.append(path)
        path = os.path.join(out, f"{name}_metadata.json")
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(meta, fh, indent=2)
            fh.write("\n")
        written.append(path)
    else:
        payload = {"tables": {t.name: table_records(t) for t in tables},
                   "metadata": meta}
        path = os.path.join(out, f"{name}.json")
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
        written.append(path)
    return written


def _emit(cfg: ExperimentConfig, name: str, tables: List[Table], meta: Dict,
          stdout_tables: Optional[List[Table]] = None) -> None:
    for t in stdout_tables if stdout_tables is not None else tables:
        sys.stdout.write(render_stdout(t))
    for path in _write_outputs(cfg, name, tables, meta):
        print(f"wrote {path}", file=sys.stderr)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _load_config(args)
        if args.command == "spectrum":
            table, meta = run_spectrum(cfg)
            _emit(cfg, "spectrum", [table], meta)
        elif args.command == "reproduce":
            tables, meta = run_figure(cfg, args.figure)
            _emit(cfg, args.figure, tables, meta, stdout_tables=tables[:1])
        elif args.command == "predict":
            table, meta = run_predict(cfg)
            _emit(cfg, "predict", [table], meta)
        elif args.command == "sweep":
            try:
                values = [float(v) for v in args.values.split(",") if v.strip()]
            except ValueError:
                print(f"error: cannot parse --values {args.values!r}", file=sys.stderr)
                return 2
            if args.workers < 1:
                print("error: --workers must be >= 1", file=sys.stderr)
                return 2
            table, meta = run_sweep(cfg, args.param, values, workers=args.workers)
            _emit(cfg, "sweep", [table], meta)
        elif args.command == "wkb":
            table, meta = run_wkb(cfg, args.rank)
            _emit(cfg, "wkb", [table], meta)
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 3
    except (NyqmodesError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
