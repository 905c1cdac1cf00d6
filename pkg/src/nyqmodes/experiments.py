"""Reproduction workflows: named datasets, parameter sweeps, serialization.

Each run_* function turns a validated ExperimentConfig into plain tables
(header + rows) plus a metadata record, leaving file and console handling to
the CLI. Numbers serialize to CSV with 17 significant digits so a written
table reloads to the exact binary doubles that produced it.
"""

from __future__ import annotations

import datetime as _dt
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ._kernels import backend_name
from ._version import VERSION
from .config import ExperimentConfig, to_dict
from .eigen import SpectrumSlice, eigen_full, top_k
from .envelope import compare, predict
from .gridpot import Grid, SechFamily, sample_potential
from .modes import ModeAnalysis, demodulate
from .operators import assemble
from .wkb import wkb_compare

__all__ = [
    "Table",
    "solve_modes",
    "run_spectrum",
    "run_figure",
    "run_predict",
    "run_sweep",
    "run_wkb",
    "render_csv",
    "render_stdout",
    "build_metadata",
]

#: raw-mode inset window, in physical coordinates (half-open, like the domain)
CARRIER_WINDOW = (-2.0, 2.0)


@dataclass(frozen=True)
class Table:
    name: str
    header: Tuple[str, ...]
    rows: Tuple[tuple, ...]


def solve_modes(cfg: ExperimentConfig, k: Optional[int] = None):
    """Assemble, solve for the top modes, and demodulate each one."""
    grid = cfg.build_grid()
    pot = cfg.build_potential()
    op = assemble(cfg.build_scheme(), pot, grid)
    spectrum = top_k(op, k if k is not None else cfg.k)
    analyses = [demodulate(pair, grid) for pair in spectrum.pairs]
    return grid, pot, spectrum, analyses


def _max_residual(spectrum: SpectrumSlice) -> float:
    return max(pair.residual for pair in spectrum.pairs)


def build_metadata(cfg: ExperimentConfig, max_residual: float, **extra) -> Dict:
    meta = {
        "config": to_dict(cfg),
        "version": VERSION,
        "backend": backend_name(),
        "max_residual": float(max_residual),
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
    }
    meta.update(extra)
    return meta


# ---------------------------------------------------------------------------
# spectrum


def run_spectrum(cfg: ExperimentConfig) -> Tuple[Table, Dict]:
    _, _, spectrum, analyses = solve_modes(cfg)
    rows = tuple(
        (
            i + 1,
            a.pair.eigenvalue,
            a.delta_lambda,
            a.tail_mass,
            a.localized,
            a.pair.residual,
        )
        for i, a in enumerate(analyses)
    )
    table = Table(
        name="spectrum",
        header=("rank", "eigenvalue", "delta_lambda", "tail_mass", "localized", "residual"),
        rows=rows,
    )
    return table, build_metadata(cfg, _max_residual(spectrum))


# ---------------------------------------------------------------------------
# figure datasets


def _case_tables(
    label: str,
    cfg: ExperimentConfig,
    ranks: Sequence[int],
) -> Tuple[List[tuple], List[tuple], Grid, SechFamily, SpectrumSlice, List[ModeAnalysis]]:
    grid, pot, spectrum, analyses = solve_modes(cfg, k=max(ranks))
    v = sample_potential(pot, grid)
    scale = np.abs(v).max()
    v_norm = v / scale if scale > 0.0 else v
    summary = []
    node_rows = []
    for rank in ranks:
        a = analyses[rank - 1]
        summary.append(
            (label, rank, a.pair.eigenvalue, a.delta_lambda, a.tail_mass, a.localized,
             a.pair.residual)
        )
        for n in range(grid.N):
            node_rows.append(
                (label, rank, n, grid.x[n], a.envelope_abs[n], a.envelope_signed[n],
                 v_norm[n])
            )
    return summary, node_rows, grid, pot, spectrum, analyses


def _carrier_rows(grid: Grid, analysis: ModeAnalysis) -> List[tuple]:
    lo, hi = CARRIER_WINDOW
    eps = 1e-9 * grid.h
    mask = (grid.x >= lo - eps) & (grid.x < hi - eps)
    idx = np.flatnonzero(mask)
    psi = analysis.pair.vector
    return [(int(n), grid.x[n], psi[n]) for n in idx]


def run_figure(cfg: ExperimentConfig, figure: str) -> Tuple[List[Table], Dict]:
    """Datasets behind the two reference figures.

    fig1: repulsive case — envelopes of the first and fourth modes, the scaled
    potential, and a raw-sample inset of the top mode over CARRIER_WINDOW.
    fig2: the repulsive fifth mode next to the attractive first, fourth, and
    fifth — the extended counterparts.
    """
    if figure not in ("fig1", "fig2"):
        raise ValueError(f"unknown figure {figure!r}: expected 'fig1' or 'fig2'")

    summary_rows: List[tuple] = []
    node_rows: List[tuple] = []
    tables: List[Table] = []
    residuals: List[float] = []

    if figure == "fig1":
        label = _case_label(cfg.potential.A)
        summary, nodes, grid, _, spectrum, analyses = _case_tables(label, cfg, (1, 4))
        summary_rows += summary
        node_rows += nodes
        residuals.append(_max_residual(spectrum))
        carrier = Table(
            name="fig1_carrier",
            header=("n", "x", "psi"),
            rows=tuple(_carrier_rows(grid, analyses[0])),
        )
    else:
        summary, nodes, _, _, spectrum, _ = _case_tables(
            _case_label(cfg.potential.A), cfg, (5,)
        )
        summary_rows += summary
        node_rows += nodes
        residuals.append(_max_residual(spectrum))
        flipped = replace(
            cfg, potential=replace(cfg.potential, A=-cfg.potential.A)
        ).validate()
        summary, nodes, _, _, spectrum, _ = _case_tables(
            _case_label(flipped.potential.A), flipped, (1, 4, 5)
        )
        summary_rows += summary
        node_rows += nodes
        residuals.append(_max_residual(spectrum))
        carrier = None

    tables.append(
        Table(
            name=f"{figure}_summary",
            header=("case", "rank", "eigenvalue", "delta_lambda", "tail_mass",
                    "localized", "residual"),
            rows=tuple(summary_rows),
        )
    )
    tables.append(
        Table(
            name=f"{figure}_modes",
            header=("case", "rank", "n", "x", "envelope_abs", "envelope_signed",
                    "V_normalized"),
            rows=tuple(node_rows),
        )
    )
    if figure == "fig1":
        tables.append(carrier)

    meta = build_metadata(
        cfg,
        max(residuals),
        figure=figure,
        carrier_window={"x_min": CARRIER_WINDOW[0], "x_max": CARRIER_WINDOW[1],
                        "closed": "left"} if figure == "fig1" else None,
    )
    return tables, meta


def _case_label(A: float) -> str:
    return f"A={A:+g}"


# ---------------------------------------------------------------------------
# envelope reference comparison


def run_predict(cfg: ExperimentConfig) -> Tuple[Table, Dict]:
    grid, pot, spectrum, analyses = solve_modes(cfg)
    pred = predict(pot, grid, refine=cfg.refine)
    rows = []
    for i, a in enumerate(analyses):
        rank = i + 1
        if rank <= len(pred.bound_states):
            r = compare(pred, a, rank)
            rows.append(
                (rank, r.delta_lambda, r.delta_lambda_pred, r.delta_gap, r.correlation,
                 r.node_count, r.node_count_pred, r.nodes_match)
            )
        else:
            rows.append((rank, a.delta_lambda, None, None, None, None, None, None))
    table = Table(
        name="predict",
        header=("rank", "delta_lambda", "delta_lambda_pred", "delta_gap", "correlation",
                "node_count", "node_count_pred", "nodes_match"),
        rows=tuple(rows),
    )
    meta = build_metadata(
        cfg, _max_residual(spectrum), refine=cfg.refine,
        bound_states=len(pred.bound_states),
    )
    return table, meta


# ---------------------------------------------------------------------------
# sweeps


_SWEEP_PARAMS = {"A": "potential.A", "w": "potential.w", "h": "grid.h"}
# direction of the expected count trend as the parameter increases;
# h carries no expectation (the continuum envelope problem does not change)
_SWEEP_TREND = {"A": 1, "w": -1, "h": 0}


def _sweep_point(cfg: ExperimentConfig, param: str, value: float) -> tuple:
    path = _SWEEP_PARAMS[param]
    section, leaf = path.split(".")
    sub = replace(getattr(cfg, section), **{leaf: value})
    case = replace(cfg, **{section: sub}).validate()
    grid = case.build_grid()
    pot = case.build_potential()
    op = assemble(case.build_scheme(), pot, grid)
    # a full solve so the localized count can never saturate at k
    spectrum = eigen_full(op)
    count = 0
    top_delta = None
    for pair in spectrum.pairs:
        a = demodulate(pair, grid)
        if top_delta is None:
            top_delta = a.delta_lambda
        if a.localized:
            count += 1
        else:
            break
    return (value, count, top_delta)


def run_sweep(
    cfg: ExperimentConfig, param: str, values: Sequence[float], workers: int = 1
) -> Tuple[Table, Dict]:
    """Vary one parameter; rows keep the caller's value order.

    Worker threads only parallelize independent solves — the row order and
    content are identical for any worker count.
    """
    if param not in _SWEEP_PARAMS:
        raise ValueError(f"unknown sweep parameter {param!r}: expected A, w, or h")
    if not values:
        raise ValueError("sweep needs at least one value")
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")

    if workers == 1:
        rows = [_sweep_point(cfg, param, v) for v in values]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_sweep_point, cfg, param, v) for v in values]
            rows = [f.result() for f in futures]

    trend = _SWEEP_TREND[param]
    monotone_ok: Optional[bool] = None
    if trend != 0:
        order = np.argsort(np.asarray(values, dtype=float))
        counts = [rows[i][1] for i in order]
        diffs = np.diff(counts) * trend
        monotone_ok = bool((diffs >= 0).all())

    table = Table(
        name="sweep",
        header=(param, "count_localized", "top_delta_lambda"),
        rows=tuple(rows),
    )
    meta = build_metadata(
        cfg, 0.0, param=param, workers=workers, monotone_ok=monotone_ok
    )
    # residual is per-point; report the field as not applicable for sweeps
    meta["max_residual"] = None
    return table, meta


# ---------------------------------------------------------------------------
# semiclassical control


def run_wkb(cfg: ExperimentConfig, rank: int) -> Tuple[Table, Dict]:
    grid = cfg.build_grid()
    pot = cfg.build_potential()
    op = assemble(cfg.build_scheme(), pot, grid)
    # partner detection needs the neighbors, so solve the full spectrum
    spectrum = eigen_full(op)
    report = wkb_compare(spectrum, pot, grid, rank)
    table = Table(
        name="wkb",
        header=("rank", "eigenvalue", "method", "deviation", "scale"),
        rows=((report.rank, report.eigenvalue, report.method, report.deviation,
               report.scale),),
    )
    return table, build_metadata(cfg, _max_residual(spectrum), rank=rank)


# ---------------------------------------------------------------------------
# serialization


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool) or isinstance(v, np.bool_):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "%.17g" % v
    return str(v)


def render_csv(table: Table) -> str:
    lines = [",".join(table.header)]
    lines.extend(",".join(_csv_cell(v) for v in row) for row in table.rows)
    return "\n".join(lines) + "\n"


def _stdout_cell(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool) or isinstance(v, np.bool_):
        return "yes" if v else "no"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "%.12g" % v
    return str(v)


def render_stdout(table: Table) -> str:
    cells = [list(table.header)] + [
        [_stdout_cell(v) for v in row] for row in table.rows
    ]
    widths = [max(len(r[c]) for r in cells) for c in range(len(table.header))]
    lines = ["  ".join(r[c].rjust(widths[c]) for c in range(len(r))) for r in cells]
    return "\n".join(lines) + "\n"


def table_records(table: Table) -> List[Dict]:
    """Rows as JSON-ready dicts (numpy scalars converted to Python)."""
    out = []
    for row in table.rows:
        rec = {}
        for key, v in zip(table.header, row):
            if isinstance(v, (bool, np.bool_)):
                rec[key] = bool(v)
            elif isinstance(v, (int, np.integer)):
                rec[key] = int(v)
            elif isinstance(v, (float, np.floating)):
                rec[key] = float(v)
            else:
                rec[key] = v
        out.append(rec)
    return out
