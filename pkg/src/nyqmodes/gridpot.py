"""Uniform periodic grids and the potentials sampled on them.

Conventions: the domain is the half-open interval [x_min, x_min + L) with N
uniform samples x_n = x_min + n*h, N*h = L. Periodic identification means
x_min + L is the same point as x_min; arrays never store the duplicate sample.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Union

import numpy as np

from .errors import GridError, PotentialError

__all__ = [
    "Grid",
    "SechFamily",
    "Tabulated",
    "Potential",
    "make_grid",
    "sample_potential",
    "phase_integral",
]


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid on [x_min, x_min + L) with N samples of step h."""

    x_min: float
    L: float
    h: float
    N: int

    @cached_property
    def x(self) -> np.ndarray:
        """Sample coordinates x_n = x_min + n*h (read-only, length N)."""
        pts = self.x_min + np.arange(self.N) * self.h
        pts.setflags(write=False)
        return pts

    def contains(self, x: float) -> bool:
        """Whether x lies in the closed interval [x_min, x_min + L]."""
        return self.x_min <= x <= self.x_min + self.L


def make_grid(x_min: float, L: float, h: float, require_even: bool = False) -> Grid:
    """Build a Grid, rejecting steps that do not divide the domain length.

    Parameters
    ----------
    x_min, L, h : floats with L > 0, h > 0 and L an integer multiple of h
        (to within rounding of the inputs).
    require_even : reject grids with odd N, for callers that need the
        alternating-sign sample pattern to be well defined.
    """
    if not (L > 0.0) or not (h > 0.0):
        raise GridError(f"domain length and step must be positive, got L={L}, h={h}")
    n = round(L / h)
    if n < 1 or abs(n * h - L) > 1e-9 * max(abs(L), 1.0):
        raise GridError(
            f"step h={h} must divide the domain length L={L} into a whole number "
            f"of cells (L/h = {L / h})"
        )
    if require_even and n % 2 != 0:
        raise GridError(f"even sample count required, got N={n}")
    return Grid(x_min=float(x_min), L=float(L), h=float(h), N=n)


@dataclass(frozen=True)
class SechFamily:
    """V(x) = A * sech(w * x). A may take either sign; w > 0.

    A > 0 is a repulsive bump, A < 0 an attractive well, A = 0 the free case.
    """

    A: float
    w: float

    def __post_init__(self):
        if not (self.w > 0.0):
            raise PotentialError(f"sech width parameter must be positive, got w={self.w}")
        if not (math.isfinite(self.A) and math.isfinite(self.w)):
            raise PotentialError("sech parameters must be finite")

    def __call__(self, x):
        # 2*exp(-t)/(1+exp(-2t)) == sech(t), stable for large |t| (no cosh overflow)
        t = np.abs(self.w * np.asarray(x, dtype=float))
        ex = np.exp(-t)
        return self.A * (2.0 * ex / (1.0 + ex * ex))

    def antiderivative(self, x):
        """Exact antiderivative of V: (2A/w) * atan(tanh(w*x/2)), zero at x=0."""
        x = np.asarray(x, dtype=float)
        return (2.0 * self.A / self.w) * np.arctan(np.tanh(0.5 * self.w * x))


@dataclass(frozen=True, eq=False)
class Tabulated:
    """Potential given by its samples on a specific grid (grid-bound)."""

    values: np.ndarray
    grid: Grid

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim != 1 or vals.shape[0] != self.grid.N:
            raise PotentialError(
                f"tabulated values must be a length-{self.grid.N} vector, "
                f"got shape {vals.shape}"
            )
        if not np.all(np.isfinite(vals)):
            raise PotentialError("tabulated values must all be finite")
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)


Potential = Union[SechFamily, Tabulated]


def sample_potential(p: Potential, g: Grid) -> np.ndarray:
    """Values V(x_n) on the grid (length N).

    Tabulated potentials are bound to their grid and are rejected on any other.
    """
    if isinstance(p, Tabulated):
        if p.grid != g:
            raise PotentialError(
                "tabulated potential is bound to a different grid "
                f"(bound: {p.grid}, requested: {g})"
            )
        return p.values.copy()
    return np.asarray(p(g.x), dtype=float)


def phase_integral(p: Potential, g: Grid, x: float) -> float:
    """∫ V(s) ds from x_min to x, by the composite trapezoid rule on the grid.

    Off-node upper limits use linear interpolation of V between the bracketing
    samples; the segment beyond the last sample uses the periodic closure
    V(x_min + L) = V(x_min). Second-order accurate in h, matching the stencils.
    """
    if not g.contains(x):
        raise GridError(
            f"integration endpoint x={x} outside the domain "
            f"[{g.x_min}, {g.x_min + g.L}]"
        )
    v = sample_potential(p, g)
    t = (x - g.x_min) / g.h
    i = min(int(math.floor(t)), g.N - 1)  # x == x_min + L lands in the last cell
    frac = t - i
    # closed nodes first: trapezoid over [x_0, x_i]
    total = 0.0
    if i > 0:
        total = g.h * (0.5 * v[0] + v[1:i].sum() + 0.5 * v[i])
    if frac > 0.0:
        v_next = v[i + 1] if i + 1 < g.N else v[0]  # periodic closure
        v_at_x = v[i] + frac * (v_next - v[i])
        total += 0.5 * (v[i] + v_at_x) * (frac * g.h)
    return float(total)
