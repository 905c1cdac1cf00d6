"""Discrete Hamiltonians -psi'' + V psi on the periodic grid.

Two stencils are provided. The central-difference scheme gives the standard
eigenproblem A v = lambda v. The Numerov scheme (fourth-order three-point) gives
the generalized symmetric-definite pair A v = lambda B v with the tridiagonal
mass B = I + (h^2/12) D2, i.e. diagonal 10/12 and edges 1/12.

Both matrices are stored cyclic-tridiagonally: diagonal d[0..N-1] and one value
per edge e[0..N-1], where e[n] sits at (n, n+1) and e[N-1] is the wraparound
corner (N-1, 0). A single stored value per edge makes symmetry structural: for
the Numerov potential term, whose literal one-sided form is not symmetric, the
edge carries the symmetric average (V_n + V_{n+1})/24, which keeps the exact
shift identity A(V + c) = A(V) + c*B.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import GridError
from .gridpot import Grid, Potential, sample_potential

__all__ = [
    "Scheme",
    "DiscreteOperator",
    "assemble",
    "apply_operator",
    "to_dense",
    "dump_csv",
]


class Scheme(str, Enum):
    CENTRAL = "cd"
    NUMEROV = "numerov"


@dataclass(frozen=True, eq=False)
class DiscreteOperator:
    """Cyclic-tridiagonal pair (A, B); B is the identity for the central scheme."""

    scheme: Scheme
    grid: Grid
    a_diag: np.ndarray
    a_edge: np.ndarray
    b_diag: np.ndarray
    b_edge: np.ndarray

    @property
    def n(self) -> int:
        return self.grid.N

    @property
    def is_generalized(self) -> bool:
        return self.scheme is Scheme.NUMEROV

    def a_norm_inf(self) -> float:
        """Infinity norm of A (max absolute row sum), used for tolerance scales."""
        e = self.a_edge
        return float(np.max(np.abs(self.a_diag) + np.abs(e) + np.abs(np.roll(e, 1))))


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def assemble(scheme: Scheme, p: Potential, g: Grid) -> DiscreteOperator:
    """Assemble the stencil matrices for the given scheme, potential, and grid."""
    scheme = Scheme(scheme)
    if g.N < 3:
        raise GridError(f"stencil needs at least 3 samples, got N={g.N}")
    v = sample_potential(p, g)
    h2 = g.h * g.h
    n = g.N
    if scheme is Scheme.CENTRAL:
        a_diag = 2.0 / h2 + v
        a_edge = np.full(n, -1.0 / h2)
        b_diag = np.ones(n)
        b_edge = np.zeros(n)
    else:
        b_diag = np.full(n, 10.0 / 12.0)
        b_edge = np.full(n, 1.0 / 12.0)
        a_diag = 2.0 / h2 + (10.0 / 12.0) * v
        a_edge = -1.0 / h2 + (v + np.roll(v, -1)) / 24.0
    return DiscreteOperator(
        scheme=scheme,
        grid=g,
        a_diag=_freeze(a_diag),
        a_edge=_freeze(a_edge),
        b_diag=_freeze(b_diag),
        b_edge=_freeze(b_edge),
    )


def _cyclic_matvec(d: np.ndarray, e: np.ndarray, v: np.ndarray) -> np.ndarray:
    # row n: d[n] v[n] + e[n] v[n+1] + e[n-1] v[n-1], indices mod N
    return d * v + e * np.roll(v, -1) + np.roll(e, 1) * np.roll(v, 1)


def apply_operator(op: DiscreteOperator, v: np.ndarray):
    """O(N) products (A v, B v) using the cyclic-tridiagonal structure."""
    v = np.asarray(v, dtype=float)
    if v.shape != (op.n,):
        raise ValueError(f"vector of length {op.n} expected, got shape {v.shape}")
    av = _cyclic_matvec(op.a_diag, op.a_edge, v)
    bv = _cyclic_matvec(op.b_diag, op.b_edge, v)
    return av, bv


def to_dense(op: DiscreteOperator):
    """Dense (A, B) as symmetric N x N arrays. B is None for the central scheme."""
    n = op.n
    idx = np.arange(n)
    nxt = (idx + 1) % n

    def build(d, e):
        m = np.zeros((n, n))
        m[idx, idx] = d
        m[idx, nxt] = e
        m[nxt, idx] = e
        return m

    a = build(op.a_diag, op.a_edge)
    b = None if op.scheme is Scheme.CENTRAL else build(op.b_diag, op.b_edge)
    return a, b


def dump_csv(op: DiscreteOperator, target) -> None:
    """Write every stored nonzero of A as `i,j,value` rows (17 significant digits).

    Entries are listed in (i, j) order; both orientations of each edge appear, so
    the dump is the full symmetric coordinate listing.
    """
    n = op.n
    entries = []
    for i in range(n):
        entries.append((i, i, op.a_diag[i]))
        entries.append((i, (i + 1) % n, op.a_edge[i]))
        entries.append(((i + 1) % n, i, op.a_edge[i]))
    entries.sort(key=lambda t: (t[0], t[1]))
    lines = ["i,j,value"]
    lines += [f"{i},{j},{val:.17g}" for i, j, val in entries]
    text = "\n".join(lines) + "\n"
    if isinstance(target, (str, bytes)) or hasattr(target, "__fspath__"):
        with open(target, "w", newline="\n") as fh:
            fh.write(text)
    elif isinstance(target, io.TextIOBase) or hasattr(target, "write"):
        target.write(text)
    else:
        raise TypeError("target must be a path or a writable text stream")
