"""Semiclassical (WKB) cross-check for well-resolved interior modes.

Modes far below the lattice ceiling but well above the potential scale are
ordinary oscillatory waves; their sampled amplitude must follow the classical
(λ/(λ−V))^{1/4} profile. This gives an independent control: the same machinery
that detects envelope localization at the top of the spectrum should report a
flat, WKB-conforming amplitude here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .eigen import SpectrumSlice
from .gridpot import Grid, Potential, sample_potential

__all__ = ["WkbMode", "WkbReport", "wkb_evaluate", "wkb_compare"]

#: partner gap must be this fraction of the next distinct gap (or less)
PAIR_GAP_RATIO = 1e-3
#: minimum resolved wavelength, in grid spacings
MIN_SAMPLES_PER_WAVELENGTH = 10.0


@dataclass(frozen=True, eq=False)
class WkbMode:
    """Amplitude/phase form A(x)·cos(S(x)) of a semiclassical mode."""

    eigenvalue: float
    amplitude: np.ndarray
    phase: np.ndarray
    sign: int


@dataclass(frozen=True)
class WkbReport:
    rank: int
    eigenvalue: float
    method: str  # "pair" or "extrema"
    deviation: float
    scale: float


def _band_floor(p: Potential, g: Grid) -> float:
    v = sample_potential(p, g)
    return 2.0 * max(float(v.max()), 0.0)


def band_limits(p: Potential, g: Grid) -> tuple:
    """(floor, ceiling) of eigenvalues the semiclassical check accepts."""
    ceiling = (np.pi / (MIN_SAMPLES_PER_WAVELENGTH / 2.0 * g.h)) ** 2
    return _band_floor(p, g), float(ceiling)


def wkb_evaluate(p: Potential, g: Grid, eigenvalue: float, sign: int = 1) -> WkbMode:
    """Sample the leading-order WKB amplitude and phase on the grid.

    Requires λ > 2·max(V, 0): below that the turning-point region invalidates
    the expansion (and the amplitude formula loses meaning where V ≥ λ).
    """
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign!r}")
    lam = float(eigenvalue)
    floor = _band_floor(p, g)
    if not lam > floor or lam <= 0.0:
        raise ValueError(
            f"eigenvalue {lam:.6g} is not semiclassical here: need lambda > {floor:.6g}"
        )
    v = sample_potential(p, g)
    amplitude = (lam / (lam - v)) ** 0.25
    # cumulative trapezoid of V from x_min, node-exact match to phase_integral
    cum = np.concatenate(([0.0], np.cumsum(0.5 * g.h * (v[:-1] + v[1:]))))
    root = np.sqrt(lam)
    phase = sign * (root * (g.x - g.x_min) - cum / root)
    amplitude.setflags(write=False)
    phase.setflags(write=False)
    return WkbMode(eigenvalue=lam, amplitude=amplitude, phase=phase, sign=sign)


def _pair_partner(spectrum: SpectrumSlice, idx: int):
    """Index of a near-degenerate partner, or None if the gap is not tiny.

    On a periodic domain traveling-wave pairs split only by exponentially small
    tunneling, so a partner is accepted only when its gap is smaller than the
    next distinct gap by PAIR_GAP_RATIO.
    """
    lam = spectrum.eigenvalues()
    gaps = np.abs(lam - lam[idx])
    gaps[idx] = np.inf
    j = int(np.argmin(gaps))
    nearest = gaps[j]
    gaps[j] = np.inf
    second = float(gaps.min()) if np.isfinite(gaps).any() else np.inf
    if nearest <= PAIR_GAP_RATIO * second:
        return j
    return None


def _extrema_envelope(psi: np.ndarray) -> np.ndarray:
    """Envelope by circular linear interpolation between local maxima of |ψ|."""
    a = np.abs(psi)
    left = np.roll(a, 1)
    right = np.roll(a, -1)
    peaks = np.flatnonzero((a >= left) & (a >= right) & ((a > left) | (a > right)))
    if peaks.size == 0:
        return np.full_like(a, a.max())
    n = a.size
    pos = np.concatenate(([peaks[-1] - n], peaks, [peaks[0] + n]))
    val = np.concatenate(([a[peaks[-1]]], a[peaks], [a[peaks[0]]]))
    return np.interp(np.arange(n), pos, val)


def wkb_compare(
    spectrum: SpectrumSlice, p: Potential, g: Grid, rank: int, method: str = "auto"
) -> WkbReport:
    """Fit one mode's sampled envelope against the WKB amplitude profile.

    The spectrum slice must contain the mode's near-degenerate partner for the
    pair method (pass a full solve). `method` is "auto", "pair", or "extrema";
    auto uses the analytic-signal pair construction √(ψ²+ψ̃²) when a partner is
    present and falls back to interpolating local maxima of |ψ| otherwise.

    The deviation is max|α·env − A_wkb| / max(A_wkb) with α fitted by least
    squares — the eigenvector normalization carries no physical scale.
    """
    if method not in ("auto", "pair", "extrema"):
        raise ValueError(f"unknown method {method!r}")
    if not 1 <= rank <= len(spectrum):
        raise ValueError(f"rank {rank} out of range for a {len(spectrum)}-mode slice")
    pair = spectrum[rank - 1]
    lam = pair.eigenvalue

    floor, ceiling = band_limits(p, g)
    if lam > ceiling:
        raise ValueError(
            f"eigenvalue {lam:.6g} is undersampled: fewer than "
            f"{MIN_SAMPLES_PER_WAVELENGTH:g} points per wavelength"
        )
    # the floor is enforced by wkb_evaluate below

    psi = pair.vector
    chosen = method
    if chosen == "auto" or chosen == "pair":
        partner = _pair_partner(spectrum, rank - 1)
        if partner is None:
            if chosen == "pair":
                raise ValueError("no near-degenerate partner present in the slice")
            chosen = "extrema"
        else:
            chosen = "pair"
            psi_t = spectrum[partner].vector
            env = np.sqrt(psi * psi + psi_t * psi_t)
    if chosen == "extrema":
        env = _extrema_envelope(psi)

    wkb = wkb_evaluate(p, g, lam)
    amp = wkb.amplitude
    denom = float(env @ env)
    alpha = float(env @ amp) / denom
    deviation = float(np.max(np.abs(alpha * env - amp)) / amp.max())
    return WkbReport(
        rank=rank, eigenvalue=lam, method=chosen, deviation=deviation, scale=alpha
    )
