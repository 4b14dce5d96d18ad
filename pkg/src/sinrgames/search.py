"""One-dimensional maximisation helpers used by the placement games."""

from __future__ import annotations

import math

import numpy as np

__all__ = ["golden_section_max", "grid_maximizers"]

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section_max(f, a: float, b: float, tol: float = 1e-6) -> tuple[float, float]:
    """Golden-section search for a maximum of ``f`` on ``[a, b]``.

    Returns ``(x, f(x))`` for the best point seen, endpoints included, so a
    bracket straddling a jump still yields the larger side.
    """
    if b < a:
        a, b = b, a
    best_x, best_f = a, f(a)
    fb = f(b)
    if fb > best_f:
        best_x, best_f = b, fb
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    for x, fx in ((c, fc), (d, fd)):
        if fx > best_f:
            best_x, best_f = x, fx
    return best_x, best_f


def grid_maximizers(f, lo: float, hi: float, n: int = 401, tol: float = 1e-6,
                    value_tol: float = 1e-9) -> tuple[list[float], float]:
    """Global maximisers of ``f`` on ``[lo, hi]``: dense scan, then refinement.

    Every local maximum of the scan is refined by golden-section search inside
    its two neighbouring cells.  All refined points whose value is within
    ``value_tol`` of the best are returned, sorted.
    """
    xs = np.linspace(lo, hi, n)
    vals = np.array([f(x) for x in xs])
    peaks = [
        i for i in range(n)
        if (i == 0 or vals[i] >= vals[i - 1]) and (i == n - 1 or vals[i] >= vals[i + 1])
    ]
    # Plateaus produce runs of equal peaks; refining one of each run suffices.
    peaks = [i for k, i in enumerate(peaks) if k == 0 or i != peaks[k - 1] + 1 or vals[i] != vals[i - 1]]
    candidates = []
    for i in peaks:
        a, b = xs[max(i - 1, 0)], xs[min(i + 1, n - 1)]
        x, fx = golden_section_max(f, a, b, tol)
        if vals[i] > fx:
            x, fx = float(xs[i]), float(vals[i])
        candidates.append((float(x), float(fx)))
    best = max(fx for _, fx in candidates)
    winners = sorted({round(x, 12) for x, fx in candidates if fx >= best - value_tol})
    merged: list[float] = []
    for x in winners:
        if not merged or x - merged[-1] > 10 * tol:
            merged.append(x)
    return merged, best
