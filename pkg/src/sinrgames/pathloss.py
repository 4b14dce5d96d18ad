"""Path-loss kernel and received-power integrals.

Mobiles sit on the segment ``[-L, L]`` with unit power density; base
stations sit at height one above abscissa ``x``.  A mobile at ``y`` has
channel gain ``g(y - x) = (1 + (y - x)**2) ** (-alpha / 2)`` to a BS at
``x``.  Everything else in the package is built from the antiderivative
of ``g``, here called :func:`arctan_alpha`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import QuadratureError

__all__ = [
    "ScenarioParams",
    "IntervalSet",
    "kernel_g",
    "adaptive_simpson",
    "arctan_alpha",
    "received_power",
    "total_received_power",
]

QUAD_TOL = 1e-10
QUAD_MAX_INTERVALS = 200_000
ANCHOR_STEP = 0.5
MAX_ANCHORS = 400


@dataclass(frozen=True)
class ScenarioParams:
    """Physical scenario: segment half-length, path-loss exponent, noise std."""

    L: float = 10.0
    alpha: float = 2.0
    sigma: float = 0.3

    def __post_init__(self):
        if not (math.isfinite(self.L) and self.L > 0):
            raise ValueError(f"L must be positive and finite, got {self.L}")
        if not (math.isfinite(self.alpha) and self.alpha >= 1):
            raise ValueError(f"alpha must be >= 1, got {self.alpha}")
        if not (math.isfinite(self.sigma) and self.sigma > 0):
            raise ValueError(f"sigma must be positive and finite, got {self.sigma}")

    @property
    def noise(self) -> float:
        """Noise variance sigma**2."""
        return self.sigma * self.sigma

    def replace(self, **changes) -> "ScenarioParams":
        fields = {"L": self.L, "alpha": self.alpha, "sigma": self.sigma}
        fields.update(changes)
        return ScenarioParams(**fields)


class IntervalSet:
    """A union of at most two disjoint closed intervals, sorted by left end.

    Overlapping or touching intervals are merged and zero-length pieces are
    dropped on construction.  Open/closed endpoints are not tracked: every
    quantity computed from a cell is an integral, so endpoints carry no mass.
    """

    __slots__ = ("intervals",)
    MAX_PIECES = 2

    def __init__(self, intervals: Iterable[Sequence[float]] = ()):
        pieces = []
        for lo, hi in intervals:
            lo, hi = float(lo), float(hi)
            if math.isnan(lo) or math.isnan(hi):
                raise ValueError("interval endpoints must not be NaN")
            if hi > lo:
                pieces.append((lo, hi))
        pieces.sort()
        merged: list[tuple[float, float]] = []
        for lo, hi in pieces:
            if merged and lo <= merged[-1][1]:
                merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
            else:
                merged.append((lo, hi))
        if len(merged) > self.MAX_PIECES:
            raise ValueError(f"cell needs {len(merged)} intervals; at most 2 are supported")
        self.intervals: tuple[tuple[float, float], ...] = tuple(merged)

    @classmethod
    def empty(cls) -> "IntervalSet":
        return cls()

    @classmethod
    def clipped(cls, lo: float, hi: float, L: float) -> "IntervalSet":
        """The interval ``[lo, hi]`` intersected with ``[-L, L]``."""
        return cls([(max(lo, -L), min(hi, L))])

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    def __len__(self) -> int:
        return len(self.intervals)

    def __iter__(self):
        return iter(self.intervals)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntervalSet):
            return NotImplemented
        return self.intervals == other.intervals

    def __hash__(self) -> int:
        return hash(self.intervals)

    def __repr__(self) -> str:
        if not self.intervals:
            return "IntervalSet(empty)"
        body = " u ".join(f"[{lo:.6g}, {hi:.6g}]" for lo, hi in self.intervals)
        return f"IntervalSet({body})"

    def measure(self) -> float:
        return sum(hi - lo for lo, hi in self.intervals)

    def contains(self, y: float) -> bool:
        return any(lo <= y <= hi for lo, hi in self.intervals)

    def complement(self, L: float) -> "IntervalSet":
        """Complement within ``[-L, L]``."""
        out = []
        cursor = -L
        for lo, hi in self.intervals:
            if lo > cursor:
                out.append((cursor, min(lo, L)))
            cursor = max(cursor, hi)
        if cursor < L:
            out.append((cursor, L))
        return IntervalSet(out)

    def union(self, other: "IntervalSet") -> "IntervalSet":
        return IntervalSet(self.intervals + other.intervals)

    def reflect(self) -> "IntervalSet":
        """Mirror image about the origin."""
        return IntervalSet((-hi, -lo) for lo, hi in self.intervals)

    def shift(self, offset: float) -> "IntervalSet":
        return IntervalSet((lo + offset, hi + offset) for lo, hi in self.intervals)

    def endpoints(self) -> list[float]:
        return [e for piece in self.intervals for e in piece]

    def isclose(self, other: "IntervalSet", tol: float = 1e-9) -> bool:
        if len(self) != len(other):
            return False
        return all(
            abs(a[0] - b[0]) <= tol and abs(a[1] - b[1]) <= tol
            for a, b in zip(self.intervals, other.intervals)
        )


def kernel_g(y, alpha: float = 2.0):
    """Channel gain ``(1 + y**2) ** (-alpha / 2)``; works on floats and arrays."""
    return (1.0 + y * y) ** (-0.5 * alpha)


def adaptive_simpson(f, a: float, b: float, tol: float = QUAD_TOL,
                     max_intervals: int = QUAD_MAX_INTERVALS) -> float:
    """Integrate ``f`` over ``[a, b]`` by adaptive Simpson with Richardson correction.

    Subintervals are accepted once the two-panel and one-panel estimates
    differ by at most ``15 * tol_local``; the local tolerance halves with each
    split.  Raises :class:`QuadratureError` once ``max_intervals`` panels have
    been split without meeting the tolerance.
    """
    if a == b:
        return 0.0
    sign = 1.0
    if b < a:
        a, b, sign = b, a, -1.0

    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)

    total = 0.0
    err_estimate = 0.0
    splits = 0
    stack = [(a, b, fa, fm, fb, whole, tol)]
    while stack:
        lo, hi, flo, fmid, fhi, est, eps = stack.pop()
        mid = 0.5 * (lo + hi)
        lm, rm = 0.5 * (lo + mid), 0.5 * (mid + hi)
        flm, frm = f(lm), f(rm)
        left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid)
        right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi)
        delta = left + right - est
        if abs(delta) <= 15.0 * eps or mid <= lo or hi <= mid:
            total += left + right + delta / 15.0
            err_estimate += abs(delta) / 15.0
            continue
        splits += 1
        if splits > max_intervals:
            pending = sum(abs(item[5]) for item in stack)
            raise QuadratureError(
                f"adaptive Simpson exceeded {max_intervals} subdivisions on [{a}, {b}]",
                estimate=err_estimate + abs(delta) + pending,
            )
        half = 0.5 * eps
        stack.append((lo, mid, flo, flm, fmid, left, half))
        stack.append((mid, hi, fmid, frm, fhi, right, half))
    return sign * total


@lru_cache(maxsize=4096)
def _anchor(k: int, alpha: float, tol: float) -> float:
    """Integral of ``g`` over ``[0, k * ANCHOR_STEP]``; ``tol`` is the total budget."""
    if k == 0:
        return 0.0
    expo = -0.5 * alpha
    lo = (k - 1) * ANCHOR_STEP
    piece = adaptive_simpson(lambda y: (1.0 + y * y) ** expo, lo, lo + ANCHOR_STEP,
                             0.5 * tol / MAX_ANCHORS)
    return _anchor(k - 1, alpha, tol) + piece


@lru_cache(maxsize=65536)
def _arctan_alpha_quad(x: float, alpha: float, tol: float) -> float:
    # Integrate over |x| and restore the sign: keeps the odd symmetry exact.
    # Only the stretch past the nearest cached anchor is integrated afresh.
    ax = abs(x)
    k = min(int(ax / ANCHOR_STEP), MAX_ANCHORS)
    for j in range(1, k):  # fill the cache bottom-up, avoiding deep recursion
        _anchor(j, alpha, tol)
    expo = -0.5 * alpha
    value = _anchor(k, alpha, tol) + adaptive_simpson(
        lambda y: (1.0 + y * y) ** expo, k * ANCHOR_STEP, ax, 0.5 * tol / MAX_ANCHORS)
    return math.copysign(value, x) if x != 0 else 0.0


def arctan_alpha(x: float, alpha: float = 2.0, tol: float = QUAD_TOL) -> float:
    """Antiderivative of :func:`kernel_g` vanishing at zero.

    Reduces to ``atan`` for ``alpha == 2`` and ``asinh`` for ``alpha == 1``;
    every other exponent is integrated numerically.
    """
    x = float(x)
    if alpha == 2:
        return math.atan(x)
    if alpha == 1:
        return math.asinh(x)
    return _arctan_alpha_quad(x, float(alpha), tol)


def received_power(x: float, S: IntervalSet, params: ScenarioParams) -> float:
    """Power collected at a BS at ``x`` from the mobiles in ``S``."""
    alpha = params.alpha
    total = 0.0
    for lo, hi in S:
        total += arctan_alpha(hi - x, alpha) - arctan_alpha(lo - x, alpha)
    return total


def total_received_power(x: float, params: ScenarioParams) -> float:
    """Power collected at ``x`` from the whole segment, E^o(x)."""
    alpha, L = params.alpha, params.L
    return arctan_alpha(L - x, alpha) + arctan_alpha(L + x, alpha)
