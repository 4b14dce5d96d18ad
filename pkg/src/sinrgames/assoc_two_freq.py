"""SINR-equilibrium cells when the two base stations use disjoint bands.

Each BS is interfered only by its own cell, so the cell geometry depends on
the scalar ratio ``B = ((E(x1, A1) + s2) / (E(x2, A2) + s2)) ** (1/alpha)``
and the equilibrium is the unique fixed point of ``F(B)``, the ratio
recomputed from the cells that ``B`` induces.  ``F`` is continuous and
nonincreasing but its slope blows up at the edges of ``(beta_min, beta_max)``,
so the plain iteration ``B <- F(B)`` can oscillate; :func:`solve_fixed_point`
runs the relaxed iteration ``B <- gamma*F(B) + (1-gamma)*B`` from a starting
point chosen so that the whole trajectory stays where ``F'`` is bounded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.optimize import brentq

from .assoc_single import CellPartition, partition_from_ratio
from .errors import DegenerateInput, NumericalFailure
from .pathloss import (IntervalSet, ScenarioParams, arctan_alpha, received_power,
                       total_received_power)

__all__ = [
    "Brackets",
    "FixedPointResult",
    "bracket_constants",
    "cells_of_ratio",
    "ratio_map_F",
    "inverse_F",
    "solve_fixed_point",
    "equilibrium_ratio",
    "collocated_partition",
    "equilibrium_partition_two_freq",
]

DEFAULT_TOL = 1e-9
MAX_ITER = 1_000_000
LIPSCHITZ_GRID = 512
LIPSCHITZ_SAFETY = 1.1
INVERSE_TOL = 1e-10


class Brackets(NamedTuple):
    B_min: float
    B_max: float
    beta_min: float
    beta_max: float


@dataclass
class FixedPointResult:
    """Outcome of the two-band fixed-point solve.

    ``case`` is the starting-point case label ("1", "2a", "2b", "3a", "3b",
    "4") for the relaxed iteration, or ``"bracket"`` for the root-finder.
    """

    b_star: float
    brackets: Brackets
    b0: float
    gamma: float | None
    trace: list[float]
    partition: CellPartition
    residual: float
    case: str
    restarts: int = 0
    lipschitz: float | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def bracket(self) -> tuple[tuple[float, float], tuple[float, float]]:
        b = self.brackets
        return (b.B_min, b.B_max), (b.beta_min, b.beta_max)


def bracket_constants(x1: float, x2: float, params: ScenarioParams) -> Brackets:
    """Range ``[B_min, B_max]`` of ``F`` and the band ``(beta_min, beta_max)``.

    Outside ``(beta_min, beta_max)`` the interval cell is empty, which cannot
    happen at equilibrium.
    """
    s2, inv_a = params.noise, 1.0 / params.alpha
    B_min = (s2 / (total_received_power(x2, params) + s2)) ** inv_a
    B_max = ((total_received_power(x1, params) + s2) / s2) ** inv_a
    d = 0.5 * abs(x1 - x2)
    root = math.sqrt(d * d + 1.0)
    return Brackets(B_min, B_max, 1.0 / (root + d), root + d)


def cells_of_ratio(B: float, x1: float, x2: float, params: ScenarioParams) -> CellPartition:
    """Cells ``(A1(B), A2(B))`` induced by interference ratio ``B``.

    When ``tau(B) <= 1`` the interval cell comes back empty; such a ``B`` can
    never be an equilibrium ratio but the map itself stays total.
    """
    if x1 == x2:
        raise DegenerateInput("cells_of_ratio needs distinct BS locations")
    if not B > 0:
        raise ValueError(f"B must be positive, got {B}")
    return partition_from_ratio(B, x1, x2, params.L)


def ratio_map_F(B: float, x1: float, x2: float, params: ScenarioParams) -> float:
    """Interference ratio recomputed from the cells that ``B`` induces."""
    part = cells_of_ratio(B, x1, x2, params)
    return _ratio_of_cells(part, x1, x2, params)


def _ratio_of_cells(part: CellPartition, x1, x2, params) -> float:
    s2 = params.noise
    num = received_power(x1, part.cell1, params) + s2
    den = received_power(x2, part.cell2, params) + s2
    return (num / den) ** (1.0 / params.alpha)


def inverse_F(target: float, lo: float, hi: float, x1, x2, params,
              tol: float = INVERSE_TOL) -> float:
    """Solve ``F(B) = target`` on ``[lo, hi]`` by bisection (``F`` nonincreasing)."""
    f_lo = ratio_map_F(lo, x1, x2, params) - target
    f_hi = ratio_map_F(hi, x1, x2, params) - target
    if f_lo < 0 or f_hi > 0:
        raise NumericalFailure(
            f"F - {target} does not change sign on [{lo}, {hi}]", estimate=(f_lo, f_hi))
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if ratio_map_F(mid, x1, x2, params) - target > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _starting_point(x1, x2, params, br: Brackets) -> tuple[float, str]:
    """Pick ``B0`` so that both ``B0`` and ``F(B0)`` lie in ``(beta_min, beta_max)``.

    Takes the midpoint of the admissible interval for whichever of the four
    orderings of ``B_min, B_max, beta_min, beta_max`` applies.
    """
    B_min, B_max, b_lo, b_hi = br
    F = lambda B: ratio_map_F(B, x1, x2, params)  # noqa: E731
    low_cut = B_min < b_lo
    high_cut = B_max > b_hi
    if not low_cut and not high_cut:
        return 0.5 * (B_min + B_max), "1"
    if low_cut and not high_cut:
        if F(B_max) > b_lo:
            return 0.5 * (b_lo + B_max), "2a"
        upper = inverse_F(b_lo, b_lo, B_max, x1, x2, params)
        return 0.5 * (b_lo + upper), "2b"
    if high_cut and not low_cut:
        if F(B_min) < b_hi:
            return 0.5 * (B_min + b_hi), "3a"
        lower = inverse_F(b_hi, B_min, b_hi, x1, x2, params)
        return 0.5 * (lower + b_hi), "3b"
    lower = inverse_F(b_hi, b_lo, b_hi, x1, x2, params)
    upper = inverse_F(b_lo, b_lo, b_hi, x1, x2, params)
    return 0.5 * (lower + upper), "4"


def _lipschitz_bound(lo: float, hi: float, x1, x2, params) -> float:
    """``1.1 * max |F'|`` over ``[lo, hi]`` from central differences."""
    if hi <= lo:
        return 0.0
    grid = np.linspace(lo, hi, LIPSCHITZ_GRID)
    h = max(1e-7, 1e-4 * (hi - lo))
    worst = 0.0
    for B in grid:
        a, b = max(B - h, 1e-12), B + h
        slope = (ratio_map_F(b, x1, x2, params) - ratio_map_F(a, x1, x2, params)) / (b - a)
        worst = max(worst, abs(slope))
    return LIPSCHITZ_SAFETY * worst


def solve_fixed_point(x1: float, x2: float, params: ScenarioParams,
                      tol: float = DEFAULT_TOL, max_iter: int = MAX_ITER,
                      method: str = "relaxed") -> FixedPointResult:
    """Equilibrium interference ratio ``B*`` with ``|F(B*) - B*| <= tol``.

    ``method="relaxed"`` runs the monotone relaxed iteration with a
    constructive step ``gamma = 1 / (1 + D)``; ``method="bracket"`` runs
    Brent's method on ``F(B) - B`` over ``(beta_min, beta_max) & [B_min, B_max]``
    and is used as the fast path by the placement games.
    """
    if x1 == x2:
        raise DegenerateInput("two-band fixed point is undefined for collocated BSs")
    if tol <= 0:
        raise ValueError("tol must be positive")
    br = bracket_constants(x1, x2, params)
    F = lambda B: ratio_map_F(B, x1, x2, params)  # noqa: E731

    if method == "bracket":
        b_star = equilibrium_ratio(x1, x2, params, br=br)
        return FixedPointResult(b_star, br, b_star, None, [b_star],
                                cells_of_ratio(b_star, x1, x2, params),
                                abs(F(b_star) - b_star), "bracket")
    if method != "relaxed":
        raise ValueError(f"unknown method {method!r}")

    b0, case = _starting_point(x1, x2, params, br)
    b_bar = F(b0)
    if abs(b_bar - b0) <= tol:
        return FixedPointResult(b0, br, b0, None, [b0], cells_of_ratio(b0, x1, x2, params),
                                abs(b_bar - b0), case)

    lo, hi = min(b0, b_bar), max(b0, b_bar)
    D = _lipschitz_bound(lo, hi, x1, x2, params)
    gamma = 1.0 / (1.0 + D)
    direction = 1.0 if b_bar > b0 else -1.0
    slack = 1e-12 * max(1.0, hi)
    restarts = 0
    while True:
        trace = [b0]
        B, FB = b0, b_bar
        overshoot = False
        for _ in range(max_iter):
            if abs(FB - B) <= tol:
                return FixedPointResult(B, br, b0, gamma, trace,
                                        cells_of_ratio(B, x1, x2, params), abs(FB - B),
                                        case, restarts, D)
            nxt = gamma * FB + (1.0 - gamma) * B
            if not (lo - slack <= nxt <= hi + slack) or direction * (nxt - B) < -slack:
                overshoot = True
                break
            B = nxt
            FB = F(B)
            trace.append(B)
        if not overshoot:
            raise NumericalFailure(
                f"relaxed iteration did not converge in {max_iter} steps",
                estimate=abs(FB - B), trace=trace)
        restarts += 1
        gamma *= 0.5
        if restarts > 60:
            raise NumericalFailure("step size collapsed while restarting", trace=trace)


def equilibrium_ratio(x1: float, x2: float, params: ScenarioParams,
                      br: Brackets | None = None, xtol: float = 1e-13) -> float:
    """Root of ``F(B) - B`` by Brent's method; the fast path for sweeps."""
    if x1 == x2:
        raise DegenerateInput("two-band fixed point is undefined for collocated BSs")
    if br is None:
        br = bracket_constants(x1, x2, params)
    lo = max(br.B_min, br.beta_min)
    hi = min(br.B_max, br.beta_max)
    h = lambda B: ratio_map_F(B, x1, x2, params) - B  # noqa: E731
    h_lo, h_hi = h(lo), h(hi)
    if h_lo == 0:
        return lo
    if h_hi == 0:
        return hi
    if h_lo < 0 or h_hi > 0:
        raise NumericalFailure(f"F(B) - B does not bracket a root on [{lo}, {hi}]",
                               estimate=(h_lo, h_hi))
    return brentq(h, lo, hi, xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=500)


def collocated_partition(x: float, params: ScenarioParams) -> CellPartition:
    """Split for collocated BSs giving each BS exactly half of ``E^o(x)``.

    With both BSs at ``x`` mobiles are indifferent in position and only the
    collected powers matter; the split point ``m`` solves
    ``E(x, [-L, m]) = E^o(x) / 2``.
    """
    L, alpha = params.L, params.alpha
    half = 0.5 * total_received_power(x, params)
    base = arctan_alpha(-L - x, alpha)
    m = brentq(lambda t: arctan_alpha(t - x, alpha) - base - half, -L, L, xtol=1e-14)
    return CellPartition(IntervalSet([(-L, m)]), IntervalSet([(m, L)]), None, True,
                         ("collocated BSs: cells carry equal received power",))


def equilibrium_partition_two_freq(x1: float, x2: float, params: ScenarioParams) -> CellPartition:
    """Equilibrium cells for the two-band case, collocation included."""
    if x1 == x2:
        return collocated_partition(x1, params)
    return cells_of_ratio(equilibrium_ratio(x1, x2, params), x1, x2, params)
