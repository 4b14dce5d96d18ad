"""Placement games played by the base stations on top of mobile association.

The BSs lead: each picks an abscissa, the mobiles then settle into the SINR
equilibrium for that placement, and each BS collects a utility from its
cell.  This module evaluates those utilities and solves the placement level:
cooperative optima, best responses, symmetric competitive equilibria,
best-response dynamics, and the closed-form equilibrium of the SIC
two-band game.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq, minimize

from .assoc_single import CellPartition, equilibrium_partition_single
from .assoc_two_freq import equilibrium_partition_two_freq
from .errors import NumericalFailure
from .pathloss import (IntervalSet, ScenarioParams, arctan_alpha, received_power,
                       total_received_power)
from .search import golden_section_max, grid_maximizers
from .sic import sic_association_two_freq

__all__ = [
    "Mode",
    "Method",
    "PlacementPair",
    "EquilibriumReport",
    "BestResponse",
    "association",
    "bs_utility",
    "placement_utilities",
    "placement_utility",
    "sum_utility",
    "best_response",
    "received_power_sic_two_freq",
    "sic_two_freq_constant",
    "sic_two_freq_equilibrium",
    "cooperative_optimum",
    "symmetric_equilibrium",
    "best_response_dynamics",
    "sweep_utility",
    "find_jumps",
    "max_sum_power",
    "reflect_to_opposite_side",
    "shift_to_convex",
]

GRID = 401
GOLDEN_TOL = 1e-6


class Mode(str, enum.Enum):
    CDMA_SINGLE = "cdma_single_freq"
    CDMA_TWO = "cdma_two_freq"
    SIC_SINGLE = "sic_single_freq"
    SIC_TWO = "sic_two_freq"


class Method(str, enum.Enum):
    CLOSED_FORM = "closed_form"
    GRID_SEARCH = "grid_search"
    GOLDEN_SECTION = "golden_section"
    BR_DYNAMICS = "br_dynamics"


@dataclass(frozen=True)
class PlacementPair:
    x1: float
    x2: float

    def __post_init__(self):
        if not (math.isfinite(self.x1) and math.isfinite(self.x2)):
            raise ValueError("placements must be finite")

    def swapped(self) -> "PlacementPair":
        return PlacementPair(self.x2, self.x1)

    def location(self, which: int) -> float:
        return self.x1 if which == 1 else self.x2

    def distance_to(self, other: "PlacementPair", allow_swap: bool = False) -> float:
        d = max(abs(self.x1 - other.x1), abs(self.x2 - other.x2))
        if allow_swap:
            d = min(d, max(abs(self.x1 - other.x2), abs(self.x2 - other.x1)))
        return d


@dataclass
class EquilibriumReport:
    placements: PlacementPair
    partition: CellPartition
    utilities: tuple[float, float]
    method: Method
    trace: list[PlacementPair] | None = None
    converged: bool = True
    notes: list[str] = field(default_factory=list)

    @property
    def sum_utility(self) -> float:
        return self.utilities[0] + self.utilities[1]


@dataclass
class BestResponse:
    maximizers: list[float]
    value: float

    @property
    def multiple(self) -> bool:
        return len(self.maximizers) > 1

    def nearest(self, x: float) -> float:
        return min(self.maximizers, key=lambda m: (abs(m - x), m))


def association(x1: float, x2: float, params: ScenarioParams, mode: Mode) -> CellPartition:
    """Equilibrium cells used by the placement game in ``mode``.

    The shared-band SIC game uses pessimistic mobiles, whose partition is
    unique; optimistic mobiles can sustain several partitions.
    """
    mode = Mode(mode)
    if mode in (Mode.CDMA_SINGLE, Mode.SIC_SINGLE):
        return equilibrium_partition_single(x1, x2, params)
    if mode is Mode.CDMA_TWO:
        return equilibrium_partition_two_freq(x1, x2, params)
    return sic_association_two_freq(x1, x2, params)


def bs_utility(x: float, cells: CellPartition, which: int, params: ScenarioParams,
               mode: Mode) -> float:
    """Utility of BS ``which`` located at ``x`` given the cell partition."""
    mode = Mode(mode)
    own = cells.cell(which)
    other = cells.cell(3 - which)
    s2 = params.noise
    if own.is_empty:
        return 0.0
    if mode is Mode.CDMA_SINGLE:
        return 0.5 * received_power(x, own, params) / (total_received_power(x, params) + s2)
    if mode is Mode.CDMA_TWO:
        u = received_power(x, own, params)
        return 0.5 * u / (u + s2)
    if mode is Mode.SIC_SINGLE:
        sig = received_power(x, own, params)
        return 0.5 * math.log1p(sig / (received_power(x, other, params) + s2))
    if cells.degenerate:
        u = 0.5 * total_received_power(x, params)
    else:
        u = received_power(x, own, params)
    return 0.5 * math.log1p(u / s2)


def placement_utilities(x1: float, x2: float, params: ScenarioParams,
                        mode: Mode) -> tuple[CellPartition, tuple[float, float]]:
    part = association(x1, x2, params, mode)
    return part, (bs_utility(x1, part, 1, params, mode), bs_utility(x2, part, 2, params, mode))


def placement_utility(which: int, x_own: float, x_other: float, params: ScenarioParams,
                      mode: Mode) -> float:
    x1, x2 = (x_own, x_other) if which == 1 else (x_other, x_own)
    part = association(x1, x2, params, mode)
    return bs_utility(x_own, part, which, params, mode)


def sum_utility(x1: float, x2: float, params: ScenarioParams, mode: Mode) -> float:
    return sum(placement_utilities(x1, x2, params, mode)[1])


def _report(x1, x2, params, mode, method, **kw) -> EquilibriumReport:
    part, utils = placement_utilities(x1, x2, params, mode)
    return EquilibriumReport(PlacementPair(x1, x2), part, utils, method, **kw)


# --- SIC on disjoint bands -------------------------------------------------

def sic_two_freq_constant(alpha: float) -> float:
    """``a = 2 ** (2 / alpha)``, in ``(1, 4]`` for ``alpha >= 1``."""
    return 2.0 ** (2.0 / alpha)


def received_power_sic_two_freq(x1: float, x2: float, params: ScenarioParams) -> float:
    """Power ``r2`` collected by BS 2 when mobiles join the nearest BS."""
    L, alpha = params.L, params.alpha
    if x1 == x2:
        return 0.5 * total_received_power(x1, params)
    if -L <= x1 <= L and -L <= x2 <= L:
        if x2 < x1:
            return arctan_alpha(0.5 * (x1 - x2), alpha) + arctan_alpha(L + x2, alpha)
        return arctan_alpha(L - x2, alpha) + arctan_alpha(0.5 * (x2 - x1), alpha)
    part = sic_association_two_freq(x1, x2, params)
    return received_power(x2, part.cell2, params)


def _sic_two_stationary(x_other: float, L: float, a: float) -> float:
    """Root of the first-order condition for a BS facing a rival at ``x_other <= 0``."""
    if a < 4.0:
        disc = a * (L - x_other) ** 2 + (4.0 - a) * (a - 1.0)
        return (4.0 * L - a * x_other - 2.0 * math.sqrt(disc)) / (4.0 - a)
    return 0.5 * (L + x_other) - 1.5 / (L - x_other)


def _sic_two_best_response(x_other: float, params: ScenarioParams) -> BestResponse:
    L = params.L
    a = sic_two_freq_constant(params.alpha)
    r = lambda x: received_power_sic_two_freq(x_other, x, params)  # noqa: E731
    clip = lambda x: min(max(x, -L), L)  # noqa: E731
    candidates = {-L, L, clip(x_other), 0.0}
    if x_other <= 0:
        candidates.add(clip(_sic_two_stationary(x_other, L, a)))
    if x_other >= 0:
        candidates.add(clip(-_sic_two_stationary(-x_other, L, a)))
    # placements where the Voronoi boundary leaves the segment
    for kink in (-2.0 * L - x_other, 2.0 * L - x_other):
        if -L <= kink <= L:
            candidates.add(kink)
    scored = [(r(c), c) for c in candidates]
    best = max(v for v, _ in scored)
    tol = 1e-12 * max(1.0, abs(best))
    return BestResponse(sorted(c for v, c in scored if v >= best - tol), best)


def sic_two_freq_equilibrium(params: ScenarioParams) -> EquilibriumReport:
    """Closed-form equilibrium of the SIC two-band placement game.

    Both BSs sit at the origin when ``L <= sqrt(a - 1)``; otherwise they sit
    symmetrically at distance ``(sqrt(a*L**2 - (a-1)**2) - L) / (a - 1)``.
    """
    L = params.L
    a = sic_two_freq_constant(params.alpha)
    if L <= math.sqrt(a - 1.0):
        x1 = x2 = 0.0
    else:
        dist = (-L + math.sqrt(a * L * L - (a - 1.0) ** 2)) / (a - 1.0)
        x1, x2 = -dist, dist
    rep = _report(x1, x2, params, Mode.SIC_TWO, Method.CLOSED_FORM)
    br2 = _sic_two_best_response(x1, params)
    br1 = _sic_two_best_response(x2, params)
    ok = any(abs(m - x2) <= 1e-9 for m in br2.maximizers) and \
        any(abs(m - x1) <= 1e-9 for m in br1.maximizers)
    rep.converged = ok
    if not ok:
        rep.notes.append("best-response check failed")
    return rep


# --- generic best responses -------------------------------------------------

def best_response(which: int, other_location: float, params: ScenarioParams, mode: Mode,
                  grid: int = GRID, bounds: tuple[float, float] | None = None,
                  tol: float = GOLDEN_TOL) -> BestResponse:
    """All maximisers of BS ``which``'s utility against a fixed rival.

    The SIC two-band game has a closed-form answer; other modes scan ``grid``
    points of ``bounds`` (default ``[-L, L]``) and refine each local maximum
    by golden-section search, recomputing the association every time.
    """
    mode = Mode(mode)
    if which not in (1, 2):
        raise ValueError(f"BS index must be 1 or 2, got {which}")
    if mode is Mode.SIC_TWO:
        # r1(x1, x2) has the same form as r2 with roles swapped
        return _sic_two_best_response(other_location, params)
    lo, hi = bounds if bounds is not None else (-params.L, params.L)
    f = lambda x: placement_utility(which, x, other_location, params, mode)  # noqa: E731
    xs, value = grid_maximizers(f, lo, hi, grid, tol)
    return BestResponse(xs, value)


def symmetric_equilibrium(params: ScenarioParams, mode: Mode, n_scan: int = 21,
                          grid: int = GRID, xtol: float = 1e-6,
                          max_distance: float | None = None) -> EquilibriumReport:
    """Competitive equilibrium with ``-x1 = x2 = x``: solve ``x in BR2(-x)``.

    The map ``x -> BR2(-x) - x`` is scanned on ``(0, max_distance]`` and the
    first sign change is refined with Brent's method.
    """
    mode = Mode(mode)
    if mode is Mode.SIC_TWO:
        return sic_two_freq_equilibrium(params)
    top = params.L if max_distance is None else max_distance

    def gap(x):
        return best_response(2, -x, params, mode, grid).nearest(x) - x

    xs = np.linspace(top / n_scan, top, n_scan)
    hs = [gap(x) for x in xs]
    for k in range(n_scan - 1):
        if hs[k] == 0.0:
            root = xs[k]
            break
        if hs[k] > 0 > hs[k + 1]:
            root = brentq(gap, xs[k], xs[k + 1], xtol=xtol)
            break
    else:
        raise NumericalFailure("no symmetric equilibrium found on the scan range",
                               trace=list(zip(xs.tolist(), hs)))
    residual = gap(root)
    rep = _report(-root, root, params, mode, Method.GOLDEN_SECTION)
    if abs(residual) > 1e-3:
        rep.converged = False
        rep.notes.append(f"best-response gap {residual:.3g} at root: jump, not a fixed point")
    return rep


def best_response_dynamics(start: PlacementPair, params: ScenarioParams, mode: Mode,
                           tol: float = 1e-9, max_iter: int = 10_000,
                           grid: int = GRID) -> EquilibriumReport:
    """Alternate best responses (BS 2 then BS 1) until both moves drop below ``tol``.

    Converges for the SIC two-band game when ``L > sqrt(a - 1)``, where the
    best-response map is a contraction; for other modes the same scheme runs
    as a heuristic and the report says so.
    """
    mode = Mode(mode)
    x1, x2 = start.x1, start.x2
    trace = [PlacementPair(x1, x2)]
    refine = max(tol, 1e-10)
    for _ in range(max_iter):
        n2 = best_response(2, x1, params, mode, grid, tol=refine).nearest(x2)
        n1 = best_response(1, n2, params, mode, grid, tol=refine).nearest(x1)
        moved = max(abs(n1 - x1), abs(n2 - x2))
        x1, x2 = n1, n2
        trace.append(PlacementPair(x1, x2))
        if moved < tol:
            rep = _report(x1, x2, params, mode, Method.BR_DYNAMICS, trace=trace)
            if mode is not Mode.SIC_TWO:
                rep.notes.append("heuristic: no convergence guarantee in this mode")
            return rep
    rep = _report(x1, x2, params, mode, Method.BR_DYNAMICS, trace=trace, converged=False)
    rep.notes.append(f"iteration cap {max_iter} reached")
    return rep


# --- cooperative optima ---------------------------------------------------------

def cooperative_optimum(params: ScenarioParams, mode: Mode, full: bool = False,
                        grid: int = GRID, full_grid: int = 81,
                        bounds: tuple[float, float] | None = None) -> EquilibriumReport:
    """Placement maximising the sum of the two BS utilities.

    Both two-band modes have the closed-form optimum ``(-L/2, L/2)``.  The
    shared-band CDMA game searches symmetric placements (cells split at the
    origin) unless ``full`` is set; the shared-band SIC game always searches
    general pairs.
    """
    mode = Mode(mode)
    L = params.L
    if mode in (Mode.CDMA_TWO, Mode.SIC_TWO) and not full:
        return _report(-0.5 * L, 0.5 * L, params, mode, Method.CLOSED_FORM)
    if mode is Mode.CDMA_SINGLE and not full:
        f = lambda x: sum_utility(-x, x, params, mode)  # noqa: E731
        xs, _ = grid_maximizers(f, 0.0, L, grid, GOLDEN_TOL)
        rep = _report(-xs[0], xs[0], params, mode, Method.GOLDEN_SECTION)
        if len(xs) > 1:
            rep.notes.append(f"multiple symmetric optima: {xs}")
        return rep
    if bounds is None:
        bounds = (-L, L) if mode is not Mode.SIC_SINGLE else (-3.0 * L, 3.0 * L)
    return _pair_search(params, mode, bounds, full_grid)


def _pair_search(params, mode, bounds, n):
    lo, hi = bounds
    axis = np.linspace(lo, hi, n)
    vals = np.array([[sum_utility(a, b, params, mode) for b in axis] for a in axis])
    order = np.argsort(vals, axis=None)[::-1][:4]
    best_x, best_v = None, -np.inf
    for flat in order:
        i, j = np.unravel_index(flat, vals.shape)
        x0 = np.array([axis[i], axis[j]])
        res = minimize(lambda z: -sum_utility(float(np.clip(z[0], lo, hi)),
                                              float(np.clip(z[1], lo, hi)), params, mode),
                       x0, method="Nelder-Mead",
                       options={"xatol": 1e-7, "fatol": 1e-12, "maxiter": 4000})
        cand = np.clip(res.x, lo, hi)
        v = -res.fun
        if vals[i, j] > v:
            cand, v = x0, vals[i, j]
        if v > best_v:
            best_x, best_v = cand, v
    return _report(float(best_x[0]), float(best_x[1]), params, mode, Method.GRID_SEARCH)


# --- sweeps and structural helpers ----------------------------------------------

def sweep_utility(which: int, other_location: float, params: ScenarioParams, mode: Mode,
                  n: int = GRID, lo: float | None = None, hi: float | None = None):
    """Utility of BS ``which`` on a grid of its own locations; returns ``(xs, us)``."""
    if n < 2:
        raise ValueError("grid needs at least two points")
    lo = -params.L if lo is None else lo
    hi = params.L if hi is None else hi
    xs = np.linspace(lo, hi, n)
    us = np.array([placement_utility(which, float(x), other_location, params, mode) for x in xs])
    return xs, us


def find_jumps(xs, us, factor: float = 25.0) -> list[float]:
    """Locations where a sampled curve jumps by far more than its typical step."""
    du = np.abs(np.diff(np.asarray(us, dtype=float)))
    if du.size == 0:
        return []
    typical = float(np.median(du))
    span = float(np.ptp(us))
    cut = max(factor * typical, 0.05 * span)
    xs = np.asarray(xs, dtype=float)
    return [float(0.5 * (xs[k] + xs[k + 1])) for k in np.nonzero(du > cut)[0]]


def max_sum_power(params: ScenarioParams) -> float:
    """``E(-L/2, [-L, 0]) + E(L/2, [0, L])``, the largest total collected power."""
    L = params.L
    return (received_power(-0.5 * L, IntervalSet([(-L, 0.0)]), params)
            + received_power(0.5 * L, IntervalSet([(0.0, L)]), params))


def reflect_to_opposite_side(x1: float, x2: float, partition: CellPartition, L: float):
    """Move the interval-cell BS 2 across the origin (both BSs left of it).

    For ``x1 < x2 <= 0`` with ``A2 = [-a, b]`` returns the configuration
    ``(x1, -x2, A1', A2')`` where ``A2'`` is ``[-a, b]`` or its mirror image,
    whichever is centred on the positive side.
    """
    (lo, hi), = partition.cell2.intervals
    a, b = -lo, hi
    cell2 = IntervalSet([(-a, b)]) if a <= b else IntervalSet([(-b, a)])
    return x1, -x2, CellPartition(cell2.complement(L), cell2)


def shift_to_convex(x1: float, x2: float, partition: CellPartition, L: float):
    """Slide BS 2 and its interval cell ``[-a, b]`` right until the cell ends at ``L``.

    Used for ``x1 <= 0 <= x2`` with a non-convex cell 1; the result has
    convex cells ``[-L, -a + L - b)`` and ``[-a + L - b, L]``.
    """
    (lo, hi), = partition.cell2.intervals
    s = L - hi
    cell2 = IntervalSet([(lo + s, L)])
    return x1, x2 + s, CellPartition(cell2.complement(L), cell2)
