"""Association and utilities under successive interference cancellation.

Under SIC the aggregate throughput of a cell does not depend on the decoding
order, but what a mobile *expects* when it associates does.  A pessimistic
mobile assumes it is decoded first and so behaves exactly as with single-user
decoding.  An optimistic mobile assumes it is decoded last: on a shared band
it then only sees the other cell as interference, which allows several
self-sustaining partitions, including "capture" partitions where one BS
takes every mobile.  On disjoint bands an optimistic mobile sees no
interference at all and simply joins the nearest BS.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .assoc_single import CellPartition, equilibrium_partition_single, partition_from_ratio
from .assoc_two_freq import collocated_partition
from .pathloss import IntervalSet, ScenarioParams, received_power, total_received_power

__all__ = [
    "DecodingBelief",
    "SicEquilibriumSet",
    "capture_conditions",
    "optimistic_violations",
    "sic_association_single_freq",
    "sic_utility_single_freq",
    "sic_association_two_freq",
    "sic_utility_two_freq",
]

CAPTURE_GRID = 10_000
RATIO_GRID = 10_000


class DecodingBelief(str, enum.Enum):
    OPTIMISTIC = "optimistic"
    PESSIMISTIC = "pessimistic"


@dataclass
class SicEquilibriumSet:
    """Every equilibrium partition found for one pair of BS locations.

    ``partitions`` lists interior (both-cells-nonempty) equilibria;
    ``numerical`` marks those located by the ratio scan rather than known in
    closed form.  Capture partitions are reported through the two flags.
    """

    partitions: list[CellPartition]
    capture_all_to_1: bool = False
    capture_all_to_2: bool = False
    numerical: list[bool] = field(default_factory=list)
    ratios: list[float] = field(default_factory=list)

    def capture_partitions(self, L: float) -> list[CellPartition]:
        full, empty = IntervalSet([(-L, L)]), IntervalSet()
        out = []
        if self.capture_all_to_1:
            out.append(CellPartition(full, empty, notes=("capture by BS 1",)))
        if self.capture_all_to_2:
            out.append(CellPartition(empty, full, notes=("capture by BS 2",)))
        return out


def _log_gain_ratio(y, x_num, x_den, alpha):
    # log of g(y - x_num) / g(y - x_den)
    return 0.5 * alpha * (np.log1p((y - x_den) ** 2) - np.log1p((y - x_num) ** 2))


def _capture_holds(x_keep, x_other, params, grid):
    """All mobiles stay with ``x_keep`` iff g(y-x_other)/g(y-x_keep) < 1 + E^o(x_other)/s2."""
    L, alpha = params.L, params.alpha
    ys = np.linspace(-L, L, grid)
    # Stationary points of the gain ratio solve (y - x1)(y - x2) = 1.
    s, d = x_keep + x_other, x_keep - x_other
    disc = math.sqrt(d * d + 4.0)
    extra = [y for y in (0.5 * (s - disc), 0.5 * (s + disc)) if -L <= y <= L]
    ys = np.concatenate([ys, np.array(extra + [-L, L])])
    worst = float(np.max(_log_gain_ratio(ys, x_other, x_keep, alpha)))
    bound = math.log1p(total_received_power(x_other, params) / params.noise)
    return worst < bound


def capture_conditions(x1: float, x2: float, params: ScenarioParams,
                       grid: int = CAPTURE_GRID) -> tuple[bool, bool]:
    """Whether ``([-L, L], {})`` and ``({}, [-L, L])`` are optimistic equilibria."""
    return (_capture_holds(x1, x2, params, grid), _capture_holds(x2, x1, params, grid))


def _optimistic_ratio_map(B, x1, x2, params):
    part = partition_from_ratio(B, x1, x2, params.L)
    s2 = params.noise
    num = received_power(x1, part.cell2, params) + s2
    den = received_power(x2, part.cell1, params) + s2
    return (num / den) ** (1.0 / params.alpha), part


def optimistic_violations(partition: CellPartition, x1: float, x2: float,
                          params: ScenarioParams, grid: int = 2001,
                          band: float | None = None, rtol: float = 1e-9) -> int:
    """Grid mobiles whose optimistic SINR density prefers the other BS.

    Mobiles within ``band`` of a cell boundary are skipped.
    """
    L, alpha, s2 = params.L, params.alpha, params.noise
    ys = np.linspace(-L, L, grid)
    if band is None:
        band = 2 * L / (grid - 1)
    i1 = received_power(x1, partition.cell2, params) + s2
    i2 = received_power(x2, partition.cell1, params) + s2
    d1 = (1.0 + (ys - x1) ** 2) ** (-0.5 * alpha) / i1
    d2 = (1.0 + (ys - x2) ** 2) ** (-0.5 * alpha) / i2
    edges = [e for c in (partition.cell1, partition.cell2) for e in c.endpoints()
             if -L < e < L]
    count = 0
    for y, a, b in zip(ys, d1, d2):
        if any(abs(y - e) <= band for e in edges):
            continue
        own, other = (a, b) if partition.cell1.contains(y) else (b, a)
        if own < other * (1.0 - rtol):
            count += 1
    return count


def sic_association_single_freq(x1: float, x2: float, params: ScenarioParams,
                                belief: DecodingBelief = DecodingBelief.OPTIMISTIC,
                                grid: int = RATIO_GRID) -> SicEquilibriumSet:
    """Equilibrium partitions on a shared band under SIC decoding.

    Pessimistic mobiles reproduce the single-user-decoding partition.  For
    optimistic mobiles the result collects the capture partitions, the
    symmetric split when ``x1 == -x2``, and every interior fixed point of the
    ratio map found by a sign scan on a log-spaced ratio grid.  Uniqueness is
    not guaranteed, so all candidates are returned.
    """
    belief = DecodingBelief(belief)
    if belief is DecodingBelief.PESSIMISTIC:
        return SicEquilibriumSet([equilibrium_partition_single(x1, x2, params)], numerical=[False])

    cap1, cap2 = capture_conditions(x1, x2, params)
    result = SicEquilibriumSet([], cap1, cap2)
    L = params.L
    if x1 == x2:
        return result

    if x1 == -x2:
        result.partitions.append(partition_from_ratio(1.0, x1, x2, L))
        result.numerical.append(False)
        result.ratios.append(1.0)

    s2, inv_a = params.noise, 1.0 / params.alpha
    lo = (s2 / (total_received_power(x2, params) + s2)) ** inv_a
    hi = ((total_received_power(x1, params) + s2) / s2) ** inv_a
    Bs = np.geomspace(lo, hi, grid)
    h = np.array([_optimistic_ratio_map(B, x1, x2, params)[0] - B for B in Bs])
    for k in np.nonzero(np.sign(h[:-1]) * np.sign(h[1:]) < 0)[0]:
        root = brentq(lambda B: _optimistic_ratio_map(B, x1, x2, params)[0] - B,
                      Bs[k], Bs[k + 1], xtol=1e-13)
        part = _optimistic_ratio_map(root, x1, x2, params)[1]
        if part.cell1.is_empty or part.cell2.is_empty:
            continue
        if any(abs(root - r) < 1e-7 for r in result.ratios):
            continue
        result.partitions.append(part)
        result.numerical.append(True)
        result.ratios.append(root)
    return result


def sic_utility_single_freq(x: float, own_cell: IntervalSet, other_cell: IntervalSet,
                            params: ScenarioParams) -> float:
    """Order-independent SIC throughput (nats) of a BS on a shared band."""
    signal = received_power(x, own_cell, params)
    return 0.5 * math.log1p(signal / (received_power(x, other_cell, params) + params.noise))


def sic_association_two_freq(x1: float, x2: float, params: ScenarioParams) -> CellPartition:
    """Nearest-BS (Voronoi) partition; collocated BSs share power equally."""
    L = params.L
    if x1 == x2:
        return collocated_partition(x1, params)
    v = min(max(0.5 * (x1 + x2), -L), L)
    left, right = IntervalSet([(-L, v)]), IntervalSet([(v, L)])
    return CellPartition(left, right) if x1 < x2 else CellPartition(right, left)


def sic_utility_two_freq(x: float, own_cell: IntervalSet, params: ScenarioParams) -> float:
    """SIC throughput (nats) of a BS on its own band."""
    return 0.5 * math.log1p(received_power(x, own_cell, params) / params.noise)
