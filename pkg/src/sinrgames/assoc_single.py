"""SINR-equilibrium cells when both base stations share one frequency band.

With a shared band every mobile interferes at both BSs, so each BS sees the
fixed interference ``E^o(x_j) + sigma**2`` and the association reduces to a
pointwise comparison of ``g(y - x_j) / (E^o(x_j) + sigma**2)``.  The
comparison is a quadratic inequality in ``y``; the BS with more interference
gets an interval (possibly empty) and the other BS gets its complement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .pathloss import IntervalSet, ScenarioParams, total_received_power

__all__ = [
    "BoundaryParams",
    "CellPartition",
    "interference_ratio_root",
    "preferred_interval",
    "partition_from_ratio",
    "equilibrium_partition_single",
    "cell_thresholds",
]


@dataclass(frozen=True)
class BoundaryParams:
    """Quantities that fix the cell geometry for a given interference ratio.

    ``center``/``radius`` describe the interval cell of the more-interfered BS
    before clipping to the segment; they are ``None`` when that cell is empty
    or the split is a plain midpoint.
    """

    B_alpha: float
    tau: float | None = None
    center: float | None = None
    radius: float | None = None


@dataclass(frozen=True)
class CellPartition:
    """Cells of BS 1 and BS 2 covering ``[-L, L]``."""

    cell1: IntervalSet
    cell2: IntervalSet
    boundary: BoundaryParams | None = None
    degenerate: bool = False
    notes: tuple[str, ...] = field(default=())

    def cell(self, which: int) -> IntervalSet:
        if which == 1:
            return self.cell1
        if which == 2:
            return self.cell2
        raise ValueError(f"BS index must be 1 or 2, got {which}")

    def swapped(self) -> "CellPartition":
        return CellPartition(self.cell2, self.cell1, self.boundary, self.degenerate, self.notes)

    def reflected(self) -> "CellPartition":
        return CellPartition(self.cell1.reflect(), self.cell2.reflect(),
                             self.boundary, self.degenerate, self.notes)

    def owner(self, y: float) -> int:
        """BS owning mobile ``y``; boundary points go to BS 1."""
        return 1 if self.cell1.contains(y) else 2

    def isclose(self, other: "CellPartition", tol: float = 1e-9) -> bool:
        return self.cell1.isclose(other.cell1, tol) and self.cell2.isclose(other.cell2, tol)


def interference_ratio_root(x1: float, x2: float, params: ScenarioParams) -> float:
    """``((E^o(x1) + s2) / (E^o(x2) + s2)) ** (1/alpha)``."""
    s2 = params.noise
    num = total_received_power(x1, params) + s2
    den = total_received_power(x2, params) + s2
    return (num / den) ** (1.0 / params.alpha)


def preferred_interval(x_other: float, x_self: float, B: float):
    """Open interval where ``(y - x_self)**2 + 1 < B**2 * ((y - x_other)**2 + 1)``.

    Requires ``0 < B < 1``.  Returns ``(lo, hi, tau, center, radius)`` with
    ``lo``/``hi`` set to ``None`` when ``tau <= 1`` (empty set).  The roots are
    computed in cancellation-free form so the interval stays accurate as
    ``B`` approaches one, where one root tends to the midpoint of the two BSs
    and the other runs off to infinity.
    """
    if not 0.0 < B < 1.0:
        raise ValueError(f"B must lie in (0, 1), got {B}")
    B2 = B * B
    one_m = 1.0 - B2
    dist = abs(x_self - x_other)
    tau = dist * B / one_m
    center = (x_self - x_other * B2) / one_m
    if tau <= 1.0:
        return None, None, tau, center, None
    radius = math.sqrt((tau - 1.0) * (tau + 1.0))
    # Quadratic one_m*y^2 - 2*b*y + c with discriminant (one_m * radius)^2.
    b = x_self - x_other * B2
    c = x_self * x_self + 1.0 - B2 * (x_other * x_other + 1.0)
    s = math.sqrt(max(B2 * dist * dist - one_m * one_m, 0.0))
    q = b + math.copysign(s, b) if b != 0 else s
    if q == 0.0:
        r1 = r2 = 0.0
    else:
        r1, r2 = q / one_m, c / q
    lo, hi = min(r1, r2), max(r1, r2)
    return lo, hi, tau, center, radius


def _midpoint_split(x1: float, x2: float, L: float) -> tuple[IntervalSet, IntervalSet]:
    m = min(max(0.5 * (x1 + x2), -L), L)
    left, right = IntervalSet([(-L, m)]), IntervalSet([(m, L)])
    return (left, right) if x1 < x2 else (right, left)


def partition_from_ratio(B: float, x1: float, x2: float, L: float) -> CellPartition:
    """Cells induced by a given interference ratio ``B`` (x1 != x2).

    ``B < 1`` means BS 2 is more interfered and gets the interval cell,
    ``B > 1`` swaps the roles, ``B == 1`` splits at the midpoint.
    """
    if B == 1.0:
        c1, c2 = _midpoint_split(x1, x2, L)
        return CellPartition(c1, c2, BoundaryParams(1.0))
    if B < 1.0:
        lo, hi, tau, center, radius = preferred_interval(x1, x2, B)
        inner = IntervalSet() if lo is None else IntervalSet.clipped(lo, hi, L)
        bp = BoundaryParams(B, tau, center, radius)
        return CellPartition(inner.complement(L), inner, bp)
    lo, hi, tau, center, radius = preferred_interval(x2, x1, 1.0 / B)
    inner = IntervalSet() if lo is None else IntervalSet.clipped(lo, hi, L)
    bp = BoundaryParams(B, tau, center, radius)
    return CellPartition(inner, inner.complement(L), bp)


def equilibrium_partition_single(x1: float, x2: float, params: ScenarioParams) -> CellPartition:
    """Unique SINR-equilibrium partition for the shared-band case.

    Collocated BSs make every split an equilibrium; we return the whole
    segment to BS 1 and mark the partition ``degenerate``.
    """
    L = params.L
    if x1 == x2:
        return CellPartition(IntervalSet([(-L, L)]), IntervalSet(), None, True,
                             ("collocated BSs: every split is an equilibrium",))
    B = interference_ratio_root(x1, x2, params)
    return partition_from_ratio(B, x1, x2, L)


def cell_thresholds(partition: CellPartition, L: float) -> tuple[float, float]:
    """Lower and upper boundaries ``(theta1, theta2)`` of cell 1.

    ``theta2`` is the right end of the rightmost cell-1 piece that stops short
    of ``L`` (``L`` if none does); ``theta1`` is the left end of the leftmost
    cell-1 piece that starts after ``-L`` (``-L`` if none does).
    """
    theta1, theta2 = -L, L
    pieces = partition.cell1.intervals
    rights = [hi for _, hi in pieces if hi < L]
    lefts = [lo for lo, _ in pieces if lo > -L]
    if rights:
        theta2 = max(rights)
    if lefts:
        theta1 = min(lefts)
    if not pieces:
        theta1, theta2 = -L, -L
    return theta1, theta2
