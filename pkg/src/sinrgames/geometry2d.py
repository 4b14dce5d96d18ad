"""Planar version of the shared-band cell: the more-interfered BS gets a disc."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateInput

__all__ = ["DiscCell", "disc_cell_2d"]


@dataclass(frozen=True)
class DiscCell:
    """Cell of BS ``owner``; the rest of the plane belongs to the other BS."""

    center: tuple[float, float]
    radius: float
    owner: int
    nonempty: bool
    tau: float

    def contains(self, p) -> bool:
        if not self.nonempty:
            return False
        return math.hypot(p[0] - self.center[0], p[1] - self.center[1]) <= self.radius


def disc_cell_2d(p1, p2, B_alpha: float, params=None) -> DiscCell:
    """Disc of mobiles preferring BS 2 at ``p2`` over BS 1 at ``p1``.

    ``B_alpha`` in ``(0, 1)`` is the alpha-th root of the interference ratio
    (BS 2 more interfered).  The disc is the set where
    ``|p - p2|**2 + 1 <= B**2 * (|p - p1|**2 + 1)``.  ``params`` is accepted
    for interface symmetry; the geometry does not depend on it.
    """
    if B_alpha == 1.0:
        raise DegenerateInput("B_alpha == 1: the boundary is the perpendicular bisector")
    if not 0.0 < B_alpha < 1.0:
        raise ValueError(f"B_alpha must lie in (0, 1), got {B_alpha}")
    (x1, y1), (x2, y2) = p1, p2
    if (x1, y1) == (x2, y2):
        raise DegenerateInput("collocated BSs: every association is an equilibrium")
    B2 = B_alpha * B_alpha
    one_m = 1.0 - B2
    tau = math.hypot(x1 - x2, y1 - y2) * B_alpha / one_m
    center = ((x2 - x1 * B2) / one_m, (y2 - y1 * B2) / one_m)
    if tau < 1.0:
        return DiscCell(center, 0.0, 2, False, tau)
    return DiscCell(center, math.sqrt((tau - 1.0) * (tau + 1.0)), 2, True, tau)
