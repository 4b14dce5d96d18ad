"""Finite population of equally spaced mobiles, used to cross-check the fluid model.

``n`` mobiles sit at the midpoints ``-L + (j + 1/2) * dy`` with ``dy = 2L/n``
and each transmits power ``dy``.  Received powers become midpoint Riemann
sums of the continuum integrals, and SIC throughput is an explicit sum of
per-mobile rates that telescopes to a closed form for any decoding order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .assoc_single import CellPartition
from .pathloss import IntervalSet, ScenarioParams, kernel_g

__all__ = [
    "DiscretePopulation",
    "discrete_received_power",
    "sic_increments",
    "discrete_sic_throughput",
    "discrete_equilibrium_check",
    "convergence_table",
]


@dataclass(frozen=True)
class DiscretePopulation:
    n: int
    L: float

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need at least one mobile")
        if self.L <= 0:
            raise ValueError("L must be positive")

    @property
    def dy(self) -> float:
        return 2.0 * self.L / self.n

    @property
    def positions(self) -> np.ndarray:
        return -self.L + (np.arange(self.n) + 0.5) * self.dy

    @property
    def total_power(self) -> float:
        return self.n * self.dy

    def indices_in(self, cell: IntervalSet) -> np.ndarray:
        """Indices of mobiles lying in ``cell``."""
        y = self.positions
        mask = np.zeros(self.n, dtype=bool)
        for lo, hi in cell:
            mask |= (y >= lo) & (y <= hi)
        return np.nonzero(mask)[0]


def _as_indices(subset, n):
    idx = np.asarray(subset)
    if idx.dtype == bool:
        idx = np.nonzero(idx)[0]
    idx = idx.astype(np.int64, copy=False)
    if idx.size and (idx.min() < 0 or idx.max() >= n):
        raise IndexError("subset index out of range")
    return idx


def discrete_received_power(x: float, subset, pop: DiscretePopulation,
                            params: ScenarioParams) -> float:
    """``sum_{y in subset} g(y - x) * dy`` with compensated summation."""
    idx = _as_indices(subset, pop.n)
    if idx.size == 0:
        return 0.0
    terms = kernel_g(pop.positions[idx] - x, params.alpha) * pop.dy
    return math.fsum(terms.tolist())


def sic_increments(x: float, decoding_order, pop: DiscretePopulation,
                   params: ScenarioParams) -> np.ndarray:
    """Per-mobile SIC rates (nats) for mobiles decoded in ``decoding_order``.

    The k-th decoded mobile sees as interference every mobile decoded after
    it; walking the order backwards, each rate is
    ``0.5 * log1p(p_k / (s2 + power of mobiles not yet cancelled))``.
    The running interference is kept with Neumaier compensation.
    """
    idx = _as_indices(decoding_order, pop.n)
    powers = kernel_g(pop.positions[idx] - x, params.alpha) * pop.dy
    rates = np.empty(idx.size)
    acc, comp = 0.0, 0.0
    s2 = params.noise
    for k in range(idx.size - 1, -1, -1):
        p = float(powers[k])
        rates[k] = 0.5 * math.log1p(p / (s2 + (acc + comp)))
        t = acc + p
        if abs(acc) >= abs(p):
            comp += (acc - t) + p
        else:
            comp += (p - t) + acc
        acc = t
    return rates


def discrete_sic_throughput(x: float, subset, decoding_order, pop: DiscretePopulation,
                            params: ScenarioParams) -> float:
    """Aggregate SIC throughput of ``subset`` decoded in ``decoding_order``."""
    idx = _as_indices(subset, pop.n)
    order = _as_indices(decoding_order, pop.n)
    if sorted(idx.tolist()) != sorted(order.tolist()):
        raise ValueError("decoding_order must be a permutation of subset")
    if idx.size == 0:
        return 0.0
    return math.fsum(sic_increments(x, order, pop, params).tolist())


def discrete_equilibrium_check(partition: CellPartition, x1: float, x2: float,
                               params: ScenarioParams, pop: DiscretePopulation,
                               mode: str = "cdma_single_freq", rtol: float = 1e-9) -> int:
    """Count mobiles whose SINR-density comparison contradicts their cell.

    Interference seen by each BS follows ``mode``: the whole population on a
    shared band, the own cell on disjoint bands, the other cell for
    optimistic SIC on a shared band, nothing for optimistic SIC on disjoint
    bands.  Mobiles within one spacing of a cell boundary are not counted.
    """
    mode = str(getattr(mode, "value", mode))
    y = pop.positions
    in1 = np.zeros(pop.n, dtype=bool)
    for lo, hi in partition.cell1:
        in1 |= (y >= lo) & (y <= hi)
    in2 = ~in1
    every = np.arange(pop.n)
    s2 = params.noise

    def power(x, mask):
        return discrete_received_power(x, every if mask is None else np.nonzero(mask)[0],
                                       pop, params)

    if mode in ("cdma_single_freq", "sic_single_freq_pessimistic"):
        i1, i2 = power(x1, None), power(x2, None)
    elif mode in ("cdma_two_freq", "sic_two_freq_pessimistic"):
        i1, i2 = power(x1, in1), power(x2, in2)
    elif mode == "sic_single_freq":
        i1, i2 = power(x1, in2), power(x2, in1)
    elif mode == "sic_two_freq":
        i1 = i2 = 0.0
    else:
        raise ValueError(f"unknown mode {mode!r}")

    d1 = kernel_g(y - x1, params.alpha) / (i1 + s2)
    d2 = kernel_g(y - x2, params.alpha) / (i2 + s2)
    L = params.L
    edges = np.array([e for c in (partition.cell1, partition.cell2) for e in c.endpoints()
                      if -L < e < L])
    near = np.zeros(pop.n, dtype=bool)
    for e in edges:
        near |= np.abs(y - e) <= pop.dy
    own = np.where(in1, d1, d2)
    other = np.where(in1, d2, d1)
    bad = (own < other * (1.0 - rtol)) & ~near
    return int(np.count_nonzero(bad))


def convergence_table(x: float, params: ScenarioParams, ns, exact: float | None = None):
    """Midpoint-sum errors ``|E_n(x) - E^o(x)|`` and successive error ratios."""
    from .pathloss import total_received_power

    if exact is None:
        exact = total_received_power(x, params)
    rows = []
    prev = None
    for n in ns:
        pop = DiscretePopulation(int(n), params.L)
        approx = discrete_received_power(x, np.arange(pop.n), pop, params)
        err = abs(approx - exact)
        rows.append((int(n), approx, err, prev / err if prev else float("nan")))
        prev = err
    return rows
