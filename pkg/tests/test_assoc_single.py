import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from sinrgames import (IntervalSet, ScenarioParams, cell_thresholds, equilibrium_partition_single,
                       interference_ratio_root, kernel_g, partition_from_ratio,
                       total_received_power)


def densities(ys, x1, x2, p):
    d1 = kernel_g(ys - x1, p.alpha) / (total_received_power(x1, p) + p.noise)
    d2 = kernel_g(ys - x2, p.alpha) / (total_received_power(x2, p) + p.noise)
    return d1, d2


def oracle_violations(part, x1, x2, p, n=10_000):
    ys = np.linspace(-p.L, p.L, n)
    d1, d2 = densities(ys, x1, x2, p)
    step = ys[1] - ys[0]
    edges = [e for c in (part.cell1, part.cell2) for e in c.endpoints() if -p.L < e < p.L]
    near = np.zeros(n, dtype=bool)
    for e in edges:
        near |= np.abs(ys - e) <= step
    owner = np.array([part.owner(y) for y in ys])
    wants = np.where(d1 >= d2, 1, 2)
    return int(np.count_nonzero((owner != wants) & ~near))


def random_scenarios(count, seed):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        p = ScenarioParams(10.0, float(rng.choice([1.0, 1.5, 2.0, 3.0])), float(rng.uniform(0.05, 3)))
        yield p, float(rng.uniform(-30, 30)), float(rng.uniform(-30, 30))


def test_ratio_examples(params):
    assert interference_ratio_root(-5, 5, params) == 1.0
    assert interference_ratio_root(20, 0, params) == pytest.approx(0.2270716, abs=1e-7)
    assert interference_ratio_root(0, 20, params) == pytest.approx(4.403898, abs=1e-6)


@given(x1=st.floats(-30, 30), x2=st.floats(-30, 30))
def test_ratio_orientation(x1, x2):
    assume(abs(abs(x1) - abs(x2)) > 1e-6)
    B = interference_ratio_root(x1, x2, ScenarioParams())
    assert (B < 1) == (abs(x1) > abs(x2))
    assert interference_ratio_root(x1, -x1, ScenarioParams()) == 1.0


def test_symmetric_split(params):
    part = equilibrium_partition_single(-5, 5, params)
    assert part.cell1 == IntervalSet([(-10, 0)])
    assert part.cell2 == IntervalSet([(0, 10)])
    part = equilibrium_partition_single(-10, 10, params)
    assert part.cell1.endpoints() == [-10.0, 0.0]


def test_far_bs_example(params):
    part = equilibrium_partition_single(20, 0, params)
    (lo, hi), = part.cell2
    assert lo == pytest.approx(-5.7700, abs=5e-5)
    assert hi == pytest.approx(3.5954, abs=5e-5)
    assert part.cell1.isclose(IntervalSet([(-10, lo), (hi, 10)]))
    b = part.boundary
    assert b.tau == pytest.approx(4.78833, abs=1e-5)
    assert b.center == pytest.approx(-1.08729, abs=1e-5)
    assert b.radius == pytest.approx(4.68274, abs=1e-5)
    assert oracle_violations(part, 20, 0, params, n=100_000) == 0


def test_grid_oracle_random_scenarios():
    bad = [(p, x1, x2) for p, x1, x2 in random_scenarios(200, 7)
           if oracle_violations(equilibrium_partition_single(x1, x2, p), x1, x2, p)]
    assert bad == []


def test_boundary_indifference():
    for p, x1, x2 in random_scenarios(200, 11):
        part = equilibrium_partition_single(x1, x2, p)
        for e in part.cell2.endpoints():
            if -p.L < e < p.L:
                d1, d2 = densities(np.array([e]), x1, x2, p)
                assert abs(d1[0] - d2[0]) <= 1e-8 * max(d1[0], 1.0)


@given(x1=st.floats(-30, 30), x2=st.floats(-30, 30))
def test_swap_and_reflection(x1, x2):
    p = ScenarioParams()
    part = equilibrium_partition_single(x1, x2, p)
    if x1 != x2:
        assert equilibrium_partition_single(x2, x1, p).isclose(part.swapped(), 1e-9)
    assert equilibrium_partition_single(-x1, -x2, p).isclose(part.reflected(), 1e-9)


@given(x1=st.floats(-30, 30), x2=st.floats(-30, 30))
def test_partition_covers_segment(x1, x2):
    p = ScenarioParams()
    part = equilibrium_partition_single(x1, x2, p)
    assert part.cell1.measure() + part.cell2.measure() == pytest.approx(2 * p.L, abs=1e-9)
    assert min(len(part.cell1), len(part.cell2)) <= 1


def test_non_convex_cell(params):
    part = equilibrium_partition_single(-2, 20, params)
    assert len(part.cell2) == 2


def test_collocated_is_flagged(params):
    part = equilibrium_partition_single(3, 3, params)
    assert part.degenerate
    assert part.cell1 == IntervalSet([(-10, 10)]) and part.cell2.is_empty


def test_small_tau_empties_cell(params):
    part = partition_from_ratio(0.05, 0.0, 1.0, params.L)
    assert part.cell2.is_empty and part.cell1.measure() == 20


def test_thresholds(params):
    th1, th2 = cell_thresholds(equilibrium_partition_single(-5, 5, params), params.L)
    assert (th1, th2) == (-10.0, 0.0)
