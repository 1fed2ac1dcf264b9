import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dlmsim.core import WAVE_BS_UNITARY
from dlmsim.oracle import aggregate_prediction, expected_counts, hom_probabilities, mzi_probabilities
from dlmsim.schedule import DataBlock, HwResetBlock, ResetBlock, Schedule, sched


def test_balanced_dark_port_exact():
    r = mzi_probabilities(0.0, 0.0)
    assert (r.p0, r.p1) == (0.0, 1.0)


@pytest.mark.parametrize("phi0, p0", [(math.pi, 1.0), (math.pi / 2, 0.5)])
def test_mzi_probabilities(phi0, p0):
    r = mzi_probabilities(phi0, 0.0)
    assert r.p0 == pytest.approx(p0, abs=1e-15)
    assert r.p1 == pytest.approx(1.0 - p0, abs=1e-15)


def _matrix_mzi(phi0, phi1):
    # independent route: explicit beamsplitter / arm / beamsplitter product
    arms = np.diag([np.exp(1j * phi0), np.exp(1j * phi1)])
    out = WAVE_BS_UNITARY @ arms @ WAVE_BS_UNITARY @ np.array([1.0, 0.0])
    return abs(out[0]) ** 2, abs(out[1]) ** 2


@given(st.floats(-20, 20), st.floats(-20, 20))
def test_matches_matrix_product(phi0, phi1):
    r = mzi_probabilities(phi0, phi1)
    p0, p1 = _matrix_mzi(phi0, phi1)
    assert r.p0 == pytest.approx(p0, abs=1e-12)
    assert r.p1 == pytest.approx(p1, abs=1e-12)


def test_normalisation_random_phases():
    rng = np.random.default_rng(0)
    for phi0, phi1 in rng.uniform(-10, 10, size=(1000, 2)):
        r = mzi_probabilities(phi0, phi1)
        assert 0.0 <= r.p0 <= 1.0 and 0.0 <= r.p1 <= 1.0
        assert abs(r.p0 + r.p1 - 1.0) <= 1e-12


@given(st.floats(-10, 10), st.floats(-10, 10), st.floats(-10, 10))
def test_common_offset(phi0, phi1, c):
    a = mzi_probabilities(phi0 + c, phi1 + c)
    b = mzi_probabilities(phi0, phi1)
    assert a.p0 == pytest.approx(b.p0, abs=1e-12)


@pytest.mark.parametrize("c", [0.5, 0.25, 1.0, -2.0])
def test_common_offset_exact_when_representable(c):
    for phi0, phi1 in [(0.75, 0.125), (1.5, -0.5), (0.0, 0.0)]:
        assert mzi_probabilities(phi0 + c, phi1 + c) == mzi_probabilities(phi0, phi1)


@given(st.floats(-10, 10), st.floats(-10, 10))
def test_periodicity(phi0, phi1):
    a = mzi_probabilities(phi0 + 2 * math.pi, phi1)
    b = mzi_probabilities(phi0, phi1)
    assert abs(a.p0 - b.p0) <= 1e-12


@pytest.mark.parametrize(
    "n, p, mean, std",
    [(100, 0.25, 25.0, 4.330127018922193), (10_000, 0.0, 0.0, 0.0), (0, 0.7, 0.0, 0.0)],
)
def test_expected_counts(n, p, mean, std):
    m, s = expected_counts(n, p)
    assert m == pytest.approx(mean)
    assert s == pytest.approx(std, abs=1e-12)


def _permanent(m):
    n = m.shape[0]
    return sum(
        np.prod([m[i, s[i]] for i in range(n)]) for s in itertools.permutations(range(n))
    )


def test_hom_against_permanents():
    # |1,1> -> |n_a, n_b>: amplitude perm(U[out, in]) / sqrt(n_a! n_b!)
    u = WAVE_BS_UNITARY
    p11 = abs(_permanent(u[np.ix_([0, 1], [0, 1])])) ** 2
    p20 = abs(_permanent(u[np.ix_([0, 0], [0, 1])])) ** 2 / 2
    p02 = abs(_permanent(u[np.ix_([1, 1], [0, 1])])) ** 2 / 2
    r = hom_probabilities()
    assert r.p11 == pytest.approx(p11, abs=1e-15) and r.p11 == 0.0
    assert r.p20 == pytest.approx(p20) and r.p02 == pytest.approx(p02)
    assert r.p20 == r.p02
    assert r.p20 + r.p02 + r.p11 == pytest.approx(1.0, abs=1e-15)


def test_aggregate_dark_port():
    pred = aggregate_prediction(sched(DataBlock(100)), 0.0, 0.0)
    assert pred.total_data_events == 100
    assert pred.d0.mean == 0.0 and pred.d0.stddev == 0.0


def test_aggregate_ignores_resets():
    a = aggregate_prediction(sched(DataBlock(50), ResetBlock(10_000), DataBlock(50)), 0.0, 0.0)
    b = aggregate_prediction(sched(DataBlock(100)), 0.0, 0.0)
    assert a == b


def test_aggregate_hwreset_quarter_wave():
    pred = aggregate_prediction(sched(DataBlock(30), HwResetBlock(), DataBlock(70)), math.pi / 2, 0.0)
    assert pred.total_data_events == 100
    assert pred.d0.mean == pytest.approx(50.0)
    assert pred.d0.stddev == pytest.approx(5.0)


block_strategy = st.one_of(
    st.builds(ResetBlock, st.integers(1, 10_000), st.integers(0, 1)),
    st.builds(HwResetBlock, st.sampled_from(["all", "bs1", "bs2"])),
)


@given(
    parts=st.lists(st.integers(1, 500), min_size=1, max_size=10),
    extras=st.lists(block_strategy, max_size=10),
    phi=st.floats(-5, 5),
    data=st.data(),
)
def test_segmentation_invariance(parts, extras, phi, data):
    total = sum(parts)
    blocks = [DataBlock(n) for n in parts]
    for extra in extras:
        blocks.insert(data.draw(st.integers(0, len(blocks))), extra)
    a = aggregate_prediction(Schedule(tuple(blocks)), phi, 0.0)
    b = aggregate_prediction(sched(DataBlock(total)), phi, 0.0)
    assert a == b
