import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import lipmix as lm


def _line_space():
    return lm.MetricSpace(points=np.linspace(0.0, 3.0, 4)[:, None])


def test_hausdorff_identical_sets():
    s = _line_space()
    A = lm.FiniteSubset(s, (0, 2), 4)
    assert lm.hausdorff(A, A) == 0.0


def test_hausdorff_singletons():
    s = _line_space()
    A = lm.FiniteSubset(s, (0,), 4)
    B = lm.FiniteSubset(s, (1,), 4)
    assert lm.hausdorff(A, B) == 1.0


def test_hausdorff_hand_value():
    # {0, 1} vs {0, 3}: dist(3, {0,1}) = 2 dominates
    s = _line_space()
    A = lm.FiniteSubset(s, (0, 1), 4)
    B = lm.FiniteSubset(s, (0, 3), 4)
    assert lm.hausdorff(A, B) == 2.0


def test_hausdorff_rejects_mixed_bases():
    a = _line_space()
    b = _line_space()
    with pytest.raises(lm.DomainError):
        lm.hausdorff(lm.FiniteSubset(a, (0,), 2), lm.FiniteSubset(b, (0,), 2))


def test_subset_canonicalization():
    s = _line_space()
    A = lm.FiniteSubset(s, (2, 0), 4)
    assert A.members == (0, 2)
    with pytest.raises(lm.InputError):
        lm.FiniteSubset(s, (), 4)
    with pytest.raises(lm.InputError):
        lm.FiniteSubset(s, (0, 0), 4)
    with pytest.raises(lm.InputError):
        lm.FiniteSubset(s, (0, 1, 2), 2)


@settings(max_examples=150, deadline=None)
@given(st.data())
def test_hausdorff_metric_axioms(data):
    rng_pts = data.draw(st.lists(
        st.tuples(st.floats(-10, 10), st.floats(-10, 10)),
        min_size=6, max_size=10, unique=True))
    s = lm.MetricSpace(points=np.array(rng_pts))
    n = len(rng_pts)
    draw_set = st.sets(st.integers(0, n - 1), min_size=1, max_size=4)
    A = lm.FiniteSubset(s, tuple(data.draw(draw_set)), 4)
    B = lm.FiniteSubset(s, tuple(data.draw(draw_set)), 4)
    C = lm.FiniteSubset(s, tuple(data.draw(draw_set)), 4)
    dab = lm.hausdorff(A, B)
    assert dab == lm.hausdorff(B, A)
    assert (dab == 0.0) == (A.members == B.members)
    assert dab <= lm.hausdorff(A, C) + lm.hausdorff(C, B) + 1e-12


def test_hausdorff_matches_map_characterization():
    rng = np.random.default_rng(21)
    for _ in range(60):
        pts = rng.normal(size=(9, 2))
        s = lm.MetricSpace(points=pts)
        A = lm.FiniteSubset(s, tuple({int(x) for x in rng.integers(0, 9, 3)}), 4)
        B = lm.FiniteSubset(s, tuple({int(x) for x in rng.integers(0, 9, 4)}), 4)
        assert lm.hausdorff(A, B) == pytest.approx(lm.hausdorff_by_maps(A, B), abs=1e-12)


@pytest.fixture(scope="module")
def parabola_means():
    curve = lm.make_graph_curve("parabola", 10.0, 401)
    return curve, {n: lm.graph_mean(curve, n) for n in (2, 3, 4)}


def test_retraction_fixes_singletons(parabola_means):
    curve, means = parabola_means
    r = lm.mean_to_retraction(means[3], check_budget=100, seed=0)
    for i in (0, 57, 400):
        A = lm.FiniteSubset(curve.space, (i,), 3)
        assert np.array_equal(r(A), curve.space.points[i])


def test_retraction_hand_value(parabola_means):
    curve, means = parabola_means
    xs = curve.space.points[:, 0]
    r = lm.mean_to_retraction(means[2], check_budget=100, seed=0)
    i = int(np.argmin(np.abs(xs + 2)))
    j = int(np.argmin(np.abs(xs - 3)))
    out = r(lm.FiniteSubset(curve.space, (i, j), 2))
    assert out[0] == 2.0 and out[1] == 4.0


def test_retraction_padding_invariance(parabola_means):
    curve, means = parabola_means
    mu = means[4]
    rng = np.random.default_rng(22)
    n = len(curve.space)
    for _ in range(100):
        members = tuple(sorted({int(x) for x in rng.integers(0, n, 3)}))
        fills = set()
        for pad_with in members:
            tup = members + (pad_with,) * (4 - len(members))
            fills.add(tuple(mu(*tup)))
        assert len(fills) == 1


def test_retraction_bound_on_subset_pairs(parabola_means):
    curve, means = parabola_means
    for n in (2, 3, 4):
        mu = means[n]
        lip = lm.lipschitz_estimate(mu, budget=20_000, seed=17).value
        r = lm.mean_to_retraction(mu, check_budget=100, seed=1)
        chk = r.verify_bound(pairs_budget=2000, seed=23, lip=lip)
        assert chk.passed, chk.violations[:2]


def test_retraction_rejects_non_set_symmetric_mean():
    # a symmetric-but-multiplicity-sensitive mean: the coordinatewise average
    seg = lm.make_segment(50)
    from lipmix.mixers import MeanHandle, TupleDomain

    def avg(ids):
        return np.mean(seg.space.points[list(ids)], axis=0)

    handle = MeanHandle(seg.space, 3, TupleDomain("full"), avg, "averaging_mean")
    with pytest.raises(lm.InputError, match="set-symmetric"):
        lm.mean_to_retraction(handle, check_budget=400, seed=2)


def test_retraction_capacity_guard(parabola_means):
    curve, means = parabola_means
    r = lm.mean_to_retraction(means[2], check_budget=50, seed=0)
    big = lm.FiniteSubset(curve.space, (0, 1, 2), 3)
    with pytest.raises(lm.DomainError):
        r(big)
