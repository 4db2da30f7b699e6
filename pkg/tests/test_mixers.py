import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import lipmix as lm


# ---------------------------------------------------------------------------
# coordinatewise median
# ---------------------------------------------------------------------------

def test_coordinate_median_hand_value():
    out = lm.coordinate_median((0, 0), (1, 0), (1, 1))
    assert np.array_equal(out, (1, 0))


def test_coordinate_median_dimension_mismatch():
    with pytest.raises(lm.InputError):
        lm.coordinate_median((0, 0), (1,), (1, 1))


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(-100, 100, allow_nan=False), min_size=2, max_size=2),
       st.lists(st.floats(-100, 100, allow_nan=False), min_size=2, max_size=2))
def test_coordinate_median_absorption(a, b):
    a, b = np.array(a), np.array(b)
    for args in ((a, a, b), (a, b, a), (b, a, a)):
        assert np.array_equal(lm.coordinate_median(*args), a)


def test_coordinate_median_permutation_invariant():
    rng = np.random.default_rng(0)
    for _ in range(1000):
        x, y, z = rng.normal(size=(3, 4))
        base = lm.coordinate_median(x, y, z)
        for p in ((x, z, y), (y, x, z), (y, z, x), (z, x, y), (z, y, x)):
            assert np.array_equal(lm.coordinate_median(*p), base)


# ---------------------------------------------------------------------------
# median mixer on arcs
# ---------------------------------------------------------------------------

def test_median_mixer_middle_value():
    seg = lm.make_segment(11)
    med = lm.median_mixer(seg)
    # (0.1, 0.9, 0.4) -> 0.4
    out = med(1, 9, 4)
    assert out[0] == pytest.approx(0.4, abs=1e-15)


def test_median_mixer_rejects_circles():
    with pytest.raises(lm.TopologyError):
        lm.median_mixer(lm.make_circle(1.0, 16))


def test_median_mixer_absorption_exact_on_parabola():
    c = lm.make_graph_curve("parabola", 5.0, 101)
    med = lm.median_mixer(c)
    rng = np.random.default_rng(1)
    for _ in range(500):
        a, b = (int(x) for x in rng.integers(0, 101, 2))
        for trip in ((a, a, b), (a, b, a), (b, a, a)):
            assert np.array_equal(med(*trip), c.space.points[a])


def test_median_mixer_lipschitz_at_most_one_on_segment():
    seg = lm.make_segment(500)
    med = lm.median_mixer(seg)
    rep = lm.lipschitz_estimate(med, budget=20_000, seed=3)
    assert 1 - 1e-3 <= rep.value <= 1 + 1e-12


# ---------------------------------------------------------------------------
# graph mean
# ---------------------------------------------------------------------------

def test_graph_mean_value_hand_cases():
    assert lm.graph_mean_value([-2, 3]) == 2.0
    assert lm.graph_mean_value([-2, -3, -1]) == -1.0
    assert lm.graph_mean_value([5.0, 5.0]) == 5.0


def test_graph_mean_on_parabola_points():
    c = lm.make_graph_curve("parabola", 10.0, 41)  # grid step 0.5
    xs = c.space.points[:, 0]
    mu = lm.graph_mean(c, 2)
    i_m2 = int(np.argmin(np.abs(xs + 2)))
    i_3 = int(np.argmin(np.abs(xs - 3)))
    out = mu(i_m2, i_3)
    assert out[0] == 2.0 and out[1] == 4.0


def test_graph_mean_idempotent_and_symmetric_exact():
    c = lm.make_graph_curve("cusp", 1.0, 201)
    mu = lm.graph_mean(c, 2)
    rng = np.random.default_rng(2)
    for _ in range(1000):
        a, b = (int(x) for x in rng.integers(0, 201, 2))
        assert np.array_equal(mu(a, b), mu(b, a))
        assert np.array_equal(mu(a, a), c.space.points[a])


def test_graph_mean_set_symmetry():
    c = lm.make_graph_curve("parabola", 10.0, 101)
    mu = lm.graph_mean(c, 3)
    rng = np.random.default_rng(3)
    for _ in range(500):
        a, b = (int(x) for x in rng.integers(0, 101, 2))
        assert np.array_equal(mu(a, a, b), mu(a, b, b))
        assert np.array_equal(mu(a, b, a), mu(b, b, a))


def test_graph_mean_needs_graph_curve():
    with pytest.raises(lm.InputError):
        lm.graph_mean(lm.make_segment(10), 2)


# ---------------------------------------------------------------------------
# circle local mixer and mean
# ---------------------------------------------------------------------------

def test_circle_mixer_domain_radius():
    c = lm.make_circle(1.0, 500)
    mix = lm.circle_local_mixer(c, 1.0)
    assert mix.domain.radius == pytest.approx(lm.diameter(c) / 9.0, rel=1e-12)


def test_circle_mixer_middle_of_short_arc():
    c = lm.make_circle(1.0, 1000)
    mix = lm.circle_local_mixer(c, 1.0)
    ids = [0, 8, 16]  # angles 0, ~0.05, ~0.1
    out = mix(*ids)
    assert np.array_equal(out, c.space.points[8])


def test_circle_mixer_absorption_and_symmetry():
    c = lm.make_circle(1.0, 400)
    mix = lm.circle_local_mixer(c, 1.0)
    r = mix.domain.radius
    rng = np.random.default_rng(4)
    checked = 0
    while checked < 300:
        a, b, cc = (int(x) for x in rng.integers(0, 400, 3))
        d = max(c.space.distance(a, b), c.space.distance(a, cc), c.space.distance(b, cc))
        if d > r:
            continue
        checked += 1
        base = mix(a, b, cc)
        for p in ((a, cc, b), (b, a, cc), (b, cc, a), (cc, a, b), (cc, b, a)):
            assert np.array_equal(mix(*p), base)
        assert np.array_equal(mix(a, a, b), c.space.points[a])
        # output is one of the inputs: it lies on the containing short arc
        assert any(np.array_equal(base, c.space.points[i]) for i in (a, b, cc))


def test_circle_mixer_rejects_far_triples():
    c = lm.make_circle(1.0, 64)
    mix = lm.circle_local_mixer(c, 1.0)
    with pytest.raises(lm.DomainError, match="outside"):
        mix(0, 16, 32)


def test_circle_mean_order_min():
    c = lm.make_circle(1.0, 1000)
    mu = lm.circle_local_mean(c, 1.0)
    i1 = 16   # angle ~0.1
    i2 = 32   # angle ~0.2
    out = mu(i1, i2)
    assert np.array_equal(out, c.space.points[i1])
    assert np.array_equal(mu(i2, i1), out)
    assert np.array_equal(mu(i1, i1), c.space.points[i1])


def test_circle_mean_symmetric_on_samples():
    c = lm.make_circle(1.0, 300)
    mu = lm.circle_local_mean(c, 1.0)
    r = mu.domain.radius
    rng = np.random.default_rng(5)
    checked = 0
    while checked < 1000:
        a, b = (int(x) for x in rng.integers(0, 300, 2))
        if c.space.distance(a, b) > r:
            continue
        checked += 1
        assert np.array_equal(mu(a, b), mu(b, a))


# ---------------------------------------------------------------------------
# strip retraction
# ---------------------------------------------------------------------------

def test_strip_retraction_identity_and_clamp():
    lo = lm.PiecewiseLinear([0.0, 1.0], [0.0, 0.0])
    hi = lm.PiecewiseLinear([0.0, 1.0], [1.0, 1.0])
    retr = lm.strip_retraction(lo, hi)
    assert np.array_equal(retr((0.5, 0.5)), (0.5, 0.5))
    assert np.array_equal(retr((2.0, 3.0)), (1.0, 1.0))
    assert retr.lip_bound == 1.0


def test_strip_retraction_sqrt2_bound_for_unit_slopes():
    lo = lm.PiecewiseLinear([-1.0, 0.0, 1.0], [-1.0, 0.0, -1.0])
    hi = lm.PiecewiseLinear([-1.0, 0.0, 1.0], [0.0, 1.0, 0.0])
    retr = lm.strip_retraction(lo, hi)
    assert retr.lip_bound == pytest.approx(math.sqrt(2), rel=1e-12)
    rng = np.random.default_rng(6)
    pts = rng.uniform(-3, 3, size=(300, 2))
    m = lm.map_from_function(retr, lm.MetricSpace(points=pts))
    rep = lm.lipschitz_estimate(m, budget=40_000, seed=7)
    assert rep.value <= math.sqrt(2) + 1e-9


def test_strip_retraction_rejects_crossing_graphs():
    lo = lm.PiecewiseLinear([0.0, 1.0], [0.0, 1.0])
    hi = lm.PiecewiseLinear([0.0, 1.0], [1.0, 0.0])
    with pytest.raises(lm.InputError, match="exceeds"):
        lm.strip_retraction(lo, hi)


# ---------------------------------------------------------------------------
# box mixer
# ---------------------------------------------------------------------------

def test_box_retraction_hand_value():
    from lipmix.mixers import BoxRetraction
    F = BoxRetraction(1.5)
    out = F((1.5, 0.0))
    assert np.allclose(out, (2.5, 0.0), atol=1e-12)


def test_box_retraction_identity_on_samples():
    bm = lm.box_mixer(1.5, samples_per_edge=32)
    P = bm.curve.points
    for p in P:
        assert np.array_equal(bm.retraction(p), p)


def test_box_retraction_rejects_inner_points():
    from lipmix.mixers import BoxRetraction
    F = BoxRetraction(1.5)
    with pytest.raises(lm.ConsistencyError):
        F((1.0, 0.0))  # level 0 < 1/2
    with pytest.raises(lm.ConsistencyError):
        F((0.0, 0.0))


def test_box_mixer_absorption_exact():
    bm = lm.box_mixer(1.2, samples_per_edge=64)
    c = bm.curve
    rng = np.random.default_rng(8)
    n = len(c)
    checked = 0
    while checked < 300:
        a, b = (int(x) for x in rng.integers(0, n, 2))
        if c.space.distance(a, b) > 1 / 6:
            continue
        checked += 1
        for trip in ((a, a, b), (a, b, a), (b, a, a)):
            assert np.array_equal(bm(*trip), c.space.points[a])


def test_box_mixer_output_lies_on_curve():
    bm = lm.box_mixer(1.5, samples_per_edge=64)
    c = bm.curve
    sampler = lm.sampler_for_handle(bm)
    rng = np.random.default_rng(9)
    for trip in sampler.triples(200, rng):
        out = bm(*(int(x) for x in trip))
        g = abs(abs(out[0]) - 1.0) + abs(out[1])
        assert g == pytest.approx(1.5, abs=1e-9)


def test_box_mixer_rejects_far_triples():
    bm = lm.box_mixer(1.5, samples_per_edge=16)
    n = len(bm.curve)
    with pytest.raises(lm.DomainError):
        bm(0, n // 2, n // 4)


# ---------------------------------------------------------------------------
# cusp mean
# ---------------------------------------------------------------------------

@pytest.fixture(scope="module")
def cusp_mean():
    return lm.cusp_jordan_local_mean(graph_samples=401, segment_samples=199)


def test_cusp_mean_idempotent(cusp_mean):
    pts = cusp_mean.curve.points
    for i in (0, 7, 450):
        assert np.array_equal(cusp_mean(i, i), pts[i])


def test_cusp_mean_segment_midpoint(cusp_mean):
    pts = cusp_mean.curve.points
    piece = cusp_mean.curve.aux["piece"]
    seg_ids = [i for i, p in enumerate(piece) if p == "segment"]
    a = min(seg_ids, key=lambda i: abs(pts[i, 0] - 0.5))
    b = min(seg_ids, key=lambda i: abs(pts[i, 0] + 0.5))
    assert pts[a][0] == 0.5 and pts[b][0] == -0.5
    out = cusp_mean(a, b)
    assert np.allclose(out, (0.0, 1.0), atol=1e-15)


def test_cusp_mean_mixed_pair_returns_graph_point(cusp_mean):
    pts = cusp_mean.curve.points
    piece = cusp_mean.curve.aux["piece"]
    gids = [i for i, p in enumerate(piece) if p == "graph"]
    sids = [i for i, p in enumerate(piece) if p == "segment"]
    a = min(gids, key=lambda i: abs(pts[i, 0] - 0.3))
    b = min(sids, key=lambda i: abs(pts[i, 0] - 0.9))
    assert np.linalg.norm(pts[a] - pts[b]) <= 1.0
    assert np.array_equal(cusp_mean(a, b), pts[a])
    assert np.array_equal(cusp_mean(b, a), pts[a])


def test_cusp_mean_symmetric_exact(cusp_mean):
    pts = cusp_mean.curve.points
    n = len(pts)
    rng = np.random.default_rng(10)
    checked = 0
    while checked < 1500:
        a, b = (int(x) for x in rng.integers(0, n, 2))
        if np.linalg.norm(pts[a] - pts[b]) > 1.0:
            continue
        checked += 1
        assert np.array_equal(cusp_mean(a, b), cusp_mean(b, a))


def test_cusp_mean_rejects_far_pairs(cusp_mean):
    pts = cusp_mean.curve.points
    n = len(pts)
    far = max(range(n), key=lambda i: np.linalg.norm(pts[i] - pts[0]))
    with pytest.raises(lm.DomainError):
        cusp_mean(0, far)


# ---------------------------------------------------------------------------
# mixer paths and symmetrized curves
# ---------------------------------------------------------------------------

def test_mixer_path_clamps_to_span():
    seg = lm.make_segment(101)
    med = lm.median_mixer(seg)
    gamma = lm.subarc(seg, 0, 100)
    # path between nearby endpoints stays within their span
    path = lm.mixer_path(med, 0, 10, lm.subarc(seg, 0, 10))
    assert path.points[0][0] == 0.0
    assert path.points[-1][0] == pytest.approx(0.1, abs=1e-15)
    assert lm.diameter(path) <= 0.1 * (1 + 1e-12)
    # full traversal still pinned by absorption
    full = lm.mixer_path(med, 0, 100, gamma)
    assert full.points[0][0] == 0.0 and full.points[-1][0] == 1.0


def test_mixer_path_displacement_bound():
    seg = lm.make_segment(101)
    med = lm.median_mixer(seg)
    lip = lm.lipschitz_estimate(med, budget=5000, seed=0).value
    path = lm.mixer_path(med, 20, 40, lm.subarc(seg, 20, 40))
    d_ab = seg.space.distance(20, 40)
    assert lm.diameter(path) <= 2 * lip * d_ab + 1e-12


def test_mixer_path_endpoint_mismatch():
    seg = lm.make_segment(11)
    med = lm.median_mixer(seg)
    with pytest.raises(lm.DomainError):
        lm.mixer_path(med, 0, 5, lm.subarc(seg, 2, 5))


def test_symmetrized_curve_endpoints_and_seam():
    c = lm.make_graph_curve("parabola", 2.0, 101)
    mu = lm.graph_mean(c, 2)
    gamma = lm.subarc(c, 0, 100)
    sym = lm.symmetrized_curve(mu, gamma)
    a = c.space.points[int(c.order[0])]
    b = c.space.points[int(c.order[-1])]
    assert np.array_equal(sym.points[0], a)
    assert np.array_equal(sym.points[-1], b)
    assert sym.params[0] == 0.0 and sym.params[-1] == 2.0
    # seam join equals mu evaluated both ways
    k = int(np.searchsorted(sym.params, 1.0))
    seam = sym.points[k - 1] if sym.params[k - 1] == 1.0 else None
    join1 = mu(int(c.order[-1]), int(c.order[0]))
    join2 = mu(int(c.order[0]), int(c.order[-1]))
    assert np.array_equal(join1, join2)
    if seam is not None:
        assert np.array_equal(seam, join1)


def test_symmetrized_curve_pair_bound():
    # d(curve(t), curve(t+1)) <= Lip(mu) d(a, b) at matching parameters
    c = lm.make_graph_curve("parabola", 2.0, 201)
    mu = lm.graph_mean(c, 2)
    lip = lm.lipschitz_estimate(mu, budget=10_000, seed=11).value
    gamma = lm.subarc(c, 0, 200)
    a, b = int(c.order[0]), int(c.order[-1])
    d_ab = c.space.distance(a, b)
    tn = (gamma.params - gamma.params[0]) / (gamma.params[-1] - gamma.params[0])
    first = np.array([mu(int(g), a) for g in gamma.order])
    second = np.array([mu(int(g), b) for g in gamma.order])
    gaps = np.linalg.norm(first - second, axis=1)
    assert np.all(gaps <= lip * d_ab + 1e-9)
