"""Explicit means, mixers, and retractions on sampled curves and the plane.

A mixer is a 3-ary map with the absorption property (a repeated argument
wins: sigma(a,a,b) = a in every slot pattern); a mean is a symmetric
idempotent n-ary map. Handles evaluate tuples of point ids of a sampled
space to coordinate rows, enforce their declared domain (full product,
small-diameter triples, or small-minimum-separation triples) before
evaluating, and keep absorption/idempotence identities exact in floating
point, never approximate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.spatial import cKDTree

from .curves import (
    SampledCurve,
    diameter,
    farthest_point_diameter,
    make_cusp_jordan,
    make_box_curve,
    box_profile_knots,
    _wrap_positions,
)
from .spaces import (
    ConsistencyError,
    DomainError,
    InputError,
    MetricSpace,
    TopologyError,
)

FLAVORS = ("full", "diam", "minsep")


@dataclass(frozen=True)
class TupleDomain:
    """Where a handle may be evaluated.

    "full": the whole product. "diam": tuples whose max pairwise distance
    is at most `radius`. "minsep": tuples whose min pairwise distance is at
    most `radius`.
    """

    flavor: str
    radius: float = math.inf

    def __post_init__(self):
        if self.flavor not in FLAVORS:
            raise InputError(f"unknown domain flavor {self.flavor!r}")
        if self.flavor != "full" and not (self.radius > 0):
            raise InputError("local domains need a positive radius")


class PointMapHandle:
    """A finite evaluable n-ary map on a sampled space.

    Calling the handle with point ids returns the image as a coordinate
    row. Evaluation outside the declared domain raises DomainError naming
    a violating pair.
    """

    def __init__(self, space: MetricSpace, arity: int, domain: TupleDomain,
                 evaluator: Callable, symmetric: bool, name: str,
                 curve: Optional[SampledCurve] = None):
        self.space = space
        self.arity = int(arity)
        self.domain = domain
        self._evaluator = evaluator
        self.symmetric = bool(symmetric)
        self.name = name
        self.curve = curve

    def check_tuple(self, ids) -> tuple:
        ids = tuple(self.space.check_id(i) for i in ids)
        if len(ids) != self.arity:
            raise DomainError(f"{self.name} takes {self.arity} points, got {len(ids)}")
        if self.domain.flavor == "full":
            return ids
        dists = [(self.space.distance(ids[i], ids[j]), i, j)
                 for i in range(len(ids)) for j in range(i + 1, len(ids))]
        if self.domain.flavor == "diam":
            worst = max(dists)
            if worst[0] > self.domain.radius:
                d, i, j = worst
                raise DomainError(
                    f"{self.name}: points {ids[i]} and {ids[j]} are {d:.6g} apart, "
                    f"outside the diameter-{self.domain.radius:.6g} domain")
        else:
            best = min(dists)
            if best[0] > self.domain.radius:
                d, i, j = best
                raise DomainError(
                    f"{self.name}: closest pair ({ids[i]}, {ids[j]}) is {d:.6g} apart, "
                    f"outside the min-separation-{self.domain.radius:.6g} domain")
        return ids

    def __call__(self, *ids) -> np.ndarray:
        ids = self.check_tuple(ids)
        return np.asarray(self._evaluator(ids), dtype=float)


class MixerHandle(PointMapHandle):
    def __init__(self, space, domain, evaluator, symmetric, name, curve=None):
        super().__init__(space, 3, domain, evaluator, symmetric, name, curve)


class MeanHandle(PointMapHandle):
    def __init__(self, space, arity, domain, evaluator, name, curve=None):
        if arity < 2:
            raise InputError("a mean needs arity >= 2")
        super().__init__(space, arity, domain, evaluator, True, name, curve)


# ---------------------------------------------------------------------------
# coordinatewise median and the order median on arcs
# ---------------------------------------------------------------------------

def coordinate_median(x, y, z) -> np.ndarray:
    """Componentwise median of three equal-length vectors."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y = np.atleast_1d(np.asarray(y, dtype=float))
    z = np.atleast_1d(np.asarray(z, dtype=float))
    if not (x.shape == y.shape == z.shape):
        raise InputError(f"dimension mismatch: {x.shape}, {y.shape}, {z.shape}")
    return np.sort(np.stack([x, y, z]), axis=0)[1]


def median_mixer(c: SampledCurve) -> MixerHandle:
    """The order-median mixer on a sampled arc (full domain, symmetric)."""
    if c.is_circle:
        raise TopologyError("median_mixer is defined on arcs; see circle_local_mixer")

    def evaluate(ids):
        pos = sorted(c.position_of(i) for i in ids)
        return c.space.points[c.order[pos[1]]]

    return MixerHandle(c.space, TupleDomain("full"), evaluate, True,
                       "median_mixer", curve=c)


# ---------------------------------------------------------------------------
# the min-magnitude mean on graphs of even increasing profiles
# ---------------------------------------------------------------------------

def graph_mean_value(xs) -> float:
    """(min_k |x_k|) * sign(max_k x_k) on real arguments."""
    xs = np.asarray(xs, dtype=float)
    if xs.ndim != 1 or len(xs) < 2:
        raise InputError("graph_mean_value takes at least two reals")
    return float(np.min(np.abs(xs)) * np.sign(np.max(xs)))


def _require_symmetric_grid(c: SampledCurve, name: str):
    if not np.array_equal(c.order, np.arange(len(c))):
        raise InputError(f"{name} needs a freshly generated curve (identity order)")
    xs = c.space.points[:, 0]
    if not np.array_equal(xs, -xs[::-1]):
        raise InputError(f"{name} needs an exactly sign-symmetric x grid")


def graph_mean(c: SampledCurve, arity: int = 2) -> MeanHandle:
    """The n-ary mean on a graph curve, acting through x coordinates.

    The value's x coordinate is the smallest input magnitude carrying the
    sign of the largest input, which is again a grid point because the
    grid is sign-symmetric. Depends only on the set of inputs, so it also
    induces a retraction of the subset hyperspace onto the curve.
    """
    if c.is_circle:
        raise TopologyError("graph_mean is defined on arcs")
    if "graph_profile" not in c.aux:
        raise InputError("graph_mean needs a graph-curve input")
    _require_symmetric_grid(c, "graph_mean")
    n = len(c)

    def evaluate(ids):
        xs = c.space.points[list(ids), 0]
        m = int(np.argmin(np.abs(xs)))
        sgn = np.sign(np.max(xs))
        src = int(ids[m])
        if sgn == 0:
            return c.space.points[src]
        want_positive = sgn > 0
        is_positive = xs[m] > 0 or (xs[m] == 0)
        if want_positive == is_positive:
            return c.space.points[src]
        return c.space.points[n - 1 - src]

    return MeanHandle(c.space, arity, TupleDomain("full"), evaluate,
                      "graph_mean", curve=c)


# ---------------------------------------------------------------------------
# local mixer and mean on sampled circles of bounded turning
# ---------------------------------------------------------------------------

def _curve_diameter(c: SampledCurve) -> float:
    if len(c) <= 4096:
        return diameter(c)
    return farthest_point_diameter(c.points, c.space.norm, sweeps=6)


def _gap_diameter(c: SampledCurve, a: int, b: int) -> float:
    """Diameter (lower bound) of the closed arc from position a forward to b."""
    if a == b:
        return 0.0
    pos = _wrap_positions(len(c), a, b)
    pts = c.space.points[c.order[pos]]
    if len(pts) <= 64:
        d = pts[:, None, :] - pts[None, :, :]
        return float(np.max(c.space.norm(d)))
    return farthest_point_diameter(pts, c.space.norm)


def _containing_arc_order(c: SampledCurve, ids):
    """Traversal order of a tight triple along its containing arc.

    The containing arc is the complement of the largest of the three
    circular gaps between the points (gap size = sample diameter of the
    closed gap arc; ties go to the gap starting at the lowest position).
    """
    pos = sorted(c.position_of(i) for i in ids)
    gaps = [(pos[0], pos[1]), (pos[1], pos[2]), (pos[2], pos[0])]
    sizes = [_gap_diameter(c, a, b) for a, b in gaps]
    best = max(range(3), key=lambda k: (sizes[k], -gaps[k][0]))
    arc_pos = [pos[(best + 1) % 3], pos[(best + 2) % 3], pos[best]]
    by_pos = {}
    for i in ids:
        by_pos.setdefault(c.position_of(i), int(i))
    return [by_pos[p] for p in arc_pos]


def circle_local_mixer(c: SampledCurve, turning: float) -> MixerHandle:
    """Order-median mixer on triples of small diameter on a circle.

    `turning` is the circle's bounded-turning constant C >= 1; the domain
    radius is diam/(9C). The median is taken along the containing short
    arc, so the output is always one of the three inputs.
    """
    if not c.is_circle:
        raise TopologyError("circle_local_mixer needs a circle")
    if turning < 1:
        raise InputError("turning constant must be >= 1")
    r = _curve_diameter(c) / (9.0 * turning)

    def evaluate(ids):
        arc_order = _containing_arc_order(c, ids)
        return c.space.points[arc_order[1]]

    return MixerHandle(c.space, TupleDomain("diam", r), evaluate, True,
                       "circle_local_mixer", curve=c)


def circle_local_mean(c: SampledCurve, turning: float) -> MeanHandle:
    """Order-min mean on close pairs of a circle.

    Returns the earlier of the two points along the containing
    smaller-diameter arc, traversed in the curve's orientation.
    """
    if not c.is_circle:
        raise TopologyError("circle_local_mean needs a circle")
    if turning < 1:
        raise InputError("turning constant must be >= 1")
    r = _curve_diameter(c) / (9.0 * turning)
    n = len(c)

    def evaluate(ids):
        a, b = ids
        if a == b:
            return c.space.points[a]
        pa, pb = c.position_of(a), c.position_of(b)
        d_ab = _gap_diameter(c, pa, pb)
        d_ba = _gap_diameter(c, pb, pa)
        if d_ab < d_ba or (d_ab == d_ba and pa < pb):
            return c.space.points[a]
        return c.space.points[b]

    return MeanHandle(c.space, 2, TupleDomain("diam", r), evaluate,
                      "circle_local_mean", curve=c)


# ---------------------------------------------------------------------------
# strip retraction of the plane onto the region between two graphs
# ---------------------------------------------------------------------------

def _med3(a: float, b: float, c: float) -> float:
    return sorted((a, b, c))[1]


class PiecewiseLinear:
    """Piecewise-linear function given by knots (xs strictly increasing)."""

    def __init__(self, xs, ys):
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        if xs.ndim != 1 or xs.shape != ys.shape or len(xs) < 2:
            raise InputError("need matching 1-d knot arrays of length >= 2")
        if not np.all(np.diff(xs) > 0):
            raise InputError("knot x values must be strictly increasing")
        self.xs = xs
        self.ys = ys

    @property
    def interval(self):
        return float(self.xs[0]), float(self.xs[-1])

    @property
    def lipschitz_constant(self) -> float:
        return float(np.max(np.abs(np.diff(self.ys) / np.diff(self.xs))))

    def __call__(self, x):
        return np.interp(x, self.xs, self.ys)


class StripRetraction:
    """Lipschitz retraction of the plane onto {(x, y): x in I, lo(x) <= y <= hi(x)}.

    First clamps x onto the interval (the 1-Lipschitz locally constant
    extension), then replaces y by the median of (y, lo(x), hi(x)). With
    both boundary graphs L-Lipschitz the whole map is sqrt(L^2+1)-Lipschitz
    and restricts to the identity on the strip, exactly on floats.
    """

    def __init__(self, lo: PiecewiseLinear, hi: PiecewiseLinear):
        if lo.interval != hi.interval:
            raise InputError("boundary graphs must share their interval")
        self.lo = lo
        self.hi = hi
        grid = np.unique(np.concatenate([lo.xs, hi.xs]))
        gap = hi(grid) - lo(grid)
        if np.any(gap < 0):
            k = int(np.argmax(gap < 0))
            raise InputError(
                f"lower graph exceeds upper graph at x = {grid[k]!r} "
                f"(lo = {lo(grid[k])!r}, hi = {hi(grid[k])!r})")
        self.interval = lo.interval
        self.boundary_lipschitz = max(lo.lipschitz_constant, hi.lipschitz_constant)

    @property
    def lip_bound(self) -> float:
        return math.sqrt(self.boundary_lipschitz ** 2 + 1.0)

    def __call__(self, p) -> np.ndarray:
        x, y = float(p[0]), float(p[1])
        a, b = self.interval
        fx = min(max(x, a), b)
        return np.array([fx, _med3(y, float(self.lo(fx)), float(self.hi(fx)))])


def strip_retraction(lo: PiecewiseLinear, hi: PiecewiseLinear) -> StripRetraction:
    """Retraction of the plane onto the strip between two PL graphs."""
    return StripRetraction(lo, hi)


# ---------------------------------------------------------------------------
# local mixer on the diamond level-set curves
# ---------------------------------------------------------------------------

BOX_DOMAIN_RADIUS = 1.0 / 6.0
_BOX_BRANCH_INSET = 1e-12
_BOX_SNAP_TOL = 1e-9
_BOX_RANGE_TOL = 1e-9


class BoxRetraction:
    """Retraction of the admissible region onto the curve ||x|-1| + |y| = t.

    Inside the level sublevel set the point is projected radially from
    (sign(x), 0); outside, the strip retraction onto the closed sublevel
    set lands on the boundary. Only defined off the middle rectangle and
    off the 1/2-sublevel set, which is where tight triple medians live.
    """

    def __init__(self, t: float):
        if not 1.0 < t < 2.0:
            raise InputError("box parameter t must lie in (1, 2)")
        self.t = t
        kx, ky = box_profile_knots(t)
        self.strip = StripRetraction(PiecewiseLinear(kx, -ky), PiecewiseLinear(kx, ky))

    @staticmethod
    def level(p) -> float:
        return abs(abs(float(p[0])) - 1.0) + abs(float(p[1]))

    def check_admissible(self, p):
        x, y = float(p[0]), float(p[1])
        g = self.level(p)
        if g < 0.5 - _BOX_RANGE_TOL:
            raise ConsistencyError(
                f"point ({x}, {y}) lies in the inner 1/2-sublevel set (level {g:.6g})")
        if abs(x) < 1.0 - _BOX_RANGE_TOL and abs(y) < (self.t - 1.0) - _BOX_RANGE_TOL:
            raise ConsistencyError(
                f"point ({x}, {y}) lies inside the excluded middle rectangle")

    def __call__(self, p) -> np.ndarray:
        self.check_admissible(p)
        x, y = float(p[0]), float(p[1])
        g = self.level(p)
        if g < self.t - _BOX_BRANCH_INSET:
            if x > 0:
                cx = 1.0
            elif x < 0:
                cx = -1.0
            else:
                raise ConsistencyError("radial projection undefined on the y axis")
            s = self.t / g
            return np.array([cx + s * (x - cx), s * y])
        return self.strip(p)


class BoxMixerHandle(MixerHandle):
    """Coordinatewise median followed by the retraction onto the curve."""

    def __init__(self, t: float, samples_per_edge: int = 128):
        curve = make_box_curve(t, samples_per_edge=samples_per_edge)
        retraction = BoxRetraction(t)
        pts = curve.points
        tree = cKDTree(pts)
        n = len(pts)

        def snap(q: np.ndarray) -> np.ndarray:
            dist, k = tree.query(q)
            if dist <= _BOX_SNAP_TOL:
                return pts[k]
            best = math.inf
            best_pt = None
            for k0, k1 in ((k - 1) % n, k), (k, (k + 1) % n):
                v0, v1 = pts[k0], pts[k1]
                e = v1 - v0
                s = float(np.dot(q - v0, e) / np.dot(e, e))
                s = min(max(s, 0.0), 1.0)
                cand = v0 + s * e
                d = float(np.linalg.norm(q - cand))
                if d < best:
                    best, best_pt = d, cand
            if best > _BOX_SNAP_TOL:
                raise ConsistencyError(
                    f"retraction output {q.tolist()} is {best:.3g} from the curve "
                    f"(tolerance {_BOX_SNAP_TOL:g})")
            return best_pt

        def evaluate(ids):
            p = curve.space.points[list(ids)]
            w = np.sort(p, axis=0)[1]
            return snap(retraction(w))

        super().__init__(curve.space, TupleDomain("diam", BOX_DOMAIN_RADIUS),
                         evaluate, True, "box_mixer", curve=curve)
        self.t = t
        self.retraction = retraction


def box_mixer(t: float, samples_per_edge: int = 128) -> BoxMixerHandle:
    """Local mixer on the diamond level-set curve, domain diameter 1/6.

    Stays uniformly Lipschitz (constant below 50) for every t in (1, 2)
    even though the curve's turning constant blows up as t -> 1+.
    """
    return BoxMixerHandle(t, samples_per_edge=samples_per_edge)


# ---------------------------------------------------------------------------
# local mean on the cusp Jordan curve
# ---------------------------------------------------------------------------

CUSP_DOMAIN_RADIUS = 1.0


def cusp_jordan_local_mean(graph_samples: int = 401,
                           segment_samples: int = 200) -> MeanHandle:
    """Local mean on the closed curve (graph of sqrt|x|) + top segment.

    Three cases on pairs within distance 1: both on the graph -> the
    min-magnitude graph mean through x coordinates; mixed -> the graph
    point; both strictly inside the top segment -> the combination
    weighted by distances to the two corner points. The curve has a cusp,
    hence unbounded turning, yet the mean is Lipschitz on its domain.
    """
    curve = make_cusp_jordan(graph_samples, segment_samples)
    piece = curve.aux["piece"]
    pts = curve.space.points
    n_graph = graph_samples
    corners = np.array([[1.0, 1.0], [-1.0, 1.0]])

    def corner_distance(p):
        return float(np.min(np.linalg.norm(corners - p, axis=1)))

    def evaluate(ids):
        a, b = ids
        if a == b:
            return pts[a]
        on_graph = (piece[a] == "graph", piece[b] == "graph")
        if all(on_graph):
            xs = pts[[a, b], 0]
            m = int(np.argmin(np.abs(xs)))
            sgn = np.sign(np.max(xs))
            src = (a, b)[m]
            if sgn == 0:
                return pts[src]
            if (xs[m] > 0 or xs[m] == 0) == (sgn > 0):
                return pts[src]
            return pts[n_graph - 1 - src]
        if on_graph[0]:
            return pts[a]
        if on_graph[1]:
            return pts[b]
        wa = corner_distance(pts[a])
        wb = corner_distance(pts[b])
        return (wb * pts[a] + wa * pts[b]) / (wa + wb)

    return MeanHandle(curve.space, 2, TupleDomain("diam", CUSP_DOMAIN_RADIUS),
                      evaluate, "cusp_jordan_local_mean", curve=curve)


# ---------------------------------------------------------------------------
# derived curves: mixer paths and symmetrized connecting curves
# ---------------------------------------------------------------------------

def _dedupe_rows(rows, params):
    out_rows = [rows[0]]
    out_params = [params[0]]
    for r, t in zip(rows[1:], params[1:]):
        if not np.array_equal(r, out_rows[-1]):
            out_rows.append(r)
            out_params.append(t)
    return np.array(out_rows), np.array(out_params)


def mixer_path(sigma: MixerHandle, a: int, b: int, gamma: SampledCurve) -> SampledCurve:
    """The path t -> sigma(a, b, gamma(t)) along an arc from a to b.

    Absorption pins the endpoints to a and b; the mixer's displacement
    bound then confines the whole path to a ball of radius
    Lip(sigma) * d(a, b) around a. Consecutive duplicate outputs are
    collapsed so the result is again a sampled arc.
    """
    if gamma.is_circle:
        raise TopologyError("mixer_path needs an arc")
    if gamma.space is not sigma.space:
        raise DomainError("gamma must live on the mixer's space")
    a = sigma.space.check_id(a)
    b = sigma.space.check_id(b)
    if int(gamma.order[0]) != a or int(gamma.order[-1]) != b:
        raise DomainError("gamma must run from a to b")
    rows = [sigma(a, b, int(g)) for g in gamma.order]
    dedup, params = _dedupe_rows(rows, gamma.params)
    space = MetricSpace(points=dedup, backend=sigma.space.backend)
    return SampledCurve(space, topology="arc", params=params,
                        aux={"construction": "mixer_path"})


def symmetrized_curve(mu: MeanHandle, gamma: SampledCurve) -> SampledCurve:
    """Glue t -> mu(gamma(t), a) with t -> mu(gamma(t), b) on [0, 2].

    a and b are gamma's endpoints. Symmetry of the mean makes the two
    halves agree at the seam and idempotence pins the ends to a and b; the
    glued curve satisfies d(curve(t), curve(t+1)) <= Lip(mu) * d(a, b).
    """
    if mu.arity != 2:
        raise InputError("symmetrized_curve needs a binary mean")
    if gamma.is_circle:
        raise TopologyError("symmetrized_curve needs an arc")
    if gamma.space is not mu.space:
        raise DomainError("gamma must live on the mean's space")
    if len(gamma) < 2:
        raise DomainError("gamma needs at least two samples")
    a = int(gamma.order[0])
    b = int(gamma.order[-1])
    t0, t1 = float(gamma.params[0]), float(gamma.params[-1])
    tn = (gamma.params - t0) / (t1 - t0)
    rows = [mu(int(g), a) for g in gamma.order]
    params = list(tn)
    rows += [mu(int(g), b) for g in gamma.order[1:]]
    params += list(1.0 + tn[1:])
    # seam: mu(b, a) from the first half equals mu(a, b) opening the second
    dedup, out_params = _dedupe_rows(rows, np.array(params))
    space = MetricSpace(points=dedup, backend=mu.space.backend)
    return SampledCurve(space, topology="arc", params=out_params,
                        aux={"construction": "symmetrized_curve",
                             "endpoint_ids": [a, b]})
