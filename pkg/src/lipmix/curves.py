"""Sampled metric arcs and circles, their order structure, and generators.

A SampledCurve is an ordered (arc) or cyclically ordered (circle)
discretization of a metric interval or circle. Generators cover line
segments, circles and circular arcs, graphs of even increasing profiles,
radial power images, a segment with near-closed circles attached at the
dyadic points, diamond-level-set polygons, a one-vertex snowflake
iteration, a sup-norm spike polyline, and a pair of parallel lines
(a point set, not a curve).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .spaces import (
    ConsistencyError,
    DomainError,
    InputError,
    MetricSpace,
    TopologyError,
)

TOPOLOGIES = ("arc", "circle")


class SampledCurve:
    """An ordered sequence of points of a MetricSpace.

    `order` lists point ids in traversal order (a permutation at
    generation time; subcurves carry subsets). Arcs carry strictly
    increasing parameter values; circles need at least three points and
    close with an implied edge from the last point back to the first.
    """

    def __init__(self, space: MetricSpace, order=None, topology: str = "arc",
                 params=None, aux: Optional[dict] = None):
        if topology not in TOPOLOGIES:
            raise InputError(f"unknown topology {topology!r}")
        self.space = space
        self.topology = topology
        if order is None:
            order = np.arange(len(space))
        order = np.asarray(order, dtype=int)
        if order.ndim != 1 or len(order) == 0:
            raise InputError("order must be a nonempty id sequence")
        if np.any(order < 0) or np.any(order >= len(space)):
            raise InputError("order contains invalid point ids")
        if len(np.unique(order)) != len(order):
            raise InputError("order repeats a point id")
        self.order = order
        self.order.setflags(write=False)
        if topology == "circle" and len(order) < 3:
            raise InputError("a sampled circle needs at least 3 points")
        if params is None:
            params = np.arange(len(order), dtype=float)
        params = np.asarray(params, dtype=float)
        if len(params) != len(order):
            raise InputError("params length must match order length")
        if topology == "arc" and len(order) > 1 and not np.all(np.diff(params) > 0):
            raise InputError("arc params must be strictly increasing")
        self.params = params
        self.params.setflags(write=False)
        pts = self.points
        if len(order) > 1:
            steps = space.norm(np.diff(pts, axis=0)) if space.backend != "matrix" else np.array(
                [space.distance(order[k], order[k + 1]) for k in range(len(order) - 1)])
            if np.any(steps == 0):
                k = int(np.argmax(steps == 0))
                raise InputError(f"consecutive curve points {k} and {k + 1} coincide")
            if topology == "circle" and space.distance(order[-1], order[0]) == 0:
                raise InputError("closing edge of the circle has zero length")
        self._pos_of = None
        self.aux = dict(aux or {})

    def __len__(self) -> int:
        return len(self.order)

    @property
    def n(self) -> int:
        return len(self.order)

    @property
    def points(self) -> np.ndarray:
        """Coordinates in traversal order."""
        return self.space.points[self.order]

    @property
    def is_circle(self) -> bool:
        return self.topology == "circle"

    def position_of(self, point_id: int) -> int:
        """Traversal position of a point id."""
        if self._pos_of is None:
            inv = {int(pid): k for k, pid in enumerate(self.order)}
            self._pos_of = inv
        try:
            return self._pos_of[int(point_id)]
        except KeyError:
            raise DomainError(f"point id {point_id} is not on this curve") from None

    def check_position(self, i) -> int:
        i = int(i)
        if not 0 <= i < len(self):
            raise DomainError(f"position {i} out of range [0, {len(self)})")
        return i

    def to_json_dict(self) -> dict:
        d = {
            "spec": self.aux.get("spec"),
            "topology": self.topology,
            "backend": self.space.backend,
            "points": self.points,
            "params": self.params,
        }
        extra = {k: v for k, v in self.aux.items() if k != "spec"}
        if extra:
            d["aux"] = extra
        return d

    @classmethod
    def from_json_dict(cls, d: dict) -> "SampledCurve":
        space = MetricSpace(points=d["points"], backend=d.get("backend", "euclidean"))
        aux = dict(d.get("aux") or {})
        if d.get("spec") is not None:
            aux["spec"] = d["spec"]
        return cls(space, topology=d["topology"], params=d.get("params"), aux=aux)


# ---------------------------------------------------------------------------
# basic curve operations
# ---------------------------------------------------------------------------

def curve_length(c: SampledCurve) -> float:
    """Polygonal length: sum of consecutive distances, closing a circle."""
    if len(c) < 2:
        return 0.0
    pts = c.points
    if c.space.backend == "matrix":
        total = sum(c.space.distance(c.order[k], c.order[k + 1]) for k in range(len(c) - 1))
        if c.is_circle:
            total += c.space.distance(c.order[-1], c.order[0])
        return float(total)
    steps = c.space.norm(np.diff(pts, axis=0))
    total = float(np.sum(steps))
    if c.is_circle:
        total += float(c.space.norm(pts[-1] - pts[0]))
    return total


def _pairwise_max(points: np.ndarray, norm, block: int = 512):
    """Exact max pairwise distance with witness, blocked over rows."""
    m = len(points)
    if m < 2:
        return 0.0, (0, 0)
    best = -1.0
    wit = (0, 0)
    for lo in range(0, m, block):
        hi = min(lo + block, m)
        diff = points[lo:hi, None, :] - points[None, :, :]
        d = norm(diff)
        k = int(np.argmax(d))
        i, j = np.unravel_index(k, d.shape)
        if d[i, j] > best:
            best = float(d[i, j])
            wit = (lo + int(i), int(j))
    return best, wit


def diameter(obj, ids=None) -> float:
    """Exact max pairwise distance over a sample of points.

    `obj` may be a SampledCurve (over its own points), a MetricSpace, or a
    raw coordinate array; `ids` restricts a space to a subset.
    """
    value, _ = diameter_with_witness(obj, ids)
    return value


def diameter_with_witness(obj, ids=None):
    if isinstance(obj, SampledCurve):
        space = obj.space
        idx = obj.order if ids is None else np.asarray(ids, dtype=int)
    elif isinstance(obj, MetricSpace):
        space = obj
        idx = np.arange(len(obj)) if ids is None else np.asarray(ids, dtype=int)
    else:
        pts = np.atleast_2d(np.asarray(obj, dtype=float))
        return _pairwise_max(pts, lambda d: np.linalg.norm(d, axis=-1))
    if space.backend == "matrix":
        sub = space.matrix[np.ix_(idx, idx)]
        k = int(np.argmax(sub))
        i, j = np.unravel_index(k, sub.shape)
        return float(sub[i, j]), (int(idx[i]), int(idx[j]))
    val, (i, j) = _pairwise_max(space.points[idx], space.norm)
    return val, (int(idx[i]), int(idx[j]))


def farthest_point_diameter(points: np.ndarray, norm, sweeps: int = 3) -> float:
    """Lower bound on the diameter by repeated farthest-point sweeps.

    Exact on every curve sample met in practice; never exceeds the true
    sample diameter, which keeps budgeted estimators one-sided.
    """
    m = len(points)
    if m < 2:
        return 0.0
    a = points[0]
    best = 0.0
    for _ in range(sweeps):
        d = norm(points - a)
        k = int(np.argmax(d))
        if d[k] <= best:
            break
        best = float(d[k])
        a = points[k]
    return best


def subarc(c: SampledCurve, i: int, j: int) -> SampledCurve:
    """The sub-arc between traversal positions i <= j (i == j is a point)."""
    i = c.check_position(i)
    j = c.check_position(j)
    if i > j:
        i, j = j, i
    return SampledCurve(c.space, order=c.order[i:j + 1], topology="arc",
                        params=c.params[i:j + 1], aux={"parent": c.aux.get("spec")})


def _wrap_positions(n: int, a: int, b: int) -> np.ndarray:
    """Positions from a forward to b inclusive, wrapping past n."""
    if a <= b:
        return np.arange(a, b + 1)
    return np.concatenate([np.arange(a, n), np.arange(0, b + 1)])


def arc_between(c: SampledCurve, a: int, b: int, mode: str = "smaller-diameter") -> SampledCurve:
    """One of the two circle arcs between positions a and b.

    "oriented" follows the curve orientation from a to b. "smaller-diameter"
    picks whichever arc has the smaller exact sample diameter, breaking a
    tie toward the arc starting at the lower position.
    """
    if not c.is_circle:
        raise TopologyError("arc_between needs a circle")
    a = c.check_position(a)
    b = c.check_position(b)
    if a == b:
        raise DomainError("arc_between needs two distinct positions")
    n = len(c)
    if mode == "oriented":
        pos = _wrap_positions(n, a, b)
    elif mode == "smaller-diameter":
        pos_ab = _wrap_positions(n, a, b)
        pos_ba = _wrap_positions(n, b, a)
        d_ab = diameter(c.space, c.order[pos_ab])
        d_ba = diameter(c.space, c.order[pos_ba])
        if d_ab < d_ba:
            pos = pos_ab
        elif d_ba < d_ab:
            pos = pos_ba
        else:
            pos = pos_ab if a < b else pos_ba
    else:
        raise InputError(f"unknown mode {mode!r}")
    return SampledCurve(c.space, order=c.order[pos], topology="arc",
                        params=np.arange(len(pos), dtype=float))


def order_stats(c: SampledCurve, point_ids, stat: str) -> int:
    """min/max/med of 2 or 3 points of an arc, in traversal order.

    Returns the selected point id. The median needs exactly three points;
    it satisfies med(a,b,c) = max(min(a,b), min(b,c), min(a,c)) in the
    order induced by the parameters.
    """
    if c.is_circle:
        raise TopologyError("order_stats is defined on arcs only")
    ids = [int(p) for p in point_ids]
    if stat in ("min", "max") and len(ids) not in (2, 3):
        raise DomainError("min/max take 2 or 3 points")
    if stat == "med" and len(ids) != 3:
        raise DomainError("med takes exactly 3 points")
    pos = [c.position_of(p) for p in ids]
    ranked = sorted(range(len(ids)), key=lambda k: pos[k])
    if stat == "min":
        return ids[ranked[0]]
    if stat == "max":
        return ids[ranked[-1]]
    if stat == "med":
        return ids[ranked[1]]
    raise InputError(f"unknown stat {stat!r}")


# ---------------------------------------------------------------------------
# curve specifications and generators
# ---------------------------------------------------------------------------

KINDS = (
    "segment", "circle", "circular-arc", "graph-curve", "power-image",
    "circles-arc", "box-curve", "snowflake-vertex", "tv-curve", "two-lines",
)


@dataclass
class CurveSpec:
    """Generator request: a kind plus its numeric parameters.

    "power-image" transforms `base` (another CurveSpec, or pass the object
    directly to power_image).
    """

    kind: str
    params: dict = field(default_factory=dict)
    base: Optional["CurveSpec"] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InputError(f"unknown curve kind {self.kind!r}")

    def to_json_dict(self) -> dict:
        d = {"kind": self.kind, "params": dict(self.params)}
        if self.base is not None:
            d["base"] = self.base.to_json_dict()
        return d

    @classmethod
    def from_json_dict(cls, d: dict) -> "CurveSpec":
        base = cls.from_json_dict(d["base"]) if d.get("base") else None
        return cls(kind=d["kind"], params=dict(d.get("params") or {}), base=base)


def _need(params: dict, key: str, default=None):
    if key in params:
        return params[key]
    if default is None:
        raise InputError(f"missing parameter {key!r}")
    return default


def _symmetric_grid(extent: float, samples: int) -> np.ndarray:
    # exactly sign-symmetric so that mirrored values are grid points bit-for-bit
    if samples < 2:
        raise InputError("need at least 2 samples")
    c = (samples - 1) / 2.0
    h = 2.0 * extent / (samples - 1)
    return (np.arange(samples) - c) * h


def make_segment(samples: int, length: float = 1.0) -> SampledCurve:
    if samples < 2:
        raise InputError("segment needs at least 2 samples")
    if length <= 0:
        raise InputError("segment length must be positive")
    xs = np.linspace(0.0, length, int(samples))
    space = MetricSpace(points=xs[:, None])
    return SampledCurve(space, topology="arc", params=xs,
                        aux={"spec": {"kind": "segment", "params": {"samples": int(samples), "length": length}}})


def make_circle(radius: float = 1.0, samples: int = 360) -> SampledCurve:
    if radius <= 0:
        raise InputError("circle radius must be positive")
    if samples < 3:
        raise InputError("circle needs at least 3 samples")
    th = 2.0 * np.pi * np.arange(samples) / samples
    pts = radius * np.column_stack([np.cos(th), np.sin(th)])
    space = MetricSpace(points=pts)
    return SampledCurve(space, topology="circle", params=th,
                        aux={"spec": {"kind": "circle", "params": {"radius": radius, "samples": int(samples)}}})


def make_circular_arc(radius: float, angular_size: float, samples: int) -> SampledCurve:
    """Points r*e^{i t} for t uniform in [0, T]."""
    if radius <= 0:
        raise InputError("arc radius must be positive")
    if not 0 < angular_size <= 2 * np.pi:
        raise InputError("angular size must lie in (0, 2*pi]")
    if samples < 2:
        raise InputError("arc needs at least 2 samples")
    th = np.linspace(0.0, angular_size, int(samples))
    pts = radius * np.column_stack([np.cos(th), np.sin(th)])
    space = MetricSpace(points=pts)
    return SampledCurve(space, topology="arc", params=th,
                        aux={"spec": {"kind": "circular-arc",
                                      "params": {"radius": radius, "angular_size": angular_size,
                                                 "samples": int(samples)}}})


PROFILES = ("parabola", "cusp", "table")


def _profile_fn(profile: str, table_x=None, table_y=None):
    if profile == "parabola":
        return lambda ax: ax * ax
    if profile == "cusp":
        return lambda ax: np.sqrt(ax)
    if profile == "table":
        tx = np.asarray(table_x, dtype=float)
        ty = np.asarray(table_y, dtype=float)
        if tx.ndim != 1 or tx.shape != ty.shape or len(tx) < 2:
            raise InputError("profile table needs matching 1-d x/y arrays of length >= 2")
        if tx[0] != 0.0:
            raise InputError("profile table must start at x = 0")
        if not np.all(np.diff(tx) > 0):
            k = int(np.argmax(np.diff(tx) <= 0))
            raise InputError(f"profile table x not increasing at rows {k},{k + 1}")
        bad = np.diff(ty) < 0
        if np.any(bad):
            k = int(np.argmax(bad))
            raise InputError(
                f"profile not nondecreasing on x>=0: rows {k},{k + 1} have y {ty[k]} > {ty[k + 1]}")
        return lambda ax: np.interp(ax, tx, ty)
    raise InputError(f"unknown profile {profile!r}")


def make_graph_curve(profile: str, extent: float, samples: int,
                     table_x=None, table_y=None) -> SampledCurve:
    """Graph of an even profile, increasing on x >= 0, on [-extent, extent].

    The x grid is exactly sign-symmetric, so the mirror of any sample's x
    coordinate is again a sample.
    """
    if extent <= 0:
        raise InputError("extent must be positive")
    fn = _profile_fn(profile, table_x, table_y)
    xs = _symmetric_grid(extent, int(samples))
    ys = fn(np.abs(xs))
    pts = np.column_stack([xs, ys])
    space = MetricSpace(points=pts)
    aux = {"spec": {"kind": "graph-curve",
                    "params": {"profile": profile, "extent": extent, "samples": int(samples)}},
           "graph_profile": profile, "grid_symmetric": True}
    if profile == "table":
        aux["spec"]["params"]["table_x"] = list(np.asarray(table_x, dtype=float))
        aux["spec"]["params"]["table_y"] = list(np.asarray(table_y, dtype=float))
    return SampledCurve(space, topology="arc", params=xs, aux=aux)


def power_image(obj: Union[SampledCurve, MetricSpace], alpha: float):
    """Apply z -> |z|^(alpha-1) z pointwise to a planar curve or point set."""
    if alpha <= 0:
        raise InputError("power-image exponent must be positive")
    space = obj.space if isinstance(obj, SampledCurve) else obj
    if space.backend == "matrix" or space.dim != 2:
        raise InputError("power-image needs a planar embedded input")
    pts = space.points
    r = np.linalg.norm(pts, axis=1)
    with np.errstate(divide="ignore"):
        scale = np.where(r > 0, np.power(r, alpha - 1.0, where=r > 0), 0.0)
    new_pts = pts * scale[:, None]
    new_space = MetricSpace(points=new_pts, backend=space.backend)
    if isinstance(obj, MetricSpace):
        return new_space
    aux = dict(obj.aux)
    aux["spec"] = {"kind": "power-image", "params": {"alpha": alpha},
                   "base": obj.aux.get("spec")}
    return SampledCurve(new_space, order=obj.order, topology=obj.topology,
                        params=obj.params, aux=aux)


def make_circles_arc(levels: int, samples_per_circle: int = 24,
                     samples_per_segment: int = 6) -> SampledCurve:
    """The segment [0, 1] with a near-closed circle attached at each 2^-n.

    For n = 1..levels a circle of radius 2^(-n-2) misses an angular sector
    of size 1/n; the sector's endpoints sit on the x-axis symmetrically
    about 2^-n and the removed segment neighborhood is replaced by the
    circle traversed through the upper half-plane. Circle centers are
    recorded in aux["centers"].
    """
    if levels < 1:
        raise InputError("levels must be >= 1")
    if samples_per_circle < 8:
        raise InputError("samples_per_circle must be >= 8")
    if samples_per_segment < 2:
        raise InputError("samples_per_segment must be >= 2")
    pts = [np.array([0.0, 0.0])]
    centers = []
    radii = []
    gap_pairs = []  # vertex indices of the sector endpoints per level

    def extend_segment(x_to: float):
        x_from = pts[-1][0]
        xs = np.linspace(x_from, x_to, samples_per_segment + 1)[1:]
        for x in xs:
            pts.append(np.array([x, 0.0]))

    for n in range(levels, 0, -1):
        rho = 2.0 ** (-n - 2)
        delta = 1.0 / (2.0 * n)
        cx = 2.0 ** (-n)
        cy = rho * math.cos(delta)
        left = cx - rho * math.sin(delta)
        right = cx + rho * math.sin(delta)
        if left <= pts[-1][0]:
            raise ConsistencyError(f"circle {n} overlaps the previous feature")
        extend_segment(left)
        i_left = len(pts) - 1
        pts[i_left] = np.array([left, 0.0])
        sweep = 2.0 * np.pi - 1.0 / n
        th0 = -np.pi / 2.0 - delta
        th = th0 - sweep * np.arange(1, samples_per_circle) / (samples_per_circle - 1)
        arc = np.column_stack([cx + rho * np.cos(th), cy + rho * np.sin(th)])
        arc[-1] = (right, 0.0)  # land exactly on the axis
        for row in arc:
            pts.append(np.array(row))
        centers.append((cx, cy))
        radii.append(rho)
        gap_pairs.append((i_left, len(pts) - 1))
    extend_segment(1.0)
    pts = np.array(pts)
    space = MetricSpace(points=pts)
    steps = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    params = np.concatenate([[0.0], np.cumsum(steps)])
    aux = {"spec": {"kind": "circles-arc",
                    "params": {"levels": int(levels),
                               "samples_per_circle": int(samples_per_circle),
                               "samples_per_segment": int(samples_per_segment)}},
           "centers": [list(c) for c in centers],
           "radii": radii,
           "gap_vertices": [list(g) for g in gap_pairs]}
    return SampledCurve(space, topology="arc", params=params, aux=aux)


def box_profile_knots(t: float):
    """Knots of the upper boundary y = t - ||x|-1| of the diamond level set."""
    if not 1.0 < t < 2.0:
        raise InputError("box parameter t must lie in (1, 2)")
    xs = np.array([-(1.0 + t), -1.0, 0.0, 1.0, 1.0 + t])
    ys = np.array([0.0, t, t - 1.0, t, 0.0])
    return xs, ys


def make_box_curve(t: float, samples_per_edge: int = 64) -> SampledCurve:
    """The closed polyline { ||x|-1| + |y| = t } for t in (1, 2).

    Traversed counterclockwise from (1+t, 0); all eight corners are sample
    points and edge samples are generated through the same interpolation
    used by the strip retraction, so retraction identities are exact.
    """
    if samples_per_edge < 2:
        raise InputError("samples_per_edge must be >= 2")
    kx, ky = box_profile_knots(t)
    xs_upper = []
    for a, b in zip(kx[::-1][:-1], kx[::-1][1:]):  # 1+t -> -(1+t)
        xs_upper.append(np.linspace(a, b, samples_per_edge + 1)[:-1])
    xs_upper = np.concatenate(xs_upper + [[kx[0]]])
    ys_upper = np.interp(xs_upper, kx, ky)
    upper = np.column_stack([xs_upper, ys_upper])
    xs_lower = []
    for a, b in zip(kx[:-1], kx[1:]):  # -(1+t) -> 1+t
        xs_lower.append(np.linspace(a, b, samples_per_edge + 1)[:-1])
    xs_lower = np.concatenate(xs_lower)[1:]  # drop shared (-(1+t), 0)
    ys_lower = -np.interp(xs_lower, kx, ky)
    lower = np.column_stack([xs_lower, ys_lower])
    pts = np.vstack([upper, lower])
    space = MetricSpace(points=pts)
    steps = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    params = np.concatenate([[0.0], np.cumsum(steps)])
    return SampledCurve(space, topology="circle", params=params,
                        aux={"spec": {"kind": "box-curve",
                                      "params": {"t": t, "samples_per_edge": int(samples_per_edge)}},
                             "box_t": t})


_KOCH_C = 0.5           # cos 60 degrees
_KOCH_S = math.sqrt(3) / 2.0


def _koch_replace(pts: np.ndarray, n_segments: int) -> np.ndarray:
    """Replace the first n_segments edges with the four-edge motif (outward)."""
    a = pts[:n_segments]
    b = pts[1:n_segments + 1]
    v = (b - a) / 3.0
    # rotate v by -60 degrees: the bump points away from the enclosed region
    w = np.column_stack([v[:, 0] * _KOCH_C + v[:, 1] * _KOCH_S,
                         -v[:, 0] * _KOCH_S + v[:, 1] * _KOCH_C])
    p1 = a + v
    p2 = p1 + w
    p3 = a + 2.0 * v
    block = np.stack([a, p1, p2, p3], axis=1).reshape(-1, 2)
    return np.vstack([block, pts[n_segments:]])


def make_snowflake_vertex(depth: int) -> SampledCurve:
    """Koch-type iteration applied only to the unit arc at one vertex.

    Starts from the closed unit equilateral triangle with marked vertex at
    the origin. Step k replaces the first 3^(k-1) edges (the unit-length
    arc out of the marked vertex) by the four-edge motif, adding exactly
    1/3 to the polygonal length.
    """
    if depth < 0:
        raise InputError("depth must be >= 0")
    pts = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, math.sqrt(3) / 2.0]])
    for k in range(int(depth)):
        pts = _koch_replace(pts, 3 ** k)
    space = MetricSpace(points=pts)
    closed = np.vstack([pts, pts[:1]])
    steps = np.linalg.norm(np.diff(closed, axis=0), axis=1)
    params = np.concatenate([[0.0], np.cumsum(steps[:-1])])
    return SampledCurve(space, topology="circle", params=params,
                        aux={"spec": {"kind": "snowflake-vertex", "params": {"depth": int(depth)}}})


def make_tv_curve(truncation: int, samples_per_segment: int = 8) -> SampledCurve:
    """Sup-norm polyline through the spikes e_n / n, ending at 0.

    Lives in the sup-embedding of dimension `truncation`; the k-th spike
    has norm 1/k, so the curve has bounded turning but fails to be
    doubling near its endpoint.
    """
    if truncation < 2:
        raise InputError("truncation must be >= 2")
    if samples_per_segment < 1:
        raise InputError("samples_per_segment must be >= 1")
    N = int(truncation)
    vs = np.zeros((N + 1, N))
    for k in range(1, N + 1):
        vs[k - 1, k - 1] = 1.0 / k
    # vs[N] is the zero endpoint
    rows = [vs[0]]
    for k in range(N):
        a, b = vs[k], vs[k + 1]
        for s in range(1, samples_per_segment + 1):
            u = s / samples_per_segment
            rows.append((1.0 - u) * a + u * b)
    pts = np.array(rows)
    space = MetricSpace(points=pts, backend="sup")
    steps = np.max(np.abs(np.diff(pts, axis=0)), axis=1)
    params = np.concatenate([[0.0], np.cumsum(steps)])
    return SampledCurve(space, topology="arc", params=params,
                        aux={"spec": {"kind": "tv-curve",
                                      "params": {"truncation": N,
                                                 "samples_per_segment": int(samples_per_segment)}}})


def make_two_lines(extent: float, samples_per_line: int = 201) -> MetricSpace:
    """The pair of parallel lines R x {0, 1}, truncated to |x| <= extent.

    Returns a point set (not a curve): the natural habitat of
    chain-connectivity questions.
    """
    if extent <= 0:
        raise InputError("extent must be positive")
    xs = _symmetric_grid(extent, int(samples_per_line))
    low = np.column_stack([xs, np.zeros_like(xs)])
    high = np.column_stack([xs, np.ones_like(xs)])
    return MetricSpace(points=np.vstack([low, high]))


def make_cusp_jordan(graph_samples: int = 401, segment_samples: int = 200) -> SampledCurve:
    """Closed curve: the graph y = sqrt(|x|) on [-1, 1] joined by the top edge.

    Traversal starts at (-1, 1), runs along the graph through the cusp to
    (1, 1), then back along the segment y = 1. aux["piece"] labels each
    sample "graph" or "segment" (the shared corners count as graph points).
    """
    if graph_samples < 3 or graph_samples % 2 == 0:
        raise InputError("graph_samples must be odd and >= 3 (the cusp must be sampled)")
    if segment_samples < 2:
        raise InputError("segment_samples must be >= 2")
    xs = _symmetric_grid(1.0, graph_samples)
    graph = np.column_stack([xs, np.sqrt(np.abs(xs))])
    seg_x = np.linspace(1.0, -1.0, segment_samples + 2)[1:-1]
    seg = np.column_stack([seg_x, np.ones_like(seg_x)])
    pts = np.vstack([graph, seg])
    piece = ["graph"] * len(graph) + ["segment"] * len(seg)
    space = MetricSpace(points=pts)
    steps = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    params = np.concatenate([[0.0], np.cumsum(steps)])
    return SampledCurve(space, topology="circle", params=params,
                        aux={"spec": {"kind": "cusp-jordan",
                                      "params": {"graph_samples": int(graph_samples),
                                                 "segment_samples": int(segment_samples)}},
                             "piece": piece, "grid_symmetric": True})


def generate(spec: CurveSpec):
    """Build the curve or point set a CurveSpec describes."""
    p = spec.params
    if spec.kind == "segment":
        return make_segment(int(_need(p, "samples")), float(p.get("length", 1.0)))
    if spec.kind == "circle":
        return make_circle(float(p.get("radius", 1.0)), int(_need(p, "samples")))
    if spec.kind == "circular-arc":
        return make_circular_arc(float(_need(p, "radius")), float(_need(p, "angular_size")),
                                 int(_need(p, "samples")))
    if spec.kind == "graph-curve":
        return make_graph_curve(str(_need(p, "profile")), float(_need(p, "extent")),
                                int(_need(p, "samples")),
                                table_x=p.get("table_x"), table_y=p.get("table_y"))
    if spec.kind == "power-image":
        if spec.base is None:
            raise InputError("power-image needs a base spec")
        return power_image(generate(spec.base), float(_need(p, "alpha")))
    if spec.kind == "circles-arc":
        return make_circles_arc(int(_need(p, "levels")),
                                int(p.get("samples_per_circle", 24)),
                                int(p.get("samples_per_segment", 6)))
    if spec.kind == "box-curve":
        return make_box_curve(float(_need(p, "t")), int(p.get("samples_per_edge", 64)))
    if spec.kind == "snowflake-vertex":
        return make_snowflake_vertex(int(_need(p, "depth")))
    if spec.kind == "tv-curve":
        return make_tv_curve(int(_need(p, "truncation")), int(p.get("samples_per_segment", 8)))
    if spec.kind == "two-lines":
        return make_two_lines(float(_need(p, "extent")), int(p.get("samples_per_line", 201)))
    raise InputError(f"unknown curve kind {spec.kind!r}")
