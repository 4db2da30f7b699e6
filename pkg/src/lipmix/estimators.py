"""Sampling estimators for metric invariants of curves, spaces, and maps.

All estimators are pure functions of (inputs, seed, budget): samples are
drawn from one deterministic generator stream per call, so reruns agree
bit-for-bit and enlarging the budget extends the sample set instead of
reshuffling it. Sup-type quantities (Lipschitz constants, turning
constants) are reported as lower bounds: the witness always achieves the
reported value exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph
from scipy.spatial import cKDTree

from .curves import SampledCurve, farthest_point_diameter, _wrap_positions
from .mixers import PointMapHandle, TupleDomain
from .spaces import (
    DomainError,
    EstimationError,
    InputError,
    MapSample,
    MetricSpace,
)


@dataclass
class EstimateReport:
    """A named scalar estimate with its provenance.

    `witness` is the tuple of point ids (or id tuples) achieving the value;
    `refinement` is the sample count of the underlying curve or space.
    """

    name: str
    value: float
    witness: tuple
    budget: int
    seed: int
    refinement: int
    extra: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        def unpack(w):
            if isinstance(w, (tuple, list, np.ndarray)):
                return [unpack(x) for x in w]
            if isinstance(w, (int, np.integer)):
                return int(w)
            return float(w)

        d = {
            "name": self.name,
            "value": float(self.value),
            "witness": unpack(self.witness),
            "budget": int(self.budget),
            "seed": int(self.seed),
            "refinement": int(self.refinement),
        }
        if self.extra:
            d["extra"] = self.extra
        return d

    def csv_row(self) -> str:
        import json as _json

        wit = _json.dumps(self.to_json_dict()["witness"])
        return f'{self.name},{self.value:.17g},"{wit}",{self.budget},{self.seed},{self.refinement}'


# ---------------------------------------------------------------------------
# neighbor machinery shared by the samplers
# ---------------------------------------------------------------------------

class _Neighbors:
    """Ball and k-nearest queries for any backend."""

    def __init__(self, space: MetricSpace):
        self.space = space
        if space.backend == "matrix":
            self.tree = None
            self.p = None
        else:
            self.p = 2.0 if space.backend == "euclidean" else np.inf
            self.tree = cKDTree(space.points)

    def ball(self, i: int, r: float) -> np.ndarray:
        if self.tree is None:
            return np.flatnonzero(self.space.matrix[i] <= r)
        out = self.tree.query_ball_point(self.space.points[i], r, p=self.p)
        return np.asarray(sorted(out), dtype=int)

    def knn(self, i: int, k: int) -> np.ndarray:
        n = len(self.space)
        k = min(k, n - 1)
        if k <= 0:
            return np.empty(0, dtype=int)
        if self.tree is None:
            order = np.argsort(self.space.matrix[i], kind="stable")
            return order[order != i][:k]
        _, idx = self.tree.query(self.space.points[i], k=k + 1, p=self.p)
        idx = np.atleast_1d(idx)
        return idx[idx != i][:k]


class DomainSampler:
    """Draws id pairs and triples from a full or local tuple domain.

    flavor "diam" emits tuples with max pairwise distance <= radius,
    "minsep" tuples with min pairwise distance <= radius, "full" arbitrary
    tuples. Local flavors anchor each draw at a random point and fill the
    tuple from its metric ball, so small domains stay cheap to hit.
    """

    def __init__(self, space: MetricSpace, radius: float = math.inf,
                 flavor: str = "full"):
        if flavor not in ("full", "diam", "minsep"):
            raise InputError(f"unknown sampler flavor {flavor!r}")
        if flavor != "full" and not (radius > 0):
            raise InputError("local sampler needs a positive radius")
        self.space = space
        self.radius = float(radius)
        self.flavor = flavor
        self._nbrs = _Neighbors(space)
        self._ball_cache: dict = {}

    def _ball(self, i: int) -> np.ndarray:
        got = self._ball_cache.get(i)
        if got is None:
            got = self._nbrs.ball(i, self.radius)
            self._ball_cache[i] = got
        return got

    def tuples(self, arity: int, budget: int, rng: np.random.Generator,
               max_tries: int = 64) -> np.ndarray:
        """Draw `budget` in-domain id tuples of the given arity."""
        if arity < 2:
            raise InputError("tuple arity must be >= 2")
        n = len(self.space)
        out = np.empty((budget, arity), dtype=int)
        for k in range(budget):
            if self.flavor == "full":
                out[k] = rng.integers(0, n, arity)
                continue
            if self.flavor == "minsep":
                a = int(rng.integers(0, n))
                ball = self._ball(a)
                b = int(ball[rng.integers(0, len(ball))])
                rest = rng.integers(0, n, arity - 2)
                out[k] = (a, b, *[int(x) for x in rest])
                continue
            placed = False
            for _ in range(max_tries):
                a = int(rng.integers(0, n))
                ball = self._ball(a)
                rest = [int(ball[rng.integers(0, len(ball))]) for _ in range(arity - 1)]
                cand = (a, *rest)
                if all(self.space.distance(cand[i], cand[j]) <= self.radius
                       for i in range(arity) for j in range(i + 1, arity)):
                    out[k] = cand
                    placed = True
                    break
            if not placed:
                raise EstimationError(
                    f"could not draw a diameter-{self.radius:g} tuple in {max_tries} tries")
        return out

    def pairs(self, budget: int, rng: np.random.Generator) -> np.ndarray:
        return self.tuples(2, budget, rng)

    def triples(self, budget: int, rng: np.random.Generator) -> np.ndarray:
        return self.tuples(3, budget, rng)

    def contains(self, ids) -> bool:
        if self.flavor == "full":
            return True
        ds = [self.space.distance(ids[i], ids[j])
              for i in range(len(ids)) for j in range(i + 1, len(ids))]
        if self.flavor == "diam":
            return max(ds) <= self.radius
        return min(ds) <= self.radius


def sampler_for_handle(handle: PointMapHandle) -> DomainSampler:
    dom: TupleDomain = handle.domain
    return DomainSampler(handle.space, radius=dom.radius, flavor=dom.flavor)


# ---------------------------------------------------------------------------
# Lipschitz constant estimation
# ---------------------------------------------------------------------------

def _map_sample_pairs(m: MapSample, budget: int, rng: np.random.Generator):
    rows = len(m)
    total = rows * (rows - 1) // 2
    if total <= budget:
        return [(i, j) for i in range(rows) for j in range(i + 1, rows)]
    pairs = []
    dom = m.domain
    tree = None
    if isinstance(dom, MetricSpace) and dom.backend != "matrix" and m.arity == 1:
        tree = _Neighbors(dom)
    # alternate uniform and near draws so sample sets nest as budgets grow
    for k in range(budget):
        if tree is not None and k % 2 == 1:
            i = int(rng.integers(0, rows))
            near = tree.knn(int(m.inputs[i, 0]), 8)
            if len(near) == 0:
                continue
            target = int(near[rng.integers(0, len(near))])
            hits = np.flatnonzero(m.inputs[:, 0] == target)
            if len(hits) == 0:
                continue
            pairs.append((i, int(hits[0])))
        else:
            i, j = rng.integers(0, rows, 2)
            pairs.append((int(i), int(j)))
    return pairs


def _handle_tuple_pairs(handle: PointMapHandle, sampler: DomainSampler,
                        budget: int, rng: np.random.Generator, mode: str):
    """Stream of (u, v) id-tuple pairs inside the handle's domain.

    Strategies rotate through: independent in-domain tuples, one-coordinate
    moves to a metric near neighbor, and one-coordinate collapses onto
    another coordinate (these realize the displacement-to-absorption
    ratios). "per-variable" drops the independent draws.
    """
    nbrs = _Neighbors(handle.space)
    arity = handle.arity
    strategies = ("joint", "near", "collapse") if mode == "stratified" else (
        ("near", "collapse") if mode == "per-variable" else ("joint",))
    k = 0
    produced = 0
    while produced < budget:
        strat = strategies[k % len(strategies)]
        k += 1
        u = tuple(int(x) for x in sampler.tuples(arity, 1, rng)[0])
        if strat == "joint":
            v = tuple(int(x) for x in sampler.tuples(arity, 1, rng)[0])
        elif strat == "collapse":
            j = int(rng.integers(0, arity))
            j2 = int(rng.integers(0, arity))
            v = tuple(u[j2] if t == j else u[t] for t in range(arity))
            if sampler.flavor == "minsep" and not sampler.contains(v):
                continue
        else:
            j = int(rng.integers(0, arity))
            near = nbrs.knn(u[j], 8)
            if len(near) == 0:
                continue
            v = tuple(int(near[rng.integers(0, len(near))]) if t == j else u[t]
                      for t in range(arity))
            if not sampler.contains(v):
                continue
        produced += 1
        yield u, v


def lipschitz_estimate(target, budget: int, seed: int, min_sep: float = 1e-9,
                       sampler: Optional[DomainSampler] = None,
                       mode: str = "stratified") -> EstimateReport:
    """Largest sampled ratio (output distance) / (input distance).

    `target` is a MapSample or a PointMapHandle. Input distance on tuples
    is the sum metric; pairs closer than `min_sep` are skipped. The value
    is a lower bound for the true Lipschitz constant and is reproducible
    from (seed, budget).
    """
    if budget < 1:
        raise InputError("budget must be >= 1")
    if not min_sep > 0:
        raise InputError("min_sep must be positive")
    rng = np.random.default_rng(seed)
    best = -1.0
    witness = None
    checked = 0
    if isinstance(target, MapSample):
        for i, j in _map_sample_pairs(target, budget, rng):
            din = target.input_distance(i, j)
            if din < min_sep:
                continue
            ratio = target.output_distance(i, j) / din
            checked += 1
            if ratio > best:
                best = ratio
                witness = (tuple(int(x) for x in target.inputs[i]),
                           tuple(int(x) for x in target.inputs[j]))
        refinement = len(target)
        name = "lipschitz/map_sample"
    elif isinstance(target, PointMapHandle):
        if sampler is None:
            sampler = sampler_for_handle(target)
        space = target.space
        for u, v in _handle_tuple_pairs(target, sampler, budget, rng, mode):
            din = float(sum(space.distance(a, b) for a, b in zip(u, v)))
            if din < min_sep:
                continue
            dout = float(space.norm(target(*u) - target(*v)))
            ratio = dout / din
            checked += 1
            if ratio > best:
                best = ratio
                witness = (u, v)
        refinement = len(space)
        name = f"lipschitz/{target.name}"
    else:
        raise InputError("target must be a MapSample or a PointMapHandle")
    if witness is None:
        raise EstimationError("no admissible pair with input distance >= min_sep")
    return EstimateReport(name=name, value=float(best), witness=witness,
                          budget=budget, seed=seed, refinement=refinement,
                          extra={"min_sep": min_sep, "mode": mode,
                                 "pairs_used": checked})


# ---------------------------------------------------------------------------
# bounded turning constants
# ---------------------------------------------------------------------------

_EXHAUSTIVE_CAP = 6000


def _arc_window_diameters(D: np.ndarray) -> np.ndarray:
    """W[i, j] = max pairwise distance among positions i..j (exact)."""
    n = len(D)
    W = np.zeros((n, n))
    for i in range(n - 2, -1, -1):
        cm = np.maximum.accumulate(D[i, i + 1:])
        W[i, i + 1:] = np.maximum(W[i + 1, i + 1:], cm)
    return W


def _circle_window_diameters(D: np.ndarray) -> np.ndarray:
    """Wc[s, o] = diameter of the o-step window starting at position s.

    Runs the shrinking-window recurrence over doubled start indices; the
    top rows only feed windows short enough that a zero seed is exact.
    """
    n = len(D)
    Wc = np.zeros((n, n + 1))
    prev = np.zeros(n + 1)
    ring = np.arange(3 * n) % n
    for s in range(2 * n - 2, -1, -1):
        idx = ring[s + 1: s + 1 + n]
        ds = D[ring[s], idx]
        cm = np.concatenate([[0.0], np.maximum.accumulate(ds)])
        row = np.empty(n + 1)
        row[0] = 0.0
        row[1:] = np.maximum(prev[:-1], cm[1:])
        prev = row
        if s < n:
            Wc[s] = row
    return Wc


def turning_constant(c: SampledCurve, budget: Optional[int] = None, seed: int = 0,
                     exhaustive: Optional[bool] = None) -> EstimateReport:
    """Worst ratio (diameter of connecting subarc) / (endpoint distance).

    Arcs use the unique connecting subarc; circles use the
    smaller-diameter of the two arcs. Exhaustive mode checks every
    position pair with exact subarc diameters; budgeted mode samples pairs
    (half uniform, half metric near neighbors) and lower-bounds diameters
    by farthest-point sweeps, so exhaustive >= budgeted always.
    """
    n = len(c)
    if n < 2:
        raise InputError("turning constant needs at least 2 points")
    if exhaustive is None:
        exhaustive = budget is None and n <= 1500
    if exhaustive:
        if n > _EXHAUSTIVE_CAP:
            raise InputError(f"exhaustive mode capped at {_EXHAUSTIVE_CAP} points")
        D = c.space.distance_matrix(ids=c.order)
        off = D + np.diag(np.full(n, np.inf))
        if np.any(off == 0):
            i, j = np.unravel_index(int(np.argmax(off == 0)), off.shape)
            raise InputError(f"coincident samples at positions {i} and {j}")
        iu, ju = np.triu_indices(n, k=1)
        if c.is_circle:
            Wc = _circle_window_diameters(D)
            fwd = Wc[iu, ju - iu]
            bwd = Wc[ju, n - (ju - iu)]
            diams = np.minimum(fwd, bwd)
        else:
            W = _arc_window_diameters(D)
            diams = W[iu, ju]
        ratios = diams / D[iu, ju]
        k = int(np.argmax(ratios))
        return EstimateReport(name="turning_constant", value=float(ratios[k]),
                              witness=(int(iu[k]), int(ju[k])), budget=0, seed=seed,
                              refinement=n, extra={"mode": "exhaustive"})
    if budget is None or budget < 1:
        raise InputError("budgeted mode needs a positive budget")
    rng = np.random.default_rng(seed)
    pts = c.points
    norm = c.space.norm
    nbrs = _Neighbors(MetricSpace(points=pts, backend=c.space.backend)
                      if c.space.backend != "matrix" else c.space)
    best = -1.0
    wit = None
    for k in range(budget):
        if k % 2 == 0:
            i, j = sorted(int(x) for x in rng.integers(0, n, 2))
        else:
            i = int(rng.integers(0, n))
            near = nbrs.knn(i, 8)
            if len(near) == 0:
                continue
            j = int(near[rng.integers(0, len(near))])
            i, j = min(i, j), max(i, j)
        if i == j:
            continue
        chord = float(norm(pts[i] - pts[j]))
        if chord == 0:
            raise InputError(f"coincident samples at positions {i} and {j}")
        diam_fwd = farthest_point_diameter(pts[i:j + 1], norm)
        if c.is_circle:
            back = _wrap_positions(n, j, i)
            diam_bwd = farthest_point_diameter(pts[back], norm)
            diam = min(diam_fwd, diam_bwd)
        else:
            diam = diam_fwd
        ratio = diam / chord
        if ratio > best:
            best = ratio
            wit = (i, j)
    if wit is None:
        raise EstimationError("no valid pair sampled")
    return EstimateReport(name="turning_constant", value=float(best), witness=wit,
                          budget=budget, seed=seed, refinement=n,
                          extra={"mode": "budgeted"})


# ---------------------------------------------------------------------------
# chain connectivity and uniform disconnectedness
# ---------------------------------------------------------------------------

@dataclass
class ChainComponents:
    eps: float
    count: int
    labels: np.ndarray

    def components(self):
        return [np.flatnonzero(self.labels == k).tolist() for k in range(self.count)]


def chain_components(space: MetricSpace, eps: float) -> ChainComponents:
    """Connected components of the strict eps-step graph (edges d < eps)."""
    if not eps > 0:
        raise InputError("eps must be positive")
    n = len(space)
    if space.backend == "matrix":
        adj = sparse.csr_matrix(space.matrix < eps)
        count, labels = csgraph.connected_components(adj, directed=False)
        return ChainComponents(eps, int(count), labels)
    tree = cKDTree(space.points)
    p = 2.0 if space.backend == "euclidean" else np.inf
    pairs = tree.query_pairs(r=eps, p=p, output_type="ndarray")
    if len(pairs):
        d = space.norm(space.points[pairs[:, 0]] - space.points[pairs[:, 1]])
        pairs = pairs[d < eps]
    if len(pairs) == 0:
        adj = sparse.csr_matrix((n, n))
    else:
        ones = np.ones(len(pairs), dtype=np.int8)
        adj = sparse.coo_matrix((ones, (pairs[:, 0], pairs[:, 1])), shape=(n, n))
    count, labels = csgraph.connected_components(adj, directed=False)
    return ChainComponents(eps, int(count), labels)


def is_chain_connected(space: MetricSpace, a: int, b: int, eps: float) -> bool:
    comps = chain_components(space, eps)
    return bool(comps.labels[space.check_id(a)] == comps.labels[space.check_id(b)])


def _mst_edges(D: np.ndarray):
    """Prim's algorithm on a dense symmetric matrix; zero weights welcome."""
    n = len(D)
    visited = np.zeros(n, dtype=bool)
    visited[0] = True
    best = D[0].copy()
    parent = np.zeros(n, dtype=int)
    edges = []
    for _ in range(n - 1):
        masked = np.where(visited, np.inf, best)
        k = int(np.argmin(masked))
        edges.append((int(parent[k]), k, float(best[k])))
        visited[k] = True
        improve = D[k] < best
        parent[improve] = k
        best = np.minimum(best, D[k])
    return edges


def uniform_disconnectedness(space: MetricSpace) -> EstimateReport:
    """Smallest ratio (best possible largest chain step) / (endpoint distance).

    The optimal largest step between a and b equals the maximum edge on
    the a-b path in a minimum spanning tree of the complete distance
    graph; the constant is the minimum of that ratio over all pairs with
    positive distance.
    """
    n = len(space)
    if n < 2:
        raise InputError("need at least 2 points")
    D = space.distance_matrix()
    edges = _mst_edges(D)
    adj: list = [[] for _ in range(n)]
    for a, b, w in edges:
        adj[a].append((b, w))
        adj[b].append((a, w))
    minimax = np.zeros((n, n))
    for src in range(n):
        stack = [(src, 0.0)]
        seen = np.zeros(n, dtype=bool)
        seen[src] = True
        while stack:
            v, m = stack.pop()
            for w, e in adj[v]:
                if not seen[w]:
                    seen[w] = True
                    mm = max(m, e)
                    minimax[src, w] = mm
                    stack.append((w, mm))
    iu, ju = np.triu_indices(n, k=1)
    dd = D[iu, ju]
    ok = dd > 0
    if not np.any(ok):
        raise EstimationError("all pairs coincide; constant undefined")
    ratios = minimax[iu[ok], ju[ok]] / dd[ok]
    k = int(np.argmin(ratios))
    wit = (int(iu[ok][k]), int(ju[ok][k]))
    return EstimateReport(name="uniform_disconnectedness", value=float(ratios[k]),
                          witness=wit, budget=0, seed=0, refinement=n,
                          extra={"mode": "mst-exhaustive"})


# ---------------------------------------------------------------------------
# doubling constant (greedy upper bound)
# ---------------------------------------------------------------------------

def doubling_estimate(space: MetricSpace, radii, centers_budget: int = 16,
                      seed: int = 0, centers=None) -> EstimateReport:
    """Greedy cover count: balls of radius r covered by half-radius balls.

    For sampled (center, r) the points of the ball are covered greedily by
    balls of radius r/2 around farthest-point-first picks (starting at the
    center). The maximum pick count is an upper-bound style heuristic for
    the doubling constant, reported as such, never claimed optimal.
    Explicit `centers` override the random draw.
    """
    radii = [float(r) for r in np.atleast_1d(radii)]
    if any(r <= 0 for r in radii):
        raise InputError("radii must be positive")
    n = len(space)
    rng = np.random.default_rng(seed)
    worst = 0
    wit = None
    for r in radii:
        if centers is None:
            picked_centers = rng.integers(0, n, size=min(centers_budget, n))
        else:
            picked_centers = np.asarray(centers, dtype=int)
        for ci in picked_centers:
            ci = int(ci)
            dists = space.distances_from(ci)
            ball = np.flatnonzero(dists <= r)
            cover = space.distances_from(ci, ball)
            count = 1
            while np.any(cover > r / 2.0):
                pick = int(ball[np.argmax(cover)])
                cover = np.minimum(cover, space.distances_from(pick, ball))
                count += 1
            if count > worst:
                worst = count
                wit = (ci, r)
    return EstimateReport(name="doubling_estimate", value=float(worst),
                          witness=wit, budget=centers_budget, seed=seed,
                          refinement=n, extra={"radii": radii})


# ---------------------------------------------------------------------------
# quadruple distance-ratio profile
# ---------------------------------------------------------------------------

def qh_profile(m: MapSample, budget: int, seed: int, bins: int = 24):
    """Upper envelope of output vs input quadruple distance ratios.

    Samples quadruples of recorded rows, records
    (d(x1,x2)/d(x3,x4), d(y1,y2)/d(y3,y4)), and bins the ratios
    logarithmically, keeping the max output ratio per bin. A diagnostic
    surrogate for quadruple-ratio distortion, not a decision procedure.
    """
    if len(m) < 4:
        raise InputError("need at least 4 recorded rows")
    if m.codomain.backend == "matrix":
        sub = m.codomain.matrix[np.ix_(m.outputs, m.outputs)]
        distinct = not np.any(sub[~np.eye(len(sub), dtype=bool)] == 0)
    else:
        rows = m.codomain.points[m.outputs]
        distinct = len(np.unique(rows, axis=0)) == len(rows)
    if not distinct:
        raise InputError("map is not injective on its recorded samples")
    rng = np.random.default_rng(seed)
    quads = rng.integers(0, len(m), size=(int(budget), 4))
    t_in = []
    t_out = []
    for q in quads:
        i1, i2, i3, i4 = (int(x) for x in q)
        den_in = m.input_distance(i3, i4)
        den_out = m.output_distance(i3, i4)
        if den_in <= 0 or den_out <= 0:
            continue
        t_in.append(m.input_distance(i1, i2) / den_in)
        t_out.append(m.output_distance(i1, i2) / den_out)
    t_in = np.asarray(t_in)
    t_out = np.asarray(t_out)
    pos = t_in > 0
    t_in, t_out = t_in[pos], t_out[pos]
    if len(t_in) == 0:
        raise EstimationError("no nondegenerate quadruples sampled")
    lo, hi = np.log10(t_in.min()), np.log10(t_in.max())
    if hi <= lo:
        hi = lo + 1e-9
    edges = np.logspace(lo, hi, bins + 1)
    which = np.clip(np.searchsorted(edges, t_in, side="right") - 1, 0, bins - 1)
    envelope = []
    for k in range(bins):
        sel = which == k
        if not np.any(sel):
            continue
        envelope.append({
            "t_in_lo": float(edges[k]),
            "t_in_hi": float(edges[k + 1]),
            "t_in_max": float(t_in[sel].max()),
            "t_out_max": float(t_out[sel].max()),
            "count": int(np.sum(sel)),
        })
    return envelope


# ---------------------------------------------------------------------------
# absorption identities and the displacement bound
# ---------------------------------------------------------------------------

@dataclass
class AbsorptionReport:
    passed: bool
    failures: list
    displacement_constant: float
    displacement_witness: Optional[tuple]
    pairs_checked: int
    triples_checked: int
    budget: int
    seed: int

    def to_json_dict(self) -> dict:
        return {
            "passed": self.passed,
            "failures": [list(map(int, f)) for f in self.failures[:8]],
            "displacement_constant": self.displacement_constant,
            "displacement_witness": (list(map(int, self.displacement_witness))
                                     if self.displacement_witness else None),
            "pairs_checked": self.pairs_checked,
            "triples_checked": self.triples_checked,
            "budget": self.budget,
            "seed": self.seed,
        }


def absorption_check(handle: PointMapHandle, sampler: DomainSampler, budget: int,
                     seed: int, min_sep: float = 1e-9) -> AbsorptionReport:
    """Exact absorption identities plus the displacement ratio of a mixer.

    Half the budget draws in-domain pairs (a, b) and requires
    sigma(a,a,b), sigma(a,b,a), sigma(b,a,a) to equal the point a exactly
    (bitwise on coordinates). The other half draws in-domain triples and
    tracks max d(sigma(a,b,c), a)/d(a,b), which the mixer's Lipschitz
    constant must dominate.
    """
    if handle.arity != 3:
        raise InputError("absorption_check needs a 3-ary handle")
    if sampler.flavor != handle.domain.flavor:
        raise DomainError(
            f"sampler flavor {sampler.flavor!r} does not match the handle "
            f"domain {handle.domain.flavor!r}")
    if sampler.flavor != "full" and sampler.radius > handle.domain.radius:
        raise DomainError("sampler radius exceeds the handle domain radius")
    rng = np.random.default_rng(seed)
    space = handle.space
    half = max(budget // 2, 1)
    failures = []
    pairs = sampler.pairs(half, rng)
    for a, b in pairs:
        a, b = int(a), int(b)
        pa = space.points[a]
        for trip in ((a, a, b), (a, b, a), (b, a, a)):
            out = handle(*trip)
            if not np.array_equal(out, pa):
                failures.append(trip)
    disp = -1.0
    disp_wit = None
    triples = sampler.triples(budget - half, rng) if budget - half > 0 else []
    n_trip = 0
    for trip in triples:
        a, b, c = (int(x) for x in trip)
        dab = space.distance(a, b)
        if dab < min_sep:
            continue
        n_trip += 1
        ratio = float(space.norm(handle(a, b, c) - space.points[a])) / dab
        if ratio > disp:
            disp = ratio
            disp_wit = (a, b, c)
    return AbsorptionReport(passed=not failures, failures=failures,
                            displacement_constant=max(disp, 0.0),
                            displacement_witness=disp_wit,
                            pairs_checked=len(pairs), triples_checked=n_trip,
                            budget=budget, seed=seed)
