"""Finite metric spaces, product metrics, and sampled maps between them.

A space is a finite list of points with one of three distance backends:
coordinate rows under the 2-norm ("euclidean"), coordinate rows under the
max-norm ("sup"), or an explicit symmetric table ("matrix"). Point ids are
row indices. Everything is immutable after construction and all operations
are pure, so concurrent evaluation is safe and reductions are
order-independent.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

BACKENDS = ("euclidean", "sup", "matrix")


class LipmixError(Exception):
    """Base class for library errors."""


class InputError(LipmixError, ValueError):
    """Malformed construction input: bad shape, range, or file content."""


class DomainError(LipmixError, ValueError):
    """An operation was evaluated outside its declared domain."""


class TopologyError(DomainError):
    """A curve of the wrong topology (arc vs circle) was supplied."""


class EstimationError(LipmixError, RuntimeError):
    """An estimator could not produce a value from the admissible samples."""


class ConsistencyError(LipmixError, RuntimeError):
    """An internal guarantee failed; indicates a bug or broken input data."""


def _readonly(a, dtype=float) -> np.ndarray:
    arr = np.array(a, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


class MetricSpace:
    """Finite point set with a distance backend.

    Parameters
    ----------
    points : array-like of shape (n, d), optional for the matrix backend
        Coordinate payloads. Required for embedding backends.
    backend : {"euclidean", "sup", "matrix"}
    matrix : array-like of shape (n, n), required for the matrix backend
        Symmetric table of nonnegative finite distances with zero diagonal.
    """

    def __init__(self, points=None, backend: str = "euclidean", matrix=None):
        if backend not in BACKENDS:
            raise InputError(f"unknown backend {backend!r}")
        self.backend = backend
        if backend == "matrix":
            if matrix is None:
                raise InputError("matrix backend requires a distance table")
            m = _readonly(matrix)
            if m.ndim != 2 or m.shape[0] != m.shape[1]:
                raise InputError(f"distance table must be square, got {m.shape}")
            if not np.all(np.isfinite(m)):
                raise InputError("distance table has non-finite entries")
            if np.any(m < 0):
                raise InputError("distance table has negative entries")
            if not np.array_equal(m, m.T):
                raise InputError("distance table must be symmetric")
            self.matrix = m
            if points is None:
                points = np.arange(m.shape[0], dtype=float)[:, None]
            self.points = _readonly(points)
            if len(self.points) != m.shape[0]:
                raise InputError("points/table size mismatch")
        else:
            if points is None:
                raise InputError("embedding backends require points")
            p = _readonly(points)
            if p.ndim == 1:
                p = _readonly(p[:, None])
            if p.ndim != 2 or len(p) == 0:
                raise InputError(f"points must be a nonempty (n, d) array, got shape {p.shape}")
            if not np.all(np.isfinite(p)):
                raise InputError("points contain non-finite coordinates")
            self.points = p
            self.matrix = None

    def __len__(self) -> int:
        return len(self.points)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def check_id(self, i) -> int:
        i = int(i)
        if not 0 <= i < len(self):
            raise DomainError(f"point id {i} out of range [0, {len(self)})")
        return i

    def norm(self, diff: np.ndarray) -> np.ndarray:
        """Backend norm of coordinate differences (embeddings only).

        diff may be a single vector or an (m, d) stack.
        """
        if self.backend == "euclidean":
            return np.linalg.norm(diff, axis=-1)
        if self.backend == "sup":
            return np.max(np.abs(diff), axis=-1)
        raise InputError("norm() is undefined for the matrix backend")

    def distance(self, a, b) -> float:
        a = self.check_id(a)
        b = self.check_id(b)
        if self.backend == "matrix":
            return float(self.matrix[a, b])
        return float(self.norm(self.points[a] - self.points[b]))

    def pairwise(self, ids_a, ids_b) -> np.ndarray:
        """Elementwise distances between two equal-length id arrays."""
        ia = np.asarray(ids_a, dtype=int)
        ib = np.asarray(ids_b, dtype=int)
        if self.backend == "matrix":
            return self.matrix[ia, ib].astype(float)
        return self.norm(self.points[ia] - self.points[ib])

    def distances_from(self, a, ids=None) -> np.ndarray:
        """Distances from point `a` to every point (or to `ids`)."""
        a = self.check_id(a)
        if self.backend == "matrix":
            row = self.matrix[a]
            return row if ids is None else row[np.asarray(ids, dtype=int)]
        pts = self.points if ids is None else self.points[np.asarray(ids, dtype=int)]
        return self.norm(pts - self.points[a])

    def distance_matrix(self, ids=None) -> np.ndarray:
        """Dense distance matrix over all points (or over `ids`)."""
        if self.backend == "matrix":
            if ids is None:
                return np.array(self.matrix)
            idx = np.asarray(ids, dtype=int)
            return self.matrix[np.ix_(idx, idx)]
        pts = self.points if ids is None else self.points[np.asarray(ids, dtype=int)]
        diff = pts[:, None, :] - pts[None, :, :]
        return self.norm(diff)

    def to_json_dict(self) -> dict:
        d = {"backend": self.backend, "points": self.points}
        if self.backend == "matrix":
            d["matrix"] = self.matrix
        return d

    @classmethod
    def from_json_dict(cls, d: dict) -> "MetricSpace":
        backend = d.get("backend", "euclidean")
        if backend == "matrix":
            return cls(points=d.get("points"), backend="matrix", matrix=d.get("matrix"))
        return cls(points=d["points"], backend=backend)


def distance(space: MetricSpace, a, b) -> float:
    """Distance between two point ids of a space."""
    return space.distance(a, b)


class ProductSpace:
    """Finite product of metric spaces carrying the sum metric.

    A point is a tuple of ids, one per factor; the distance between two
    tuples is the sum of the factor distances.
    """

    def __init__(self, factors: Sequence[MetricSpace]):
        factors = list(factors)
        if len(factors) < 1:
            raise InputError("product needs at least one factor")
        self.factors = factors

    @property
    def arity(self) -> int:
        return len(self.factors)

    def check_tuple(self, ids) -> tuple:
        ids = tuple(int(i) for i in ids)
        if len(ids) != self.arity:
            raise DomainError(f"expected a {self.arity}-tuple, got {len(ids)} ids")
        for f, i in zip(self.factors, ids):
            f.check_id(i)
        return ids

    def distance(self, a, b) -> float:
        a = self.check_tuple(a)
        b = self.check_tuple(b)
        return float(sum(f.distance(i, j) for f, i, j in zip(self.factors, a, b)))

    def tuple_distances(self, tuples_a: np.ndarray, tuples_b: np.ndarray) -> np.ndarray:
        """Vectorized sum-metric distances between stacks of id tuples."""
        ta = np.asarray(tuples_a, dtype=int)
        tb = np.asarray(tuples_b, dtype=int)
        total = np.zeros(len(ta))
        for k, f in enumerate(self.factors):
            total += f.pairwise(ta[:, k], tb[:, k])
        return total


def power(space: MetricSpace, n: int) -> ProductSpace:
    """The n-fold product of a space with itself."""
    if n < 1:
        raise InputError("power requires n >= 1")
    return ProductSpace([space] * n)


@dataclass(frozen=True)
class MapSample:
    """A finite evaluable map: recorded (input tuple -> output id) rows.

    Inputs are id tuples in `domain` (a MetricSpace is treated as arity 1);
    outputs are ids in `codomain`. Duplicate input rows are rejected.
    """

    domain: object  # MetricSpace | ProductSpace
    codomain: MetricSpace
    inputs: np.ndarray  # (m, arity) int
    outputs: np.ndarray  # (m,) int

    def __post_init__(self):
        inputs = np.atleast_2d(np.asarray(self.inputs, dtype=int))
        outputs = np.asarray(self.outputs, dtype=int)
        object.__setattr__(self, "inputs", inputs)
        object.__setattr__(self, "outputs", outputs)
        if len(inputs) != len(outputs):
            raise InputError("inputs/outputs length mismatch")
        dom = self.domain
        arity = dom.arity if isinstance(dom, ProductSpace) else 1
        if inputs.shape[1] != arity:
            raise InputError(f"input tuples must have arity {arity}")
        for row in inputs:
            if isinstance(dom, ProductSpace):
                dom.check_tuple(row)
            else:
                dom.check_id(row[0])
        for o in outputs:
            self.codomain.check_id(o)
        if len({tuple(r) for r in inputs.tolist()}) != len(inputs):
            raise InputError("duplicate input tuples in map sample")

    @property
    def arity(self) -> int:
        return self.inputs.shape[1]

    def __len__(self) -> int:
        return len(self.inputs)

    def input_distance(self, i: int, j: int) -> float:
        if isinstance(self.domain, ProductSpace):
            return self.domain.distance(self.inputs[i], self.inputs[j])
        return self.domain.distance(self.inputs[i, 0], self.inputs[j, 0])

    def output_distance(self, i: int, j: int) -> float:
        return self.codomain.distance(self.outputs[i], self.outputs[j])


def map_from_function(fn, space: MetricSpace, ids=None, codomain_backend=None) -> MapSample:
    """Record `fn` on the given ids of `space` as a MapSample.

    `fn` receives a coordinate row and returns one; outputs become the
    points of a fresh codomain space (one id per row, duplicates allowed
    as distinct rows).
    """
    if ids is None:
        ids = np.arange(len(space))
    ids = np.asarray(ids, dtype=int)
    outs = np.array([np.atleast_1d(np.asarray(fn(space.points[i]), dtype=float)) for i in ids])
    codomain = MetricSpace(points=outs, backend=codomain_backend or space.backend)
    return MapSample(domain=space, codomain=codomain,
                     inputs=ids[:, None], outputs=np.arange(len(ids)))


def displacement(m: MapSample) -> float:
    """Largest distance between an input point and its image.

    Requires an arity-1 map recorded inside a single space (domain is the
    codomain); zero exactly when the map fixes every recorded input.
    """
    if len(m) == 0:
        raise DomainError("displacement of an empty map sample")
    if isinstance(m.domain, ProductSpace) or m.arity != 1:
        raise DomainError("displacement needs a self-map of a single space")
    if m.domain is not m.codomain:
        raise DomainError("displacement needs domain == codomain")
    d = m.codomain.pairwise(m.inputs[:, 0], m.outputs)
    return float(np.max(d))


@dataclass(frozen=True)
class MetricCheckReport:
    passed: bool
    kind: Optional[str]  # "triangle" | "symmetry" | "diagonal" | "negative"
    witness: Optional[tuple]  # (a, c, b): d(a, b) vs d(a, c) + d(c, b)
    checked: int
    max_violation: float
    tol: float

    def to_json_dict(self) -> dict:
        return {
            "passed": self.passed,
            "kind": self.kind,
            "witness": list(self.witness) if self.witness else None,
            "checked": self.checked,
            "max_violation": self.max_violation,
            "tol": self.tol,
        }


def validate_metric(space: MetricSpace, tol: float = 0.0, budget: int = 10_000,
                    seed: int = 0) -> MetricCheckReport:
    """Check the metric axioms, reporting the first violating triple.

    Matrix backend: all n^3 ordered triples are checked. Embeddings satisfy
    the axioms by construction, so `budget` random triples are checked
    instead. Violations must exceed `tol` to count; failures are reported,
    never raised.
    """
    if tol < 0:
        raise InputError("tol must be nonnegative")
    n = len(space)
    if space.backend == "matrix":
        m = space.matrix
        diag = np.abs(np.diagonal(m))
        if np.any(diag > tol):
            a = int(np.argmax(diag > tol))
            return MetricCheckReport(False, "diagonal", (a, a, a), n, float(diag[a]), tol)
        # symmetry and nonnegativity hold by construction; triangle remains
        worst = -np.inf
        witness = None
        checked = 0
        for c in range(n):
            # violation(a, b) = d(a, b) - d(a, c) - d(c, b)
            v = m - m[:, c][:, None] - m[c, :][None, :]
            checked += n * n
            vmax = float(v.max())
            if vmax > worst:
                worst = vmax
                a, b = np.unravel_index(int(np.argmax(v)), v.shape)
                witness = (int(a), c, int(b))
        if worst > tol:
            return MetricCheckReport(False, "triangle", witness, checked, worst, tol)
        return MetricCheckReport(True, None, None, checked, max(worst, 0.0), tol)

    rng = np.random.default_rng(seed)
    trips = rng.integers(0, n, size=(int(budget), 3))
    dab = space.pairwise(trips[:, 0], trips[:, 1])
    dac = space.pairwise(trips[:, 0], trips[:, 2])
    dcb = space.pairwise(trips[:, 2], trips[:, 1])
    v = dab - dac - dcb
    k = int(np.argmax(v))
    worst = float(v[k])
    if worst > tol:
        a, b, c = (int(x) for x in trips[k])
        return MetricCheckReport(False, "triangle", (a, c, b), int(budget), worst, tol)
    return MetricCheckReport(True, None, None, int(budget), max(worst, 0.0), tol)
