"""Finite-subset hyperspaces, their sup-of-distances metric, and the
retraction a set-symmetric mean induces on them.

A FiniteSubset is a canonical (sorted, distinct) list of at most n point
ids of a base space. The two-sided sup-of-distances metric makes the
family of such subsets a metric space in its own right; a mean whose value
depends only on the underlying set retracts it onto the base space.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .mixers import MeanHandle
from .spaces import DomainError, InputError, MetricSpace


@dataclass(frozen=True)
class FiniteSubset:
    """A nonempty subset of at most `capacity` points, canonically ordered."""

    base: MetricSpace
    members: tuple
    capacity: int

    def __post_init__(self):
        members = tuple(sorted(self.base.check_id(i) for i in self.members))
        if len(members) == 0:
            raise InputError("subset must be nonempty")
        if len(set(members)) != len(members):
            raise InputError("subset members must be distinct")
        if len(members) > self.capacity:
            raise InputError(f"subset exceeds capacity {self.capacity}")
        object.__setattr__(self, "members", members)

    def __len__(self) -> int:
        return len(self.members)


def hausdorff(A: FiniteSubset, B: FiniteSubset) -> float:
    """max(sup_a dist(a, B), sup_b dist(b, A)) over the shared base space."""
    if A.base is not B.base:
        raise DomainError("subsets live over different base spaces")
    ia = np.fromiter(A.members, dtype=int)
    ib = np.fromiter(B.members, dtype=int)
    if A.base.backend == "matrix":
        cross = A.base.matrix[np.ix_(ia, ib)]
    else:
        diff = A.base.points[ia][:, None, :] - A.base.points[ib][None, :, :]
        cross = A.base.norm(diff)
    return float(max(cross.min(axis=1).max(), cross.min(axis=0).max()))


def hausdorff_by_maps(A: FiniteSubset, B: FiniteSubset) -> float:
    """Smallest rho admitting maps A->B and B->A of displacement <= rho.

    Brute force over all maps; an independent characterization of the
    metric, exponential in the subset sizes, intended for small subsets.
    """
    if A.base is not B.base:
        raise DomainError("subsets live over different base spaces")
    if len(A) > 6 or len(B) > 6:
        raise InputError("brute-force characterization is for small subsets")

    def one_sided(src, dst):
        best = np.inf
        for img in itertools.product(dst.members, repeat=len(src)):
            disp = max(src.base.distance(s, t) for s, t in zip(src.members, img))
            best = min(best, disp)
        return best

    return float(max(one_sided(A, B), one_sided(B, A)))


def _nearest_map(base: MetricSpace, src: tuple, dst: tuple) -> dict:
    """Nearest-point map src -> dst, ties to the lower id."""
    out = {}
    for s in src:
        d = [base.distance(s, t) for t in dst]
        out[s] = dst[int(np.argmin(d))]
    return out


def _pad(members: tuple, arity: int) -> tuple:
    return members + (members[-1],) * (arity - len(members))


@dataclass
class RetractionCheck:
    passed: bool
    violations: list
    bound_constant: float
    pairs_checked: int

    def to_json_dict(self) -> dict:
        return {
            "passed": self.passed,
            "violations": self.violations[:8],
            "bound_constant": self.bound_constant,
            "pairs_checked": self.pairs_checked,
        }


class MeanRetraction:
    """The map subsets -> points induced by a set-symmetric n-ary mean.

    r(A) evaluates the mean on A padded to full arity by repeating its
    last member; set symmetry makes the padding choice irrelevant, and
    singletons map to themselves.
    """

    def __init__(self, mu: MeanHandle, check_budget: int = 256, seed: int = 0):
        self.mu = mu
        self.arity = mu.arity
        rng = np.random.default_rng(seed)
        n = len(mu.space)
        for _ in range(check_budget):
            k = int(rng.integers(1, self.arity + 1))
            support = tuple(sorted({int(x) for x in rng.integers(0, n, size=k)}))
            t1 = support + (support[-1],) * (self.arity - len(support))
            t2 = support + (support[0],) * (self.arity - len(support))
            t2 = tuple(int(x) for x in rng.permutation(np.array(t2, dtype=int)))
            v1 = mu(*t1)
            v2 = mu(*t2)
            if not np.array_equal(v1, v2):
                raise InputError(
                    f"mean is not set-symmetric: {t1} -> {v1.tolist()} but "
                    f"{t2} -> {v2.tolist()}")

    def __call__(self, A: FiniteSubset) -> np.ndarray:
        if A.base is not self.mu.space:
            raise DomainError("subset lives over a different space")
        if len(A) > self.arity:
            raise DomainError(f"subset larger than the mean arity {self.arity}")
        return self.mu(*_pad(A.members, self.arity))

    def verify_bound(self, pairs_budget: int, seed: int, lip: float,
                     max_subset: Optional[int] = None) -> RetractionCheck:
        """Check d(r(A), r(B)) <= 3 * arity * lip * hausdorff(A, B) on random pairs.

        Also materializes the nearest-point maps f, g and the repair map h
        from the displacement argument; violations are returned with their
        subset pair.
        """
        rng = np.random.default_rng(seed)
        space = self.mu.space
        n = len(space)
        cap = max_subset or self.arity
        bound = 3.0 * self.arity * lip
        violations = []
        checked = 0
        for _ in range(pairs_budget):
            ka = int(rng.integers(1, cap + 1))
            kb = int(rng.integers(1, cap + 1))
            A = FiniteSubset(space, tuple(set(int(x) for x in rng.integers(0, n, ka))),
                             self.arity)
            B = FiniteSubset(space, tuple(set(int(x) for x in rng.integers(0, n, kb))),
                             self.arity)
            rho = hausdorff(A, B)
            f = _nearest_map(space, A.members, B.members)
            g = _nearest_map(space, B.members, A.members)
            b_image = set(f.values())
            h = {b: (b if b in b_image else f[g[b]]) for b in B.members}
            # sanity of the construction itself
            if max(space.distance(a, f[a]) for a in A.members) > rho + 1e-12:
                raise InputError("nearest map exceeds the subset distance")
            if h and max(space.distance(b, h[b]) for b in B.members) > 2 * rho + 1e-12:
                raise InputError("repair map exceeds twice the subset distance")
            d = float(space.norm(self(A) - self(B)))
            checked += 1
            if d > bound * rho + 1e-12:
                violations.append({"A": list(A.members), "B": list(B.members),
                                   "d": d, "rho": rho})
        return RetractionCheck(passed=not violations, violations=violations,
                               bound_constant=bound, pairs_checked=checked)


def mean_to_retraction(mu: MeanHandle, check_budget: int = 256,
                       seed: int = 0) -> MeanRetraction:
    """Retraction of the subset hyperspace induced by a set-symmetric mean."""
    return MeanRetraction(mu, check_budget=check_budget, seed=seed)
