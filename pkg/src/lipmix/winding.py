"""Continuous argument along planar polylines and the certified lower
bounds it yields for Lipschitz-mean constants on arcs.

The key fact: a path-connected planar set carrying an L-Lipschitz mean
admits, between any two points a, b with L|a-b| <= dist(z0, set), a
connecting curve whose total argument change about z0 lies within 2*pi/3
of a multiple of 4*pi. On an arc the connecting curve class is unique, so
a pair whose subarc argument change falls outside that allowed set
certifies L > dist(z0, arc) / |a-b|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.spatial import cKDTree

from .curves import SampledCurve
from .estimators import EstimateReport
from .spaces import DomainError, InputError

MAX_SEGMENT_TURN = math.pi / 2.0
ALLOWED_HALF_WIDTH = 2.0 * math.pi / 3.0
ALLOWED_PERIOD = 4.0 * math.pi


class RefinementError(DomainError):
    """A polyline segment subtends too large an angle at the base point."""


@dataclass(frozen=True)
class ArgTrace:
    """Continuous argument of (polyline - z0), vertex by vertex.

    Consecutive increments lie strictly inside (-pi/2, pi/2); each args[k]
    agrees with atan2 at vertex k modulo 2*pi.
    """

    polyline: np.ndarray
    z0: np.ndarray
    args: np.ndarray


def _as_planar_points(obj) -> np.ndarray:
    if isinstance(obj, SampledCurve):
        if obj.space.backend != "euclidean" or obj.space.dim not in (1, 2):
            raise InputError("winding machinery needs planar euclidean curves")
        pts = obj.points
    else:
        pts = np.atleast_2d(np.asarray(obj, dtype=float))
    if pts.shape[1] == 1:
        pts = np.column_stack([pts[:, 0], np.zeros(len(pts))])
    if pts.shape[1] != 2:
        raise InputError("polyline must be an (m, 2) array")
    return pts


def build_arg_trace(polyline, z0, max_turn: float = MAX_SEGMENT_TURN) -> ArgTrace:
    """Track a continuous branch of arg(p - z0) along the vertices.

    Raises RefinementError (naming the segment) if any single segment
    subtends an angle of max_turn or more; robust branch tracking needs
    strictly smaller steps than the mathematical bound pi.
    """
    pts = _as_planar_points(polyline)
    z0 = np.asarray(z0, dtype=float).reshape(2)
    rel = pts - z0
    rad = np.linalg.norm(rel, axis=1)
    if np.any(rad == 0):
        k = int(np.argmax(rad == 0))
        raise DomainError(f"vertex {k} coincides with the base point")
    raw = np.arctan2(rel[:, 1], rel[:, 0])
    inc = np.diff(raw)
    inc -= 2.0 * np.pi * np.round(inc / (2.0 * np.pi))
    bad = np.abs(inc) >= max_turn
    if np.any(bad):
        k = int(np.argmax(bad))
        raise RefinementError(
            f"segment {k} subtends {abs(inc[k]):.4f} rad at the base point "
            f"(cap {max_turn:.4f}); refine the polyline or move z0")
    args = np.concatenate([[raw[0]], raw[0] + np.cumsum(inc)])
    return ArgTrace(polyline=pts, z0=z0, args=args)


def delta_arg(obj, z0, closed: Optional[bool] = None) -> float:
    """Total change of the continuous argument of (curve - z0).

    For a closed traversal (default for circle curves) the closing edge is
    included, making the value the winding angle: +-2*pi times the winding
    number for simple closed polylines.
    """
    pts = _as_planar_points(obj)
    if closed is None:
        closed = isinstance(obj, SampledCurve) and obj.is_circle
    if closed:
        pts = np.vstack([pts, pts[:1]])
    trace = build_arg_trace(pts, z0)
    return float(trace.args[-1] - trace.args[0])


def allowed_delta(delta: float) -> bool:
    """True iff delta lies within 2*pi/3 of an integer multiple of 4*pi
    (boundary inclusive)."""
    k = np.round(delta / ALLOWED_PERIOD)
    return bool(abs(delta - ALLOWED_PERIOD * k) <= ALLOWED_HALF_WIDTH)


def _allowed_mask(deltas: np.ndarray) -> np.ndarray:
    k = np.round(deltas / ALLOWED_PERIOD)
    return np.abs(deltas - ALLOWED_PERIOD * k) <= ALLOWED_HALF_WIDTH


def suggest_centers(curve: SampledCurve, max_candidates: int = 32,
                    span: Optional[int] = None) -> np.ndarray:
    """Heuristic base-point candidates: circumcenters of high-turning spots.

    Slides a three-point stencil along the curve, keeps circumcenters of
    tightly curved stencils, and dedups nearby candidates. Purely a search
    aid: certificates never depend on how candidates were found.
    """
    pts = _as_planar_points(curve)
    n = len(pts)
    if span is None:
        span = max(1, n // 512)
    stride = max(1, n // 1024)
    found = []
    for i in range(span, n - span, stride):
        a, b, c = pts[i - span], pts[i], pts[i + span]
        d = 2.0 * ((a[0] - c[0]) * (b[1] - c[1]) - (b[0] - c[0]) * (a[1] - c[1]))
        if abs(d) < 1e-14:
            continue
        asq = a @ a
        bsq = b @ b
        csq = c @ c
        ux = ((asq - csq) * (b[1] - c[1]) - (bsq - csq) * (a[1] - c[1])) / d
        uy = ((bsq - csq) * (a[0] - c[0]) - (asq - csq) * (b[0] - c[0])) / d
        center = np.array([ux, uy])
        radius = float(np.linalg.norm(center - b))
        chord = float(np.linalg.norm(a - c))
        if radius < 4.0 * chord:
            found.append((radius, center))
    found.sort(key=lambda rc: rc[0])
    picked = []
    for radius, center in found:
        if any(np.linalg.norm(center - q) < max(radius, 1e-12) for q in picked):
            continue
        picked.append(center)
        if len(picked) >= max_candidates:
            break
    return np.array(picked) if picked else np.empty((0, 2))


def _candidate_pairs(n: int, pts: np.ndarray, budget: int, knn: int,
                     rng: np.random.Generator) -> np.ndarray:
    """Endpoint pair + metric near pairs + uniform pairs, deduplicated."""
    pairs = [(0, n - 1)]
    if knn > 0 and n > 2:
        tree = cKDTree(pts)
        k = min(knn + 1, n)
        _, idx = tree.query(pts, k=k)
        for i in range(n):
            for j in idx[i][1:]:
                a, b = (i, int(j)) if i < j else (int(j), i)
                if a != b:
                    pairs.append((a, b))
    draw = rng.integers(0, n, size=(budget, 2))
    for a, b in draw:
        if a != b:
            pairs.append((min(int(a), int(b)), max(int(a), int(b))))
    return np.unique(np.array(pairs, dtype=int), axis=0)


def mean_lip_lower_bound(curve: SampledCurve, z0_candidates,
                         budget: int = 20_000, seed: int = 0,
                         exhaustive: Optional[bool] = None,
                         knn: int = 8) -> EstimateReport:
    """Certified lower bound on the constant of any Lipschitz mean on an arc.

    For each base point z0 and sampled pair (a, b) whose connecting subarc
    has a disallowed argument change, the ratio dist(z0, curve)/d(a, b) is
    a valid lower bound; the maximum over all candidates is returned. With
    no disallowed pair the value is 0 and extra["no_obstruction"] is set.

    Exhaustive mode (default up to 2600 samples) scans every pair; the
    budgeted mode scans the endpoint pair, metric near pairs, and random
    pairs. Candidates lying on the curve are dropped; if none survive,
    that is an input error.
    """
    if curve.is_circle:
        raise InputError("the certificate applies to arcs only")
    pts = _as_planar_points(curve)
    n = len(pts)
    z0s = np.atleast_2d(np.asarray(z0_candidates, dtype=float))
    if z0s.shape[1] != 2:
        raise InputError("z0 candidates must be planar points")
    usable = []
    for z0 in z0s:
        dist = float(np.min(np.linalg.norm(pts - z0, axis=1)))
        if dist > 0:
            usable.append((z0, dist))
    if not usable:
        raise InputError("every base-point candidate lies on the curve")
    if exhaustive is None:
        exhaustive = n <= 2600
    rng = np.random.default_rng(seed)
    if not exhaustive:
        cand = _candidate_pairs(n, pts, budget, knn, rng)
    best = 0.0
    witness = None
    best_z0 = None
    best_delta = None
    found = False
    for z0, dist in usable:
        trace = build_arg_trace(pts, z0)
        args = trace.args
        if exhaustive:
            block = max(1, int(2**22) // max(n, 1))
            for lo in range(0, n, block):
                hi = min(lo + block, n)
                deltas = args[None, :] - args[lo:hi, None]
                chords = np.linalg.norm(pts[None, :, :] - pts[lo:hi, None, :], axis=2)
                cols = np.arange(n)[None, :]
                rows = np.arange(lo, hi)[:, None]
                mask = (cols > rows) & ~_allowed_mask(deltas)
                if not np.any(mask):
                    continue
                found = True
                ratios = np.where(mask & (chords > 0), dist / np.where(chords > 0, chords, 1.0), -1.0)
                k = int(np.argmax(ratios))
                i, j = np.unravel_index(k, ratios.shape)
                if ratios[i, j] > best:
                    best = float(ratios[i, j])
                    witness = (lo + int(i), int(j))
                    best_z0 = z0
                    best_delta = float(deltas[i, j])
        else:
            deltas = args[cand[:, 1]] - args[cand[:, 0]]
            chords = np.linalg.norm(pts[cand[:, 1]] - pts[cand[:, 0]], axis=1)
            mask = ~_allowed_mask(deltas) & (chords > 0)
            if not np.any(mask):
                continue
            found = True
            ratios = np.where(mask, dist / np.where(chords > 0, chords, 1.0), -1.0)
            k = int(np.argmax(ratios))
            if ratios[k] > best:
                best = float(ratios[k])
                witness = (int(cand[k, 0]), int(cand[k, 1]))
                best_z0 = z0
                best_delta = float(deltas[k])
    extra = {"no_obstruction": not found}
    if witness is not None:
        extra["z0"] = [float(best_z0[0]), float(best_z0[1])]
        extra["delta_arg"] = best_delta
        extra["dist_z0"] = float(np.min(np.linalg.norm(pts - best_z0, axis=1)))
    return EstimateReport(name="mean_lip_lower_bound", value=best,
                          witness=witness if witness is not None else (),
                          budget=0 if exhaustive else budget, seed=seed,
                          refinement=n, extra=extra)
