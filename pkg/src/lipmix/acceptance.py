"""Quantitative acceptance battery tying the library's pieces together.

Each criterion builds its own inputs with pinned sizes, budgets, seeds,
and tolerances, and reports pass/fail plus a short detail string. The
battery doubles as the `verify` CLI subcommand and as the test module's
backbone, so every threshold lives here, in one place.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from . import curves, estimators, hyperspace, mixers, spaces, winding


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    details: str
    seconds: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.number:2d} {self.name}: {self.details} ({self.seconds:.1f}s)"


def _criterion(number, name):
    def wrap(fn):
        fn._criterion = (number, name)
        return fn
    return wrap


@_criterion(1, "median map bounds")
def criterion_median_bounds() -> tuple:
    seg = curves.make_segment(500)
    med = mixers.median_mixer(seg)
    rep = estimators.lipschitz_estimate(med, budget=20_000, seed=3)
    ok_lip = 1 - 1e-3 <= rep.value <= 1 + 1e-12
    circ = curves.make_circle(1.0, 1000)
    mix = mixers.circle_local_mixer(circ, 1.0)
    ab = estimators.absorption_check(mix, estimators.sampler_for_handle(mix),
                                     budget=4000, seed=5)
    ok = ok_lip and ab.passed
    return ok, (f"Lip(med)={rep.value:.12f} in [1-1e-3, 1+1e-12]: {ok_lip}; "
                f"circle mixer absorption exact: {ab.passed}")


@_criterion(2, "turning constants")
def criterion_turning() -> tuple:
    circ = curves.make_circle(1.0, 1000)
    t_circ = estimators.turning_constant(circ, exhaustive=True).value
    par = curves.make_graph_curve("parabola", 10.0, 801)
    t_par = estimators.turning_constant(par, exhaustive=True).value
    box = curves.make_box_curve(1.05, 100)
    t_box = estimators.turning_constant(box, exhaustive=True).value
    ok = abs(t_circ - 1.0) <= 0.01 and t_par >= 5.0 and t_box >= 10.0
    return ok, (f"circle {t_circ:.6f} (=1 within 1%), parabola {t_par:.2f} (>=5), "
                f"box t=1.05 {t_box:.2f} (>=10)")


@_criterion(3, "box mixer: 50-Lipschitz on small triples")
def criterion_box_mixer() -> tuple:
    details = []
    ok = True
    for t in (1.2, 1.5, 1.8):
        handle = mixers.box_mixer(t, samples_per_edge=128)
        sampler = estimators.sampler_for_handle(handle)
        ab = estimators.absorption_check(handle, sampler, budget=10_000, seed=13)
        lip = estimators.lipschitz_estimate(handle, budget=10_000, seed=11)
        ok = ok and ab.passed and lip.value <= 50.0
        details.append(f"t={t}: absorb {ab.passed}, Lip {lip.value:.2f}<=50")
    return ok, "; ".join(details)


def _random_one_lipschitz_pair(rng, knots=9, span=3.0):
    xs = np.linspace(-span, span, knots)
    def walk():
        steps = rng.uniform(-1.0, 1.0, knots - 1) * np.diff(xs)
        return rng.uniform(-1.0, 1.0) + np.concatenate([[0.0], np.cumsum(steps)])
    y1, y2 = walk(), walk()
    lo = mixers.PiecewiseLinear(xs, np.minimum(y1, y2))
    hi = mixers.PiecewiseLinear(xs, np.maximum(y1, y2))
    return lo, hi


@_criterion(4, "strip retraction: sqrt(2) bound and exact identity")
def criterion_strip_retraction() -> tuple:
    rng = np.random.default_rng(42)
    worst = 0.0
    identity_ok = True
    for trial in range(20):
        lo, hi = _random_one_lipschitz_pair(rng)
        retr = mixers.strip_retraction(lo, hi)
        pts = rng.uniform(-5.0, 5.0, size=(400, 2))
        m = spaces.map_from_function(retr, spaces.MetricSpace(points=pts))
        rep = estimators.lipschitz_estimate(m, budget=100_000, seed=trial)
        worst = max(worst, rep.value)
        xs = rng.uniform(-3.0, 3.0, 50)
        us = rng.uniform(0.0, 1.0, 50)
        ylo, yhi = lo(xs), hi(xs)
        ys = np.minimum(np.maximum(ylo + us * (yhi - ylo), ylo), yhi)
        for x, y in zip(xs, ys):
            out = retr((x, y))
            if not (out[0] == x and out[1] == y):
                identity_ok = False
    ok = worst <= math.sqrt(2) + 1e-6 and identity_ok
    return ok, (f"max Lip over 20 strips {worst:.8f} <= sqrt2+1e-6; "
                f"identity exact on strip samples: {identity_ok}")


@_criterion(5, "graph means: exact identities, stable constants, unbounded turning")
def criterion_graph_means() -> tuple:
    ok = True
    details = []
    for profile, extent in (("parabola", 10.0), ("cusp", 1.0)):
        vals = []
        for n in (200, 400, 800):
            c = curves.make_graph_curve(profile, extent, n)
            mu = mixers.graph_mean(c, 2)
            rng = np.random.default_rng(7)
            pts = c.space.points
            exact = True
            for _ in range(2000):
                a, b = (int(x) for x in rng.integers(0, n, 2))
                vab, vba = mu(a, b), mu(b, a)
                if not (np.array_equal(vab, vba) and np.array_equal(mu(a, a), pts[a])):
                    exact = False
            mu3 = mixers.graph_mean(c, 3)
            set_symm = all(
                np.array_equal(mu3(a, a, b), mu3(a, b, b)) and
                np.array_equal(mu3(a, b, a), mu3(b, a, b))
                for a, b in rng.integers(0, n, size=(200, 2)))
            vals.append(estimators.lipschitz_estimate(mu, budget=30_000, seed=101).value)
            ok = ok and exact and set_symm
        spread = (max(vals) - min(vals)) / min(vals)
        turn = estimators.turning_constant(
            curves.make_graph_curve(profile, extent, 801), exhaustive=True).value
        ok = ok and spread < 0.20 and turn >= 5.0
        details.append(f"{profile}: Lip {vals[0]:.3f}/{vals[1]:.3f}/{vals[2]:.3f} "
                       f"spread {spread:.1%}<20%, turning {turn:.1f}>=5")
    return ok, "; ".join(details)


@_criterion(6, "hyperspace: metric characterization and retraction bound")
def criterion_hyperspace() -> tuple:
    rng = np.random.default_rng(99)
    agree = True
    for _ in range(100):
        pts = rng.normal(size=(10, 2))
        sp = spaces.MetricSpace(points=pts)
        ka, kb = rng.integers(1, 5, 2)
        A = hyperspace.FiniteSubset(sp, tuple({int(x) for x in rng.integers(0, 10, ka)}), 4)
        B = hyperspace.FiniteSubset(sp, tuple({int(x) for x in rng.integers(0, 10, kb)}), 4)
        if abs(hyperspace.hausdorff(A, B) - hyperspace.hausdorff_by_maps(A, B)) > 1e-12:
            agree = False
    par = curves.make_graph_curve("parabola", 10.0, 801)
    bound_ok = True
    for arity in (2, 3, 4):
        mu = mixers.graph_mean(par, arity)
        lip = estimators.lipschitz_estimate(mu, budget=30_000, seed=17)
        retr = hyperspace.mean_to_retraction(mu, check_budget=200, seed=1)
        chk = retr.verify_bound(pairs_budget=10_000, seed=23, lip=lip.value)
        bound_ok = bound_ok and chk.passed
    ok = agree and bound_ok
    return ok, (f"map characterization agrees on 100 instances: {agree}; "
                f"3nL retraction bound on 1e4 pairs, n=2,3,4: {bound_ok}")


@_criterion(7, "argument obstruction lower bounds")
def criterion_obstruction() -> tuple:
    arc = curves.make_circular_arc(1.0, 3 * math.pi / 2, 512)
    rep = winding.mean_lip_lower_bound(arc, [(0.0, 0.0)])
    ok_arc = rep.value >= 2 / math.pi and abs(rep.value - 1 / math.sqrt(2)) <= 1e-6
    ca = curves.make_circles_arc(50, samples_per_circle=24, samples_per_segment=6)
    rep_ca = winding.mean_lip_lower_bound(ca, ca.aux["centers"])
    ok_ca = rep_ca.value >= 5.0
    seg = curves.make_segment(500)
    rep_seg = winding.mean_lip_lower_bound(seg, [(0.5, 2.0)])
    ok_seg = rep_seg.value == 0.0 and rep_seg.extra.get("no_obstruction") is True
    ok = ok_arc and ok_ca and ok_seg
    return ok, (f"three-quarter circle: {rep.value:.7f} (=1/sqrt2, >=2/pi); "
                f"attached circles: {rep_ca.value:.1f}>=5; "
                f"segment: {rep_seg.value} no-obstruction={rep_seg.extra.get('no_obstruction')}")


@_criterion(8, "snowflake: exact lengths, bounded turning estimates")
def criterion_snowflake() -> tuple:
    ok = True
    worst_len_err = 0.0
    worst_turn = 0.0
    for depth in range(13):
        c = curves.make_snowflake_vertex(depth)
        err = abs(curves.curve_length(c) - (3.0 + depth / 3.0))
        worst_len_err = max(worst_len_err, err)
        if len(c) <= 1500:
            turn = estimators.turning_constant(c, exhaustive=True).value
        else:
            budget = 400 if len(c) < 100_000 else 150
            turn = estimators.turning_constant(c, budget=budget, seed=8,
                                               exhaustive=False).value
        worst_turn = max(worst_turn, turn)
        ok = ok and err <= 1e-9 and turn <= 10.0
    return ok, (f"max |length - (3+k/3)| = {worst_len_err:.2e} <= 1e-9 for k<=12; "
                f"max turning estimate {worst_turn:.2f} <= 10")


def _minimax_chains_bruteforce(D: np.ndarray) -> np.ndarray:
    """Exhaustive search over simple chains for the minimax step.

    Chains may revisit points in general, but removing a loop never
    increases the largest step, so simple chains suffice; the search is a
    depth-first enumeration with branch-and-bound pruning.
    """
    n = len(D)
    out = np.zeros((n, n))
    for a in range(n):
        for b in range(a + 1, n):
            best = D[a, b]

            def dfs(v, used, cur):
                nonlocal best
                if cur >= best:
                    return
                step = max(cur, D[v, b])
                if step < best:
                    best = step
                for w in range(n):
                    if w != b and not used & (1 << w):
                        dfs(w, used | (1 << w), max(cur, D[v, w]))

            dfs(a, (1 << a) | (1 << b), 0.0)
            out[a, b] = out[b, a] = best
    return out


@_criterion(9, "uniform disconnectedness: spanning-tree minimax equals chain search")
def criterion_unifdisc() -> tuple:
    rng = np.random.default_rng(5)
    ok = True
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(2, 9))
        pts = rng.normal(size=(n, 2))
        sp = spaces.MetricSpace(points=pts)
        rep = estimators.uniform_disconnectedness(sp)
        D = sp.distance_matrix()
        mm = _minimax_chains_bruteforce(D)
        iu, ju = np.triu_indices(n, 1)
        dd = D[iu, ju]
        sel = dd > 0
        c_oracle = float(np.min(mm[iu[sel], ju[sel]] / dd[sel]))
        worst = max(worst, abs(c_oracle - rep.value))
        if abs(c_oracle - rep.value) > 1e-12:
            ok = False
    return ok, f"100 spaces with <=8 points: max |mst - chain search| = {worst:.1e} <= 1e-12"


@_criterion(10, "chain connectivity across the power map")
def criterion_chains() -> tuple:
    two = curves.make_two_lines(10.0, 201)
    c_far = estimators.chain_components(two, 0.5).count
    big = curves.make_two_lines(100.0, 5601)
    img = curves.power_image(big, 0.5)
    c_img = estimators.chain_components(img, 0.2).count
    ok = c_far == 2 and c_img == 1
    return ok, (f"two lines at eps=0.5: {c_far} components (=2); "
                f"half-power image at eps=0.2: {c_img} component (=1)")


ALL_CRITERIA = [
    criterion_median_bounds,
    criterion_turning,
    criterion_box_mixer,
    criterion_strip_retraction,
    criterion_graph_means,
    criterion_hyperspace,
    criterion_obstruction,
    criterion_snowflake,
    criterion_unifdisc,
    criterion_chains,
]

RUNTIME_CAPS = {1: 10.0, 2: 60.0, 3: 60.0}


def run_criterion(fn) -> CriterionResult:
    number, name = fn._criterion
    start = time.perf_counter()
    passed, details = fn()
    elapsed = time.perf_counter() - start
    cap = RUNTIME_CAPS.get(number)
    if cap is not None:
        within = elapsed < cap
        passed = passed and within
        details += f"; runtime {elapsed:.1f}s < {cap:.0f}s: {within}"
    return CriterionResult(number, name, passed, details, elapsed)


def run_all(numbers=None) -> list:
    results = []
    for fn in ALL_CRITERIA:
        number, _ = fn._criterion
        if numbers is not None and number not in numbers:
            continue
        results.append(run_criterion(fn))
    return results
