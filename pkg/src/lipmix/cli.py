"""Command-line front end: generation, construction, estimation,
hyperspace queries, obstruction certificates, and the acceptance battery.

Every run is reproducible: all randomness flows from the --seed flag
through numpy's default generator (PCG64), outputs embed the manifest
that produced them, and floats are serialized with fixed 17-significant-
digit round-trip formatting, so identical manifests give byte-identical
files.

Exit codes: 0 success, 1 verification failure, 2 malformed input,
3 domain/estimation error.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import acceptance, curves, estimators, hyperspace, jsonio, mixers, spaces, winding
from .spaces import DomainError, EstimationError, InputError, LipmixError


def _load_curve_or_space(path):
    data = jsonio.load(path)
    if "topology" in data:
        return curves.SampledCurve.from_json_dict(data)
    return spaces.MetricSpace.from_json_dict(data)


def _write(payload: dict, out_path, manifest: dict):
    doc = {"manifest": manifest}
    doc.update(payload)
    if out_path:
        jsonio.dump(doc, out_path)
    else:
        print(jsonio.dumps(doc))


def _parse_id_list(text: str):
    return [int(tok) for tok in text.replace(";", ",").split(",") if tok.strip()]


def _parse_points(text: str):
    pts = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        xy = [float(tok) for tok in chunk.split(",")]
        if len(xy) != 2:
            raise InputError(f"expected 'x,y' pairs, got {chunk!r}")
        pts.append(xy)
    if not pts:
        raise InputError("empty point list")
    return np.array(pts)


# ---------------------------------------------------------------------------
# generate
# ---------------------------------------------------------------------------

def _add_generate(sub):
    p = sub.add_parser("generate", help="build a curve or point set and write it as JSON")
    p.add_argument("--kind", required=True, choices=curves.KINDS)
    p.add_argument("--samples", type=int)
    p.add_argument("--length", type=float, default=1.0)
    p.add_argument("--radius", type=float, default=1.0)
    p.add_argument("--angular-size", type=float)
    p.add_argument("--profile", choices=("parabola", "cusp", "table"))
    p.add_argument("--extent", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--base", help="curve/space JSON to transform (power-image)")
    p.add_argument("--levels", type=int)
    p.add_argument("--samples-per-circle", type=int, default=24)
    p.add_argument("--samples-per-segment", type=int, default=6)
    p.add_argument("--t", type=float)
    p.add_argument("--samples-per-edge", type=int, default=64)
    p.add_argument("--depth", type=int)
    p.add_argument("--truncation", type=int)
    p.add_argument("--samples-per-line", type=int, default=201)
    p.add_argument("-o", "--out", required=True)


def _run_generate(args, manifest) -> int:
    kind = args.kind
    if kind == "segment":
        obj = curves.make_segment(args.samples or 100, args.length)
    elif kind == "circle":
        obj = curves.make_circle(args.radius, args.samples or 360)
    elif kind == "circular-arc":
        if args.angular_size is None:
            raise InputError("circular-arc needs --angular-size")
        obj = curves.make_circular_arc(args.radius, args.angular_size, args.samples or 256)
    elif kind == "graph-curve":
        if not args.profile or args.extent is None:
            raise InputError("graph-curve needs --profile and --extent")
        obj = curves.make_graph_curve(args.profile, args.extent, args.samples or 401)
    elif kind == "power-image":
        if args.alpha is None or not args.base:
            raise InputError("power-image needs --alpha and --base")
        obj = curves.power_image(_load_curve_or_space(args.base), args.alpha)
    elif kind == "circles-arc":
        if args.levels is None:
            raise InputError("circles-arc needs --levels")
        obj = curves.make_circles_arc(args.levels, args.samples_per_circle,
                                      args.samples_per_segment)
    elif kind == "box-curve":
        if args.t is None:
            raise InputError("box-curve needs --t")
        obj = curves.make_box_curve(args.t, args.samples_per_edge)
    elif kind == "snowflake-vertex":
        if args.depth is None:
            raise InputError("snowflake-vertex needs --depth")
        obj = curves.make_snowflake_vertex(args.depth)
    elif kind == "tv-curve":
        if args.truncation is None:
            raise InputError("tv-curve needs --truncation")
        obj = curves.make_tv_curve(args.truncation, args.samples_per_segment)
    elif kind == "two-lines":
        if args.extent is None:
            raise InputError("two-lines needs --extent")
        obj = curves.make_two_lines(args.extent, args.samples_per_line)
    else:
        raise InputError(f"unknown kind {kind!r}")
    payload = obj.to_json_dict()
    doc = {"manifest": manifest}
    doc.update(payload)
    jsonio.dump(doc, args.out)
    n = len(obj.order) if isinstance(obj, curves.SampledCurve) else len(obj)
    print(f"wrote {args.out}: {kind} with {n} points")
    return 0


# ---------------------------------------------------------------------------
# construct
# ---------------------------------------------------------------------------

CONSTRUCT_KINDS = ("median-mixer", "graph-mean", "circle-mixer", "circle-mean",
                   "box-mixer", "cusp-mean")


def _add_construct(sub):
    p = sub.add_parser("construct", help="build a mean/mixer and evaluate it on id tuples")
    p.add_argument("--kind", required=True, choices=CONSTRUCT_KINDS)
    p.add_argument("--curve", help="curve JSON (not used by box-mixer/cusp-mean)")
    p.add_argument("--arity", type=int, default=2)
    p.add_argument("--turning", type=float, default=1.0)
    p.add_argument("--t", type=float)
    p.add_argument("--samples-per-edge", type=int, default=128)
    p.add_argument("--graph-samples", type=int, default=401)
    p.add_argument("--segment-samples", type=int, default=200)
    p.add_argument("--eval", dest="eval_file", help="JSON file with an array of id tuples")
    p.add_argument("--eval-inline", help="tuples like '0,1,2;3,4,5'")
    p.add_argument("--dump-curve", help="write the handle's underlying curve here")
    p.add_argument("-o", "--out")


def build_handle(args) -> mixers.PointMapHandle:
    kind = args.kind
    if kind == "box-mixer":
        if args.t is None:
            raise InputError("box-mixer needs --t")
        return mixers.box_mixer(args.t, args.samples_per_edge)
    if kind == "cusp-mean":
        return mixers.cusp_jordan_local_mean(args.graph_samples, args.segment_samples)
    if not args.curve:
        raise InputError(f"{kind} needs --curve")
    c = _load_curve_or_space(args.curve)
    if not isinstance(c, curves.SampledCurve):
        raise InputError("construct needs a curve file, not a point set")
    if kind == "median-mixer":
        return mixers.median_mixer(c)
    if kind == "graph-mean":
        return mixers.graph_mean(c, args.arity)
    if kind == "circle-mixer":
        return mixers.circle_local_mixer(c, args.turning)
    if kind == "circle-mean":
        return mixers.circle_local_mean(c, args.turning)
    raise InputError(f"unknown construct kind {kind!r}")


def _run_construct(args, manifest) -> int:
    handle = build_handle(args)
    if args.dump_curve and handle.curve is not None:
        jsonio.dump(handle.curve.to_json_dict(), args.dump_curve)
    rows = []
    if args.eval_file:
        tuples = jsonio.load(args.eval_file)
    elif args.eval_inline:
        tuples = [[int(t) for t in chunk.split(",")]
                  for chunk in args.eval_inline.split(";") if chunk.strip()]
    else:
        tuples = []
    for tup in tuples:
        out = handle(*tup)
        rows.append({"input": [int(x) for x in tup], "output": out})
    _write({"kind": args.kind, "name": handle.name, "arity": handle.arity,
            "domain": {"flavor": handle.domain.flavor,
                       "radius": handle.domain.radius if handle.domain.flavor != "full" else None},
            "rows": rows}, args.out, manifest)
    return 0


# ---------------------------------------------------------------------------
# estimate
# ---------------------------------------------------------------------------

def _add_estimate(sub):
    p = sub.add_parser("estimate", help="run a sampling estimator and write its report")
    p.add_argument("--what", required=True,
                   choices=("lip", "turning", "chain", "unifdisc", "doubling", "qh"))
    p.add_argument("--curve", help="curve or point-set JSON")
    p.add_argument("--map", dest="map_file", help="map-sample JSON (lip, qh)")
    p.add_argument("--construct", dest="construct_kind", choices=CONSTRUCT_KINDS,
                   help="estimate the Lipschitz constant of a built handle")
    p.add_argument("--arity", type=int, default=2)
    p.add_argument("--turning", type=float, default=1.0)
    p.add_argument("--t", type=float)
    p.add_argument("--samples-per-edge", type=int, default=128)
    p.add_argument("--graph-samples", type=int, default=401)
    p.add_argument("--segment-samples", type=int, default=200)
    p.add_argument("--budget", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--eps", type=float)
    p.add_argument("--radii", help="comma-separated radii for doubling")
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("-o", "--out")
    p.add_argument("--csv", dest="csv_out", help="also append a CSV row here")


def _load_map_sample(path) -> spaces.MapSample:
    data = jsonio.load(path)
    dom = data["domain"]
    domain = spaces.MetricSpace.from_json_dict(dom if isinstance(dom, dict) else jsonio.load(dom))
    cod = data["codomain"]
    codomain = spaces.MetricSpace.from_json_dict(cod if isinstance(cod, dict) else jsonio.load(cod))
    inputs = np.asarray(data["inputs"], dtype=int)
    outputs = np.asarray(data["outputs"], dtype=int)
    return spaces.MapSample(domain=domain, codomain=codomain, inputs=inputs, outputs=outputs)


def _emit_report(report, args, manifest) -> int:
    if args.format == "csv":
        text = report.csv_row()
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text + "\n")
        else:
            print(text)
    else:
        _write({"report": report.to_json_dict()}, args.out, manifest)
    if getattr(args, "csv_out", None):
        with open(args.csv_out, "a") as fh:
            fh.write(report.csv_row() + "\n")
    return 0


def _run_estimate(args, manifest) -> int:
    what = args.what
    if what == "lip":
        if args.map_file:
            target = _load_map_sample(args.map_file)
        elif args.construct_kind:
            ns = argparse.Namespace(kind=args.construct_kind, curve=args.curve,
                                    arity=args.arity, turning=args.turning, t=args.t,
                                    samples_per_edge=args.samples_per_edge,
                                    graph_samples=args.graph_samples,
                                    segment_samples=args.segment_samples)
            target = build_handle(ns)
        else:
            raise InputError("lip needs --map or --construct")
        report = estimators.lipschitz_estimate(target, budget=args.budget, seed=args.seed)
        return _emit_report(report, args, manifest)
    if what == "qh":
        if not args.map_file:
            raise InputError("qh needs --map")
        m = _load_map_sample(args.map_file)
        env = estimators.qh_profile(m, budget=args.budget, seed=args.seed)
        _write({"envelope": env}, args.out, manifest)
        return 0
    if not args.curve:
        raise InputError(f"{what} needs --curve")
    obj = _load_curve_or_space(args.curve)
    if what == "turning":
        if not isinstance(obj, curves.SampledCurve):
            raise InputError("turning needs a curve")
        report = estimators.turning_constant(
            obj, budget=None if args.exhaustive else args.budget,
            seed=args.seed, exhaustive=True if args.exhaustive else None)
        return _emit_report(report, args, manifest)
    space = obj.space if isinstance(obj, curves.SampledCurve) else obj
    if what == "chain":
        if args.eps is None:
            raise InputError("chain needs --eps")
        comps = estimators.chain_components(space, args.eps)
        _write({"eps": args.eps, "components": comps.count,
                "labels": comps.labels}, args.out, manifest)
        return 0
    if what == "unifdisc":
        report = estimators.uniform_disconnectedness(space)
        return _emit_report(report, args, manifest)
    if what == "doubling":
        if not args.radii:
            raise InputError("doubling needs --radii")
        radii = [float(tok) for tok in args.radii.split(",") if tok.strip()]
        report = estimators.doubling_estimate(space, radii, centers_budget=args.budget,
                                              seed=args.seed)
        return _emit_report(report, args, manifest)
    raise InputError(f"unknown estimator {what!r}")


# ---------------------------------------------------------------------------
# hyperspace
# ---------------------------------------------------------------------------

def _add_hyperspace(sub):
    p = sub.add_parser("hyperspace", help="subset-distance queries and retraction checks")
    p.add_argument("--op", required=True, choices=("dist", "retract-verify"))
    p.add_argument("--base", help="curve/space JSON for --op dist")
    p.add_argument("--a", help="comma-separated member ids")
    p.add_argument("--b", help="comma-separated member ids")
    p.add_argument("--capacity", type=int, default=8)
    p.add_argument("--curve", help="graph-curve JSON for retract-verify")
    p.add_argument("--arity", type=int, default=2)
    p.add_argument("--budget", type=int, default=10_000)
    p.add_argument("--lip-budget", type=int, default=30_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--out")


def _run_hyperspace(args, manifest) -> int:
    if args.op == "dist":
        if not (args.base and args.a and args.b):
            raise InputError("dist needs --base, --a, --b")
        obj = _load_curve_or_space(args.base)
        space = obj.space if isinstance(obj, curves.SampledCurve) else obj
        A = hyperspace.FiniteSubset(space, tuple(_parse_id_list(args.a)), args.capacity)
        B = hyperspace.FiniteSubset(space, tuple(_parse_id_list(args.b)), args.capacity)
        _write({"distance": hyperspace.hausdorff(A, B),
                "a": list(A.members), "b": list(B.members)}, args.out, manifest)
        return 0
    if not args.curve:
        raise InputError("retract-verify needs --curve")
    c = _load_curve_or_space(args.curve)
    if not isinstance(c, curves.SampledCurve):
        raise InputError("retract-verify needs a curve")
    mu = mixers.graph_mean(c, args.arity)
    lip = estimators.lipschitz_estimate(mu, budget=args.lip_budget, seed=args.seed)
    retr = hyperspace.mean_to_retraction(mu, seed=args.seed)
    chk = retr.verify_bound(pairs_budget=args.budget, seed=args.seed + 1, lip=lip.value)
    _write({"lipschitz": lip.to_json_dict(), "check": chk.to_json_dict()},
           args.out, manifest)
    return 0 if chk.passed else 1


# ---------------------------------------------------------------------------
# obstruct
# ---------------------------------------------------------------------------

def _add_obstruct(sub):
    p = sub.add_parser("obstruct", help="certified mean-constant lower bound for an arc")
    p.add_argument("--curve", required=True)
    p.add_argument("--z0", required=True,
                   help="'x,y;x,y' base points, or 'auto' for the curvature heuristic")
    p.add_argument("--budget", type=int, default=20_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--out")


def _run_obstruct(args, manifest) -> int:
    c = _load_curve_or_space(args.curve)
    if not isinstance(c, curves.SampledCurve):
        raise InputError("obstruct needs a curve")
    if args.z0 == "auto":
        z0 = winding.suggest_centers(c)
        if "centers" in c.aux:
            extra = np.asarray(c.aux["centers"], dtype=float)
            z0 = np.vstack([z0, extra]) if len(z0) else extra
        if len(z0) == 0:
            raise InputError("the heuristic found no base-point candidates")
    else:
        z0 = _parse_points(args.z0)
    report = winding.mean_lip_lower_bound(c, z0, budget=args.budget, seed=args.seed)
    payload = {"lower_bound": report.value,
               "witness_pair": list(report.witness) if report.witness else None,
               "witness_z0": report.extra.get("z0"),
               "delta_arg": report.extra.get("delta_arg"),
               "no_obstruction": report.extra.get("no_obstruction"),
               "report": report.to_json_dict()}
    _write(payload, args.out, manifest)
    return 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def _add_verify(sub):
    p = sub.add_parser("verify", help="run the acceptance battery and print a table")
    p.add_argument("--suite", choices=("full",), default="full")
    p.add_argument("--criteria", help="comma-separated criterion numbers to run")


def _run_verify(args, manifest) -> int:
    numbers = None
    if args.criteria:
        numbers = {int(tok) for tok in args.criteria.split(",") if tok.strip()}
    results = acceptance.run_all(numbers)
    for res in results:
        print(res.line())
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed")
    return 1 if failed else 0


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lipmix",
        description="means, mixers, and metric estimators on sampled curves")
    sub = parser.add_subparsers(dest="command", required=True)
    _add_generate(sub)
    _add_construct(sub)
    _add_estimate(sub)
    _add_hyperspace(sub)
    _add_obstruct(sub)
    _add_verify(sub)
    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    args = parser.parse_args(argv)
    manifest = {"command": args.command, "argv": argv}
    runners = {
        "generate": _run_generate,
        "construct": _run_construct,
        "estimate": _run_estimate,
        "hyperspace": _run_hyperspace,
        "obstruct": _run_obstruct,
        "verify": _run_verify,
    }
    try:
        return runners[args.command](args, manifest)
    except (DomainError, EstimationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (InputError, FileNotFoundError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except LipmixError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
