"""Command-line interface.

Exit status: 0 on success, 1 for domain errors (for example a pair that is
not ordered), 2 for usage and scene errors, 3 when a property suite fails.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
import time

import numpy as np

from .errors import InputError, TimelikeError
from .finsler import curve_length, functional
from .funk import funk_distance, funk_distance_variational, funk_functional_variational, future_sphere_sample
from .hilbert import hilbert_distance, hilbert_distance_cross_ratio
from .order import (
    FunkContext,
    HilbertContext,
    PairClass,
    ProjectiveDeSitterContext,
    SphericalHilbertContext,
    classify_pair,
)
from .render import Overlays, _runs, _scan_directions, render_svg
from .scene import build_curve, parse_scene
from .spherical import desitter_curve_point, desitter_isometry_check, null_directions, random_lorentz, spherical_hilbert_distance
from .suite import SUITES, run_suite

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE, EXIT_SUITE = 0, 1, 2, 3
POINT_FLAGS = ("--from", "--to", "--at", "--apex", "--direction", "--view", "--radii")
_NUMBER_LIST = re.compile(r"^-[\d.]")


def _g(v: float) -> float | str:
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    return float(f"{v:.12g}")


def _vec(x) -> list:
    return [_g(float(v)) for v in np.asarray(x, dtype=float)]


def _parse_floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise InputError(f"expected comma-separated numbers, got {text!r}") from None


def _point(scene, text: str):
    if text in scene.points:
        return scene.points[text]
    return scene.point(_parse_floats(text))


def _emit(args, record: dict | list, csv_rows: list[list] | None = None, header: list[str] | None = None):
    if args.format == "csv" and csv_rows is not None:
        lines = [",".join(header)] + [",".join(str(v) for v in row) for row in csv_rows]
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps(record, indent=2) + "\n"
    _write(args, text)


def _write(args, text: str | bytes):
    if args.out:
        mode = "wb" if isinstance(text, bytes) else "w"
        with open(args.out, mode) as fh:
            fh.write(text)
    elif isinstance(text, bytes):
        sys.stdout.buffer.write(text)
        sys.stdout.flush()
    else:
        sys.stdout.write(text)


def _load(args):
    if not args.scene:
        raise InputError("--scene is required for this command")
    try:
        with open(args.scene, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read scene: {exc}") from exc
    return parse_scene(data)


def _cmd_funk(args):
    scene = _load(args)
    ctx = scene.context
    if not isinstance(ctx, FunkContext):
        raise InputError("the scene context is not a Funk context")
    p, q = _point(scene, args.from_), _point(scene, args.to)
    value = funk_distance_variational(ctx, p, q) if args.variational else funk_distance(ctx, p, q)
    record = {"command": "funk", "distance": _g(value.distance)}
    if value.hit is not None:
        record["hit"] = _vec(value.hit.point)
    _emit(args, record, [[record["distance"]]], ["distance"])


def _cmd_hilbert(args):
    scene = _load(args)
    ctx = scene.context
    p, q = _point(scene, args.from_), _point(scene, args.to)
    if isinstance(ctx, SphericalHilbertContext):
        value = spherical_hilbert_distance(ctx, p, q)
        record = {"command": "hilbert", "distance": _g(value.distance), "null": value.null}
    elif isinstance(ctx, HilbertContext):
        value = hilbert_distance_cross_ratio(ctx, p, q) if args.cross_ratio else hilbert_distance(ctx, p, q)
        record = {"command": "hilbert", "distance": _g(value.distance)}
        if not args.cross_ratio:
            record.update(forward=_g(value.forward), backward=_g(value.backward))
    else:
        raise InputError("the scene context is not a Hilbert context")
    if value.a1 is not None:
        record.update(a1=_vec(value.a1), a2=_vec(value.a2))
    _emit(args, record, [[record["distance"]]], ["distance"])


def _cmd_order(args):
    scene = _load(args)
    ctx = scene.context
    p, q = _point(scene, args.from_), _point(scene, args.to)
    if not np.any(p - q):
        ctx._require(p)
        relation = "coincident"
    elif ctx.precedes(p, q):
        relation = "precedes"
    elif ctx.precedes(q, p):
        relation = "follows"
    else:
        relation = "unrelated"
    if args.format == "json":
        _write(args, json.dumps({"command": "order", "relation": relation}) + "\n")
    else:
        _write(args, relation + "\n")


def _cmd_classify(args):
    scene = _load(args)
    result = classify_pair(scene.context, _point(scene, args.from_), _point(scene, args.to))
    if args.format == "json":
        _write(args, json.dumps({"command": "classify", "class": result.value}) + "\n")
    else:
        _write(args, result.value + "\n")


def _cmd_finsler(args):
    scene = _load(args)
    ctx = scene.context
    p = _point(scene, args.at)
    v = np.array(_parse_floats(args.direction))
    if args.variational:
        if not isinstance(ctx, FunkContext):
            raise InputError("the variational functional needs a Funk context")
        value = funk_functional_variational(ctx, p, v).value
    else:
        value = functional(ctx, p, v)
    _emit(args, {"command": "finsler", "value": _g(value)}, [[_g(value)]], ["value"])


def _cmd_sphere(args):
    scene = _load(args)
    ctx = scene.context
    if not isinstance(ctx, FunkContext):
        raise InputError("future spheres need a Funk context")
    apex = _point(scene, args.apex)
    if ctx.chart.dimension == 2 and args.sweep:
        directions = [u for run in _runs(_scan_directions(ctx, apex)) for _, u, _ in run][:: max(1, args.stride)]
        points = future_sphere_sample(ctx, apex, args.radius, len(directions), directions=directions)
    else:
        points = future_sphere_sample(ctx, apex, args.radius, args.count, seed=args.seed)
    rows = [_vec(x) for x in points]
    header = [f"x{i}" for i in range(ctx.chart.ambient_dim)]
    _emit(args, {"command": "sphere", "radius": _g(args.radius), "points": rows}, rows, header)


def _cmd_cone(args):
    scene = _load(args)
    ctx = scene.context
    apex = _point(scene, args.apex)
    if isinstance(ctx, ProjectiveDeSitterContext):
        directions = null_directions(ctx, apex, count=args.count)
    elif isinstance(ctx, (FunkContext, HilbertContext)) and ctx.chart.kind == "euclidean" and ctx.chart.dimension == 2:
        ctx._require(apex)
        directions = []
        for run in _runs(_scan_directions(ctx, apex)):
            directions.extend([run[0][1], run[-1][1]])
    else:
        raise InputError("cone directions are available for projective scenes and planar euclidean scenes")
    rows = [_vec(u) for u in directions]
    header = [f"u{i}" for i in range(len(rows[0]))] if rows else ["u0"]
    _emit(args, {"command": "cone", "directions": rows}, rows, header)


def _cmd_length(args):
    scene = _load(args)
    if args.curve_file:
        try:
            with open(args.curve_file) as fh:
                spec = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read curve file: {exc}") from exc
        curve = build_curve(scene, spec, args.density)
    elif args.curve:
        curve = scene.curve(args.curve, args.density)
    else:
        raise InputError("give --curve NAME or --curve-file PATH")
    value = curve_length(scene.context, curve, tol=args.tol if args.tol is not None else 1e-8)
    _emit(args, {"command": "length", "length": _g(value)}, [[_g(value)]], ["length"])


def _cmd_desitter(args):
    rng = np.random.default_rng(args.seed)
    pairs = []
    while len(pairs) < args.cases:
        t1 = rng.uniform(0.02, 2.5)
        t2 = t1 + rng.uniform(0.01, 2.5)
        if len(pairs) % 2 == 0:
            pairs.append((desitter_curve_point(t1).vector, desitter_curve_point(t2).vector))
            continue
        lorentz = random_lorentz(rng, 1, 0.8)
        p, q = lorentz @ desitter_curve_point(t1).vector, lorentz @ desitter_curve_point(t2).vector
        if p[0] > 0.02 and q[0] > 0.02:
            pairs.append((p, q))
    report = desitter_isometry_check(pairs, tolerance=args.tol if args.tol is not None else 1e-9)
    record = {
        "command": "desitter-check",
        "pairs": len(pairs),
        "seed": args.seed,
        "relation": "H = 2 d",
        "max_relative_deviation": _g(report.max_relative_deviation),
        "holds": report.factor_holds,
        "alternative_relation": "d = 2 H",
        "alternative_max_relative_deviation": _g(report.alternative_max_deviation),
        "alternative_rejected": report.alternative_rejected,
        "cross_ratio_max_deviation": _g(report.cross_ratio_max_deviation),
    }
    if args.format == "csv":
        rows = [[_g(d), _g(h), _g(r) if math.isfinite(r) else "nan"]
                for d, h, r in zip(report.distances, report.hilbert, report.ratios)]
        _emit(args, record, rows, ["desitter_distance", "hilbert_distance", "ratio"])
    else:
        _write(args, json.dumps(record, indent=2, sort_keys=True) + "\n")
    return EXIT_OK if report.factor_holds else EXIT_SUITE


def _cmd_check(args):
    if args.seed is None:
        raise InputError("check needs --seed")
    start = time.perf_counter()
    report = run_suite(args.suite, args.seed, args.cases)
    report.wall_time = time.perf_counter() - start
    _write(args, report.to_csv() if args.format == "csv" else report.to_json())
    print(f"wall time: {report.wall_time:.2f} s", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_SUITE


def _cmd_render(args):
    scene = _load(args)
    overlays = Overlays(
        apex=_point(scene, args.apex) if args.apex else None,
        cone=args.cone,
        radii=tuple(_parse_floats(args.radii)) if args.radii else (),
        null=args.null,
        points=dict(scene.points),
    )
    if args.view:
        view = _parse_floats(args.view)
        if len(view) != 4:
            raise InputError("--view takes xmin,xmax,ymin,ymax")
        overlays.view = tuple(view)
    _write(args, render_svg(scene, overlays))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scene", help="scene JSON file")
    common.add_argument("--seed", type=int, default=None, help="PCG64 seed")
    common.add_argument("--cases", type=int, default=1000, help="random cases per property")
    common.add_argument("--tol", type=float, default=None, help="tolerance override")
    common.add_argument("--out", help="write output to this file instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default=None,
                        help="output format (records default to json; order and classify print plain text)")

    parser = argparse.ArgumentParser(prog="timelike", description="Timelike Funk and Hilbert geometry")
    sub = parser.add_subparsers(dest="command", required=True)

    def pair(name, helptext):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--from", dest="from_", required=True, help="point coordinates 'x,y,...' or a named point")
        p.add_argument("--to", required=True)
        return p

    pair("funk", "timelike Funk distance").add_argument("--variational", action="store_true")
    pair("hilbert", "timelike Hilbert distance").add_argument("--cross-ratio", action="store_true")
    pair("order", "order relation of a pair")
    pair("classify", "timelike / null / unrelated / coincident")

    p = sub.add_parser("finsler", parents=[common], help="Minkowski functional at a point")
    p.add_argument("--at", required=True)
    p.add_argument("--direction", required=True)
    p.add_argument("--variational", action="store_true")

    p = sub.add_parser("sphere", parents=[common], help="future-sphere points (CSV)")
    p.add_argument("--apex", required=True)
    p.add_argument("--radius", type=float, required=True)
    p.add_argument("--count", type=int, default=64)
    p.add_argument("--sweep", action="store_true", help="sweep visible directions in angle order (planar scenes)")
    p.add_argument("--stride", type=int, default=36)

    p = sub.add_parser("cone", parents=[common], help="cone boundary or null directions")
    p.add_argument("--apex", required=True)
    p.add_argument("--count", type=int, default=16)

    p = sub.add_parser("length", parents=[common], help="Finsler length of a curve")
    p.add_argument("--curve", help="named curve in the scene")
    p.add_argument("--curve-file", help="JSON curve description")
    p.add_argument("--density", type=int, default=2048)

    sub.add_parser("desitter-check", parents=[common], help="de Sitter identification report")

    p = sub.add_parser("check", parents=[common], help="seeded property suites")
    p.add_argument("--suite", choices=SUITES + ("all",), default="all")

    p = sub.add_parser("render", parents=[common], help="SVG picture of a planar scene")
    p.add_argument("--apex")
    p.add_argument("--cone", action="store_true")
    p.add_argument("--radii")
    p.add_argument("--null", action="store_true")
    p.add_argument("--view")
    return parser


COMMANDS = {
    "funk": _cmd_funk,
    "hilbert": _cmd_hilbert,
    "order": _cmd_order,
    "classify": _cmd_classify,
    "finsler": _cmd_finsler,
    "sphere": _cmd_sphere,
    "cone": _cmd_cone,
    "length": _cmd_length,
    "desitter-check": _cmd_desitter,
    "check": _cmd_check,
    "render": _cmd_render,
}


def _join_negative_values(argv: list[str]) -> list[str]:
    """Turn ``--from -2,0`` into ``--from=-2,0`` so argparse accepts it."""
    out, i = [], 0
    while i < len(argv):
        arg = argv[i]
        if arg in POINT_FLAGS and i + 1 < len(argv) and _NUMBER_LIST.match(argv[i + 1]):
            out.append(f"{arg}={argv[i + 1]}")
            i += 2
            continue
        out.append(arg)
        i += 1
    return out


def run_cli(argv: list[str] | None = None) -> int:
    argv = _join_negative_values(list(sys.argv[1:] if argv is None else argv))
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    if args.command == "desitter-check" and args.seed is None:
        args.seed = 0
    try:
        status = COMMANDS[args.command](args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (TimelikeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_OK if status is None else status


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
