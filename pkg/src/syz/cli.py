"""``syz`` command-line interface.

Exit status: 0 on success, 2 on usage errors (bad flags, unreadable input
files), 1 when a computation fails; in that case a JSON error report is
printed on standard output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Callable, Sequence

import numpy as np

from syz import __version__


class UsageError(Exception):
    pass


FLOAT_DIGITS = 12
FLOAT_FLOOR = 1e-15


def _tidy(obj):
    """Round floats to ``FLOAT_DIGITS`` significant digits and flush tiny values to zero.

    Keeps reports identical across kernel backends, whose sums differ in the
    last bits.
    """
    if isinstance(obj, float):
        if not np.isfinite(obj):
            return obj
        if abs(obj) < FLOAT_FLOOR:
            return 0.0
        return float(f"{obj:.{FLOAT_DIGITS}g}")
    if isinstance(obj, dict):
        return {k: _tidy(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_tidy(v) for v in obj]
    return obj


def _dumps(doc) -> str:
    return json.dumps(_tidy(doc), indent=1, sort_keys=True) + "\n"


def _read_json(path: str):
    if path == "-":
        return json.load(sys.stdin)
    if not os.path.exists(path):
        raise UsageError(f"no such file: {path}")
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _emit(args, text: str, summary: dict | None = None) -> None:
    """Write ``text`` to ``--out`` (printing ``summary``) or to stdout."""
    if getattr(args, "out", None):
        with open(args.out, "w", newline="\n") as fh:
            fh.write(text)
        if summary is not None:
            sys.stdout.write(_dumps(summary))
    else:
        sys.stdout.write(text)


def _fmt(args, default: str) -> str:
    if getattr(args, "format", None):
        return args.format
    out = getattr(args, "out", None)
    if out:
        ext = os.path.splitext(out)[1].lower().lstrip(".")
        if ext in ("svg", "csv", "json", "dot"):
            return ext
    return default


# ---------------------------------------------------------------------------
# amoeba-engine commands


def _poly(args):
    from syz.laurent import LaurentPolynomial

    return LaurentPolynomial.from_json(_read_json(args.poly))


def _window(args, f):
    from syz.amoeba import Window, tropical_window

    if args.window is None:
        return tropical_window(f, args.resolution)
    xmin, xmax, ymin, ymax = args.window
    return Window(xmin, xmax, ymin, ymax, args.resolution)


def _raster(args, f):
    from syz.amoeba import rasterize_amoeba

    return rasterize_amoeba(f, _window(args, f), args.angles, workers=args.threads)


def _box(w):
    return (w.xmin, w.xmax, w.ymin, w.ymax)


def cmd_amoeba(args) -> int:
    from syz.amoeba import bounded_count
    from syz.render import Scene, render_svg

    f = _poly(args)
    r = _raster(args, f)
    fmt = _fmt(args, "svg")
    if fmt == "csv":
        text = r.to_csv()
    elif fmt == "svg":
        text = render_svg(Scene(window=_box(r.window), membership=r.membership, title="amoeba"))
    else:
        raise UsageError(f"amoeba cannot write format {fmt}")
    _emit(args, text, {"marked": r.marked, "holes": bounded_count(r), "window": list(_box(r.window)),
                       "resolution": r.window.resolution})
    return 0


def _components(args, f, r):
    from syz.amoeba import complement_components

    return complement_components(r, f, args.grid, workers=args.threads)


def cmd_components(args) -> int:
    f = _poly(args)
    r = _raster(args, f)
    comps = _components(args, f, r)
    doc = {
        "window": list(_box(r.window)),
        "resolution": r.window.resolution,
        "components": [c.to_json() for c in comps],
        "bounded": sum(1 for c in comps if c.bounded),
    }
    _emit(args, _dumps(doc), {"components": len(comps), "bounded": doc["bounded"]})
    return 0


def cmd_spine(args) -> int:
    from syz.render import Scene, order_labels, render_svg
    from syz.spine import build_spine, spine_retract_check

    f = _poly(args)
    r = _raster(args, f)
    comps = _components(args, f, r)
    spine = build_spine(comps)
    report = spine_retract_check(r, spine)
    fmt = _fmt(args, "json")
    if fmt == "svg":
        text = render_svg(Scene(window=_box(r.window), membership=r.membership, spine=spine,
                                labels=order_labels(comps, r.window), title="amoeba and spine"))
    elif fmt == "json":
        text = _dumps(spine.to_json() | {"retract_check": report.to_json()})
    else:
        raise UsageError(f"spine cannot write format {fmt}")
    _emit(args, text, {"vertices": len(spine.vertices), "edges": len(spine.edges),
                       "bounded_faces": spine.bounded_faces(), "retract_check": report.passed})
    return 0


def cmd_ronkin(args) -> int:
    from syz.ronkin import TooCloseToAmoeba, ronkin_order, ronkin_value

    f = _poly(args)
    if len(args.point) != f.num_vars:
        raise UsageError(f"--point needs {f.num_vars} coordinates")
    v = ronkin_value(f, args.point, args.grid, workers=args.threads)
    doc = {"point": list(args.point), "value": v.value, "error": v.error,
           "excluded": v.excluded, "low_confidence": v.low_confidence}
    if args.order:
        try:
            doc["order"] = list(ronkin_order(f, args.point, args.grid, workers=args.threads))
        except TooCloseToAmoeba as exc:
            doc["order"] = None
            doc["order_error"] = str(exc)
    _emit(args, _dumps(doc), doc)
    return 0


def cmd_compactify(args) -> int:
    from syz.amoeba import compactified_amoeba
    from syz.render import Scene, render_svg

    f = _poly(args)
    c = compactified_amoeba(f, args.resolution, args.angles, workers=args.threads)
    fmt = _fmt(args, "svg")
    w = c.window
    if fmt == "svg":
        text = render_svg(Scene(window=_box(w), membership=c.membership, title="compactified amoeba"))
    elif fmt == "csv":
        from syz.amoeba import AmoebaRaster

        text = AmoebaRaster(w, c.membership, c.membership.astype(np.int64)).to_csv()
    else:
        raise UsageError(f"compactify cannot write format {fmt}")
    _emit(args, text, {"marked": int(c.membership.sum()), "polytope": c.polytope.to_json()})
    return 0


# ---------------------------------------------------------------------------
# gamma


def _graph(path):
    from syz.gamma import GammaGraph

    return GammaGraph.from_json(_read_json(path))


def _write_graph(args, g) -> None:
    from syz.render import Scene, render_svg

    fmt = _fmt(args, "json")
    if fmt == "json":
        text = g.dumps()
    elif fmt == "dot":
        text = g.to_dot()
    elif fmt == "svg":
        text = render_svg(Scene(graph=g, title="discriminant graph"))
    else:
        raise UsageError(f"graphs cannot be written as {fmt}")
    _emit(args, text, g.stats())


def cmd_gamma_build(args) -> int:
    from syz.gamma import build_gamma_simplex

    _write_graph(args, build_gamma_simplex(args.degree))
    return 0


def cmd_gamma_stats(args) -> int:
    sys.stdout.write(_dumps(_graph(args.graph).stats()))
    return 0


def cmd_gamma_mirror(args) -> int:
    from syz.gamma import mirror_graph

    _write_graph(args, mirror_graph(_graph(args.graph)))
    return 0


def cmd_gamma_flop(args) -> int:
    from syz.gamma import flop_move

    _write_graph(args, flop_move(_graph(args.graph), args.edge, tuple(args.swap) if args.swap else None))
    return 0


def cmd_gamma_conifold(args) -> int:
    from syz.gamma import conifold_move

    _write_graph(args, conifold_move(_graph(args.graph), args.edge))
    return 0


# ---------------------------------------------------------------------------
# monodromy


def cmd_mono_fixed(args) -> int:
    from syz.monodromy import fixed_space, load_matrices, semistable_k

    docs = []
    for M in load_matrices(_read_json(args.matrix)):
        dim, basis = fixed_space(M)
        docs.append({"matrix": M.to_json(), "dimension": dim, "basis": basis, "semistable_k": semistable_k(M)})
    sys.stdout.write(_dumps(docs[0] if len(docs) == 1 else docs))
    return 0


def cmd_mono_classify(args) -> int:
    from syz.monodromy import classify_vertex, common_fixed_dimension, load_matrices

    mats = load_matrices(_read_json(args.triple))
    kind = classify_vertex(mats)
    doc = {"classification": kind.value, "count": len(mats)}
    if len(mats) == 3 and all(m.size == 3 for m in mats):
        doc["common_fixed_dimension"] = common_fixed_dimension(mats)
    sys.stdout.write(_dumps(doc))
    return 0


def cmd_mono_mirror(args) -> int:
    from syz.monodromy import load_matrices, mirror_dual

    doc = _read_json(args.matrix)
    mats = [mirror_dual(M) for M in load_matrices(doc)]
    if isinstance(doc, dict) and "matrices" not in doc:
        text = _dumps(mats[0].to_json())
    else:
        text = _dumps({"matrices": [M.to_json() for M in mats]})
    _emit(args, text)
    return 0


def cmd_mono_k3check(args) -> int:
    from syz.monodromy import k3_monodromy_list, load_matrices, validate_k3_list

    if args.generate:
        mats = k3_monodromy_list()
    elif args.list:
        mats = load_matrices(_read_json(args.list))
    else:
        raise UsageError("k3check needs a list file or --generate")
    report = validate_k3_list(mats)
    doc = report.to_json()
    if args.generate:
        doc["matrices"] = [M.to_json() for M in mats]
    sys.stdout.write(_dumps(doc))
    return 0 if report.passed else 1


# ---------------------------------------------------------------------------
# local models


def cmd_local_hl(args) -> int:
    from syz.local_models import hl_discriminant_classify, hl_map, sample_hl_fiber

    if args.z is not None:
        z = np.array([complex(s) for s in args.z])
        x = hl_map(z)
        doc = {"value": [float(v) for v in x], "classification": hl_discriminant_classify(x, args.tol).value}
    else:
        s = sample_hl_fiber(args.point, args.samples, seed=args.seed)
        res = float(np.max(np.abs(hl_map(s.points) - np.asarray(args.point)))) if len(s.points) else None
        doc = s.to_json() | {"max_residual": res}
    _emit(args, _dumps(doc))
    return 0


def cmd_local_hl_classify(args) -> int:
    from syz.local_models import hl_discriminant_classify

    sys.stdout.write(_dumps({"x": list(args.x), "classification": hl_discriminant_classify(args.x, args.tol).value}))
    return 0


def cmd_local_joyce(args) -> int:
    from syz.local_models import joyce_F, joyce_roundtrip

    if args.z is not None:
        z = [complex(s) for s in args.z]
        a, c = joyce_F(args.sign, z)
        doc = {"a": a, "c": [c.real, c.imag], "roundtrip": joyce_roundtrip(args.sign, z, args.tol)}
    else:
        rng = np.random.default_rng(args.seed)
        pts = 3 * (rng.uniform(-1, 1, (args.roundtrip, 3)) + 1j * rng.uniform(-1, 1, (args.roundtrip, 3)))
        fails = [i for i, z in enumerate(pts) if not joyce_roundtrip(args.sign, z, args.tol)]
        doc = {"sign": args.sign, "samples": args.roundtrip, "seed": args.seed, "failures": len(fails),
               "failed_indices": fails[:20], "passed": not fails}
    sys.stdout.write(_dumps(doc))
    return 0 if doc.get("passed", True) else 1


def cmd_local_slag(args) -> int:
    from syz.local_models import hl_model, joyce_model, sample_hl_fiber, sample_joyce_fiber, slag_check

    if args.model == "hl":
        if len(args.target) != 3:
            raise UsageError("hl target is x1 x2 x3")
        pts = sample_hl_fiber(args.target, args.samples, seed=args.seed).points
        model = hl_model(args.target)
    else:
        if len(args.target) != 3:
            raise UsageError("joyce target is a Re(c) Im(c)")
        a, c = args.target[0], complex(args.target[1], args.target[2])
        pts = sample_joyce_fiber(args.sign, a, c, args.samples, seed=args.seed)
        model = joyce_model(args.sign, a, c)
    report = slag_check(pts, model, h=args.h, optimize_phase=args.optimize_phase, workers=args.threads)
    sys.stdout.write(_dumps(report.to_json() | {"model": args.model, "target": list(args.target)}))
    return 0 if report.passed else 1


# ---------------------------------------------------------------------------
# parser


def _add_poly(p, resolution=200):
    p.add_argument("--poly", required=True, help="polynomial JSON file")
    p.add_argument("--window", nargs=4, type=float, metavar=("XMIN", "XMAX", "YMIN", "YMAX"),
                   help="raster window (default: around the tropical curve of |coefficients|)")
    p.add_argument("--resolution", type=int, default=resolution, help="pixels per side")
    p.add_argument("--angles", type=int, default=64, help="base angular samples per slice")


def _add_out(p, formats):
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--format", choices=formats, help="output format (default: from --out extension)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="syz", description="Amoebas, spines, monodromy and local models of torus fibrations.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("--threads", type=int, default=None,
                    help="worker threads (default: SYZ_THREADS or 1); never changes output")
    sub = ap.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("amoeba", help="rasterize the amoeba of a bivariate polynomial")
    _add_poly(p)
    _add_out(p, ["svg", "csv"])
    p.set_defaults(func=cmd_amoeba)

    p = sub.add_parser("spine", help="spine of the amoeba from complement orders and Ronkin constants")
    _add_poly(p)
    p.add_argument("--grid", type=int, default=512, help="torus quadrature grid")
    _add_out(p, ["svg", "json"])
    p.set_defaults(func=cmd_spine)

    p = sub.add_parser("ronkin", help="Ronkin function value (and order) at a point")
    p.add_argument("--poly", required=True)
    p.add_argument("--point", nargs="+", type=float, required=True)
    p.add_argument("--grid", type=int, default=512)
    p.add_argument("--order", action="store_true", help="also report the component order")
    _add_out(p, ["json"])
    p.set_defaults(func=cmd_ronkin)

    p = sub.add_parser("components", help="complement components with orders and Ronkin constants")
    _add_poly(p)
    p.add_argument("--grid", type=int, default=512)
    _add_out(p, ["json"])
    p.set_defaults(func=cmd_components)

    p = sub.add_parser("compactify", help="compactified amoeba in the Newton polygon")
    p.add_argument("--poly", required=True)
    p.add_argument("--resolution", type=int, default=200)
    p.add_argument("--angles", type=int, default=256)
    _add_out(p, ["svg", "csv"])
    p.set_defaults(func=cmd_compactify)

    g = sub.add_parser("gamma", help="discriminant graph tools").add_subparsers(
        dest="gamma_command", required=True, metavar="ACTION")
    p = g.add_parser("build", help="graph of d times the 4-simplex")
    p.add_argument("--degree", type=int, required=True)
    _add_out(p, ["json", "dot", "svg"])
    p.set_defaults(func=cmd_gamma_build)
    p = g.add_parser("stats", help="vertex counts and Euler characteristic")
    p.add_argument("graph")
    p.set_defaults(func=cmd_gamma_stats)
    p = g.add_parser("mirror", help="swap vertex kinds and dualize labels")
    p.add_argument("graph")
    _add_out(p, ["json", "dot", "svg"])
    p.set_defaults(func=cmd_gamma_mirror)
    p = g.add_parser("flop", help="flop along an edge")
    p.add_argument("graph")
    p.add_argument("--edge", type=int, required=True)
    p.add_argument("--swap", nargs=2, type=int, metavar=("ARM1", "ARM2"))
    _add_out(p, ["json", "dot", "svg"])
    p.set_defaults(func=cmd_gamma_flop)
    p = g.add_parser("conifold", help="conifold transition at an edge")
    p.add_argument("graph")
    p.add_argument("--edge", type=int, required=True)
    _add_out(p, ["json", "dot", "svg"])
    p.set_defaults(func=cmd_gamma_conifold)

    m = sub.add_parser("monodromy", help="integer monodromy algebra").add_subparsers(
        dest="monodromy_command", required=True, metavar="ACTION")
    p = m.add_parser("fixed", help="fixed space of a matrix")
    p.add_argument("matrix")
    p.set_defaults(func=cmd_mono_fixed)
    p = m.add_parser("classify", help="classify a vertex triple")
    p.add_argument("triple")
    p.set_defaults(func=cmd_mono_classify)
    p = m.add_parser("mirror", help="transpose-inverse of a matrix or list")
    p.add_argument("matrix")
    _add_out(p, ["json"])
    p.set_defaults(func=cmd_mono_mirror)
    p = m.add_parser("k3check", help="validate a list of 2x2 singular-fiber monodromies")
    p.add_argument("list", nargs="?")
    p.add_argument("--generate", action="store_true", help="check (and print) the built-in 24-matrix list")
    p.set_defaults(func=cmd_mono_k3check)

    loc = sub.add_parser("local", help="explicit local models in C^3").add_subparsers(
        dest="local_command", required=True, metavar="ACTION")
    p = loc.add_parser("hl", help="sample a Harvey-Lawson fiber, or evaluate the map at --z")
    grp = p.add_mutually_exclusive_group(required=True)
    grp.add_argument("--point", nargs=3, type=float, metavar=("X1", "X2", "X3"))
    grp.add_argument("--z", nargs=3, metavar=("Z1", "Z2", "Z3"), help="complex coordinates like 1+2j")
    p.add_argument("--samples", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-9)
    _add_out(p, ["json"])
    p.set_defaults(func=cmd_local_hl)
    p = loc.add_parser("hl-classify", help="discriminant ray containing x")
    p.add_argument("--x", nargs=3, type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_local_hl_classify)
    p = loc.add_parser("joyce", help="Joyce's F+/- and the fiber roundtrip")
    p.add_argument("--sign", choices=["+", "-"], required=True)
    grp = p.add_mutually_exclusive_group(required=True)
    grp.add_argument("--roundtrip", type=int, metavar="N", help="check N seeded random points")
    grp.add_argument("--z", nargs=3, metavar=("Z1", "Z2", "Z3"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_local_joyce)
    p = loc.add_parser("slag", help="special-Lagrangian residuals on sampled fiber points")
    p.add_argument("--model", choices=["hl", "joyce"], required=True)
    p.add_argument("--target", nargs=3, type=float, required=True,
                   help="hl: x1 x2 x3; joyce: a Re(c) Im(c)")
    p.add_argument("--sign", choices=["+", "-"], default="+")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--h", type=float, default=1e-5)
    p.add_argument("--optimize-phase", action="store_true")
    p.set_defaults(func=cmd_local_slag)
    return ap


def _complex_arg(s: str) -> complex:
    try:
        return complex(s.replace(" ", ""))
    except ValueError:
        raise UsageError(f"not a complex number: {s!r}") from None


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    for name in ("z",):
        if getattr(args, name, None) is not None:
            try:
                setattr(args, name, [str(_complex_arg(s)) for s in getattr(args, name)])
            except UsageError as exc:
                sys.stderr.write(f"syz: error: {exc}\n")
                return 2
    func: Callable = args.func
    try:
        return int(func(args))
    except UsageError as exc:
        sys.stderr.write(f"syz: error: {exc}\n")
        return 2
    except Exception as exc:  # reported as a computation failure
        sys.stdout.write(_dumps({"error": type(exc).__name__, "message": str(exc)}))
        return 1


if __name__ == "__main__":
    sys.exit(main())
