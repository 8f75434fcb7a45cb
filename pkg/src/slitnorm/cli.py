"""Command-line front end.

Exit status: 0 on success, 2 on invalid input, 3 when an ``--oracle``
cross-check exceeds its tolerance, 1 for any other library error.
Output goes to stdout unless ``--out`` is given; relative ``--out`` paths
are resolved against ``$SLITNORM_OUT_DIR`` when that is set.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import counting, farey, general, glued, oracle, torus, unit_ball
from .errors import SlitNormError, ValidationError

OUT_DIR_ENV = "SLITNORM_OUT_DIR"


def fmt(x) -> str:
    return format(float(x), ".12g")


def _round(obj):
    if isinstance(obj, float):
        return float(fmt(obj)) if math.isfinite(obj) else str(obj)
    if isinstance(obj, Fraction):
        return float(fmt(obj))
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    return obj


def parse_number(text: str):
    t = text.strip()
    if any(c in t for c in ".eE") and "/" not in t:
        try:
            return float(t)
        except ValueError as exc:
            raise ValidationError(f"cannot parse number {text!r}") from exc
    return farey.parse_rational(t)


def parse_pair(text: str) -> tuple:
    parts = text.split(",")
    if len(parts) != 2:
        raise ValidationError(f"expected two comma-separated numbers, got {text!r}")
    return tuple(parse_number(p) for p in parts)


def parse_matrix(text: str) -> general.LinearMap:
    rows = text.split(";")
    if len(rows) != 2:
        raise ValidationError(f"matrix must look like 'a,b;c,d', got {text!r}")
    return general.LinearMap.from_rows([parse_pair(r) for r in rows])


def parse_rho(text: str) -> torus.VerticalSlitTorus:
    return torus.VerticalSlitTorus(farey.parse_rational(text))


# ------------------------------------------------------------------ scenes


def _geometry(args):
    """('vertical' | 'sheared' | 'slit', payload) from the torus flags."""
    if args.slit:
        if args.matrix or args.rho:
            raise ValidationError("--slit cannot be combined with --rho or --matrix")
        return "slit", general.GeneralSlitTorus(parse_pair(args.slit))
    if not args.rho:
        raise ValidationError("one of --rho or --slit is required")
    T = parse_rho(args.rho)
    if args.matrix:
        return "sheared", (parse_matrix(args.matrix), T)
    return "vertical", T


def _scene(kind, payload) -> oracle.CoverScene:
    if kind == "vertical":
        return oracle.CoverScene.vertical(payload.rho)
    if kind == "sheared":
        M, T = payload
        return oracle.CoverScene.sheared(M.rows, T.rho)
    beta, alpha = payload.slit_vector
    return oracle.CoverScene.general(beta, alpha)


def _certificate(kind, payload, h) -> torus.NormCertificate:
    if kind == "vertical":
        return torus.stable_norm(payload, h)
    if kind == "sheared":
        M, T = payload
        return general.norm_sheared(M, T.rho, h)
    return general.general_norm(payload, h)


def _norm_job(job):
    kind, payload, h, with_oracle = job
    cert = _certificate(kind, payload, h)
    out = {"certificate": cert.to_dict()}
    if with_oracle:
        length = oracle.oracle_norm(_scene(kind, payload), h)
        out["oracle"] = {"length": length, "delta": abs(length - cert.value) / cert.value}
    return out


def _oracle_job(job):
    kind, payload, h = job
    return oracle.shortest_path(_scene(kind, payload), (h.m, h.n)).to_dict()


def _map(fn, jobs, workers: int):
    if workers <= 1 or len(jobs) <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, jobs))


def _classes(args) -> list:
    if not args.cls:
        raise ValidationError("--class is required")
    return [torus.HClass.parse(c) for c in args.cls]


# --------------------------------------------------------------- commands


def cmd_norm(args):
    kind, payload = _geometry(args)
    jobs = [(kind, payload, h, args.oracle) for h in _classes(args)]
    results = _map(_norm_job, jobs, args.workers)
    failed = any(r.get("oracle", {}).get("delta", 0.0) > args.tol for r in results)
    doc = results[0] if len(results) == 1 else results
    if args.format == "csv":
        rows = [["m", "n", "value", "kind", "oracle", "delta"]]
        for r in results:
            c = r["certificate"]
            o = r.get("oracle", {})
            rows.append([c["class"][0], c["class"][1], fmt(c["value"]), c["kind"],
                         fmt(o["length"]) if o else "", fmt(o["delta"]) if o else ""])
        return rows, failed
    return doc, failed


def cmd_classify(args):
    kind, payload = _geometry(args)
    out = []
    for h in _classes(args):
        if kind == "vertical":
            vis, cl = torus.is_visible(payload, h), torus.classify_direction(payload, h)
        elif kind == "sheared":
            vis = torus.is_visible(payload[1], h)
            cl = general.classify_sheared(payload[1].rho, h)
        else:
            exact = payload.slope_kind != "IrrationalSlope"
            vis = general.rational_visible(payload, h) if exact else general.irrational_visible(payload, h)
            cl = general.intrinsic_classify(payload, h)
        out.append({"class": [h.m, h.n], "visible": vis, "classification": cl})
    if args.format == "csv":
        return [["m", "n", "visible", "classification"]] + [
            [r["class"][0], r["class"][1], str(r["visible"]).lower(), r["classification"]] for r in out
        ], False
    return (out[0] if len(out) == 1 else out), False


def cmd_vertices(args):
    T = parse_rho(args.rho)
    entries = unit_ball.enumerate_vertices(T, args.max_norm)
    if args.format == "csv":
        return [["m", "n", "norm", "kind"]] + [[e.cls.m, e.cls.n, fmt(e.norm), e.kind] for e in entries], False
    return [e.to_dict() for e in entries], False


def cmd_profile(args):
    T = parse_rho(args.rho)
    samples = unit_ball.deviation_profile(T, args.samples)
    rows = [["flattened_coord", "gap", "m", "n", "kind"]]
    for s in samples:
        rows.append([fmt(s.coord), fmt(s.gap), fmt(s.m), fmt(s.n), s.kind])
    if args.format == "json":
        return [{"flattened_coord": s.coord, "gap": s.gap, "m": s.m, "n": s.n, "kind": s.kind} for s in samples], False
    return rows, False


def cmd_ball(args):
    T = parse_rho(args.rho)
    pts = unit_ball.boundary_polyline(T, args.max_denominator)
    if args.format == "csv":
        return [["x", "y"]] + [[fmt(x), fmt(y)] for x, y in pts], False
    return [[x, y] for x, y in pts], False


def cmd_word(args):
    out = []
    for h in _classes(args):
        out.append({"class": [h.m, h.n], "word": farey.cutting_word(h.m, h.n)})
    if args.format == "csv":
        return [["m", "n", "word"]] + [[r["class"][0], r["class"][1], r["word"]] for r in out], False
    return (out[0] if len(out) == 1 else out), False


def cmd_glue(args):
    rhos = [farey.parse_rational(r) for r in args.rho.split(",")]
    if len(rhos) == 1:
        rhos = rhos * args.copies
    S = glued.GluedSurface(tuple(rhos), parse_number(args.width))
    if args.cls:
        out = []
        for text in args.cls:
            H = glued.GluedClass.parse(text)
            res = glued.glued_norm(S, H)
            doc = res.to_dict()
            doc["classification"] = glued.glued_classify(S, H)
            out.append(doc)
        if args.format == "csv":
            return [["class", "value", "classification"]] + [
                [";".join(f"{a},{b}" for a, b in d["class"]), fmt(d["value"]), d["classification"]] for d in out
            ], False
        return (out[0] if len(out) == 1 else out), False
    verts = glued.glued_vertices(S, args.max_norm)
    if args.format == "csv":
        return [["class", "norm"]] + [[str(H), fmt(v)] for H, v in verts], False
    return [{"class": [[b.m, b.n] for b in H.blocks], "norm": v} for H, v in verts], False


def cmd_count(args):
    T = parse_rho(args.rho)
    xs = []
    x = args.xmin
    while x <= args.xmax * (1 + 1e-12):
        xs.append(x)
        x = args.xmin + len(xs) * args.step
    oriented = not args.unoriented
    table = counting.count_table(T, xs, copies=args.copies, oriented=oriented)
    coef = float(counting.leading_coefficient(T.rho, args.copies))
    if oriented:
        coef *= 2
    records = []
    for x, p in table.rows:
        est = coef * x * math.log(x)
        records.append({"x": x, "p": p, "estimate": est, "ratio": p / est if est > 0 else None})
    rows = [["x", "p", "estimate", "ratio"]] + [
        [fmt(r["x"]), r["p"], fmt(r["estimate"]), "" if r["ratio"] is None else fmt(r["ratio"])] for r in records
    ]
    fit = None
    if args.fit:
        f = counting.fit_coefficient(table)
        fit = {"A": f.A, "B": f.B, "residual": f.residual, "expected_A": coef}
    if args.format == "csv":
        return rows, False
    doc = {"rho": farey.format_rational(T.rho), "copies": args.copies, "oriented": oriented,
           "rows": records}
    if fit:
        doc["fit"] = fit
    return doc, False


def cmd_oracle(args):
    kind, payload = _geometry(args)
    classes = _classes(args)
    if args.dump_graph:
        h = classes[0]
        res = oracle.shortest_path(_scene(kind, payload), (h.m, h.n), record_edges=True)
        _write(args.dump_graph, oracle.dump_edges_csv(res))
    results = _map(_oracle_job, [(kind, payload, h) for h in classes], args.workers)
    if args.format == "csv":
        return [["m", "n", "length", "nodes_expanded"]] + [
            [h.m, h.n, fmt(r["length"]), r["nodes_expanded"]] for h, r in zip(classes, results)
        ], False
    return (results[0] if len(results) == 1 else results), False


# ------------------------------------------------------------------ driver


def _write(path: str, text: str) -> None:
    base = os.environ.get(OUT_DIR_ENV)
    if base and not os.path.isabs(path):
        path = os.path.join(base, path)
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(text)


def render(doc, fmt_name: str) -> str:
    if fmt_name == "csv":
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(doc)
        return buf.getvalue()
    return json.dumps(_round(doc), indent=2, sort_keys=True) + "\n"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="slitnorm", description="Stable norms of slit tori.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, fmt_default="json"):
        sp.add_argument("--format", choices=["json", "csv"], default=fmt_default)
        sp.add_argument("--out", help="write output to this file")
        sp.add_argument("--workers", type=int, default=os.cpu_count() or 1)

    def geometry(sp):
        sp.add_argument("--rho", help="slit length p/q of the vertical slit")
        sp.add_argument("--matrix", help="shear 'a,b;c,d' applied to the vertical torus")
        sp.add_argument("--slit", help="slit vector 'beta,alpha' on the square torus")

    sp = sub.add_parser("norm", help="stable norm certificate")
    geometry(sp)
    sp.add_argument("--class", dest="cls", action="append", help="class m,n (repeatable)")
    sp.add_argument("--oracle", action="store_true", help="cross-check with the shortest-path oracle")
    sp.add_argument("--tol", type=float, default=1e-6)
    common(sp)
    sp.set_defaults(func=cmd_norm)

    sp = sub.add_parser("classify", help="visibility and vertex/flat classification")
    geometry(sp)
    sp.add_argument("--class", dest="cls", action="append")
    common(sp)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("vertices", help="vertex directions up to a norm bound")
    sp.add_argument("--rho", required=True)
    sp.add_argument("--max-norm", type=float, default=5.0)
    common(sp)
    sp.set_defaults(func=cmd_vertices)

    sp = sub.add_parser("profile", help="deviation of the unit ball from the circle")
    sp.add_argument("--rho", required=True)
    sp.add_argument("--samples", type=int, default=200)
    common(sp, "csv")
    sp.set_defaults(func=cmd_profile)

    sp = sub.add_parser("ball", help="boundary polyline of the unit ball")
    sp.add_argument("--rho", required=True)
    sp.add_argument("--max-denominator", type=int, default=5)
    common(sp)
    sp.set_defaults(func=cmd_ball)

    sp = sub.add_parser("word", help="cutting word of a class")
    sp.add_argument("--class", dest="cls", action="append")
    common(sp)
    sp.set_defaults(func=cmd_word)

    sp = sub.add_parser("glue", help="glued surfaces: norms or vertex set")
    sp.add_argument("--rho", required=True, help="slit lengths, comma separated, or one value with --copies")
    sp.add_argument("--copies", type=int, default=2)
    sp.add_argument("--width", required=True)
    sp.add_argument("--class", dest="cls", action="append", help="blocks 'm1,n1;m2,n2'")
    sp.add_argument("--max-norm", type=float, default=5.0)
    common(sp)
    sp.set_defaults(func=cmd_glue)

    sp = sub.add_parser("count", help="count simple classes and fit the asymptotic")
    sp.add_argument("--rho", required=True)
    sp.add_argument("--xmin", type=float, default=1.0)
    sp.add_argument("--xmax", type=float, required=True)
    sp.add_argument("--step", type=float, default=1.0)
    sp.add_argument("--copies", type=int, default=1)
    sp.add_argument("--unoriented", action="store_true", help="count h and -h once")
    sp.add_argument("--fit", action="store_true")
    common(sp, "csv")
    sp.set_defaults(func=cmd_count)

    sp = sub.add_parser("oracle", help="raw shortest path in the cover")
    geometry(sp)
    sp.add_argument("--class", dest="cls", action="append")
    sp.add_argument("--dump-graph", help="write explored visibility edges as CSV")
    common(sp)
    sp.set_defaults(func=cmd_oracle)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "workers", 1) < 1:
            raise ValidationError("--workers must be >= 1")
        doc, failed = args.func(args)
    except ValidationError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return 2
    except SlitNormError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return 1
    text = render(doc, args.format)
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    if failed:
        print("error[OracleMismatch]: oracle delta exceeds tolerance", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
