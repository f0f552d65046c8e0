"""Command-line interface: ``torcomb <command> <input> [options]``.

Vertex labels are 1-based everywhere, matching facet indices F_1..F_m.

Exit codes: 0 success, 2 input error, 3 desk-scale refusal, 4 internal
cross-check failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from . import betti as betti_mod
from . import buchstaber as bs
from .complex import (
    ComplexError,
    SimplicialComplex,
    f_vector,
    flag_defect,
    h_polynomial,
    minimal_non_faces,
    one_skeleton_chromatic_number,
)
from .families import (
    InadmissibleFlip,
    PolygonPresentation,
    PresentationError,
    TableDiagram,
    admissible_flips,
    complex_from_spec,
    find_bistellar_move,
    h_closed_form,
    polygon_complex,
    polygon_flip,
    polygon_from_table,
    table_from_polygon,
)
from .polynomials import poly_sub
from .ring import product_table, theorem_conformance

EXIT_OK, EXIT_INPUT, EXIT_CAP, EXIT_CHECK = 0, 2, 3, 4
S_REAL_CAP = 12


class CapExceeded(RuntimeError):
    pass


class CrossCheckFailed(RuntimeError):
    def __init__(self, message: str, report: dict):
        super().__init__(message)
        self.report = report


# ---------------------------------------------------------------------------
# input parsing


def _ints(text: str) -> list[int]:
    text = text.strip()
    if text.startswith("["):
        return [int(x) for x in json.loads(text)]
    return [int(x) for x in text.split(",") if x.strip()]


def _rationals(text: str) -> list[Fraction]:
    return [Fraction(x.strip()) for x in text.split(",") if x.strip()]


def load_input(args) -> tuple[dict, SimplicialComplex]:
    """Return (normalised spec, complex)."""
    if args.polygon is not None:
        spec = {"polygon": _ints(args.polygon)}
    elif args.skeleton is not None:
        m, n = _ints(args.skeleton)
        spec = {"skeleton": {"m": m, "n": n}}
    elif args.cyclic is not None:
        n, m = _ints(args.cyclic)
        spec = {"cyclic_dual": {"n": n, "m": m}}
    elif args.simplex is not None:
        spec = {"simplex": {"n": int(args.simplex)}}
    elif args.table is not None:
        if ":" not in args.table:
            raise PresentationError("table must be given as A:B, e.g. 0,3/5:0,3/5")
        a, b = args.table.split(":", 1)
        spec = {"table": {"a": [str(x) for x in _rationals(a)], "b": [str(x) for x in _rationals(b)]}}
    else:
        text = sys.stdin.read() if args.json == "-" else open(args.json).read()
        spec = json.loads(text)
    return spec, complex_from_spec(spec)


def polygon_for(spec: dict) -> PolygonPresentation | None:
    if "polygon" in spec:
        return PolygonPresentation(tuple(spec["polygon"]))
    if "table" in spec:
        return polygon_from_table(TableDiagram.from_dict(spec["table"]))
    return None


# ---------------------------------------------------------------------------
# commands; each returns a report dict


def cmd_describe(args, spec, K) -> dict:
    rep = {
        "m": K.m,
        "n": K.n,
        "pure": K.is_pure,
        "f": list(f_vector(K).entries),
    }
    if K.is_pure:
        rep["h"] = list(h_polynomial(K).coeffs)
    rep["chromatic_number"] = one_skeleton_chromatic_number(K)
    is_flag, least_k = flag_defect(K)
    rep["flag"] = is_flag
    rep["least_k_flag"] = least_k
    mnf = minimal_non_faces(K)
    rep["minimal_non_faces"] = [list(w) for w in mnf]
    rep["maximal_faces"] = [list(f) for f in K.maximal_faces]
    p = polygon_for(spec)
    if p is not None:
        rep["h_closed_form_agrees"] = list(h_closed_form(p).coeffs) == rep.get("h")
        if not rep["h_closed_form_agrees"]:
            raise CrossCheckFailed("f-derived h differs from the closed form", rep)
    return rep


def cmd_buchstaber(args, spec, K) -> dict:
    if K.m > S_REAL_CAP and not args.allow_large:
        raise CapExceeded(f"m = {K.m} exceeds the s_real cap {S_REAL_CAP}; pass --allow-large")
    workers = args.threads
    sr, cert = bs.s_real(K, workers)
    rng = bs.s_int(K, workers)
    rep = {
        "m": K.m,
        "n": K.n,
        "s_real": sr,
        "s_real_certificate": cert.to_dict(),
        "s": rng.to_dict(),
    }
    if not bs.check_assignment(K, cert) or not bs.check_assignment(K, rng.certificate):
        raise CrossCheckFailed("certificate failed verification", rep)
    return rep


def cmd_betti(args, spec, K) -> dict:
    cap = 10**9 if args.allow_large else betti_mod.DESK_CAP_M
    table = betti_mod.koszul_betti(K, integral=args.integral, workers=args.threads, cap=cap)
    rep = {"m": K.m, "n": K.n, "betti": table.to_dict(), "grid": table.grid()}
    p = polygon_for(spec)
    if p is not None:
        rep["closed_form_agrees"] = betti_mod.polygon_betti_closed_form(p) == table
        rep["euler_identity"] = betti_mod.euler_h_identity_check(K, table)
        if not (rep["closed_form_agrees"] and rep["euler_identity"]):
            raise CrossCheckFailed("Betti numbers disagree with the closed form", rep)
    return rep


def cmd_cohomology(args, spec, K) -> dict:
    p = polygon_for(spec)
    if p is None:
        raise PresentationError("cohomology needs a polygon or table input")
    if K.m > betti_mod.DESK_CAP_M and not args.allow_large:
        raise CapExceeded(f"m = {K.m} exceeds the cap {betti_mod.DESK_CAP_M}")
    table = product_table(p)
    conf = theorem_conformance(p, table)
    rep = {
        "weights": list(p.weights),
        "ring": table.to_dict(),
        "conforms": conf.ok,
        "additive_rank": conf.rank,
        "torsion_free": conf.torsion_free,
        "mismatches": conf.mismatches,
    }
    if not conf.ok:
        raise CrossCheckFailed("product table does not match the expected pattern", rep)
    return rep


def cmd_flip(args, spec, K) -> dict:
    p = polygon_for(spec)
    if p is None:
        raise PresentationError("flip needs a polygon input")
    records = [polygon_flip(p, args.pos)] if args.pos is not None else admissible_flips(p)
    out = []
    for rec in records:
        h0 = h_polynomial(polygon_complex(rec.before)).ascending()
        h1 = h_polynomial(polygon_complex(rec.after)).ascending()
        diff = poly_sub(h1, h0)
        expected = rec.h_change()
        h_ok = diff == expected
        move = find_bistellar_move(polygon_complex(rec.before), polygon_complex(rec.after))
        entry = {
            "pos": rec.pos,
            "flip_type": rec.flip_type,
            "before": list(rec.before.weights),
            "after": list(rec.after.weights),
            "h_change": diff,
            "h_change_verified": h_ok,
            "bistellar": None if move is None else {"W": list(move.W), "I": list(move.I), "J": list(move.J)},
        }
        entry["bistellar_verified"] = move is not None and len(move.I) == rec.flip_type
        out.append(entry)
    rep = {"weights": list(p.weights), "flips": out}
    if any(not (e["h_change_verified"] and e["bistellar_verified"]) for e in out):
        raise CrossCheckFailed("flip verification failed", rep)
    return rep


def cmd_convert(args, spec, K) -> dict:
    rep = {"complex": K.to_dict()}
    if "polygon" in spec:
        p = PolygonPresentation(tuple(spec["polygon"]))
        rep["polygon"] = list(p.weights)
        rep["table"] = table_from_polygon(p).to_dict()
    elif "table" in spec:
        T = TableDiagram.from_dict(spec["table"])
        rep["table"] = T.to_dict()
        rep["polygon"] = list(polygon_from_table(T).weights)
    return rep


COMMANDS = {
    "describe": cmd_describe,
    "buchstaber": cmd_buchstaber,
    "betti": cmd_betti,
    "cohomology": cmd_cohomology,
    "flip": cmd_flip,
    "convert": cmd_convert,
}


# ---------------------------------------------------------------------------
# output


def _flatten(prefix: str, value, rows: list):
    if isinstance(value, dict):
        for k, v in value.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, rows)
    else:
        rows.append((prefix, json.dumps(value) if isinstance(value, list) else value))


def render(command: str, report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if command == "betti":
            w.writerow(["q", "p2", "rank"])
            for e in report["betti"]["entries"]:
                w.writerow([e["q"], e["p2"], e["rank"]])
        else:
            w.writerow(["key", "value"])
            rows: list = []
            _flatten("", report, rows)
            for row in rows:
                w.writerow(row)
        return buf.getvalue()
    lines = []
    for key, value in report.items():
        if key == "grid":
            lines.append(value)
        elif key == "betti":
            continue
        elif isinstance(value, (dict, list)):
            lines.append(f"{key}: {json.dumps(value)}")
        else:
            lines.append(f"{key}: {value}")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="torcomb",
        description="Invariants of simple polytopes with few facets (labels are 1-based).",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        src = sp.add_mutually_exclusive_group(required=True)
        src.add_argument("--polygon", help="weights, e.g. 2,1,2,1,1,2,1 or [2,1,2,1,1,2,1]")
        src.add_argument("--skeleton", help="m,n: all n-subsets of [m]")
        src.add_argument("--cyclic", help="n,m: dual of the cyclic polytope C^n(m)")
        src.add_argument("--simplex", help="n: boundary of the n-simplex")
        src.add_argument("--table", help="A:B with comma lists of rationals, e.g. 0,3/5:0,3/5")
        src.add_argument("--json", help="JSON spec file, or - for stdin")
        sp.add_argument("--format", choices=["text", "json", "csv"], default="text")
        sp.add_argument("--threads", type=int, default=None, help="worker processes (default: TORCOMB_THREADS or 1)")
        sp.add_argument("--allow-large", action="store_true", help="lift the desk-scale caps")
        if name == "flip":
            sp.add_argument("--pos", type=int, default=None, help="polygon vertex (1-based); all admissible if omitted")
        if name == "betti":
            sp.add_argument("--integral", action="store_true", help="also record integral torsion")
    return parser


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_INPUT
    if args.threads is None:
        try:
            args.threads = max(1, int(os.environ.get("TORCOMB_THREADS", "1")))
        except ValueError:
            args.threads = 1
    try:
        spec, K = load_input(args)
        report = COMMANDS[args.command](args, spec, K)
    except (ComplexError, PresentationError, InadmissibleFlip, ValueError, KeyError, TypeError, OSError) as exc:
        err.write(f"torcomb: input error: {exc}\n")
        return EXIT_INPUT
    except (CapExceeded, betti_mod.DeskScaleError) as exc:
        err.write(f"torcomb: desk-scale refusal: {exc}\n")
        return EXIT_CAP
    except CrossCheckFailed as exc:
        out.write(render(args.command, exc.report, args.format))
        err.write(f"torcomb: cross-check failed: {exc}\n")
        return EXIT_CHECK
    out.write(render(args.command, report, args.format))
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
