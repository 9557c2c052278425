"""Command-line interface: ``affusion <command> ...``.

Every command prints one JSON document (or CSV rows for tabular payloads)
and exits 0 on success, 1 on a failed verification, 2 on a usage error and
3 on an internal consistency failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__
from .characters import STRUCT_TOL, smatrix
from .errors import (AffusionError, InternalConsistencyError, InvalidAlgebraError,
                     InvalidWeightError, SearchBoundExceeded, UnitarityError)
from .fusion import build_table
from .isomorphism import find_isomorphism, fingerprint
from .liealg import AlgebraId
from .search import DEFAULT_SEARCH_BOUND
from .symmetries import enumerate_automorphisms, expected_automorphisms
from .weights import (LevelContext, conjugations, format_labels, format_weight, level_context,
                      parse_weight, simple_currents)

SCHEMA_VERSION = 1

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


def parse_context(token: str) -> LevelContext:
    """``"A3k4"`` or ``"family=A rank=3 level=4"``."""
    token = token.strip()
    if "=" in token:
        fields = dict(re.findall(r"(\w+)\s*=\s*(\w+)", token))
        try:
            aid = AlgebraId(fields["family"].upper(), int(fields["rank"]))
            level = int(fields["level"])
        except (KeyError, ValueError) as exc:
            raise UsageError(f"bad context {token!r}: need family, rank and level") from exc
    else:
        m = re.fullmatch(r"([A-Ga-g])(\d+)[kK](\d+)", token)
        if not m:
            raise UsageError(f"bad context {token!r}; expected e.g. A3k4")
        aid = AlgebraId(m.group(1).upper(), int(m.group(2)))
        level = int(m.group(3))
    if level < 1:
        raise UsageError("level must be at least 1")
    return level_context(AlgebraId.parse(str(aid)), level)


def _weight(ctx: LevelContext, text: str):
    lam = parse_weight(ctx.rank, text)
    if lam not in ctx.index:
        raise InvalidWeightError(f"{format_weight(lam)} is not in P+ of {ctx}")
    return lam


def _describe(ctx: LevelContext) -> dict:
    return {"family": ctx.id.family, "rank": ctx.rank, "level": ctx.level,
            "name": str(ctx), "kappa": ctx.kappa, "size": ctx.n}


def _weight_entry(ctx: LevelContext, i: int) -> dict:
    return {"labels": format_labels(ctx.pplus[i]), "name": format_weight(ctx.pplus[i])}


def _num(x: float) -> float:
    return float(f"{x:.15g}")


# -- commands -------------------------------------------------------------------

def cmd_pplus(args) -> tuple[dict, int]:
    ctx = parse_context(args.context)
    S = smatrix(ctx, args.tol)
    D = S.qdims()
    currents = simple_currents(ctx, S)
    gens = [sc.perm for sc in currents] + conjugations(ctx)
    orbit_id = {}
    for i in range(ctx.n):
        if i in orbit_id:
            continue
        stack = [i]
        orbit_id[i] = i
        while stack:
            x = stack.pop()
            for p in gens:
                y = int(p[x])
                if y not in orbit_id:
                    orbit_id[y] = i
                    stack.append(y)
    rows = []
    for i in range(ctx.n):
        if abs(D[i] - 1) < 1e-7:
            kind = "current"
        elif any(sc.order > 1 and int(sc.perm[i]) == i for sc in currents):
            kind = "fixed-point"
        else:
            kind = "generic"
        row = _weight_entry(ctx, i)
        row.update(index=i, qdim=_num(D[i]), kind=kind, orbit=orbit_id[i])
        rows.append(row)
    return {"weights": rows}, EXIT_OK


def cmd_smatrix(args) -> tuple[dict, int]:
    ctx = parse_context(args.context)
    S = smatrix(ctx, args.tol)
    res = S.residuals()
    payload = {
        "weights": [format_labels(w) for w in ctx.pplus],
        "real": [[_num(x) for x in row] for row in S.entries.real],
        "imag": [[_num(x) for x in row] for row in S.entries.imag],
        "residuals": {k: _num(v) for k, v in res.items()},
    }
    ok = max(res["symmetry"], res["unitarity"], res["square_is_conjugation"]) < args.tol
    return payload, EXIT_OK if ok else EXIT_FAILED


def cmd_fusion(args) -> tuple[dict, int]:
    ctx = parse_context(args.context)
    table = build_table(ctx, args.cache_dir)
    if args.lam is None:
        triples = [[format_labels(ctx.pplus[a]), format_labels(ctx.pplus[b]),
                    format_labels(ctx.pplus[c]), int(n)] for a, b, c, n in table.triples()]
        return {"triples": triples}, EXIT_OK
    if args.mu is None:
        raise UsageError("fusion needs both weights, or neither for the whole table")
    lam, mu = _weight(ctx, args.lam), _weight(ctx, args.mu)
    row = table.N[ctx.index[lam], ctx.index[mu]]
    terms = []
    for c in np.flatnonzero(row):
        entry = _weight_entry(ctx, int(c))
        entry["multiplicity"] = int(row[c])
        terms.append(entry)
    return {"lambda": format_labels(lam), "mu": format_labels(mu), "product": terms}, EXIT_OK


def cmd_qdim(args) -> tuple[dict, int]:
    ctx = parse_context(args.context)
    D = smatrix(ctx, args.tol).qdims()
    idx = [ctx.index[_weight(ctx, w)] for w in args.weights] if args.weights else range(ctx.n)
    rows = []
    for i in idx:
        entry = _weight_entry(ctx, i)
        entry["qdim"] = _num(D[i])
        rows.append(entry)
    return {"qdims": rows}, EXIT_OK


def _group_payload(ctx: LevelContext, group) -> list[dict]:
    out = []
    for g in group:
        moved = [[format_labels(ctx.pplus[i]), format_labels(ctx.pplus[int(g.perm[i])])]
                 for i in range(ctx.n) if int(g.perm[i]) != i]
        out.append({"order": g.order(), "moves": moved, "source": g.provenance})
    return out


def cmd_autos(args) -> tuple[dict, int]:
    ctx = parse_context(args.context)
    S, table = smatrix(ctx, args.tol), build_table(ctx, args.cache_dir)
    payload: dict = {"mode": args.mode}
    status = EXIT_OK
    if args.mode in ("constructed", "compare"):
        expected = expected_automorphisms(ctx, table, S)
        payload["constructed"] = _group_payload(ctx, expected)
    if args.mode in ("bruteforce", "compare"):
        found = enumerate_automorphisms(ctx, table, S, args.search_bound)
        payload["bruteforce"] = _group_payload(ctx, found)
    if args.mode == "compare":
        a = {g.key() for g in expected}
        b = {g.key() for g in found}
        payload["equal"] = a == b
        payload["order"] = len(b)
        payload["only_constructed"] = len(a - b)
        payload["only_bruteforce"] = len(b - a)
        status = EXIT_OK if a == b else EXIT_FAILED
    return payload, status


def cmd_iso(args) -> tuple[dict, int]:
    ca, cb = parse_context(args.first), parse_context(args.second)
    ta, tb = build_table(ca, args.cache_dir), build_table(cb, args.cache_dir)
    fa, fb = fingerprint(ca, smatrix(ca), ta), fingerprint(cb, smatrix(cb), tb)
    p = find_isomorphism(ca, ta, cb, tb, force=args.force, bound=args.search_bound)
    payload = {
        "second": _describe(cb),
        "fingerprints": [fa.as_dict(), fb.as_dict()],
        "isomorphic": p is not None,
        "bijection": None if p is None else [
            [format_labels(ca.pplus[i]), format_labels(cb.pplus[int(p[i])])] for i in range(ca.n)],
    }
    return payload, EXIT_OK


def _prebuild(token: str, cache_dir) -> str:
    ctx = parse_context(token)
    build_table(ctx, cache_dir)
    return token


def cmd_verify(args) -> tuple[dict, int]:
    from .verify import Runner, desk_suite
    criteria = None
    if args.criteria:
        try:
            criteria = sorted({int(x) for x in args.criteria.split(",")})
        except ValueError as exc:
            raise UsageError("--criteria takes a comma-separated list of numbers") from exc
    if args.jobs > 1 and args.cache_dir:
        tokens = [str(c) for c in desk_suite()]
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            list(pool.map(_prebuild, tokens, [args.cache_dir] * len(tokens)))
    runner = Runner(cache_dir=args.cache_dir, tol=args.tol, search_bound=args.search_bound,
                    progress=lambda msg: logging.getLogger("affusion").info(msg))
    report = runner.run(criteria)
    summary = {}
    for c in sorted({r.criterion for r in report.checks}):
        summary[str(c)] = {"passed": report.criterion_passed(c),
                           "failures": [r.name for r in report.failures(c)]}
    payload = {
        "passed": report.passed,
        "criteria": summary,
        "checks": [r.as_dict() for r in report.checks],
        "timing": {str(k): round(v, 3) for k, v in report.timings.items()},
    }
    return payload, EXIT_OK if report.passed else EXIT_FAILED


COMMANDS = {"pplus": cmd_pplus, "smatrix": cmd_smatrix, "fusion": cmd_fusion, "qdim": cmd_qdim,
            "autos": cmd_autos, "iso": cmd_iso, "verify": cmd_verify}


# -- output ---------------------------------------------------------------------

def _csv_rows(command: str, payload: dict) -> list[list]:
    if command == "smatrix":
        rows = [["row", "col", "real", "imag"]]
        for i, (re_row, im_row) in enumerate(zip(payload["real"], payload["imag"])):
            rows += [[i, j, r, m] for j, (r, m) in enumerate(zip(re_row, im_row))]
        return rows
    if command == "fusion" and "triples" in payload:
        return [["lambda", "mu", "nu", "multiplicity"]] + payload["triples"]
    if command == "fusion":
        return [["labels", "name", "multiplicity"]] + [
            [t["labels"], t["name"], t["multiplicity"]] for t in payload["product"]]
    if command == "pplus":
        return [["index", "labels", "name", "qdim", "kind", "orbit"]] + [
            [w["index"], w["labels"], w["name"], w["qdim"], w["kind"], w["orbit"]]
            for w in payload["weights"]]
    if command == "qdim":
        return [["labels", "name", "qdim"]] + [[w["labels"], w["name"], w["qdim"]]
                                               for w in payload["qdims"]]
    if command == "verify":
        return [["criterion", "name", "passed", "residual", "detail"]] + [
            [c["criterion"], c["name"], c["passed"], c.get("residual", ""), c["detail"]]
            for c in payload["checks"]]
    raise UsageError(f"csv output is not available for {command}")


def render(command: str, payload: dict, fmt: str) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(_csv_rows(command, payload))
        return buf.getvalue()
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--cache-dir", default=os.environ.get("AFFUSION_CACHE"),
                        help="fusion table cache (default: $AFFUSION_CACHE, else no cache)")
    common.add_argument("--tol", type=float, default=STRUCT_TOL)
    common.add_argument("--search-bound", type=int, default=DEFAULT_SEARCH_BOUND,
                        help="largest |P+| the brute-force search will accept")
    common.add_argument("--jobs", type=int, default=1,
                        help="worker processes for prebuilding tables in verify")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="affusion", description="Fusion rings of affine Kac-Moody algebras at integer level.")
    parser.add_argument("--version", action="version", version=f"affusion {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pplus", parents=[common], help="list P+ with q-dimensions")
    p.add_argument("context", help="e.g. A3k4")
    p = sub.add_parser("smatrix", parents=[common], help="the modular S-matrix")
    p.add_argument("context")
    p = sub.add_parser("fusion", parents=[common], help="fusion coefficients")
    p.add_argument("context")
    p.add_argument("lam", nargs="?", help="weight, e.g. L1 or '1 0 0'")
    p.add_argument("mu", nargs="?")
    p = sub.add_parser("qdim", parents=[common], help="quantum dimensions")
    p.add_argument("context")
    p.add_argument("weights", nargs="*")
    p = sub.add_parser("autos", parents=[common], help="fusion ring automorphisms")
    p.add_argument("context")
    p.add_argument("--mode", choices=("constructed", "bruteforce", "compare"), default="compare")
    p = sub.add_parser("iso", parents=[common], help="test two fusion rings for isomorphism")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--force", action="store_true", help="search even if fingerprints differ")
    p = sub.add_parser("verify", parents=[common], help="run the acceptance suite")
    p.add_argument("--criteria", help="comma-separated subset, e.g. 1,2,7")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    start = time.perf_counter()
    try:
        payload, status = COMMANDS[args.command](args)
    except (UsageError, InvalidAlgebraError, InvalidWeightError, SearchBoundExceeded) as exc:
        print(f"affusion: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InternalConsistencyError, UnitarityError, AssertionError) as exc:
        print(f"affusion: internal check failed: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except AffusionError as exc:
        print(f"affusion: {exc}", file=sys.stderr)
        return EXIT_FAILED
    argv_echo = list(sys.argv[1:] if argv is None else argv)
    if args.format == "json":
        doc = {"schema_version": SCHEMA_VERSION, "command": args.command, "argv": argv_echo,
               "payload": payload, "status": status,
               "elapsed_seconds": round(time.perf_counter() - start, 3)}
        if hasattr(args, "context"):
            doc["context"] = _describe(parse_context(args.context))
        elif args.command == "iso":
            doc["context"] = _describe(parse_context(args.first))
        out = render(args.command, doc, "json")
    else:
        try:
            out = render(args.command, payload, "csv")
        except UsageError as exc:
            print(f"affusion: {exc}", file=sys.stderr)
            return EXIT_USAGE
    sys.stdout.write(out)
    return status


if __name__ == "__main__":
    sys.exit(main())
