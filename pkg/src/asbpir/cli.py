"""Command-line interface.

Exit codes: 0 holds / found, 1 fails / not found, 2 usage error, 3 budget exceeded.
Column indices on the command line are 1-based.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

from . import constructions as C
from .bounds import length_bounds, matrix_bounds
from .field import FieldError
from .io import MatrixFileError, read_matrix, write_matrix
from .linalg import GeneratorMatrix
from .properties import PropertyKind, check, max_t
from .recovery import Request, serve
from .reproduce import CLAIMS, reproduce
from .search import DEFAULT_BUDGET, ResultCache, find_min_length

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(args, doc: dict, text: str) -> None:
    if args.json:
        print(json.dumps(doc, indent=1, default=_default))
    else:
        print(text)


def _default(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    raise TypeError(f"cannot serialize {type(x).__name__}")


def _plan_text(plan) -> str:
    lines = []
    for a in plan.assignments:
        idx = "{" + ", ".join(str(j + 1) for j in a.indices) + "}"
        coeffs = " + ".join(f"{a.coefficients[j]}*g{j + 1}" for j in a.indices) or "0"
        lines.append(f"  {list(a.target)} <- {idx}  ({coeffs})")
    return "\n".join(lines)


def _plan_doc(plan) -> dict:
    """Plan with 1-based indices."""
    return {
        "assignments": [
            {
                "target": list(a.target),
                "indices": [j + 1 for j in a.indices],
                "coefficients": {str(j + 1): int(c) for j, c in sorted(a.coefficients.items())},
            }
            for a in plan.assignments
        ]
    }


def _request_doc(req: Request) -> list:
    return [{"target": list(v), "multiplicity": m} for v, m in req.items]


def cmd_check(args) -> int:
    g = read_matrix(args.matrix)
    kind = PropertyKind.parse(args.property)
    v = check(g, kind, args.t, max_size=args.max_size)
    doc = {"command": "check", "property": kind.value, "t": args.t, "holds": v.holds,
           "requests_checked": v.requests_checked}
    if v.holds:
        doc["witness_request"] = _request_doc(v.witness_request)
        doc["witness"] = _plan_doc(v.witness)
        text = f"{kind.value} t={args.t}: holds ({v.requests_checked} requests)\nwitness for {v.witness_request}:\n{_plan_text(v.witness)}"
    else:
        doc["counterexample"] = _request_doc(v.counterexample)
        text = f"{kind.value} t={args.t}: fails\ncounterexample: {v.counterexample}"
    _emit(args, doc, text)
    return EXIT_OK if v.holds else EXIT_FAIL


def _build_family(args) -> GeneratorMatrix:
    spec = C.FamilySpec(family=args.family, k=args.k, t=args.t, q=args.q, n=args.n, lam=args.lam, tag=args.tag)
    if args.family in ("replicate", "block_diagonal"):
        if not args.matrix:
            raise UsageError(f"{args.family} needs --matrix (twice for block_diagonal)")
        parts = [read_matrix(p) for p in args.matrix]
        if args.family == "replicate":
            return C.replicate(parts[0], args.lam)
        if len(parts) != 2:
            raise UsageError("block_diagonal needs exactly two --matrix files")
        return C.block_diagonal(*parts)
    return spec.build()


def cmd_construct(args) -> int:
    g = _build_family(args)
    name = args.name or args.family
    if args.out:
        write_matrix(args.out, g, name=name, fmt=args.format)
    doc = {"command": "construct", "family": args.family, "q": g.field.q, "k": g.rows, "n": g.cols,
           "entries": g.tolist(), "out": args.out}
    text = f"{name}: {g.rows}x{g.cols} over GF({g.field.q})\n" + "\n".join(
        " ".join(str(x) for x in row) for row in g.tolist()
    )
    _emit(args, doc, text)
    return EXIT_OK


def cmd_bounds(args) -> int:
    rep = length_bounds(args.k, args.t, args.q)
    doc = {"command": "bounds", "length": rep.to_dict()}
    text = f"length bounds for (k={args.k}, t={args.t}, q={args.q}):\n{rep.table()}"
    if args.matrix:
        g = read_matrix(args.matrix)
        mrep = matrix_bounds(g, args.t)
        observed = {"aspir": max_t(g, PropertyKind.ASPIR), "asbatch": max_t(g, PropertyKind.ASBATCH)}
        doc["matrix"] = mrep.to_dict()
        doc["observed_max_t"] = observed
        text += f"\n\nmatrix bounds on t:\n{mrep.table()}\nobserved max t: aspir {observed['aspir']}, asbatch {observed['asbatch']}"
    _emit(args, doc, text)
    return EXIT_OK


def cmd_search(args) -> int:
    kind = PropertyKind.parse(args.property)
    cache = ResultCache(args.cache)
    out = find_min_length(
        args.k, args.t, args.q, kind,
        n_start=args.n_start, n_end=args.n_end, budget=args.budget, cache=cache,
        use_bounds=not args.no_bounds, threads=args.threads,
    )
    doc = {"command": "search", **out.to_dict(), "cached": out.cached}
    if out.status == "found":
        body = "\n".join(" ".join(str(x) for x in row) for row in out.witness)
        text = (f"{kind.value}({args.k},{args.t},{args.q}) = {out.n}"
                f" ({out.examined} candidates examined{', cached' if out.cached else ''})\nwitness:\n{body}")
    elif out.status == "budget":
        text = (f"budget exhausted after {out.examined} candidates; "
                f"certified lower bound n >= {out.certified_lower} ({out.lower_source})")
    else:
        text = f"no witness up to the requested length; n >= {out.certified_lower}"
    _emit(args, doc, text)
    return {"found": EXIT_OK, "budget": EXIT_BUDGET}.get(out.status, EXIT_FAIL)


def parse_request(spec: str, g: GeneratorMatrix) -> Request:
    """Parse ``index:mult`` (1-based column) and ``v1,v2,...:mult`` tokens, separated by spaces or ';'.

    A single-coordinate vector is written ``[v]``; ``zero`` names the zero vector.
    """
    vectors = []
    tokens = spec.replace(";", " ").split()
    if not tokens:
        raise UsageError("empty request")
    for tok in tokens:
        body, _, mult = tok.rpartition(":") if ":" in tok else (tok, "", "1")
        try:
            m = int(mult)
        except ValueError as exc:
            raise UsageError(f"bad multiplicity in {tok!r}") from exc
        if m < 1:
            raise UsageError(f"multiplicity must be positive in {tok!r}")
        body = body.strip()
        if body in ("zero", "0-vector"):
            v = (0,) * g.rows
        elif "," in body or body.startswith("["):
            try:
                v = tuple(int(x) for x in body.strip("[]()").split(",") if x.strip() != "")
            except ValueError as exc:
                raise UsageError(f"bad vector in {tok!r}") from exc
            if len(v) != g.rows or any(not 0 <= x < g.field.q for x in v):
                raise UsageError(f"vector {tok!r} must have {g.rows} entries in [0, {g.field.q})")
        else:
            try:
                j = int(body)
            except ValueError as exc:
                raise UsageError(f"bad token {tok!r}") from exc
            if not 1 <= j <= g.cols:
                raise UsageError(f"column index {j} outside 1..{g.cols}")
            v = g.column(j - 1)
        vectors += [v] * m
    req = Request.from_vectors(vectors)
    nonzero = sum(m for v, m in req.items if any(v))
    if nonzero > g.cols:
        raise UsageError(f"{nonzero} nonzero targets exceed n = {g.cols}")
    return req


def cmd_serve(args) -> int:
    g = read_matrix(args.matrix)
    req = parse_request(args.request, g)
    plan = serve(g, req, max_size=args.max_size)
    doc = {"command": "serve", "request": _request_doc(req), "servable": bool(plan)}
    if plan:
        doc["plan"] = _plan_doc(plan)
        text = f"request {req} is servable:\n{_plan_text(plan)}"
    else:
        text = f"request {req} is not servable"
    _emit(args, doc, text)
    return EXIT_OK if plan else EXIT_FAIL


def cmd_reproduce(args) -> int:
    claims = list(CLAIMS) if args.claim == "all" else [args.claim]
    budget = args.budget
    if budget not in ("quick", "full"):
        try:
            budget = int(budget)
        except ValueError as exc:
            raise UsageError("--budget takes quick, full or an integer") from exc
    results = [reproduce(c, budget) for c in claims]
    doc = {"command": "reproduce", "results": [r.to_dict() for r in results]}
    text = "\n".join(f"{r.claim}: {r.status.upper()} ({r.seconds:.1f}s)" for r in results)
    _emit(args, doc, text)
    if all(r.passed for r in results):
        return EXIT_OK
    if any(r.status == "budget" for r in results) and not any(r.status == "fail" for r in results):
        return EXIT_BUDGET
    return EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="asbpir", description="All-symbol PIR and batch code analysis.")
    p.add_argument("--threads", type=int, default=1, help="worker processes for searches")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    kinds = [k.value for k in PropertyKind]

    def common(sp):
        sp.add_argument("--json", action="store_true", help="print one JSON document")

    sp = sub.add_parser("check", help="decide a property of a matrix")
    sp.add_argument("--matrix", required=True)
    sp.add_argument("--property", required=True, choices=kinds)
    sp.add_argument("--t", type=int, required=True)
    sp.add_argument("--max-size", type=int, default=None, help="largest recovery set allowed")
    common(sp)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("construct", help="write a construction to a matrix file")
    sp.add_argument("--family", required=True, choices=C.FAMILIES)
    sp.add_argument("--k", type=int)
    sp.add_argument("--t", type=int)
    sp.add_argument("--q", type=int, default=2)
    sp.add_argument("--n", type=int)
    sp.add_argument("--lam", type=int, default=1)
    sp.add_argument("--tag", choices=sorted(C.EXAMPLE_MATRICES))
    sp.add_argument("--matrix", action="append", help="input part(s) for replicate / block_diagonal")
    sp.add_argument("--name", default="")
    sp.add_argument("--out")
    sp.add_argument("--format", choices=("text", "json"), default=None)
    common(sp)
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("bounds", help="evaluate length and level bounds")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--t", type=int, required=True)
    sp.add_argument("--q", type=int, default=2)
    sp.add_argument("--matrix")
    common(sp)
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("search", help="find the minimal length by exhaustive search")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--t", type=int, required=True)
    sp.add_argument("--q", type=int, default=2)
    sp.add_argument("--property", default="asbatch", choices=("aspir", "asbatch"))
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    sp.add_argument("--cache", default=None, help="JSON-lines cache (default: $ASBPIR_CACHE)")
    sp.add_argument("--n-start", type=int)
    sp.add_argument("--n-end", type=int)
    sp.add_argument("--no-bounds", action="store_true", help="scan from n = k instead of the proven lower bound")
    common(sp)
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("serve", help="serve one request")
    sp.add_argument("--matrix", required=True)
    sp.add_argument("--request", required=True, help="tokens like '1:2' or '1,0,1:1' or 'zero:1'")
    sp.add_argument("--max-size", type=int, default=None)
    common(sp)
    sp.set_defaults(func=cmd_serve)

    sp = sub.add_parser("reproduce", help="run a named reproduction claim")
    sp.add_argument("--claim", required=True, choices=[*CLAIMS, "all"])
    sp.add_argument("--budget", default="quick", help="quick, full or a candidate count")
    common(sp)
    sp.set_defaults(func=cmd_reproduce)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, MatrixFileError, FieldError, FileNotFoundError, ValueError) as exc:
        print(f"asbpir: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
