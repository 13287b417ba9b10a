"""Named end-to-end reproductions of the published values and properties."""

from __future__ import annotations

import math
import time
from collections.abc import Callable
from dataclasses import dataclass, field as dataclass_field

import numpy as np

from . import constructions as C
from .bounds import dual_distance_bound, gamma_check, length_bounds, min_shortened_dual_bound
from .field import field_of_order
from .linalg import GeneratorMatrix, Matrix, apply_left, dual_distance, matmul, rank
from .oracles import brute_force_serve, random_invertible
from .properties import PropertyKind, check, check_independent_lists, max_t
from .recovery import Request, serve, verify_plan
from .search import candidate_count, find_min_length, verify_value

ASP = PropertyKind.ASPIR
ASB = PropertyKind.ASBATCH


@dataclass
class ClaimResult:
    claim: str
    passed: bool
    details: dict = dataclass_field(default_factory=dict)
    seconds: float = 0.0
    status: str = ""  # pass, fail or budget

    def __post_init__(self):
        if not self.status:
            self.status = "pass" if self.passed else "fail"

    def to_dict(self) -> dict:
        return {"claim": self.claim, "passed": self.passed, "status": self.status,
                "seconds": round(self.seconds, 3), "details": self.details}


def _search_value(k, t, q, kind, **kw) -> int | None:
    out = find_min_length(k, t, q, kind, use_bounds=False, **kw)
    return out.n if out.status == "found" else None


def small_closed_forms() -> dict:
    got = {}
    for q in (2, 3):
        for k in range(1, 5):
            for t, want in ((1, k), (2, k + 1)):
                for kind in (ASP, ASB):
                    got[f"{kind.value}({k},{t},{q})"] = (_search_value(k, t, q, kind), want)
        for t in range(1, 7):
            for kind in (ASP, ASB):
                got[f"{kind.value}(1,{t},{q})"] = (_search_value(1, t, q, kind), t)
    return {"values": got, "ok": all(a == b for a, b in got.values())}


def k2_formula() -> dict:
    got = {}
    for q in (2, 3):
        for t in range(2, 7):
            for kind in (ASP, ASB):
                got[f"{kind.value}(2,{t},{q})"] = (_search_value(2, t, q, kind), t + -(-t // 2))
    return {"values": got, "ok": all(a == b for a, b in got.values())}


def t3_optimum() -> dict:
    got, equivalence = {}, {}
    for k in range(2, 7):
        r = C.pair_count(k)
        out = find_min_length(k, 3, 2, ASB, use_bounds=False, exhaust=True, both=True)
        got[f"asbatch({k},3,2)"] = (out.n, k + r)
        stats = out.length_stats(out.n)
        equivalence[k] = {
            "examined": stats["examined"],
            "total": stats["total"],
            "aspir_pass": stats["aspir_pass"],
            "asbatch_pass": stats["asbatch_pass"],
            "mismatch": stats["aspir_without_asbatch"],
        }
    ok = all(a == b for a, b in got.values()) and all(
        e["mismatch"] == 0 and e["examined"] == e["total"] for e in equivalence.values()
    )
    return {"values": got, "equivalence": equivalence, "ok": ok}


def gprime_column_six_sets(q: int = 3) -> int:
    """Largest number of disjoint recovery sets for the sixth column of G'(5, q)."""
    g = C.t4_gprime(5, q)
    col = g.column(5)
    best = 0
    for m in range(1, g.cols + 1):
        if serve(g, Request(((col, m),))):
            best = m
        else:
            break
    return best


def example_matrices() -> dict:
    res = {
        "parity_2x3_asbatch2": check(C.identity_parity(2, 2), ASB, 2).holds,
        "gf2_4x8_asbatch3": check(C.paper_example("gf2_4x8"), ASB, 3).holds,
        "gprime_k5_q2_asbatch4": check(C.t4_gprime(5, 2), ASB, 4).holds,
        "gdoubleprime_k6_q2_asbatch4": check(C.t4_gdoubleprime(6, 2), ASB, 4).holds,
        "gf3_5x10_asbatch4": check(C.paper_example("gf3_5x10"), ASB, 4).holds,
    }
    sets = gprime_column_six_sets(3)
    res["gprime_k5_q3_col6_disjoint_sets"] = sets
    res["ok"] = all(v for k, v in res.items() if k != "gprime_k5_q3_col6_disjoint_sets") and sets <= 3
    return res


def asb_5_4_3(budget: int) -> dict:
    cert = verify_value(5, 4, 3, ASB, 10, budget=budget)
    return {"certificate": cert.to_dict(), "ok": cert.confirmed}


def asp_6_4_2(budget: int) -> dict:
    out = find_min_length(6, 4, 2, ASP, budget=budget)
    at11 = out.length_stats(11)
    ok = (
        out.status == "found"
        and out.n == 12
        and at11 is not None
        and at11["examined"] == at11["total"] == candidate_count(6, 11, 2) == 9_657_648
        and at11["accepted"] == 0
    )
    return {"status": out.status, "n": out.n, "length_11": at11, "witness": out.witness,
            "examined": out.examined, "ok": ok}


S_MEMBERS = (1, 2, 3, 4, 5, 7, 8)


def gprime_membership() -> dict:
    parity, batch = {}, {}
    for k in range(1, 9):
        g = C.t4_gprime(k, 2)
        parity[k] = bool(serve(g, Request(((g.column(g.cols - 1), 4),))))
        if k in S_MEMBERS:
            batch[k] = check(g, ASB, 4).holds
    ok = all(parity[k] == (k in S_MEMBERS) for k in parity) and all(batch.values())
    return {"parity_four_sets": parity, "asbatch4": batch, "ok": ok}


def mds() -> dict:
    rows = {}
    for n, k, q in ((7, 3, 8), (5, 2, 5), (9, 4, 9)):
        g = C.mds_rs(n, k, q)
        want = (n - 1) // k + 1
        bound = dual_distance_bound(g)
        rows[f"({n},{k},{q})"] = {
            "aspir": max_t(g, ASP),
            "asbatch": max_t(g, ASB),
            "formula": want,
            "dual_bound": str(bound),
            "meets_bound": (n - 1) % k != 0 or bound == want,
        }
    ok = all(r["aspir"] == r["asbatch"] == r["formula"] and r["meets_bound"] for r in rows.values())
    return {"codes": rows, "ok": ok}


def simplex_claims() -> dict:
    res = {}
    for k in (3, 4):
        g = C.simplex(k)
        res[f"k{k}_max_aspir"] = max_t(g, ASP)
        res[f"k{k}_batch"] = check(g, PropertyKind.BATCH, 2 ** (k - 1)).holds
        res[f"k{k}_independent_lists"] = all(check_independent_lists(g, ell) for ell in range(1, k + 1))
    g3 = C.simplex(3)
    res["k3_asbatch4"] = check(g3, ASB, 4).holds
    res["k3_fbatch4"] = check(g3, PropertyKind.FBATCH, 4).holds
    for k in (1, 2):
        res[f"k{k}_independent_lists"] = all(check_independent_lists(C.simplex(k), ell) for ell in range(1, k + 1))
    ok = (
        res["k3_max_aspir"] == 4
        and res["k4_max_aspir"] == 8
        and all(v for key, v in res.items() if not key.endswith("max_aspir"))
    )
    return {**res, "ok": ok}


def corpus() -> list[tuple[str, GeneratorMatrix]]:
    """Small instances of every construction family."""
    out = []
    for q in (2, 3):
        for k in (1, 2, 3):
            out.append((f"identity_parity({k},{q})", C.identity_parity(k, q)))
            out.append((f"identity({k},{q})", C.identity(k, q)))
        for k, t in ((2, 3), (2, 4), (3, 3)):
            out.append((f"lbub_upper({k},{t},{q})", C.lbub_upper(k, t, q)))
        for k in (2, 3, 4):
            out.append((f"t3({k},{q})", C.t3_construction(k, q)))
        out.append((f"t4_gprime(3,{q})", C.t4_gprime(3, q)))
        out.append((f"replicate(parity(2,{q}),2)", C.replicate(C.identity_parity(2, q), 2)))
        out.append((f"block_diagonal(parity(1,{q}),parity(2,{q}))",
                    C.block_diagonal(C.identity_parity(1, q), C.identity_parity(2, q))))
    out += [
        ("simplex(2)", C.simplex(2)),
        ("simplex(3)", C.simplex(3)),
        ("mds_rs(4,2,5)", C.mds_rs(4, 2, 5)),
        ("mds_rs(5,2,5)", C.mds_rs(5, 2, 5)),
        ("mds_rs(7,3,8)", C.mds_rs(7, 3, 8)),
        ("gf2_4x8", C.paper_example("gf2_4x8")),
        ("gf3_5x10", C.paper_example("gf3_5x10")),
        ("t4_gprime(5,2)", C.t4_gprime(5, 2)),
    ]
    return out


def bound_relations(items=None) -> dict:
    """Observed levels against every applicable bound, on the construction corpus."""
    failures = []
    rows = {}
    for name, g in items or corpus():
        ta, tb = max_t(g, ASP), max_t(g, ASB)
        row = {"aspir": ta, "asbatch": tb}
        if dual_distance(g) > 1:
            db = dual_distance_bound(g)
            row["dual_bound"] = str(db)
            if ta > db:
                failures.append(f"{name}: aspir {ta} > dual bound {db}")
            if g.cols >= 2 and g.cols <= 12:
                sb, s = min_shortened_dual_bound(g)
                row["shortened_bound"] = str(sb)
                if tb > sb:
                    failures.append(f"{name}: asbatch {tb} > shortened bound {sb}")
            if not gamma_check(g, ta):
                failures.append(f"{name}: length below the distinct-column bound")
        for t, kind in ((ta, "aspir"), (tb, "asbatch")):
            rep = length_bounds(g.rows, t, g.field.q)
            if not rep.consistent():
                failures.append(f"{name}: inconsistent length bounds at t={t}")
            if g.cols < rep.lower():
                failures.append(f"{name}: n={g.cols} below the proven lower bound {rep.lower()} for {kind} t={t}")
        if ta < tb:
            failures.append(f"{name}: batch level above PIR level")
        rows[name] = row
    return {"codes": rows, "failures": failures, "ok": not failures}


def random_request(g: GeneratorMatrix, t: int, rng: np.random.Generator) -> Request:
    vecs = []
    for _ in range(t):
        if rng.random() < 0.6:
            vecs.append(g.column(int(rng.integers(g.cols))))
        else:
            vecs.append(tuple(int(x) for x in rng.integers(0, g.field.q, size=g.rows)))
    return Request.from_vectors(vecs)


def random_generator(k: int, n: int, q: int, rng: np.random.Generator) -> GeneratorMatrix:
    F = field_of_order(q)
    while True:
        m = rng.integers(0, q, size=(k, n))
        if rank(Matrix(m, F)) == k:
            return GeneratorMatrix(m, F)


def oracle_agreement(instances: int = 500, seed: int = 20240601) -> dict:
    rng = np.random.default_rng(seed)
    mismatches = []
    served = 0
    for i in range(instances):
        n = int(rng.integers(2, 8))
        k = int(rng.integers(1, min(n, 4) + 1))
        g = random_generator(k, n, 2, rng)
        req = random_request(g, int(rng.integers(1, 4)), rng)
        plan = serve(g, req)
        fast = bool(plan)
        if fast:
            served += 1
            if not verify_plan(g, req, plan):
                mismatches.append((i, "invalid plan"))
        if fast != brute_force_serve(g, req):
            mismatches.append((i, g.tolist(), str(req)))
    return {"instances": instances, "servable": served, "mismatches": mismatches[:5], "ok": not mismatches}


def invariance(instances: int = 200, seed: int = 7) -> dict:
    rng = np.random.default_rng(seed)
    bad = []
    for i in range(instances):
        q = int(rng.choice([2, 3]))
        n = int(rng.integers(3, 7))
        k = int(rng.integers(1, min(n, 3) + 1))
        g = random_generator(k, n, q, rng)
        m = random_invertible(k, g.field, rng)
        mg = GeneratorMatrix.of(apply_left(m, g))
        t = int(rng.integers(2, 4))
        for kind in (ASP, ASB):
            if check(g, kind, t).holds != check(mg, kind, t).holds:
                bad.append((i, kind.value))
        req = random_request(g, t, rng)
        moved = Request.from_vectors(transform(m, v) for v in req.units())
        if bool(serve(g, req)) != bool(serve(mg, moved)):
            bad.append((i, "serve"))
    return {"instances": instances, "failures": bad[:5], "ok": not bad}


def transform(m, v) -> tuple[int, ...]:
    """``M v`` for a square matrix ``M`` and a vector ``v``."""
    return tuple(int(x) for x in matmul(m.entries, np.array(v, dtype=np.int64)[:, None], m.field)[:, 0])


def property_suites() -> dict:
    a = oracle_agreement()
    b = bound_relations()
    c = invariance()
    return {"oracle": a, "bounds": {"failures": b["failures"], "ok": b["ok"]}, "invariance": c,
            "ok": a["ok"] and b["ok"] and c["ok"]}


def identity_t1() -> dict:
    res = {}
    for k in range(1, 4):
        for q in (2, 3):
            res[f"({k},{q})"] = verify_value(k, 1, q, ASB, k).confirmed
    return {"certificates": res, "ok": all(res.values())}


FULL_ONLY = {"asp_6_4_2"}

CLAIMS: dict[str, Callable[[int], dict]] = {
    "small_closed_forms": lambda budget: small_closed_forms(),
    "k2_formula": lambda budget: k2_formula(),
    "t3_optimum": lambda budget: t3_optimum(),
    "example_matrices": lambda budget: example_matrices(),
    "asb_5_4_3": asb_5_4_3,
    "asp_6_4_2": asp_6_4_2,
    "gprime_membership": lambda budget: gprime_membership(),
    "mds": lambda budget: mds(),
    "simplex": lambda budget: simplex_claims(),
    "property_suites": lambda budget: property_suites(),
    "identity_t1": lambda budget: identity_t1(),
}

BUDGETS = {"quick": 2 * 10**7, "full": 10**9}


def reproduce(claim: str, budget: str | int = "quick") -> ClaimResult:
    if claim not in CLAIMS:
        raise KeyError(f"unknown claim {claim!r}; known: {', '.join(CLAIMS)}")
    if claim in FULL_ONLY and budget != "full" and not (isinstance(budget, int) and budget >= BUDGETS["full"]):
        return ClaimResult(claim, False, {"reason": "needs --budget full"}, status="budget")
    amount = BUDGETS.get(budget, budget) if isinstance(budget, str) else budget
    start = time.perf_counter()
    details = CLAIMS[claim](int(amount))
    ok = bool(details.pop("ok"))
    status = "pass" if ok else ("budget" if details.get("status") == "budget" else "fail")
    return ClaimResult(claim, ok, _jsonable(details), time.perf_counter() - start, status)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    return x
