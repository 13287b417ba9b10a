"""Deciding the six recovery properties of a generator matrix."""

from __future__ import annotations

import enum
import itertools
import math
from collections.abc import Iterator
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels
from .linalg import (
    ENUMERATION_CAP,
    GeneratorMatrix,
    Matrix,
    decode_vector,
    dual_distance,
    projective_points,
    rank,
)
from .recovery import (
    RecoveryPlan,
    RecoverySet,
    Request,
    _pack,
    minimal_recovery_sets,
    serve,
)

REQUEST_CAP = 10**7


class PropertyKind(str, enum.Enum):
    PIR = "pir"
    BATCH = "batch"
    FPIR = "fpir"
    FBATCH = "fbatch"
    ASPIR = "aspir"
    ASBATCH = "asbatch"

    @property
    def is_batch(self) -> bool:
        return self in (PropertyKind.BATCH, PropertyKind.FBATCH, PropertyKind.ASBATCH)

    @property
    def pir_form(self) -> PropertyKind:
        return {
            PropertyKind.BATCH: PropertyKind.PIR,
            PropertyKind.FBATCH: PropertyKind.FPIR,
            PropertyKind.ASBATCH: PropertyKind.ASPIR,
        }.get(self, self)

    @classmethod
    def parse(cls, value: str | PropertyKind) -> PropertyKind:
        return value if isinstance(value, cls) else cls(str(value).lower())


@dataclass(frozen=True)
class Verdict:
    holds: bool
    kind: PropertyKind
    t: int
    witness: RecoveryPlan | None = None
    witness_request: Request | None = None
    counterexample: Request | None = None
    requests_checked: int = 0

    def __bool__(self) -> bool:
        return self.holds


def request_targets(g: Matrix, kind: PropertyKind) -> list[tuple[int, ...]]:
    """The distinct target vectors a property's requests are built from, in request order.

    Functional batch requests use one representative per projective class:
    scaling a target does not change its recovery sets.
    """
    k, q = g.rows, g.field.q
    kind = PropertyKind.parse(kind)
    if kind in (PropertyKind.PIR, PropertyKind.BATCH):
        return [tuple(int(i == j) for i in range(k)) for j in range(k)]
    if kind is PropertyKind.FPIR:
        return [decode_vector(c, k, q) for c in range(1, q**k)]
    if kind is PropertyKind.FBATCH:
        return [decode_vector(c, k, q) for c in projective_points(k, g.field)]
    seen: dict[tuple[int, ...], None] = {}
    for col in g.columns():
        if any(col):
            seen.setdefault(col, None)
    return list(seen)


def colex_multisets(m: int, t: int) -> Iterator[tuple[int, ...]]:
    """Nondecreasing ``t``-tuples over ``range(m)`` in colexicographic order."""
    for combo in sorted(itertools.combinations_with_replacement(range(m), t), key=lambda c: c[::-1]):
        yield combo


def requests(g: Matrix, kind: PropertyKind, t: int) -> Iterator[Request]:
    """The request family of ``kind`` at size ``t``, in the order :func:`check` visits it."""
    kind = PropertyKind.parse(kind)
    targets = request_targets(g, kind)
    if kind.is_batch:
        for combo in colex_multisets(len(targets), t):
            yield Request.from_vectors(targets[i] for i in combo)
    else:
        for v in targets:
            yield Request(((v, t),))


def request_count(g: Matrix, kind: PropertyKind, t: int) -> int:
    kind = PropertyKind.parse(kind)
    m = len(request_targets(g, kind))
    return math.comb(m + t - 1, t) if kind.is_batch else m


class _Families:
    """Minimal recovery sets of every target, packed for the compiled solver."""

    def __init__(self, g: Matrix, targets, max_size: int | None, cap: int):
        self.targets = targets
        self.families: list[list[RecoverySet]] = [
            minimal_recovery_sets(g, v, max_size=max_size, cap=cap) for v in targets
        ]
        self.masks, self.sizes, self.starts, self.ends = _pack(self.families)
        self.universe = np.int64((1 << g.cols) - 1)

    def serve_repeated(self, i: int, t: int) -> bool:
        ok, _ = _kernels.serve_groups(
            self.masks,
            self.sizes,
            self.starts[i : i + 1],
            self.ends[i : i + 1],
            np.array([t], dtype=np.int64),
            self.universe,
        )
        return bool(ok)

    def first_failing_multiset(self, t: int) -> tuple[tuple[int, ...] | None, int]:
        reps = np.arange(len(self.targets), dtype=np.int64)
        bad, served = _kernels.all_column_requests(
            self.masks, self.sizes, self.starts, self.ends, reps, t, self.universe
        )
        return (tuple(int(x) for x in bad) if bad.size else None), int(served)


def check(
    g: Matrix,
    kind: PropertyKind | str,
    t: int,
    max_size: int | None = None,
    cap: int = ENUMERATION_CAP,
    request_cap: int = REQUEST_CAP,
) -> Verdict:
    """Decide whether ``g`` has property ``kind`` at level ``t``.

    Every request of the family is checked; the counterexample is the first
    unservable request in enumeration order.  With ``max_size`` only
    recovery sets of at most that many columns may be used.
    """
    kind = PropertyKind.parse(kind)
    if t < 1:
        raise ValueError("t must be at least 1")
    total = request_count(g, kind, t)
    if total > request_cap:
        raise ValueError(f"{total} requests exceed the request cap {request_cap}")
    targets = request_targets(g, kind)
    fams = _Families(g, targets, max_size, cap)
    checked = 0
    if kind.is_batch:
        bad, checked = fams.first_failing_multiset(t)
        if bad is not None:
            req = Request.from_vectors(targets[i] for i in bad)
            return Verdict(False, kind, t, counterexample=req, requests_checked=checked + 1)
        last = Request(((targets[-1], t),))
    else:
        for i, v in enumerate(targets):
            checked += 1
            if not fams.serve_repeated(i, t):
                return Verdict(False, kind, t, counterexample=Request(((v, t),)), requests_checked=checked)
        last = Request(((targets[-1], t),))
    plan = serve(g, last, max_size=max_size, cap=cap)
    return Verdict(True, kind, t, witness=plan, witness_request=last, requests_checked=checked)


def max_t(g: GeneratorMatrix, kind: PropertyKind | str, cap: int = ENUMERATION_CAP) -> int:
    """Largest ``t`` for which ``check`` holds, scanning upward from 1.

    Failure at ``t`` implies failure at every larger level, so the scan
    stops at the first failure; it is also capped by ``n`` and, for kinds
    implying the all-symbol PIR property, by the dual-distance bound.
    """
    kind = PropertyKind.parse(kind)
    upper = g.n
    if kind in (PropertyKind.ASPIR, PropertyKind.ASBATCH, PropertyKind.FPIR, PropertyKind.FBATCH):
        d = dual_distance(g, cap)
        if d > 1:
            bound = Fraction(g.n - 1) / (d - 1) + 1 if d != math.inf else Fraction(1)
            upper = min(upper, math.floor(bound))
    best = 0
    for t in range(1, upper + 1):
        if not check(g, kind, t, cap=cap):
            break
        best = t
    return best


def is_binary_simplex(g: Matrix) -> bool:
    if g.field.q != 2:
        return False
    codes = sorted(sum(x << i for i, x in enumerate(col)) for col in g.columns())
    return codes == list(range(1, 2**g.rows))


def independent_list_stats(g: GeneratorMatrix, ell: int) -> tuple[bool, int]:
    """Serve every ``{g_1^t1, ..., g_l^tl}`` with independent targets and ``sum t_i = 2^(k-1)``.

    Returns ``(all served, number of lists checked)``.
    """
    k = g.k
    if not is_binary_simplex(g):
        raise ValueError("independent-list check needs the binary simplex code")
    if k > 4:
        raise ValueError("exhaustive independent-list check supports k <= 4")
    if not 1 <= ell <= k:
        raise ValueError("need 1 <= l <= k")
    total = 2 ** (k - 1)
    targets = g.columns()
    fams = _Families(g, targets, None, ENUMERATION_CAP)
    checked = 0
    for subset in itertools.combinations(range(len(targets)), ell):
        sub = Matrix(np.array([targets[i] for i in subset], dtype=np.int64).T, g.field)
        if rank(sub) != ell:
            continue
        for cuts in itertools.combinations(range(1, total), ell - 1):
            parts = np.diff((0, *cuts, total)).astype(np.int64)
            ok, _ = _kernels.serve_groups(
                fams.masks,
                fams.sizes,
                fams.starts[list(subset)],
                fams.ends[list(subset)],
                parts,
                fams.universe,
            )
            checked += 1
            if not ok:
                return False, checked
    return True, checked


def check_independent_lists(g: GeneratorMatrix, ell: int) -> bool:
    return independent_list_stats(g, ell)[0]
