"""Exhaustive search for the shortest all-symbol PIR and batch generator matrices.

Reduction to canonical candidates.  A generator matrix of rank ``k`` becomes
``(I_k | A)`` after a column permutation and left multiplication by an
invertible matrix; both keep the all-symbol properties (a permutation only
renames columns, and ``MG`` serves ``M L`` whenever ``G`` serves ``L``).
Scaling a column by a nonzero constant changes neither any span nor the
recovery sets of a target, and ``v`` and ``a v`` have the same recovery sets,
so every column of ``A`` may be replaced by its projective representative.
A zero column can be deleted: nothing uses it and its own requests are
served by the empty set, so it never appears at minimal length.  Column
order inside ``A`` is irrelevant, which leaves nondecreasing multisets of
projective points, enumerated lexicographically.

Cheap rejections, all counted as examined:

* repetition: a class occurring more than ``t`` times has a copy that no
  plan needs (minimal recovery sets hold at most one column per class, and a
  request has ``t`` units), so deleting it gives a valid matrix one column
  shorter.  Scanning lengths upward from a proven lower bound, such a
  candidate can never be the first witness.
* counting: a class with ``c < t`` copies needs ``t - c`` recovery sets of
  size at least two, so ``n >= c + 2 (t - c)``.
"""

from __future__ import annotations

import itertools
import json
import math
import os
import time
from collections.abc import Iterator
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field as dataclass_field
from pathlib import Path

import numpy as np

from . import _kernels
from .bounds import length_bounds
from .field import FiniteField, field_of_order
from .linalg import GeneratorMatrix, decode_vector, encode_vector, normalize, projective_points, systematic_form
from .properties import PropertyKind, check

STRATEGY_VERSION = "systematic-v1"
DEFAULT_BUDGET = 10**8
CACHE_ENV = "ASBPIR_CACHE"

STAT_NAMES = (
    "examined",
    "rejected_repetition",
    "rejected_counting",
    "rejected_aspir",
    "rejected_asbatch",
    "accepted",
    "aspir_pass",
    "asbatch_pass",
    "aspir_without_asbatch",
)

SEARCHABLE = (PropertyKind.ASPIR, PropertyKind.ASBATCH)


class BudgetExceeded(RuntimeError):
    pass


def candidate_count(k: int, n: int, q: int) -> int:
    """Number of canonical candidates: multisets of size ``n - k`` over the projective points."""
    if n < k:
        return 0
    points = (q**k - 1) // (q - 1)
    m = n - k
    return math.comb(points + m - 1, m)


def shard_size(k: int, n: int, q: int, first: int) -> int:
    """Candidates whose smallest free column is point number ``first``."""
    m = n - k
    if m == 0:
        return 1 if first == 0 else 0
    rest = (q**k - 1) // (q - 1) - first
    return math.comb(rest + m - 2, m - 1)


def _matrix_from_codes(codes, k: int, field: FiniteField) -> GeneratorMatrix:
    cols = [decode_vector(int(c), k, field.q) for c in codes]
    return GeneratorMatrix(np.array(cols, dtype=np.int64).T.reshape(k, len(cols)), field)


def enumerate_candidates(k: int, n: int, q: int, t: int | None = None) -> Iterator[GeneratorMatrix]:
    """Canonical candidates ``(I_k | A)`` in lexicographic order.

    With ``t`` given, candidates in which some column class occurs more than
    ``t`` times are skipped (they are counted, but never needed, by the
    search).
    """
    F = field_of_order(q)
    if n < k:
        return
    points = projective_points(k, F)
    ident = [q**i for i in range(k)]
    for combo in itertools.combinations_with_replacement(points, n - k):
        codes = ident + list(combo)
        if t is not None and max(codes.count(c) for c in set(codes)) > t:
            continue
        yield _matrix_from_codes(codes, k, F)


def canonical_candidate(g: GeneratorMatrix) -> GeneratorMatrix:
    """The canonical candidate of ``g``: systematic form, projective columns, zero columns dropped, ``A`` sorted."""
    sys_g, _, _ = systematic_form(g)
    F = g.field
    k = g.k
    free = []
    for col in sys_g.columns()[k:]:
        if any(col):
            free.append(encode_vector(normalize(col, F), F.q))
    codes = [F.q**i for i in range(k)] + sorted(free)
    return _matrix_from_codes(codes, k, F)


class _Tables:
    """Arrays handed to the compiled shard search."""

    def __init__(self, k: int, n: int, field: FiniteField):
        q = field.q
        m = n - k
        self.points = np.array(projective_points(k, field), dtype=np.int64)
        self.pw = np.array([q**i for i in range(k)], dtype=np.int64)
        self.add_t = np.ascontiguousarray(field.add_table)
        self.mul_t = np.ascontiguousarray(field.mul_table)
        self.char2 = field.p == 2
        self.binary = q == 2
        idx, cmask = [], []
        for c in range(1, q**m):
            digits = decode_vector(c, m, q)
            if next(d for d in digits if d) == 1:
                idx.append(c)
                cmask.append(sum(1 << j for j, d in enumerate(digits) if d))
        self.norm_idx = np.array(idx, dtype=np.int64)
        self.norm_cmask = np.array(cmask, dtype=np.int64)


def run_shard(k: int, n: int, field: FiniteField, t: int, kind: PropertyKind, first: int,
              stop_at_first: bool = True, both: bool = False, tables: _Tables | None = None):
    """Run one shard; returns ``(stats dict, witness codes or None)``."""
    tab = tables or _Tables(k, n, field)
    stats, witness = _kernels.search_shard(
        tab.points, first, k, n, field.q, t,
        _kernels.ASPIR if kind is PropertyKind.ASPIR else _kernels.ASBATCH,
        tab.pw, tab.add_t, tab.mul_t, tab.char2, tab.binary,
        tab.norm_idx, tab.norm_cmask, stop_at_first, both,
    )
    return dict(zip(STAT_NAMES, (int(x) for x in stats))), ([int(c) for c in witness] if witness.size else None)


def _run_shard_job(args):
    k, n, q, t, kind, first, stop_at_first, both = args
    return first, run_shard(k, n, field_of_order(q), t, PropertyKind(kind), first, stop_at_first, both)


@dataclass
class LengthRecord:
    n: int
    total: int
    shards: dict = dataclass_field(default_factory=dict)  # first -> stats
    witness: list | None = None
    complete: bool = False

    def stats(self) -> dict:
        out = dict.fromkeys(STAT_NAMES, 0)
        for s in self.shards.values():
            for name in STAT_NAMES:
                out[name] += s[name]
        return out


@dataclass
class SearchOutcome:
    k: int
    t: int
    q: int
    kind: str
    status: str  # found, not_found or budget
    n: int | None = None
    witness: list[list[int]] | None = None
    examined: int = 0
    certified_lower: int | None = None
    lower_source: str = ""
    lengths: list[dict] = dataclass_field(default_factory=list)
    wall_time: float = 0.0
    strategy: str = STRATEGY_VERSION
    cached: bool = False

    @property
    def key(self) -> dict:
        return {"k": self.k, "t": self.t, "q": self.q, "kind": self.kind, "strategy": self.strategy}

    def witness_matrix(self) -> GeneratorMatrix | None:
        if self.witness is None:
            return None
        return GeneratorMatrix(self.witness, field_of_order(self.q))

    def length_stats(self, n: int) -> dict | None:
        for rec in self.lengths:
            if rec["n"] == n:
                return rec
        return None

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("cached")
        return d

    @classmethod
    def from_dict(cls, d: dict) -> SearchOutcome:
        fields = {k: v for k, v in d.items() if k in cls.__dataclass_fields__}
        return cls(**fields)


class ResultCache:
    """Append-only JSON-lines store of outcomes and per-shard progress."""

    def __init__(self, path: str | os.PathLike | None = None):
        if path is None:
            path = os.environ.get(CACHE_ENV)
        self.path = Path(path) if path else None

    def _records(self) -> Iterator[dict]:
        if self.path is None or not self.path.exists():
            return
        with self.path.open() as fh:
            for line in fh:
                line = line.strip()
                if line:
                    try:
                        yield json.loads(line)
                    except json.JSONDecodeError:
                        # a torn final line from an interrupted run
                        continue

    def append(self, record: dict) -> None:
        if self.path is None:
            return
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with self.path.open("a") as fh:
            fh.write(json.dumps(record, sort_keys=True) + "\n")
            fh.flush()
            os.fsync(fh.fileno())

    def lookup(self, key: dict) -> SearchOutcome | None:
        found = None
        for rec in self._records():
            if rec.get("type") == "outcome" and rec.get("key") == key and rec["outcome"]["status"] == "found":
                found = rec["outcome"]
        return SearchOutcome.from_dict(found) if found else None

    def progress(self, key: dict) -> dict[int, dict[int, dict]]:
        """Completed shards per length: ``{n: {first: (stats, witness)}}``."""
        out: dict[int, dict[int, dict]] = {}
        for rec in self._records():
            if rec.get("type") == "shard" and rec.get("key") == key:
                out.setdefault(rec["n"], {})[rec["first"]] = rec
        return out

    def store_outcome(self, outcome: SearchOutcome) -> None:
        self.append({"type": "outcome", "key": outcome.key, "outcome": outcome.to_dict()})

    def store_shard(self, key: dict, n: int, first: int, stats: dict, witness, exhaustive: bool) -> None:
        self.append({"type": "shard", "key": key, "n": n, "first": first, "stats": stats,
                     "witness": witness, "exhaustive": exhaustive})


def theorem_lower_bound(k: int, t: int, q: int) -> int:
    """Largest proven lower bound on the all-symbol lengths (search-only values excluded)."""
    return max(k, length_bounds(k, t, q).lower())


def _scan_length(k, n, F, t, kind, budget_left, stop_at_first, both, cache, key, done, threads):
    """Examine every shard of one length; returns (LengthRecord, budget exhausted flag)."""
    npts = (F.q**k - 1) // (F.q - 1)
    rec = LengthRecord(n=n, total=candidate_count(k, n, F.q))
    firsts = [0] if n == k else list(range(npts))
    # resume: reuse finished shards that ran at least as thoroughly as needed
    pending = []
    for first in firsts:
        prev = done.get(first)
        if prev is not None and (prev["exhaustive"] or stop_at_first or not prev["witness"]):
            rec.shards[first] = prev["stats"]
            if prev["witness"] and rec.witness is None:
                rec.witness = prev["witness"]
        else:
            pending.append(first)
    if rec.witness is not None and stop_at_first:
        return rec, False
    spent = 0
    tables = _Tables(k, n, F)

    def finish(first, stats, witness):
        rec.shards[first] = stats
        if cache is not None:
            cache.store_shard(key, n, first, stats, witness, not stop_at_first)
        if witness and rec.witness is None:
            rec.witness = witness

    if threads > 1 and len(pending) > 1:
        jobs = []
        for first in pending:
            size = shard_size(k, n, F.q, first)
            if spent + size > budget_left:
                break
            spent += size
            jobs.append((k, n, F.q, t, kind.value, first, stop_at_first, both))
        with ProcessPoolExecutor(max_workers=threads) as pool:
            for first, (stats, witness) in pool.map(_run_shard_job, jobs):
                finish(first, stats, witness)
        exhausted = len(jobs) < len(pending)
    else:
        exhausted = False
        for first in pending:
            size = shard_size(k, n, F.q, first)
            if spent + size > budget_left:
                exhausted = True
                break
            stats, witness = run_shard(k, n, F, t, kind, first, stop_at_first, both, tables)
            spent += stats["examined"]
            finish(first, stats, witness)
            if witness and stop_at_first:
                break
    rec.complete = len(rec.shards) == len(firsts) and sum(s["examined"] for s in rec.shards.values()) == rec.total
    return rec, exhausted


def find_min_length(
    k: int,
    t: int,
    q: int,
    kind: PropertyKind | str = PropertyKind.ASBATCH,
    n_start: int | None = None,
    n_end: int | None = None,
    budget: int = DEFAULT_BUDGET,
    cache: ResultCache | str | None = None,
    use_bounds: bool = True,
    exhaust: bool = False,
    both: bool = False,
    threads: int = 1,
) -> SearchOutcome:
    """Smallest ``n`` admitting a ``t``-all-symbol PIR/batch generator over GF(q).

    Lengths are scanned upward from the best proven lower bound (or from
    ``k`` with ``use_bounds=False``).  Every length below the answer is
    exhausted; ``exhaust`` also examines every candidate at the answer, and
    ``both`` evaluates the batch property on every PIR-passing candidate.
    """
    kind = PropertyKind.parse(kind)
    if kind not in SEARCHABLE:
        raise ValueError(
            f"{kind.value} is not invariant under left multiplication; only aspir and asbatch can be searched"
        )
    if k < 1 or t < 1:
        raise ValueError("k and t must be positive")
    F = field_of_order(q)
    if isinstance(cache, (str, os.PathLike)):
        cache = ResultCache(cache)
    key = {"k": k, "t": t, "q": q, "kind": kind.value, "strategy": STRATEGY_VERSION}
    if cache is not None and not exhaust and not both:
        hit = cache.lookup(key)
        if hit is not None:
            hit.cached = True
            return hit
    started = time.perf_counter()
    bound = theorem_lower_bound(k, t, q) if use_bounds else k
    start = max(bound, n_start if n_start is not None else k, k)
    lower_source = "theorem bound" if use_bounds and bound > k else "rank"
    if n_start is not None and n_start > bound:
        lower_source = "given start"
    progress = cache.progress(key) if cache is not None else {}
    end = n_end if n_end is not None else k * t  # t copies of each unit vector always work
    out = SearchOutcome(k=k, t=t, q=q, kind=kind.value, status="not_found", certified_lower=start, lower_source=lower_source)
    examined = 0
    for n in range(start, end + 1):
        rec, exhausted = _scan_length(
            k, n, F, t, kind, budget - examined, not exhaust, both, cache, key, progress.get(n, {}), threads
        )
        examined += sum(s["examined"] for s in rec.shards.values())
        out.lengths.append({"n": n, "total": rec.total, "complete": rec.complete, "shards": len(rec.shards),
                            **rec.stats()})
        if rec.witness is not None and (not exhaust or rec.complete):
            g = _matrix_from_codes(rec.witness, k, F)
            if not check(g, kind, t).holds:
                raise AssertionError("compiled search produced an invalid witness")
            out.status = "found"
            out.n = n
            out.witness = g.tolist()
            break
        if exhausted or not rec.complete:
            out.status = "budget"
            break
        out.certified_lower = n + 1
        if out.lower_source == "given start":
            out.lower_source = "exhaustion above given start"
        else:
            out.lower_source = "exhaustion"
    out.examined = examined
    out.wall_time = time.perf_counter() - started
    if cache is not None and out.status == "found":
        cache.store_outcome(out)
    return out


@dataclass
class Certificate:
    k: int
    t: int
    q: int
    kind: str
    claimed_n: int
    confirmed: bool
    upper_side: dict
    lower_side: dict
    witness: list[list[int]] | None
    strategy: str = STRATEGY_VERSION

    def to_dict(self) -> dict:
        return asdict(self)


def verify_value(
    k: int,
    t: int,
    q: int,
    kind: PropertyKind | str,
    claimed_n: int,
    budget: int = DEFAULT_BUDGET,
    exhaustive_lower: bool = True,
    threads: int = 1,
) -> Certificate:
    """Two-sided check of ``ASP/ASB(k, t, q) = claimed_n``.

    Upper side: a witness among the length-``claimed_n`` candidates.  Lower
    side: every length from the proven lower bound up to ``claimed_n - 1`` is
    exhausted when that fits the budget; otherwise the proven bound alone
    must exceed ``claimed_n - 1``.  The certificate records the method.
    """
    kind = PropertyKind.parse(kind)
    F = field_of_order(q)
    key = {"k": k, "t": t, "q": q, "kind": kind.value, "strategy": STRATEGY_VERSION}
    bound = theorem_lower_bound(k, t, q)
    lower: dict = {"theorem_bound": bound, "lengths": []}
    lower_ok = bound >= claimed_n
    method = "theorem bound" if lower_ok else None
    lengths = list(range(max(k, bound), claimed_n))
    if exhaustive_lower:
        # lengths below the theorem bound need no scan; still exhaust the one just below the claim
        lengths = sorted(set(lengths) | ({claimed_n - 1} if claimed_n - 1 >= k else set()))
    need = sum(candidate_count(k, n, q) for n in lengths)
    spent = 0
    refuted_at = None
    if lengths and need <= budget:
        ok = True
        for n in lengths:
            rec, _ = _scan_length(k, n, F, t, kind, budget - spent, True, False, None, key, {}, threads)
            spent += sum(s["examined"] for s in rec.shards.values())
            lower["lengths"].append({"n": n, "total": rec.total, **rec.stats()})
            if rec.witness is not None:
                ok = False
                refuted_at = (n, _matrix_from_codes(rec.witness, k, F).tolist())
                break
        if ok:
            lower_ok = True
            method = "exhaustion" if method is None else "theorem bound and exhaustion"
        else:
            lower_ok = False
            method = "refuted"
    elif lengths and not lower_ok:
        method = "budget exceeded"
    lower["method"] = method
    lower["holds"] = lower_ok
    if refuted_at:
        lower["shorter_witness_n"], lower["shorter_witness"] = refuted_at
    rec, _ = _scan_length(k, claimed_n, F, t, kind, max(budget - spent, 0), True, False, None, key, {}, threads)
    upper = {"n": claimed_n, "total": rec.total, **rec.stats()}
    witness = None
    if rec.witness is not None:
        g = _matrix_from_codes(rec.witness, k, F)
        upper["verified_by_check"] = bool(check(g, kind, t).holds)
        witness = g.tolist()
    upper["holds"] = witness is not None and upper.get("verified_by_check", False)
    if witness is None and not rec.complete:
        upper["method"] = "budget exceeded"
    return Certificate(k, t, q, kind.value, claimed_n, bool(lower_ok and upper["holds"]), upper, lower, witness)
