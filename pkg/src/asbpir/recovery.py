"""Recovery sets and serving of request multisets.

A set ``R`` of column indices recovers ``v`` when ``v`` lies in the span
of the columns in ``R``.  Serving a request means choosing pairwise disjoint
recovery sets, one per requested unit.

Only inclusion-minimal recovery sets are ever enumerated.  This loses
nothing: every recovery set contains a minimal one, and shrinking sets keeps
them disjoint.  Minimal sets for ``v`` are read off the support-minimal
kernel vectors of ``(G | -v)`` that are nonzero on the appended column; with
that entry scaled to 1 the remaining entries are the combination
coefficients.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field as dataclass_field

import numpy as np

from . import _kernels
from .linalg import ENUMERATION_CAP, Matrix, circuits_through, mask_to_indices

Vector = tuple[int, ...]


@dataclass(frozen=True)
class Request:
    """A multiset of target vectors, stored as ``(target, multiplicity)`` items."""

    items: tuple[tuple[Vector, int], ...]

    def __post_init__(self):
        seen = set()
        for target, mult in self.items:
            if mult < 1:
                raise ValueError("multiplicities must be positive")
            if target in seen:
                raise ValueError(f"target {target} listed twice")
            seen.add(target)
        if not self.items:
            raise ValueError("a request needs at least one unit")

    @classmethod
    def from_vectors(cls, vectors: Iterable[Sequence[int]]) -> Request:
        counts: dict[Vector, int] = {}
        for v in vectors:
            v = tuple(int(x) for x in v)
            counts[v] = counts.get(v, 0) + 1
        return cls(tuple(counts.items()))

    @classmethod
    def of_columns(cls, g: Matrix, indices: Iterable[int]) -> Request:
        return cls.from_vectors(g.column(j) for j in indices)

    @property
    def t(self) -> int:
        return sum(m for _, m in self.items)

    def units(self) -> list[Vector]:
        return [target for target, mult in self.items for _ in range(mult)]

    def __str__(self) -> str:
        return "{" + ", ".join(f"{list(v)}^{m}" if m > 1 else str(list(v)) for v, m in self.items) + "}"


@dataclass(frozen=True)
class Assignment:
    target: Vector
    indices: tuple[int, ...]
    coefficients: dict[int, int] = dataclass_field(default_factory=dict, hash=False)


@dataclass(frozen=True)
class RecoveryPlan:
    """One disjoint recovery set, with coefficients, per requested unit.

    Coefficients are element encodings: ``target = sum(c_j * g_j)``.
    """

    assignments: tuple[Assignment, ...]

    def sets(self) -> list[tuple[int, ...]]:
        return [a.indices for a in self.assignments]

    def to_dict(self) -> dict:
        return {
            "assignments": [
                {
                    "target": list(a.target),
                    "indices": list(a.indices),
                    "coefficients": {str(j): c for j, c in sorted(a.coefficients.items())},
                }
                for a in self.assignments
            ]
        }


@dataclass(frozen=True)
class Unservable:
    request: Request

    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True)
class RecoverySet:
    indices: tuple[int, ...]
    coefficients: dict[int, int] = dataclass_field(hash=False)

    @property
    def mask(self) -> int:
        return sum(1 << j for j in self.indices)


def minimal_recovery_sets(
    g: Matrix,
    v: Sequence[int],
    available: Iterable[int] | None = None,
    max_size: int | None = None,
    cap: int = ENUMERATION_CAP,
) -> list[RecoverySet]:
    """All inclusion-minimal recovery sets for ``v`` inside ``available``.

    Ordered lexicographically by index tuple.  The zero vector has the
    single minimal recovery set ``()``.
    """
    avail = sorted(set(range(g.cols) if available is None else available))
    v = np.array([int(x) for x in v], dtype=np.int64)
    if v.shape != (g.rows,):
        raise ValueError(f"target must have length {g.rows}")
    if not v.any():
        return [RecoverySet((), {})]
    if max_size is None:
        max_size = len(avail)
    if not avail:
        return []
    aug = np.concatenate([g.entries[:, avail], g.field.neg_table[v][:, None]], axis=1)
    out = []
    for c in circuits_through(aug, len(avail), g.field, cap=cap, max_size=max_size):
        local = [p for p in mask_to_indices(c.mask) if p != len(avail)]
        indices = tuple(avail[p] for p in local)
        out.append(RecoverySet(indices, {avail[p]: c.vector[p] for p in local}))
    return out


def _pack(families: Sequence[Sequence[RecoverySet]]):
    masks, sizes, starts, ends = [], [], [], []
    for fam in families:
        starts.append(len(masks))
        for rs in fam:
            masks.append(rs.mask)
            sizes.append(len(rs.indices))
        ends.append(len(masks))
    as_arr = lambda xs: np.array(xs, dtype=np.int64)
    return as_arr(masks), as_arr(sizes), as_arr(starts), as_arr(ends)


def serve_with_families(
    n: int,
    groups: Sequence[tuple[Vector, int, Sequence[RecoverySet]]],
) -> list[tuple[Vector, RecoverySet]] | None:
    """Solve the disjoint-selection problem for prepared families.

    ``groups`` lists ``(target, multiplicity, minimal sets)``.  Returns the
    chosen ``(target, set)`` pairs in group order or ``None``.
    """
    if not groups:
        return []
    families = [fam for _, _, fam in groups]
    masks, sizes, starts, ends = _pack(families)
    need = np.array([m for _, m, _ in groups], dtype=np.int64)
    universe = (1 << n) - 1
    ok, chosen = _kernels.serve_groups(masks, sizes, starts, ends, need, np.int64(universe))
    if not ok:
        return None
    picked: list[list[RecoverySet]] = [[] for _ in groups]
    for pos in chosen:
        g = int(np.searchsorted(ends, pos, side="right"))
        picked[g].append(families[g][int(pos) - int(starts[g])])
    out = []
    for (target, _, _), sets in zip(groups, picked):
        for rs in sorted(sets, key=lambda r: r.indices):
            out.append((target, rs))
    return out


def serve(
    g: Matrix,
    req: Request,
    max_size: int | None = None,
    cap: int = ENUMERATION_CAP,
) -> RecoveryPlan | Unservable:
    """Decide exactly whether ``g`` can serve ``req``; return a plan or :class:`Unservable`.

    Backtracking over request units with fail-first ordering, restricted
    to minimal recovery sets; ``max_size`` bounds the recovery-set size.
    """
    zero_units: list[Vector] = []
    groups = []
    for target, mult in req.items:
        if not any(target):
            zero_units.extend([target] * mult)
            continue
        fam = minimal_recovery_sets(g, target, max_size=max_size, cap=cap)
        if len(fam) < mult:
            return Unservable(req)
        groups.append((target, mult, fam))
    if sum(m for _, m, _ in groups) > g.cols:
        return Unservable(req)
    result = serve_with_families(g.cols, groups)
    if result is None:
        return Unservable(req)
    by_target: dict[Vector, list[RecoverySet]] = {}
    for target, rs in result:
        by_target.setdefault(target, []).append(rs)
    assignments = []
    for target in req.units():
        if not any(target):
            assignments.append(Assignment(target, (), {}))
        else:
            rs = by_target[target].pop(0)
            assignments.append(Assignment(target, rs.indices, dict(rs.coefficients)))
    return RecoveryPlan(tuple(assignments))


def verify_plan(g: Matrix, req: Request, plan: RecoveryPlan) -> bool:
    """Independent check of a plan: disjointness, exact cover of ``req``, and the linear combinations."""
    F = g.field
    if not isinstance(plan, RecoveryPlan):
        return False
    if sorted(a.target for a in plan.assignments) != sorted(req.units()):
        return False
    used: set[int] = set()
    for a in plan.assignments:
        idx = set(a.indices)
        if len(idx) != len(a.indices) or idx & used:
            return False
        if any(j < 0 or j >= g.cols for j in idx):
            return False
        if set(a.coefficients) != idx:
            return False
        used |= idx
        total = [0] * g.rows
        for j in a.indices:
            c = int(a.coefficients[j])
            if not 0 < c < F.q:
                return False
            for r in range(g.rows):
                total[r] = F.add(total[r], F.mul(c, int(g.entries[r, j])))
        if tuple(total) != tuple(a.target):
            return False
    return True
