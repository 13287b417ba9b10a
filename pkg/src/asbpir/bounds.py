"""Closed formulas and bounds on optimal lengths and on the level ``t`` of a code.

All arithmetic is exact: integers, :class:`fractions.Fraction`, ceilings by
integer division.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass, field as dataclass_field
from fractions import Fraction

from .constructions import pair_count
from .field import factor_prime_power
from .linalg import (
    ENUMERATION_CAP,
    Matrix,
    code_min_distance,
    distinct_column_classes,
    dual_distance,
    shortened_dual,
)

SHORTENED_MAX_N = 12

# dimensions for which the parity-extended t = 3 construction is optimal at t = 4 over q = 2^l
T4_EXACT_K = frozenset({1, 2, 3, 4, 5, 7, 8, 11, 12, 16})

# exact values established only by exhaustive search, never used to prune a search
SEARCH_VALUES: dict[tuple[int, int, int], int] = {(6, 4, 2): 12}

THEOREM = "theorem"
SEARCH = "search"
REFERENCE = "reference"


def ceil_div(a: int, b: int) -> int:
    return -(-a // b)


@dataclass(frozen=True)
class BoundEntry:
    name: str
    kind: str  # lower, upper, exact, unknown or info
    value: int | Fraction | None
    note: str = ""
    source: str = THEOREM

    def to_dict(self) -> dict:
        d = asdict(self)
        if isinstance(self.value, Fraction):
            d["value"] = str(self.value)
        return d


@dataclass
class BoundReport:
    params: dict
    entries: list[BoundEntry] = dataclass_field(default_factory=list)

    def add(self, *args, **kwargs) -> None:
        self.entries.append(BoundEntry(*args, **kwargs))

    def _values(self, kind: str, sources) -> list:
        return [e.value for e in self.entries if e.kind == kind and e.value is not None and e.source in sources]

    def lower(self, sources=(THEOREM,)) -> int | None:
        """Best lower bound, counting exact values as lower bounds."""
        vals = self._values("lower", sources) + self._values("exact", sources)
        return max(vals) if vals else None

    def upper(self, sources=(THEOREM,)) -> int | None:
        vals = self._values("upper", sources) + self._values("exact", sources)
        return min(vals) if vals else None

    def exact(self, sources=(THEOREM, SEARCH)) -> int | None:
        vals = set(self._values("exact", sources))
        if len(vals) > 1:
            raise ValueError(f"conflicting exact values {sorted(vals)}")
        return vals.pop() if vals else None

    def consistent(self) -> bool:
        """Every lower <= every exact <= every upper."""
        lows = self._values("lower", (THEOREM, SEARCH, REFERENCE))
        ups = self._values("upper", (THEOREM, SEARCH, REFERENCE))
        ex = self._values("exact", (THEOREM, SEARCH, REFERENCE))
        pts = ex or []
        if lows and ups and max(lows) > min(ups):
            return False
        return all(lo <= e for lo in lows for e in pts) and all(e <= up for up in ups for e in pts) and len(set(pts)) <= 1

    def to_dict(self) -> dict:
        return {"params": dict(self.params), "entries": [e.to_dict() for e in self.entries]}

    def table(self) -> str:
        rows = [("bound", "kind", "value", "source", "note")]
        for e in self.entries:
            rows.append((e.name, e.kind, "-" if e.value is None else str(e.value), e.source, e.note))
        widths = [max(len(r[i]) for r in rows) for i in range(5)]
        return "\n".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows)


def _is_power_of_two(q: int) -> bool:
    return factor_prime_power(q)[0] == 2


def length_bounds(k: int, t: int, q: int) -> BoundReport:
    """Bounds on ASP(k, t, q) and ASB(k, t, q); both share every entry here."""
    if k < 1 or t < 1:
        raise ValueError("k and t must be positive")
    factor_prime_power(q)
    rep = BoundReport({"k": k, "t": t, "q": q})
    rep.add("singleton", "lower", t + k - 1, "PIR codes have minimum distance at least t")
    if k >= 2:
        rep.add("column_counting", "lower", ceil_div(2 * (k + 1) * t, k + 2), "at least k+1 distinct column classes")
    # length of the explicit construction; equals ceil((k+1)t/2) for even t and exceeds it for odd t
    rep.add("unit_and_ones", "upper", k * ceil_div(t, 2) + t // 2, "ceil(t/2) copies of each e_i, floor(t/2) of 1")
    if k == 1:
        rep.add("k_equals_1", "exact", t, "t disjoint recovery sets need t columns")
    if t == 1:
        rep.add("t_equals_1", "exact", k, "identity matrix")
    if t == 2:
        rep.add("t_equals_2", "exact", k + 1, "identity plus parity column")
    if k == 2:
        rep.add("k_equals_2", "exact", t + ceil_div(t, 2), "lower and upper bounds meet")
    r = pair_count(k)
    if t == 3:
        rep.add("t_equals_3", "exact", k + r, f"r = {r} smallest with C(r,2) >= k")
    if t == 4:
        rep.add("t_equals_4_lower", "lower", k + 1 + r, "one more than the t = 3 value")
        rep.add("t_equals_4_upper", "upper", k + 2 + r, "t = 3 block with two parity columns")
        if _is_power_of_two(q) and k in T4_EXACT_K:
            rep.add("t_equals_4_even_q", "exact", k + 1 + r, "single parity column suffices for this k")
    if (k, t, q) in SEARCH_VALUES:
        rep.add("search_value", "exact", SEARCH_VALUES[(k, t, q)], "exhaustive computer search", source=SEARCH)
    return rep


def reference_lengths(k: int, t: int, q: int) -> BoundReport:
    """Known values of P, B, FP and FB used as baselines; uncovered cases are reported as unknown."""
    rep = BoundReport({"k": k, "t": t, "q": q})
    r = pair_count(k)

    def known(name, kind, value, note):
        rep.add(name, kind, value, note, source=REFERENCE)

    known("P_singleton", "lower", t + k - 1, "P(k,t,q) >= t + k - 1")
    if t == 3:
        known("P", "exact", k + r, "P(k,3,q) = k + r")
        known("B", "exact", k + r, "B(k,3,q) = k + r")
    elif t == 4:
        known("P", "exact", k + r + 1, "P(k,4,q) = P(k,3,q) + 1")
        known("B", "exact", k + r + 1, "B(k,4,q) = P(k,3,q) + 1")
    elif k == 2 and q == 2:
        for name in ("P", "B"):
            known(name, "exact", t + ceil_div(t, 2), f"{name}(2,t,2) = t + ceil(t/2)")
    else:
        known("P", "unknown", None, "not covered")
        known("B", "unknown", None, "not covered")
    if k == 2 and q == 2:
        known("FP", "exact", t + ceil_div(t, 2), "FP(2,t,2) = t + ceil(t/2)")
        known("FB", "exact", t + ceil_div(t, 2), "FB(2,t,2) = t + ceil(t/2)")
    elif t == 3 and q == 2 and k >= 4 and k % 2 == 0:
        known("FP", "exact", 3 * (k // 2) + 2, "FP(2m,3,2) = 3m + 2")
        known("FB", "unknown", None, "not covered")
    elif t == 3 and q == 2 and k >= 5:
        m = k // 2
        known("FP_lower", "lower", 3 * m + 3, "FP(2m+1,3,2) >= 3m + 3")
        known("FP_upper", "upper", 3 * m + 4, "FP(2m+1,3,2) <= 3m + 4")
        known("FB", "unknown", None, "not covered")
    else:
        known("FP", "unknown", None, "not covered")
        known("FB", "unknown", None, "not covered")
    return rep


def gamma_length_bound(gamma: int, t: int) -> int:
    """Least length of a t-all-symbol PIR generator with ``gamma`` distinct column classes."""
    return ceil_div(2 * gamma * t, gamma + 1)


def dual_distance_bound(g: Matrix, cap: int = ENUMERATION_CAP) -> Fraction:
    """``(n - 1)/(d_perp - 1) + 1``, an upper bound on the all-symbol PIR level."""
    d = dual_distance(g, cap)
    if d == 1:
        raise ValueError("the dual distance is 1 (zero column present)")
    if d == math.inf:
        # trivial dual: only the singleton recovers a column
        return Fraction(1)
    return Fraction(g.cols - 1, int(d) - 1) + 1


def gamma_check(g: Matrix, t: int) -> bool:
    """Whether ``n >= ceil(2 gamma t / (gamma + 1))`` for the claimed level ``t``."""
    return g.cols >= gamma_length_bound(len(distinct_column_classes(g)), t)


def shortened_dual_bound(g: Matrix, s: int, cap: int = ENUMERATION_CAP) -> Fraction:
    """``(n - s)/(max_T d(C^perp(T)) - 1) + s`` over all ``T`` of size ``n - s + 1``.

    A zero shortened dual has distance infinity and contributes ``s``.
    """
    n = g.cols
    if n > SHORTENED_MAX_N:
        raise ValueError(f"n = {n} exceeds the shortened-bound cap {SHORTENED_MAX_N}")
    if not 1 <= s <= n - 1:
        raise ValueError("need 1 <= s <= n - 1")
    if dual_distance(g, cap) == 1:
        raise ValueError("the dual distance is 1 (zero column present)")
    best = 0.0
    for subset in itertools.combinations(range(n), n - s + 1):
        best = max(best, code_min_distance(shortened_dual(g, subset), cap))
        if best == math.inf:
            return Fraction(s)
    return Fraction(n - s, int(best) - 1) + s


def min_shortened_dual_bound(g: Matrix, cap: int = ENUMERATION_CAP) -> tuple[Fraction, int]:
    """Smallest shortened-dual bound over ``s`` in ``[1, n - 1]`` and the ``s`` attaining it."""
    if g.cols < 2:
        raise ValueError("need n >= 2")
    return min((shortened_dual_bound(g, s, cap), s) for s in range(1, g.cols))


def matrix_bounds(g: Matrix, t: int | None = None, cap: int = ENUMERATION_CAP) -> BoundReport:
    """Code-level upper bounds on the all-symbol level ``t`` of ``g``, plus informational metrics."""
    rep = BoundReport({"k": g.rows, "n": g.cols, "q": g.field.q})
    d = dual_distance(g, cap)
    rep.add("dual_distance", "info", None if d == math.inf else int(d), "d_perp; none for a trivial dual")
    if d > 1:
        rep.add("dual_distance_bound", "upper", dual_distance_bound(g, cap), "upper bound on t (all-symbol PIR)")
        if g.cols <= SHORTENED_MAX_N and g.cols >= 2:
            b, s = min_shortened_dual_bound(g, cap)
            rep.add("shortened_dual_bound", "upper", b, f"upper bound on t (all-symbol batch), s = {s}")
    gamma = len(distinct_column_classes(g))
    rep.add("distinct_classes", "info", gamma, "distinct column classes")
    if t is not None:
        need = gamma_length_bound(gamma, t)
        rep.add("gamma_length", "info", need, f"length needed for t = {t}; n = {g.cols} {'meets' if g.cols >= need else 'violates'} it")
    return rep
