"""Generator matrix families for all-symbol PIR and batch codes."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dataclass_field

import numpy as np

from .field import FiniteField, field_of_order, make_field
from .linalg import GeneratorMatrix, Matrix, rank

SIMPLEX_MAX_K = 5

FAMILIES = (
    "identity",
    "identity_parity",
    "replicate",
    "block_diagonal",
    "t3",
    "t4_gprime",
    "t4_gdoubleprime",
    "mds_rs",
    "simplex",
    "lbub_upper",
    "paper_example",
)


def _field(q: int | FiniteField) -> FiniteField:
    return q if isinstance(q, FiniteField) else field_of_order(q)


def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise ValueError(msg)


def identity(k: int, q: int | FiniteField = 2) -> GeneratorMatrix:
    _need(k >= 1, "k must be positive")
    return GeneratorMatrix(np.eye(k, dtype=np.int64), _field(q))


def identity_parity(k: int, q: int | FiniteField = 2) -> GeneratorMatrix:
    """``(I_k | c)`` with ``c`` the column making every row sum to zero (all entries -1)."""
    _need(k >= 1, "k must be positive")
    F = _field(q)
    c = np.full((k, 1), F.minus_one(), dtype=np.int64)
    return GeneratorMatrix(np.hstack([np.eye(k, dtype=np.int64), c]), F)


def lbub_upper(k: int, t: int, q: int | FiniteField = 2) -> GeneratorMatrix:
    """ceil(t/2) copies of every unit vector followed by floor(t/2) copies of the all-one column."""
    _need(k >= 1 and t >= 1, "k and t must be positive")
    F = _field(q)
    cols = []
    for i in range(k):
        e = np.zeros(k, dtype=np.int64)
        e[i] = 1
        cols += [e] * ((t + 1) // 2)
    cols += [np.ones(k, dtype=np.int64)] * (t // 2)
    return GeneratorMatrix(np.array(cols).T, F)


def pair_count(k: int) -> int:
    """Smallest ``r`` with ``C(r, 2) >= k``, by integer scan."""
    _need(k >= 1, "k must be positive")
    r = 2
    while r * (r - 1) // 2 < k:
        r += 1
    return r


def three_part_pairs(r: int) -> list[tuple[int, int]]:
    """All pairs of ``range(r)``, those crossing a balanced 3-partition first.

    The parts are consecutive with the larger ones last.  Rows taken from
    this order leave the missing pairs inside parts, so the columns of the
    block split into three groups of pairwise disjoint supports whenever
    that is possible at all.  For ``r <= 4`` the order is lexicographic.
    """
    sizes = [r // 3 + (1 if i >= 3 - r % 3 else 0) for i in range(3)]
    part = np.repeat(np.arange(3), sizes)
    pairs = list(itertools.combinations(range(r), 2))
    return sorted(pairs, key=lambda ab: (part[ab[0]] == part[ab[1]], ab))


def weight_two_block(k: int, value: int = 1, order: str = "lex") -> np.ndarray:
    """``k x r`` block whose rows are ``k`` distinct weight-2 vectors.

    ``order="lex"`` takes the first ``k`` support pairs lexicographically,
    ``order="three_part"`` uses :func:`three_part_pairs`.
    """
    r = pair_count(k)
    pairs = itertools.combinations(range(r), 2) if order == "lex" else three_part_pairs(r)
    block = np.zeros((k, r), dtype=np.int64)
    for row, (a, b) in zip(range(k), pairs):
        block[row, a] = block[row, b] = value
    return block


def t3_construction(k: int, q: int | FiniteField = 2) -> GeneratorMatrix:
    F = _field(q)
    return GeneratorMatrix(np.hstack([np.eye(k, dtype=np.int64), weight_two_block(k)]), F)


def t4_gprime(k: int, q: int | FiniteField = 2) -> GeneratorMatrix:
    """``(I_k | A' | 1)``: the weight-2 block with entries -1 plus the parity column.

    Every row holds 1, two entries -1 and the parity entry, so the columns
    sum to zero and the parity column is the all-one vector.  Rows of the
    block follow :func:`three_part_pairs` (lexicographic up to ``k = 6``),
    which lets the parity column find its extra recovery sets whenever
    the row counting permits.
    """
    F = _field(q)
    a = weight_two_block(k, F.minus_one(), order="three_part")
    one = np.ones((k, 1), dtype=np.int64)
    return GeneratorMatrix(np.hstack([np.eye(k, dtype=np.int64), a, one]), F)


def t4_gdoubleprime(k: int, q: int | FiniteField = 2) -> GeneratorMatrix:
    g = t4_gprime(k, q)
    return GeneratorMatrix(np.hstack([g.entries, np.ones((k, 1), dtype=np.int64)]), g.field)


def mds_rs(n: int, k: int, q: int | FiniteField) -> GeneratorMatrix:
    """Vandermonde generator evaluated at the first ``n`` field elements (encoding order)."""
    F = _field(q)
    _need(1 <= k <= n, "need 1 <= k <= n")
    _need(n <= F.q, f"n = {n} exceeds the field size {F.q}")
    rows = np.zeros((k, n), dtype=np.int64)
    rows[0, :] = 1
    for i in range(1, k):
        rows[i] = F.mul_table[rows[i - 1], np.arange(n)]
    return GeneratorMatrix(rows, F)


def is_mds(g: Matrix) -> bool:
    """Every ``k``-subset of columns is invertible (exhaustive)."""
    return all(rank(g.submatrix(s)) == g.rows for s in itertools.combinations(range(g.cols), g.rows))


def simplex(k: int) -> GeneratorMatrix:
    """Binary simplex generator: every nonzero vector of F_2^k, in increasing encoding."""
    _need(1 <= k <= SIMPLEX_MAX_K, f"simplex supports 1 <= k <= {SIMPLEX_MAX_K}")
    codes = np.arange(1, 2**k)
    cols = (codes[None, :] >> np.arange(k)[:, None]) & 1
    return GeneratorMatrix(cols, make_field(2))


def block_diagonal(g1: Matrix, g2: Matrix) -> GeneratorMatrix:
    if g1.field is not g2.field:
        raise ValueError("field mismatch")
    out = np.zeros((g1.rows + g2.rows, g1.cols + g2.cols), dtype=np.int64)
    out[: g1.rows, : g1.cols] = g1.entries
    out[g1.rows :, g1.cols :] = g2.entries
    return GeneratorMatrix(out, g1.field)


def replicate(g: Matrix, lam: int) -> GeneratorMatrix:
    _need(lam >= 1, "replication factor must be positive")
    return GeneratorMatrix(np.tile(g.entries, (1, lam)), g.field)


# matrices displayed as explicit examples, stored bit-exactly
EXAMPLE_MATRICES: dict[str, tuple[int, list[list[int]]]] = {
    "gf2_4x8": (
        2,
        [
            [1, 0, 0, 0, 0, 1, 1, 1],
            [0, 1, 0, 0, 1, 1, 1, 1],
            [0, 0, 1, 0, 0, 0, 1, 1],
            [0, 0, 0, 1, 1, 0, 1, 1],
        ],
    ),
    "gf3_5x10": (
        3,
        [
            [1, 0, 0, 0, 0, 0, 2, 1, 0, 1],
            [0, 1, 0, 0, 0, 1, 0, 0, 1, 2],
            [0, 0, 1, 0, 0, 1, 0, 2, 0, 2],
            [0, 0, 0, 1, 0, 2, 1, 0, 2, 0],
            [0, 0, 0, 0, 1, 0, 2, 1, 1, 0],
        ],
    ),
}


def paper_example(tag: str) -> GeneratorMatrix:
    if tag not in EXAMPLE_MATRICES:
        raise ValueError(f"unknown example tag {tag!r}; choose from {sorted(EXAMPLE_MATRICES)}")
    q, rows = EXAMPLE_MATRICES[tag]
    return GeneratorMatrix(rows, field_of_order(q))


@dataclass(frozen=True)
class FamilySpec:
    """A family tag plus its parameters; ``build`` validates and constructs."""

    family: str
    k: int | None = None
    t: int | None = None
    q: int = 2
    n: int | None = None
    lam: int = 1
    tag: str | None = None
    parts: tuple = dataclass_field(default=())

    def build(self) -> GeneratorMatrix:
        f = self.family
        if f not in FAMILIES:
            raise ValueError(f"unknown family {f!r}")
        if f == "paper_example":
            _need(self.tag is not None, "paper_example needs a tag")
            return paper_example(self.tag)
        if f == "block_diagonal":
            _need(len(self.parts) == 2, "block_diagonal needs two parts")
            return block_diagonal(*(p.build() for p in self.parts))
        if f == "replicate":
            _need(len(self.parts) == 1, "replicate needs one part")
            return replicate(self.parts[0].build(), self.lam)
        _need(self.k is not None, f"family {f} needs k")
        k, q = self.k, self.q
        if f == "identity":
            return identity(k, q)
        if f == "identity_parity":
            return identity_parity(k, q)
        if f == "t3":
            return t3_construction(k, q)
        if f == "t4_gprime":
            return t4_gprime(k, q)
        if f == "t4_gdoubleprime":
            return t4_gdoubleprime(k, q)
        if f == "simplex":
            return simplex(k)
        if f == "lbub_upper":
            _need(self.t is not None, "lbub_upper needs t")
            return lbub_upper(k, self.t, q)
        _need(self.n is not None, "mds_rs needs n")
        return mds_rs(self.n, k, q)
