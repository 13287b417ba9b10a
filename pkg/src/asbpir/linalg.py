"""Matrices and linear codes over small finite fields.

Matrices are integer arrays of element encodings paired with a
:class:`~asbpir.field.FiniteField`; all arithmetic goes through the field
tables.  Column vectors are encoded as integers little-endian in the row
index, ``sum_i v_i q^i``, which is the order used for canonical candidates
and for every deterministic enumeration in the package.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass

import numpy as np

from .field import FiniteField

ENUMERATION_CAP = 1 << 24
MAX_MASK_LENGTH = 62


class EnumerationCapExceeded(RuntimeError):
    """An exhaustive enumeration would exceed the configured cap."""


class RankError(ValueError):
    """A generator matrix must have full row rank."""


class Matrix:
    """A ``k x n`` matrix over a finite field."""

    def __init__(self, entries, field: FiniteField):
        arr = np.array(entries, dtype=np.int64)
        if arr.ndim == 1 and arr.size == 0:
            arr = arr.reshape(0, 0)
        if arr.ndim != 2:
            raise ValueError(f"matrix entries must be two-dimensional, got shape {arr.shape}")
        if arr.size and (arr.min() < 0 or arr.max() >= field.q):
            raise ValueError(f"entries must be encodings in [0, {field.q})")
        arr.setflags(write=False)
        self.entries = arr
        self.field = field

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(int(x) for x in self.entries[:, j])

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def tolist(self) -> list[list[int]]:
        return self.entries.tolist()

    def submatrix(self, cols: Sequence[int]) -> Matrix:
        return Matrix(self.entries[:, list(cols)].reshape(self.rows, len(cols)), self.field)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return (
            self.field is other.field
            and self.shape == other.shape
            and bool(np.array_equal(self.entries, other.entries))
        )

    def __hash__(self) -> int:
        return hash((self.field.q, self.shape, self.entries.tobytes()))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in row) for row in self.tolist())
        return f"{type(self).__name__}({self.field!r}, [{body}])"


class GeneratorMatrix(Matrix):
    """A full-row-rank ``k x n`` matrix, the generator of a ``[n, k]`` code."""

    def __init__(self, entries, field: FiniteField):
        super().__init__(entries, field)
        r = rank(self)
        if r != self.rows:
            raise RankError(f"generator matrix has rank {r} < {self.rows} rows")

    @property
    def k(self) -> int:
        return self.rows

    @property
    def n(self) -> int:
        return self.cols

    @classmethod
    def of(cls, m: Matrix) -> GeneratorMatrix:
        return m if isinstance(m, GeneratorMatrix) else cls(m.entries, m.field)


# ----------------------------------------------------------------------------
# vectors


def encode_vector(v: Sequence[int], q: int) -> int:
    return sum(int(x) * q**i for i, x in enumerate(v))


def decode_vector(code: int, k: int, q: int) -> tuple[int, ...]:
    return tuple((code // q**i) % q for i in range(k))


def normalize(v: Sequence[int], field: FiniteField) -> tuple[int, ...]:
    """Scale ``v`` so that its first nonzero coordinate is 1."""
    for x in v:
        if x:
            s = field.inv(int(x))
            return tuple(field.mul(s, int(y)) for y in v)
    return tuple(int(x) for x in v)


def projective_points(k: int, field: FiniteField) -> list[int]:
    """Codes of the nonzero vectors whose first nonzero coordinate is 1, ascending."""
    q = field.q
    points = []
    for code in range(1, q**k):
        v = decode_vector(code, k, q)
        if next(x for x in v if x) == 1:
            points.append(code)
    return points


def scale_vector(alpha: int, v: np.ndarray, field: FiniteField) -> np.ndarray:
    return field.mul_table[alpha, v]


def support_mask(v: Iterable[int]) -> int:
    mask = 0
    for j, x in enumerate(v):
        if x:
            mask |= 1 << j
    return mask


def mask_to_indices(mask: int) -> tuple[int, ...]:
    out = []
    j = 0
    while mask:
        if mask & 1:
            out.append(j)
        mask >>= 1
        j += 1
    return tuple(out)


# ----------------------------------------------------------------------------
# array-level arithmetic


def matmul(a: np.ndarray, b: np.ndarray, field: FiniteField) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for l in range(a.shape[1]):
        out = field.add_table[out, field.mul_table[a[:, l][:, None], b[l][None, :]]]
    return out


def _rref_array(arr: np.ndarray, field: FiniteField) -> tuple[np.ndarray, list[int]]:
    a = np.array(arr, dtype=np.int64, copy=True)
    rows, cols = a.shape
    r = 0
    pivots: list[int] = []
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            a[[r, p]] = a[[p, r]]
        a[r] = field.mul_table[field.inv_table[a[r, c]], a[r]]
        for i in range(rows):
            f = a[i, c]
            if i != r and f:
                a[i] = field.sub_table[a[i], field.mul_table[f, a[r]]]
        pivots.append(c)
        r += 1
    return a, pivots


def _rank_array(arr: np.ndarray, field: FiniteField) -> int:
    if arr.size == 0:
        return 0
    return len(_rref_array(arr, field)[1])


def _null_space_array(arr: np.ndarray, field: FiniteField) -> np.ndarray:
    """Rows spanning ``{x : arr @ x = 0}``."""
    arr = np.asarray(arr, dtype=np.int64)
    ncols = arr.shape[1]
    if arr.shape[0] == 0:
        return np.eye(ncols, dtype=np.int64)
    red, pivots = _rref_array(arr, field)
    free = [c for c in range(ncols) if c not in pivots]
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    for b, f in enumerate(free):
        basis[b, f] = 1
        for r, p in enumerate(pivots):
            basis[b, p] = field.neg_table[red[r, f]]
    return basis


def _combinations(basis: np.ndarray, field: FiniteField, chunk: int = 1 << 16) -> Iterator[np.ndarray]:
    """All ``q^d`` linear combinations of the rows of ``basis``, in chunks."""
    d, n = basis.shape
    q = field.q
    total = q**d
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        out = np.zeros((idx.size, n), dtype=np.int64)
        for l in range(d):
            coeff = (idx // q**l) % q
            out = field.add_table[out, field.mul_table[coeff[:, None], basis[l][None, :]]]
        yield out


def _masks(words: np.ndarray) -> np.ndarray:
    if words.shape[1] > MAX_MASK_LENGTH:
        raise ValueError(f"support masks are limited to length {MAX_MASK_LENGTH}")
    weights = np.left_shift(np.int64(1), np.arange(words.shape[1], dtype=np.int64))
    return (words != 0).astype(np.int64) @ weights


def _inclusion_minimal(masks: np.ndarray) -> np.ndarray:
    """Boolean selector of (distinct) masks with no other listed mask strictly inside."""
    keep = np.zeros(masks.size, dtype=bool)
    chosen = np.empty(masks.size, dtype=np.int64)
    nc = 0
    for i in np.argsort(_popcount(masks), kind="stable"):
        m = masks[i]
        if nc and np.any((chosen[:nc] & m) == chosen[:nc]):
            continue
        chosen[nc] = m
        nc += 1
        keep[i] = True
    return keep


def _popcount(masks: np.ndarray) -> np.ndarray:
    return np.array([int(m).bit_count() for m in masks], dtype=np.int64)


# ----------------------------------------------------------------------------
# public operations


def rref(m: Matrix) -> tuple[Matrix, int, list[int]]:
    """Reduced row-echelon form, rank and pivot columns (leftmost pivots)."""
    red, pivots = _rref_array(m.entries, m.field)
    return Matrix(red, m.field), len(pivots), pivots


def rank(m: Matrix) -> int:
    return _rank_array(m.entries, m.field)


def invertible(m: Matrix) -> bool:
    return m.rows == m.cols and rank(m) == m.rows


def systematic_form(g: GeneratorMatrix) -> tuple[GeneratorMatrix, list[int], Matrix]:
    """Return ``(M G P, perm, M)`` where ``M G P = (I_k | A)``.

    ``perm[j]`` is the original index of the column placed at position
    ``j``: pivot columns first, the remaining ones in their original order.
    Column permutation and left multiplication by an invertible matrix keep
    every recovery property of the code.
    """
    F = g.field
    k = g.k
    aug = np.concatenate([g.entries, np.eye(k, dtype=np.int64)], axis=1)
    red, pivots = _rref_array(aug, F)
    pivots = [p for p in pivots if p < g.n]
    if len(pivots) != k:
        raise RankError("matrix is not of full row rank")
    perm = pivots + [j for j in range(g.n) if j not in pivots]
    change = Matrix(red[:, g.n :], F)
    systematic = GeneratorMatrix(red[:, perm], F)
    return systematic, perm, change


def dual_basis(g: Matrix) -> Matrix:
    """``(n - rank) x n`` matrix ``H`` of full rank with ``G H^T = 0``."""
    basis = _null_space_array(g.entries, g.field)
    return Matrix(basis.reshape(-1, g.cols), g.field)


def codewords(basis: Matrix, cap: int = ENUMERATION_CAP) -> Iterator[np.ndarray]:
    """Enumerate the row space of ``basis`` in chunks of codewords."""
    total = basis.field.q ** basis.rows
    if total > cap:
        raise EnumerationCapExceeded(f"{total} codewords exceed the cap {cap}")
    yield from _combinations(basis.entries, basis.field)


def code_min_distance(basis: Matrix, cap: int = ENUMERATION_CAP) -> float:
    """Minimum weight of the code spanned by ``basis``; ``inf`` for the zero code."""
    red, r, _ = rref(basis)
    if r == 0:
        return math.inf
    best = math.inf
    for chunk in codewords(Matrix(red.entries[:r], basis.field), cap):
        w = np.count_nonzero(chunk, axis=1)
        w = w[w > 0]
        if w.size:
            best = min(best, int(w.min()))
    return best


def min_distance(g: GeneratorMatrix, cap: int = ENUMERATION_CAP) -> int:
    """Minimum distance by full enumeration of the message space."""
    d = code_min_distance(g, cap)
    return int(d)


def dual_distance(g: Matrix, cap: int = ENUMERATION_CAP) -> float:
    """``d(C^perp)``; infinite when the dual is the zero code."""
    return code_min_distance(dual_basis(g), cap)


def shorten(g: Matrix, a: Iterable[int]) -> Matrix:
    """Basis of ``{x in C : supp(x) subset of a}``."""
    a = set(a)
    outside = [j for j in range(g.cols) if j not in a]
    if not outside:
        red, r, _ = rref(g)
        return Matrix(red.entries[:r], g.field)
    left = _null_space_array(g.entries[:, outside].T, g.field)
    if left.shape[0] == 0:
        return Matrix(np.zeros((0, g.cols), dtype=np.int64), g.field)
    words = matmul(left, g.entries, g.field)
    red, pivots = _rref_array(words, g.field)
    return Matrix(red[: len(pivots)].reshape(-1, g.cols), g.field)


def shortened_dual(g: Matrix, a: Iterable[int]) -> Matrix:
    """Basis of ``C^perp(a)``, computed directly as a null space on ``a``."""
    a = sorted(set(a))
    out = np.zeros((0, g.cols), dtype=np.int64)
    if a:
        local = _null_space_array(g.entries[:, a], g.field)
        out = np.zeros((local.shape[0], g.cols), dtype=np.int64)
        out[:, a] = local
    return Matrix(out, g.field)


def puncture(g: Matrix, a: Iterable[int]) -> Matrix:
    """Generator (a basis) of the projection of the code onto ``a``."""
    a = sorted(set(a))
    if not a:
        raise ValueError("puncturing needs a nonempty coordinate set")
    red, pivots = _rref_array(g.entries[:, a], g.field)
    return Matrix(red[: len(pivots)].reshape(-1, len(a)), g.field)


@dataclass(frozen=True)
class Circuit:
    """Support-minimal kernel vector of a matrix, normalised at one coordinate."""

    mask: int
    vector: tuple[int, ...]

    @property
    def support(self) -> tuple[int, ...]:
        return mask_to_indices(self.mask)


def circuits_through(
    arr: np.ndarray,
    col: int,
    field: FiniteField,
    cap: int = ENUMERATION_CAP,
    max_size: int | None = None,
) -> list[Circuit]:
    """Support-minimal vectors ``x`` with ``arr @ x = 0`` and ``x[col] = 1``.

    Enumerates the kernel of ``arr``; a support is kept when no other kernel
    vector has a strictly smaller support.  ``max_size`` bounds the number
    of support coordinates other than ``col``.  A size-increasing subset
    scan replaces the enumeration when it is cheaper.
    """
    arr = np.asarray(arr, dtype=np.int64)
    ncols = arr.shape[1]
    kernel = _null_space_array(arr, field)
    if max_size is None:
        max_size = ncols
    kernel_cost = field.q ** kernel.shape[0]
    # a rank test costs far more than one kernel vector; weigh subsets accordingly
    scan_cost = 64 * sum(math.comb(ncols - 1, s) for s in range(min(max_size, ncols - 1) + 1))
    if kernel_cost <= cap and kernel_cost <= scan_cost:
        found: dict[int, np.ndarray] = {}
        all_masks: set[int] = set()
        for chunk in _combinations(kernel, field):
            masks = _masks(chunk)
            all_masks.update(int(m) for m in masks if m)
            through = np.nonzero(chunk[:, col])[0]
            if through.size == 0:
                continue
            rows = chunk[through]
            scale = field.inv_table[rows[:, col]]
            rows = field.mul_table[scale[:, None], rows]
            for m, row in zip(masks[through], rows):
                found.setdefault(int(m), row)
        every = np.array(sorted(all_masks), dtype=np.int64)
        minimal = {int(m) for m in every[_inclusion_minimal(every)]} if every.size else set()
        out = [
            Circuit(m, tuple(int(x) for x in found[m]))
            for m in found
            if m in minimal and bin(m).count("1") <= max_size + 1
        ]
    else:
        out = _circuits_by_scan(arr, col, field, cap, max_size)
    out.sort(key=lambda c: mask_to_indices(c.mask & ~(1 << col)))
    return out


def _circuits_by_scan(arr, col, field, cap, max_size) -> list[Circuit]:
    ncols = arr.shape[1]
    others = [j for j in range(ncols) if j != col]
    budget = sum(math.comb(len(others), s) for s in range(0, max_size + 1))
    if budget > cap:
        raise EnumerationCapExceeded(f"subset scan of {budget} sets exceeds the cap {cap}")
    target = arr[:, col]
    found: list[Circuit] = []
    for size in range(0, max_size + 1):
        for subset in itertools.combinations(others, size):
            mask = sum(1 << j for j in subset)
            if any((c.mask & ~(1 << col)) & mask == (c.mask & ~(1 << col)) for c in found):
                continue
            sub = arr[:, list(subset)].reshape(arr.shape[0], size)
            r = _rank_array(sub, field)
            if r != size:
                continue
            if _rank_array(np.concatenate([sub, target[:, None]], axis=1), field) != r:
                continue
            # independent subset spanning the target: solve for the coefficients
            kernel = _null_space_array(np.concatenate([sub, target[:, None]], axis=1), field)
            x = kernel[0]
            x = field.mul_table[field.inv_table[x[-1]], x]
            vec = np.zeros(ncols, dtype=np.int64)
            vec[list(subset)] = x[:-1]
            vec[col] = 1
            found.append(Circuit(mask | (1 << col), tuple(int(v) for v in vec)))
    return found


def minimal_dual_codewords_through(
    g: Matrix, i: int, within: Iterable[int] | None = None, cap: int = ENUMERATION_CAP
) -> list[tuple[int, ...]]:
    """Support-minimal dual codewords through coordinate ``i`` inside ``within``.

    One representative per support, scaled so that coordinate ``i`` is 1.
    """
    within = sorted(set(range(g.cols) if within is None else within))
    if i not in within:
        raise ValueError("coordinate i must lie in the allowed set")
    local = within.index(i)
    circuits = circuits_through(g.entries[:, within], local, g.field, cap)
    out = []
    for c in circuits:
        x = [0] * g.cols
        for pos, value in zip(within, c.vector):
            x[pos] = value
        out.append(tuple(x))
    return out


def distinct_column_classes(g: Matrix) -> dict[tuple[int, ...], list[int]]:
    """Group nonzero columns by projective class (equal up to a nonzero scalar)."""
    classes: dict[tuple[int, ...], list[int]] = {}
    for j, col in enumerate(g.columns()):
        if any(col):
            classes.setdefault(normalize(col, g.field), []).append(j)
    return classes


@dataclass(frozen=True)
class CodeMetrics:
    n: int
    k: int
    min_distance: int
    dual_min_distance: float
    distinct_column_count: int


def code_metrics(g: GeneratorMatrix, cap: int = ENUMERATION_CAP) -> CodeMetrics:
    return CodeMetrics(
        n=g.n,
        k=g.k,
        min_distance=min_distance(g, cap),
        dual_min_distance=dual_distance(g, cap),
        distinct_column_count=len(distinct_column_classes(g)),
    )


def identity(k: int, field: FiniteField) -> GeneratorMatrix:
    return GeneratorMatrix(np.eye(k, dtype=np.int64), field)


def hstack(*ms: Matrix) -> Matrix:
    field = ms[0].field
    if any(m.field is not field for m in ms):
        raise ValueError("field mismatch")
    return Matrix(np.concatenate([m.entries for m in ms], axis=1), field)


def apply_left(mat: Matrix, g: Matrix) -> Matrix:
    if mat.field is not g.field:
        raise ValueError("field mismatch")
    return Matrix(matmul(mat.entries, g.entries, g.field), g.field)
