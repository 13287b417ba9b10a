import itertools
import math

import numpy as np
import pytest
from conftest import gm, span_set
from hypothesis import given
from hypothesis import strategies as st

from asbpir.field import field_of_order
from asbpir.linalg import (
    GeneratorMatrix,
    Matrix,
    RankError,
    apply_left,
    circuits_through,
    code_metrics,
    codewords,
    decode_vector,
    distinct_column_classes,
    dual_basis,
    dual_distance,
    encode_vector,
    min_distance,
    minimal_dual_codewords_through,
    normalize,
    projective_points,
    puncture,
    rank,
    shorten,
    shortened_dual,
    systematic_form,
)


@st.composite
def matrices(draw, max_k=3, max_n=6, qs=(2, 3, 4)):
    q = draw(st.sampled_from(qs))
    k = draw(st.integers(1, max_k))
    n = draw(st.integers(1, max_n))
    entries = draw(st.lists(st.lists(st.integers(0, q - 1), min_size=n, max_size=n), min_size=k, max_size=k))
    return Matrix(entries, field_of_order(q))


@st.composite
def generators(draw, max_k=3, max_n=6, qs=(2, 3)):
    m = draw(matrices(max_k, max_n, qs))
    if rank(m) != m.rows:
        # append an identity block to force full rank
        m = Matrix(np.concatenate([m.entries, np.eye(m.rows, dtype=np.int64)], axis=1), m.field)
    return GeneratorMatrix(m.entries, m.field)


def weight_oracle(m: Matrix) -> float:
    ws = [sum(1 for x in w if x) for w in span_set(m) if any(w)]
    return min(ws) if ws else math.inf


def dual_oracle(g: Matrix) -> set[tuple[int, ...]]:
    F = g.field
    out = set()
    for x in itertools.product(range(F.q), repeat=g.cols):
        acc = np.zeros(g.rows, dtype=np.int64)
        for j, c in enumerate(x):
            acc = F.add_table[acc, F.mul_table[c, g.entries[:, j]]]
        if not acc.any():
            out.add(x)
    return out


def test_encoding_round_trip_and_order():
    assert encode_vector((1, 0, 1), 2) == 5
    assert decode_vector(5, 3, 2) == (1, 0, 1)
    assert decode_vector(7, 2, 3) == (1, 2)
    for code in range(27):
        assert encode_vector(decode_vector(code, 3, 3), 3) == code


@pytest.mark.parametrize("k,q", [(1, 2), (2, 2), (3, 2), (2, 3), (3, 3), (2, 4)])
def test_projective_points(k, q):
    F = field_of_order(q)
    pts = projective_points(k, F)
    assert len(pts) == (q**k - 1) // (q - 1)
    assert pts == sorted(pts)
    for c in pts:
        v = decode_vector(c, k, q)
        assert normalize(v, F) == v


def test_normalize_first_nonzero_is_one(gf3):
    assert normalize((0, 2, 1), gf3) == (0, 1, 2)
    assert normalize((0, 0), gf3) == (0, 0)


@given(matrices())
def test_rank_matches_span_size(m):
    assert m.field.q ** rank(m) == len(span_set(m))


@given(generators())
def test_dual_basis_spans_the_dual(g):
    h = dual_basis(g)
    assert h.rows == g.cols - g.rows
    assert span_set(h) == dual_oracle(g)


@given(generators())
def test_distances_match_enumeration(g):
    assert min_distance(g) == weight_oracle(g)
    assert dual_distance(g) == weight_oracle(dual_basis(g))


def test_dual_distance_of_trivial_dual_is_infinite(gf2):
    assert dual_distance(gm([[1, 0], [0, 1]])) == math.inf


def test_parity_metrics():
    met = code_metrics(gm([[1, 0, 1], [0, 1, 1]]))
    assert (met.n, met.k, met.min_distance, met.dual_min_distance, met.distinct_column_count) == (3, 2, 2, 3, 3)


@given(generators())
def test_systematic_form(g):
    s, perm, change = systematic_form(g)
    k = g.k
    assert np.array_equal(s.entries[:, :k], np.eye(k, dtype=np.int64))
    assert sorted(perm) == list(range(g.n))
    assert apply_left(change, g).submatrix(perm) == s


def test_systematic_form_rejects_rank_deficient(gf2):
    with pytest.raises(ValueError):
        systematic_form(GeneratorMatrix([[1, 1], [1, 1]], gf2))
    with pytest.raises(RankError):
        GeneratorMatrix([[1, 1], [1, 1]], gf2)


@given(generators(), st.data())
def test_shorten_and_puncture(g, data):
    a = data.draw(st.sets(st.integers(0, g.cols - 1)))
    code = span_set(g)
    inside = {w for w in code if all(w[j] == 0 for j in range(g.cols) if j not in a)}
    assert span_set(shorten(g, a)) | {(0,) * g.cols} == inside | {(0,) * g.cols}
    dual = dual_oracle(g)
    dual_inside = {w for w in dual if all(w[j] == 0 for j in range(g.cols) if j not in a)}
    assert span_set(shortened_dual(g, a)) == dual_inside
    if a:
        cols = sorted(a)
        assert span_set(puncture(g, a)) == {tuple(w[j] for j in cols) for w in code}


def test_puncture_needs_coordinates(gf2):
    with pytest.raises(ValueError):
        puncture(gm([[1, 1]]), [])


@given(generators(max_n=6), st.data())
def test_minimal_dual_codewords_through(g, data):
    i = data.draw(st.integers(0, g.cols - 1))
    got = {tuple(j for j, x in enumerate(w) if x) for w in minimal_dual_codewords_through(g, i)}
    dual = [w for w in dual_oracle(g) if any(w)]
    supports = {frozenset(j for j, x in enumerate(w) if x) for w in dual}
    minimal = {s for s in supports if not any(o < s for o in supports)}
    want = {tuple(sorted(s)) for s in minimal if i in s}
    assert got == want


def test_simplex_has_seven_minimal_dual_words_through_a_coordinate(gf2):
    cols = [decode_vector(c, 3, 2) for c in range(1, 8)]
    g = GeneratorMatrix(np.array(cols).T, gf2)
    words = minimal_dual_codewords_through(g, 0)
    weights = sorted(sum(1 for x in w if x) for w in words)
    assert weights == [3, 3, 3, 4, 4, 4, 4]


def test_circuits_respect_max_size(gf2):
    arr = np.array([[1, 0, 1, 1], [0, 1, 1, 1]])
    full = circuits_through(arr, 3, gf2)
    small = circuits_through(arr, 3, gf2, max_size=2)  # excludes coordinate 3 itself
    assert {c.support for c in small} == {c.support for c in full if len(c.support) <= 3}


def test_distinct_column_classes_are_projective(gf3):
    g = GeneratorMatrix([[1, 2, 0, 1], [0, 0, 1, 1]], gf3)
    classes = distinct_column_classes(g)
    assert classes == {(1, 0): [0, 1], (0, 1): [2], (1, 1): [3]}


def test_codewords_cap(gf2):
    from asbpir.linalg import EnumerationCapExceeded

    with pytest.raises(EnumerationCapExceeded):
        list(codewords(gm([[1, 0, 0], [0, 1, 0], [0, 0, 1]]), cap=4))


@given(generators(max_n=7, qs=(2, 3, 4)), st.data())
def test_circuit_scan_agrees_with_kernel_enumeration(g, data):
    from asbpir.linalg import _circuits_by_scan

    col = data.draw(st.integers(0, g.cols - 1))
    size = data.draw(st.integers(0, g.cols))
    by_kernel = circuits_through(g.entries, col, g.field, max_size=size, cap=10**9)
    by_scan = _circuits_by_scan(np.asarray(g.entries, dtype=np.int64), col, g.field, 10**9, min(size, g.cols - 1))
    assert sorted((c.mask, c.vector) for c in by_kernel) == sorted((c.mask, c.vector) for c in by_scan)
