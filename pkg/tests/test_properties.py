import itertools
import math

import numpy as np
import pytest
from conftest import gm
from hypothesis import given
from hypothesis import strategies as st

from asbpir import constructions as C
from asbpir.field import field_of_order
from asbpir.linalg import GeneratorMatrix, Matrix, dual_distance, rank
from asbpir.oracles import brute_force_serve
from asbpir.properties import (
    PropertyKind,
    check,
    check_independent_lists,
    colex_multisets,
    independent_list_stats,
    is_binary_simplex,
    max_t,
    request_count,
    request_targets,
    requests,
)
from asbpir.recovery import Request, verify_plan

K = PropertyKind
ALL = list(PropertyKind)

# (stronger, weaker) pairs valid for every generator matrix
IMPLICATIONS = [
    (K.BATCH, K.PIR),
    (K.FBATCH, K.FPIR),
    (K.ASBATCH, K.ASPIR),
    (K.FBATCH, K.BATCH),
    (K.FBATCH, K.ASBATCH),
    (K.FPIR, K.PIR),
    (K.FPIR, K.ASPIR),
]


@st.composite
def small_generators(draw, qs=(2, 3), max_n=6):
    q = draw(st.sampled_from(qs))
    n = draw(st.integers(2, max_n))
    k = draw(st.integers(1, min(n, 3)))
    rows = draw(st.lists(st.lists(st.integers(0, q - 1), min_size=n, max_size=n), min_size=k, max_size=k))
    F = field_of_order(q)
    entries = np.array(rows, dtype=np.int64)
    if rank(Matrix(entries, F)) != k:
        entries[:, :k] = np.eye(k, dtype=np.int64)
    return GeneratorMatrix(entries, F)


def oracle_holds(g, kind, t) -> bool:
    """Property by brute force over an independently generated request family."""
    k, q = g.rows, g.field.q
    vecs = list(itertools.product(range(q), repeat=k))
    nonzero = [v for v in vecs if any(v)]
    if kind in (K.PIR, K.BATCH):
        targets = [tuple(int(i == j) for i in range(k)) for j in range(k)]
    elif kind in (K.FPIR, K.FBATCH):
        targets = nonzero  # every vector, not only projective representatives
    else:
        targets = sorted({c for c in g.columns() if any(c)})
    if kind.is_batch:
        reqs = itertools.combinations_with_replacement(targets, t)
    else:
        reqs = ([v] * t for v in targets)
    return all(brute_force_serve(g, Request.from_vectors(r)) for r in reqs)


@given(small_generators(max_n=5), st.sampled_from(ALL), st.integers(1, 3))
def test_check_matches_brute_force(g, kind, t):
    assert check(g, kind, t).holds == oracle_holds(g, kind, t)


@given(small_generators(), st.integers(1, 3))
def test_implication_lattice(g, t):
    got = {kind: check(g, kind, t).holds for kind in ALL}
    for strong, weak in IMPLICATIONS:
        if got[strong]:
            assert got[weak], (strong, weak)


@given(small_generators(), st.sampled_from(ALL), st.integers(2, 4))
def test_levels_are_monotone(g, kind, t):
    if check(g, kind, t).holds:
        assert check(g, kind, t - 1).holds


@given(small_generators(), st.sampled_from([K.ASPIR, K.ASBATCH]), st.integers(2, 3), st.data())
def test_deleting_a_column_costs_at_most_one_level(g, kind, t, data):
    if not check(g, kind, t).holds:
        return
    j = data.draw(st.integers(0, g.cols - 1))
    keep = [i for i in range(g.cols) if i != j]
    sub = g.submatrix(keep)
    if rank(sub) < g.rows:
        return
    assert check(GeneratorMatrix.of(sub), kind, t - 1).holds


@given(small_generators(), st.sampled_from([K.ASPIR, K.ASBATCH]))
def test_level_within_length_and_dual_distance_bound(g, kind):
    t = max_t(g, kind)
    assert t <= g.cols
    d = dual_distance(g)
    if t >= 1 and 1 < d < math.inf:
        assert t <= (g.cols - 1) / (d - 1) + 1


@given(small_generators(), st.sampled_from(ALL), st.integers(1, 3))
def test_verdict_witness_and_counterexample(g, kind, t):
    v = check(g, kind, t)
    if v.holds:
        assert v.witness_request.t == t
        assert verify_plan(g, v.witness_request, v.witness)
        assert v.requests_checked == request_count(g, kind, t)
    else:
        assert v.counterexample.t == t
        assert not brute_force_serve(g, v.counterexample)
        assert 1 <= v.requests_checked <= request_count(g, kind, t)


def test_parity_examples():
    g = gm([[1, 0, 1], [0, 1, 1]])
    assert check(g, K.ASBATCH, 2)
    assert check(g, K.FBATCH, 2)
    assert not check(g, K.ASPIR, 3)
    ident = gm([[1, 0], [0, 1]])
    v = check(ident, K.ASPIR, 2)
    assert not v.holds and v.counterexample == Request((((1, 0), 2),))


def test_counterexample_is_first_in_enumeration_order():
    ident = gm([[1, 0], [0, 1]])
    v = check(ident, K.BATCH, 2)
    assert v.counterexample == next(r for r in requests(ident, K.BATCH, 2) if not brute_force_serve(ident, r))


def test_request_targets_and_counts(gf3):
    g = GeneratorMatrix([[1, 2, 0, 0], [0, 0, 1, 0]], gf3)
    assert request_targets(g, K.PIR) == [(1, 0), (0, 1)]
    assert len(request_targets(g, K.FPIR)) == 8
    assert len(request_targets(g, K.FBATCH)) == 4
    # (1,0) and (2,0) are different values; the zero column is never a target
    assert request_targets(g, K.ASPIR) == [(1, 0), (2, 0), (0, 1)]
    assert request_count(g, K.ASBATCH, 2) == math.comb(4, 2)
    assert request_count(g, K.ASPIR, 5) == 3
    assert len(list(requests(g, K.ASBATCH, 3))) == request_count(g, K.ASBATCH, 3)


def test_colex_order():
    assert list(colex_multisets(3, 2)) == [(0, 0), (0, 1), (1, 1), (0, 2), (1, 2), (2, 2)]


def test_bad_arguments():
    g = gm([[1, 0, 1], [0, 1, 1]])
    with pytest.raises(ValueError):
        check(g, K.PIR, 0)
    with pytest.raises(ValueError):
        PropertyKind.parse("nope")
    assert PropertyKind.parse("ASBATCH") is K.ASBATCH
    with pytest.raises(ValueError):
        check(g, K.ASBATCH, 3, request_cap=2)


def test_max_size_limits_recovery():
    g = gm([[1, 0, 1], [0, 1, 1]])
    assert not check(g, K.ASPIR, 2, max_size=1)


def test_max_t_examples():
    assert max_t(C.simplex(3), K.ASPIR) == 4
    assert max_t(C.identity(3, 2), K.ASPIR) == 1
    rs = C.mds_rs(7, 3, 8)
    assert max_t(rs, K.ASPIR) == max_t(rs, K.ASBATCH) == 3


def test_independent_lists():
    assert is_binary_simplex(C.simplex(3))
    assert not is_binary_simplex(C.identity(2, 2))
    ok, count = independent_list_stats(C.simplex(3), 2)
    assert ok and count > 0
    assert check_independent_lists(C.simplex(2), 2)
    with pytest.raises(ValueError):
        check_independent_lists(C.identity(3, 2), 1)
    with pytest.raises(ValueError):
        check_independent_lists(C.simplex(3), 4)
