import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from asbpir import constructions as C
from asbpir.field import field_of_order
from asbpir.linalg import dual_distance, min_distance
from asbpir.properties import PropertyKind, check

K = PropertyKind

# displayed example matrices, -1 written as -1 and reduced mod the characteristic
GPRIME_5 = [
    [1, 0, 0, 0, 0, -1, -1, 0, 0, 1],
    [0, 1, 0, 0, 0, -1, 0, -1, 0, 1],
    [0, 0, 1, 0, 0, -1, 0, 0, -1, 1],
    [0, 0, 0, 1, 0, 0, -1, -1, 0, 1],
    [0, 0, 0, 0, 1, 0, -1, 0, -1, 1],
]
GDOUBLE_6 = [
    [1, 0, 0, 0, 0, 0, -1, -1, 0, 0, 1, 1],
    [0, 1, 0, 0, 0, 0, -1, 0, -1, 0, 1, 1],
    [0, 0, 1, 0, 0, 0, -1, 0, 0, -1, 1, 1],
    [0, 0, 0, 1, 0, 0, 0, -1, -1, 0, 1, 1],
    [0, 0, 0, 0, 1, 0, 0, -1, 0, -1, 1, 1],
    [0, 0, 0, 0, 0, 1, 0, 0, -1, -1, 1, 1],
]


def reduce(rows, q):
    return (np.array(rows) % field_of_order(q).p).tolist()


@pytest.mark.parametrize("q", [2, 3, 4])
def test_gprime_k5_matches_displayed_matrix(q):
    assert C.t4_gprime(5, q).tolist() == reduce(GPRIME_5, q)


@pytest.mark.parametrize("q", [2, 3])
def test_gdoubleprime_k6_matches_displayed_matrix(q):
    assert C.t4_gdoubleprime(6, q).tolist() == reduce(GDOUBLE_6, q)


def test_stored_examples():
    g = C.paper_example("gf2_4x8")
    assert g.tolist()[1] == [0, 1, 0, 0, 1, 1, 1, 1] and g.field.q == 2
    h = C.paper_example("gf3_5x10")
    assert h.tolist()[0] == [1, 0, 0, 0, 0, 0, 2, 1, 0, 1] and h.field.q == 3
    with pytest.raises(ValueError):
        C.paper_example("missing")


@pytest.mark.parametrize("k,r", [(1, 2), (2, 3), (3, 3), (4, 4), (6, 4), (7, 5), (10, 5), (11, 6)])
def test_pair_count(k, r):
    assert C.pair_count(k) == r
    assert math.comb(r, 2) >= k > math.comb(r - 1, 2) or k == 1


@pytest.mark.parametrize("r", range(2, 9))
def test_three_part_pairs(r):
    pairs = C.three_part_pairs(r)
    assert sorted(pairs) == list(itertools.combinations(range(r), 2))
    if r <= 4:
        assert pairs == sorted(pairs)


@pytest.mark.parametrize("k", range(1, 11))
def test_weight_two_block_rows_distinct(k):
    for order in ("lex", "three_part"):
        b = C.weight_two_block(k, order=order)
        assert b.shape == (k, C.pair_count(k))
        assert (b.sum(axis=1) == 2).all()
        assert len({tuple(r) for r in b}) == k


@pytest.mark.parametrize("q", [2, 3, 4])
@pytest.mark.parametrize("k", range(2, 9))
def test_t3_is_three_batch_at_length_k_plus_r(k, q):
    g = C.t3_construction(k, q)
    assert g.n == k + C.pair_count(k)
    assert check(g, K.ASBATCH, 3)


@pytest.mark.parametrize("q", [2, 3, 4])
@pytest.mark.parametrize("k", range(1, 7))
def test_gdoubleprime_is_four_batch(k, q):
    # fails at k = 6 for q in {2, 4}: the columns of A sum to zero in characteristic 2
    assert check(C.t4_gdoubleprime(k, q), K.ASBATCH, 4)


@pytest.mark.parametrize("k", range(1, 9))
def test_gprime_four_batch_membership(k):
    assert bool(check(C.t4_gprime(k, 2), K.ASBATCH, 4)) == (k in {1, 2, 3, 4, 5, 7, 8})


def test_identity_parity():
    g = C.identity_parity(3, 3)
    assert g.tolist() == [[1, 0, 0, 2], [0, 1, 0, 2], [0, 0, 1, 2]]
    assert check(g, K.ASBATCH, 2)


@given(st.integers(1, 3), st.integers(1, 4), st.sampled_from([2, 3]))
def test_lbub_upper_shape_and_level(k, t, q):
    g = C.lbub_upper(k, t, q)
    assert g.n == k * ((t + 1) // 2) + t // 2
    if g.n <= 10:
        assert check(g, K.ASPIR, t)


@pytest.mark.parametrize("n,k,q", [(7, 3, 8), (5, 2, 5), (9, 4, 9), (4, 2, 4)])
def test_rs_is_mds(n, k, q):
    g = C.mds_rs(n, k, q)
    assert C.is_mds(g)
    assert min_distance(g) == n - k + 1
    assert dual_distance(g) == k + 1


def test_rs_validation():
    with pytest.raises(ValueError):
        C.mds_rs(9, 3, 8)
    with pytest.raises(ValueError):
        C.mds_rs(3, 4, 8)


@pytest.mark.parametrize("k", range(1, 6))
def test_simplex(k):
    g = C.simplex(k)
    assert g.n == 2**k - 1
    assert len({g.column(j) for j in range(g.n)}) == g.n
    assert min_distance(g) == 2 ** (k - 1)


def test_simplex_range():
    with pytest.raises(ValueError):
        C.simplex(6)


def test_block_diagonal_and_replicate():
    p = C.identity_parity(1, 2)
    b = C.block_diagonal(p, C.identity_parity(2, 2))
    assert b.shape == (3, 5)
    assert check(b, K.ASBATCH, 2)
    r = C.replicate(C.identity_parity(2, 2), 2)
    assert r.n == 6 and check(r, K.ASBATCH, 4)
    with pytest.raises(ValueError):
        C.block_diagonal(p, C.identity_parity(1, 3))
    with pytest.raises(ValueError):
        C.replicate(p, 0)


def test_family_spec():
    spec = C.FamilySpec("t3", k=4)
    assert spec.build() == C.t3_construction(4, 2)
    nested = C.FamilySpec("replicate", lam=3, parts=(C.FamilySpec("identity_parity", k=2),))
    assert nested.build().n == 9
    assert C.FamilySpec("paper_example", tag="gf2_4x8").build().n == 8
    assert C.FamilySpec("mds_rs", k=2, n=5, q=5).build() == C.mds_rs(5, 2, 5)
    for bad in (C.FamilySpec("nope"), C.FamilySpec("t3"), C.FamilySpec("mds_rs", k=2), C.FamilySpec("replicate")):
        with pytest.raises(ValueError):
            bad.build()
