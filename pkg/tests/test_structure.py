import itertools
import random
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from schurlab.autgroups import AutSubgroup, automorphism_group
from schurlab.enumeration import enumerate_srings
from schurlab.groups import make_group
from schurlab.invariants import STANDARD_GROUP_ORBITS, random_subdirect_instance
from schurlab.srings import cyclotomic_sring, is_dense, trivial_sring
from schurlab.structure import (STANDARD_GROUPS, FactorSetError, GroupShapeError, NotDenseError, NotRegularError,
                                PairNotInTableError, QuotientMismatchError, check_projection,
                                check_regular_partition, classify_e9, classify_trichotomy,
                                conjugate_standard_pair, construct_k, group_type, orbit_sizes, projection_data,
                                regular_partitions, singer_subgroups, standard_pairs, subdirect_product,
                                standard_group_row, standard_group, uniform_partitions)


@pytest.fixture(scope="module")
def catalogs():
    return {p: enumerate_srings(make_group([3, 3, p])) for p in (2, 3, 5)}


def test_singer_subgroups():
    S = singer_subgroups()
    assert len(S) == 3
    assert all(M.order == 8 and M.is_cyclic for M in S)
    # a Singer group acts regularly on the non-identity elements
    assert all(orbit_sizes(M) == [1, 8] for M in S)


def test_e9_family_census(e9_catalog):
    tags = {}
    for A in e9_catalog.srings():
        tags.setdefault(classify_e9(A).tag, []).append(A.rank)
    assert sorted(tags["cyclotomic-over-GF9"]) == [2, 3, 5]
    assert sorted(tags["tensor-of-C3-rings"]) == [4, 6, 9]
    assert sorted(tags["wreath-of-C3-rings"]) == [3, 4, 4, 5]


def test_classify_e9_shape():
    with pytest.raises(GroupShapeError):
        classify_e9(trivial_sring(make_group([9])))


@pytest.mark.parametrize("kX,kY", sorted(STANDARD_GROUPS))
def test_standard_group_rows(kX, kY):
    row = standard_group_row(kX, kY)
    assert (group_type(row.U), group_type(row.U0)) == STANDARD_GROUPS[(kX, kY)]
    assert sorted(orbit_sizes(row.U0)) == sorted(STANDARD_GROUP_ORBITS[(kX, kY)])
    assert row.U0.issubgroup(row.U) and row.U.normalizes(row.U0)
    assert standard_group(kX, kY) == (row.U, row.U0)


def test_standard_groups_reject_other_pairs():
    with pytest.raises(PairNotInTableError):
        standard_group(4, 4)


def test_uniform_partitions_count():
    # set partitions of 4 points into equal blocks: 1 + 3 + 1
    assert len(uniform_partitions([1, 2, 3, 4])) == 5


def test_regular_partition_report(e9):
    A = trivial_sring(e9)
    X = tuple(range(1, 9))
    rep = check_regular_partition(A, X, [(x,) for x in X])
    assert rep.regular and rep.alpha == 0
    with pytest.raises(ValueError):
        check_regular_partition(A, X, [(1, 2)])


def test_standard_pairs_nonempty_for_every_basic_set(e9_catalog):
    for A in e9_catalog.srings():
        for X in A.basic_sets[1:]:
            parts = regular_partitions(A, X)
            assert parts
            for Pi in parts:
                assert standard_pairs(A, X, Pi), (A.basic_sets, X, Pi)


def test_non_regular_partition_rejected(e9):
    A = trivial_sring(e9)
    X = tuple(range(1, 9))
    bad = [p for p in uniform_partitions(X) if not check_regular_partition(A, X, p).regular][0]
    with pytest.raises(NotRegularError):
        standard_pairs(A, X, bad)


def _rank3_cyclotomic(e9):
    S = singer_subgroups()[0]
    gen = next(i for i in range(S.order) if S.element_order(i) == 8)
    sq = S.perms[gen][S.perms[gen]]
    return cyclotomic_sring(AutSubgroup.generated(e9, [sq]))


def test_rank3_cyclotomic_paired_partition_has_only_klein_pairs(e9):
    """Pins an observed exception: for the rank-3 cyclotomic ring and the
    partition {{x, y}, {-x, -y}} of a 4-element basic set, every standard pair
    has M isomorphic to E4 although the ring is not a tensor product.  The
    group induced on the blocks is still cyclic."""
    A = _rank3_cyclotomic(e9)
    assert A.rank == 3
    X = A.basic_sets[1]
    neg = e9.neg
    x = X[0]
    y = next(v for v in X if v not in (x, neg[x]))
    Pi = [(x, y), tuple(sorted((int(neg[x]), int(neg[y]))))]
    rep = check_regular_partition(A, X, Pi)
    assert rep.regular and rep.alpha == 0
    pairs = standard_pairs(A, X, Pi)
    assert pairs
    assert {group_type(p.M) for p in pairs} == {"E4"}


def test_conjugate_returns_input_when_few_blocks(e9):
    A = _rank3_cyclotomic(e9)
    X = A.basic_sets[1]
    checked = 0
    for Pi in regular_partitions(A, X):
        if len(Pi) != 2:
            continue
        for pair in standard_pairs(A, X, Pi):
            out = conjugate_standard_pair(pair, [[0, 1], [1, 0]], X, Pi)
            assert out.M == pair.M and out.L == pair.L
            checked += 1
    assert checked


def test_conjugate_standard_pair_for_singer_orbit(e9):
    A = cyclotomic_sring(singer_subgroups()[0])
    X = A.basic_sets[1]
    S = singer_subgroups()[0]
    L = S.sub([i for i in range(S.order) if S.element_order(i) in (1, 2)])
    Pi = sorted(L.orbits(X))
    pair = next(p for p in standard_pairs(A, X, Pi) if p.M == S)
    # a rotation of the 4 blocks, commuting with block inversion
    iota = [Pi.index(tuple(sorted(e9.neg[list(Y)].tolist()))) for Y in Pi]
    rot = None
    for perm in itertools.permutations(range(4)):
        c = np.array(perm)
        powers = [np.arange(4)]
        for _ in range(3):
            powers.append(c[powers[-1]])
        if len({tuple(p) for p in powers}) == 4 and all(np.array_equal(c[iota], np.array(iota)[c]) for c in powers):
            rot = [p.tolist() for p in powers]
            break
    assert rot is not None
    out = conjugate_standard_pair(pair, rot, X, Pi)
    assert out.L == pair.L


def test_trichotomy_counts(catalogs):
    c2 = Counter(classify_trichotomy(A).verdict for A in catalogs[2].srings())
    assert c2 == {"GeneralizedWreath": 46, "TrivialOrCyclotomic": 11, "TensorTrivialWithC3": 2}
    c5 = Counter(classify_trichotomy(A).verdict for A in catalogs[5].srings())
    assert c5 == {"GeneralizedWreath": 150, "TrivialOrCyclotomic": 57, "TensorTrivialWithC3": 2}


def test_trichotomy_shape_error():
    with pytest.raises(GroupShapeError):
        classify_trichotomy(trivial_sring(make_group([3, 9])))


def test_dense_rings_are_cyclotomic(catalogs):
    from schurlab.structure import verify_dense_cyclotomic
    dense = [A for A in catalogs[5].srings() if is_dense(A)]
    assert len(dense) == 56
    assert all(verify_dense_cyclotomic(A) for A in dense)
    with pytest.raises(NotDenseError):
        verify_dense_cyclotomic(trivial_sring(make_group([3, 3, 5])))


def test_projection_and_k(catalogs):
    for A in catalogs[5].srings():
        if not is_dense(A):
            continue
        for X in A.basic_sets[1:]:
            try:
                pd = projection_data(A, X)
            except FactorSetError:
                continue
            assert check_projection(A, pd).ok
            sd = construct_k(A, X)
            assert sd is not None and sd.is_orbit and sd.in_aut


def test_projection_errors():
    A = trivial_sring(make_group([3, 3, 5]))
    with pytest.raises(NotDenseError):
        projection_data(A, A.basic_sets[1])


@settings(max_examples=20)
@given(st.integers(0, 2**32 - 1))
def test_subdirect_union_is_orbit(seed):
    sd = random_subdirect_instance(random.Random(seed))
    assert sd.is_orbit
    assert sd.in_aut


def test_subdirect_rejects_mismatched_quotients():
    GP = make_group([5])
    U = singer_subgroups()[0]
    V = automorphism_group(GP)
    XA = tuple(range(1, 9))
    XP = (1, 2, 3, 4)
    # two blocks on the E9 side against four singletons on the C5 side
    U0 = U.sub([i for i in range(8) if U.element_order(i) in (1, 2, 4)])
    V0 = AutSubgroup.trivial(GP)
    blocks = sorted(U0.orbits(XA))
    f = {blocks[0]: (1,), blocks[1]: (2,)}
    with pytest.raises(QuotientMismatchError):
        subdirect_product(U, V, U0, V0, f, XA, XP)
