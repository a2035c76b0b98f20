from functools import lru_cache

import numpy as np
import pytest
from hypothesis import given, strategies as st

from schurlab.autgroups import automorphism_group
from schurlab.enumeration import all_sring_partitions
from schurlab.groups import enumerate_subgroups, make_group
from schurlab.srings import (InvalidPartitionError, SRing, Violation, a_subgroups, canonical_key, cayley_isomorphic,
                             closure, dual_sring, group_ring, is_cyclotomic, is_tensor_decomposition, is_wreath,
                             tensor_product, trivial_sring, verify_sring, wreath)

SMALL = [[3, 3], [2, 4], [8], [2, 3], [2, 2, 2], [9]]


@lru_cache(maxsize=None)
def _partitions(orders):
    return all_sring_partitions(make_group(orders))


def partitions_of(orders):
    return _partitions(tuple(orders))


def test_axiom_violations(e9):
    assert verify_sring(e9, [[0, 1], list(range(2, 9))]).axiom == "S1"
    assert verify_sring(e9, [[0], [1], list(range(2, 9))]).axiom == "S2"
    x, y = e9.index((1, 0)), e9.index((0, 1))
    X = [x, e9.neg[x], y, e9.neg[y]]
    res = verify_sring(e9, [[0], X, [g for g in range(1, 9) if g not in X][:2],
                            [g for g in range(1, 9) if g not in X][2:]])
    assert isinstance(res, Violation) and not res


def test_malformed_partition(e9):
    with pytest.raises(InvalidPartitionError):
        verify_sring(e9, [[0], [1, 2, 3]])
    with pytest.raises(InvalidPartitionError):
        verify_sring(e9, [[0, 1], [1, 2, 3, 4, 5, 6, 7, 8]])
    with pytest.raises(InvalidPartitionError):
        verify_sring(e9, [[0], [], list(range(1, 9))])


def test_trivial_and_group_ring(e9):
    assert trivial_sring(e9).rank == 2
    assert group_ring(e9).rank == 9
    assert isinstance(verify_sring(e9, trivial_sring(e9).basic_sets), SRing)


def test_json_roundtrip(e9_catalog):
    for A in e9_catalog.srings():
        assert SRing.from_dict(A.to_dict()) == A


def test_from_dict_rejects_non_sring():
    d = {"group": [3, 3], "basic_sets": [[[0, 0]], [[1, 0]], [[2, 0], [0, 1], [0, 2], [1, 1], [1, 2], [2, 1], [2, 2]]]}
    with pytest.raises(InvalidPartitionError):
        SRing.from_dict(d)


@pytest.mark.parametrize("orders", SMALL)
def test_closure_is_coarsest_on_random_seeds(orders):
    G = make_group(orders)
    rings = partitions_of(orders)
    rng = np.random.default_rng(7)
    for _ in range(10):
        blocks = [rng.choice(G.order, size=rng.integers(1, G.order), replace=False).tolist()
                  for _ in range(rng.integers(1, 3))]
        A = closure(G, blocks)
        assert isinstance(verify_sring(G, A.basic_sets), SRing)
        for b in blocks:
            assert A.is_union_of_classes(b)
        for B in rings:
            if all(B.is_union_of_classes(b) for b in blocks):
                assert B.refines(A)


@given(st.integers(0, 47), st.integers(0, 9))
def test_automorphic_image_is_sring(i, j):
    G = make_group([3, 3])
    rings = partitions_of([3, 3])
    A = rings[j % len(rings)]
    s = automorphism_group(G).perms[i]
    B = A.image(s)
    assert isinstance(verify_sring(G, B.basic_sets), SRing)
    assert canonical_key(B) == canonical_key(A)
    assert cayley_isomorphic(A, B)


@pytest.mark.parametrize("orders", [[3, 3], [2, 4], [9], [2, 3], [2, 2, 2]])
def test_duality(orders):
    for A in partitions_of(orders):
        D = dual_sring(A)
        assert D.rank == A.rank
        assert isinstance(verify_sring(A.group, D.basic_sets), SRing)
        assert cayley_isomorphic(dual_sring(D), A)
        assert len(a_subgroups(D)) == len(a_subgroups(A))


def test_tensor_of_c3_rings(e9):
    c3 = make_group([3])
    A = tensor_product(group_ring(c3), trivial_sring(c3))
    assert A.group == e9
    assert A.rank == 6
    C, D = [H for H in enumerate_subgroups(e9) if H.order == 3 and H.elements in
            ((0, 1, 2), (0, 3, 6))]
    assert is_tensor_decomposition(A, C, D)


def test_wreath_of_c3_rings(e9):
    c3 = make_group([3])
    U = next(H for H in enumerate_subgroups(e9) if H.elements == (0, 1, 2))
    A = wreath(group_ring(c3), trivial_sring(c3), U)
    assert A.rank == 4
    assert is_wreath(A, U, U)


def test_cyclotomic_detection(e9_catalog):
    cyc = [A for A in e9_catalog.srings() if is_cyclotomic(A) is not None]
    assert any(A.rank == 9 for A in cyc) and any(A.rank == 2 for A in cyc)
