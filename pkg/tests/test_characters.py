import numpy as np
import pytest
from hypothesis import given, strategies as st

from schurlab.characters import (Character, CyclotomicInteger, character_sum, cyclotomic_coeffs,
                                 orthogonal_subgroup, pairing_exponents)
from schurlab.groups import enumerate_subgroups, make_group


def test_cyclotomic_coeffs():
    assert cyclotomic_coeffs(3) == (1, 1, 1)
    assert cyclotomic_coeffs(4) == (1, 0, 1)
    assert cyclotomic_coeffs(6) == (1, -1, 1)


@pytest.mark.parametrize("m", [3, 4, 6, 9, 15, 21])
def test_roots_sum_to_zero(m):
    total = CyclotomicInteger.from_exponent_counts(m, [1] * m)
    assert total.is_zero()


@given(st.sampled_from([3, 5, 6, 9, 15]), st.lists(st.integers(-3, 3), min_size=1, max_size=6),
       st.lists(st.integers(-3, 3), min_size=1, max_size=6))
def test_exact_arithmetic_matches_complex(m, a, b):
    x = CyclotomicInteger.from_exponent_counts(m, (a + [0] * m)[:m])
    y = CyclotomicInteger.from_exponent_counts(m, (b + [0] * m)[:m])
    assert abs((x * y).to_complex() - x.to_complex() * y.to_complex()) < 1e-12
    assert abs((x + y).to_complex() - x.to_complex() - y.to_complex()) < 1e-12


def test_character_orthogonality():
    G = make_group([3, 3])
    for y in range(1, 9):
        assert character_sum(Character(G, y), range(9)).is_zero()
    assert character_sum(Character(G, 0), range(9)).coeffs[0] == 9


@pytest.mark.parametrize("orders", [[3, 3], [2, 4], [3, 9], [2, 3, 3]])
def test_orthogonal_is_antiisomorphism(orders):
    G = make_group(orders)
    subs = enumerate_subgroups(G)
    perp = {H: orthogonal_subgroup(H) for H in subs}
    for H in subs:
        assert perp[H].order * H.order == G.order
        assert orthogonal_subgroup(perp[H]) == H
    for H in subs:
        for K in subs:
            if H <= K:
                assert perp[K] <= perp[H]


def test_pairing_symmetric():
    E = pairing_exponents(make_group([3, 9]))
    assert np.array_equal(E, E.T)
