import random

import pytest
from hypothesis import given, settings, strategies as st

from schurlab.autgroups import center_of_aut
from schurlab.groups import make_group
from schurlab.invariants import (SUITES, closure_trial, coset_intersections_constant, duality_checks,
                                 multiplier_invariance, random_seed_blocks, run_suite)
from schurlab.srings import closure


@pytest.mark.parametrize("name", ["partition", "dual", "standard-groups", "structure"])
def test_suite_passes(name):
    res = run_suite(name)
    assert res.passed, res.failures[:5]
    assert res.checked > 0


def test_seeded_suites_small_counts():
    assert run_suite("closure", seed=3, count=20).passed
    res = run_suite("subdirect", seed=7, count=10)
    assert res.passed and res.checked >= 10


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_suite("nope")


def test_suite_names():
    assert set(SUITES) == {"partition", "dual", "closure", "standard-groups", "subdirect", "structure"}


def test_multiplier_fixes_order18(order18_catalog):
    for A in order18_catalog.srings():
        assert multiplier_invariance(A)
        assert coset_intersections_constant(A)


@settings(max_examples=30)
@given(st.integers(0, 2**32 - 1), st.sampled_from([[3, 3], [2, 4], [9], [2, 2, 2], [2, 3]]))
def test_closure_trials(seed, orders):
    G = make_group(orders)
    blocks = random_seed_blocks(random.Random(seed), G)
    assert all(ok for _, ok in closure_trial(G, blocks))


@settings(max_examples=25)
@given(st.lists(st.lists(st.integers(1, 44), min_size=1, max_size=8), min_size=1, max_size=2))
def test_closure_is_multiplier_invariant(blocks):
    # every S-ring over an abelian group is fixed by the central automorphisms
    A = closure(make_group([3, 3, 5]), blocks)
    assert multiplier_invariance(A)
    assert center_of_aut(A.group).order == 8


@settings(max_examples=15)
@given(st.lists(st.lists(st.integers(1, 26), min_size=1, max_size=6), min_size=1, max_size=2))
def test_duality_on_closures(blocks):
    A = closure(make_group([3, 9]), blocks)
    failed = [name for name, ok in duality_checks(A) if not ok]
    assert not failed
