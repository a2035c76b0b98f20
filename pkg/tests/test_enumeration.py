import pytest
from hypothesis import given, settings, strategies as st

from schurlab.enumeration import (BudgetExceeded, EnumerationTask, brute_force_oracle, enumerate_srings,
                                  make_catalog, sample_generated)
from schurlab.groups import make_group
from schurlab.srings import SRing, canonical_key, closure, verify_sring

ORACLE_GROUPS = [[2], [3], [4], [5], [6], [7], [8], [9], [2, 2], [2, 4], [2, 2, 2], [3, 3], [2, 3]]

# complete catalogs produced by the enumerator, cross-checked by random closure sampling
GOLDEN_COUNTS = {
    (2, 9): 42, (2, 3, 3): 59, (27,): 25, (3, 9): 117, (3, 3, 3): 68, (16,): 37, (4, 4): 83,
    (2, 2, 2, 2): 43, (5, 5): 33,
}
SLOW_GOLDEN = {(3, 3, 5): 209, (3, 3, 7): 264}


@pytest.mark.parametrize("orders", ORACLE_GROUPS)
def test_matches_brute_force(orders):
    G = make_group(orders)
    got = enumerate_srings(G)
    ref = brute_force_oracle(G)
    assert [r.canonical for r in got.records] == [r.canonical for r in ref.records]


def test_e9_catalog(e9_catalog):
    assert len(e9_catalog) == 10
    assert e9_catalog.ranks() == [2, 3, 3, 4, 4, 4, 5, 5, 6, 9]
    assert e9_catalog.complete


@pytest.mark.parametrize("orders,count", [(k, v) for k, v in GOLDEN_COUNTS.items() if k != (3, 3, 3)])
def test_golden_counts(orders, count):
    assert len(enumerate_srings(make_group(orders))) == count


def test_records_are_srings_and_distinct(order18_catalog):
    keys = set()
    for A in order18_catalog.srings():
        assert isinstance(verify_sring(A.group, A.basic_sets), SRing)
        keys.add(canonical_key(A))
    assert len(keys) == len(order18_catalog) == 59


def test_budget_truncation():
    with pytest.raises(BudgetExceeded) as info:
        enumerate_srings(make_group([3, 3, 5]), time_budget=0.5)
    cat = info.value.catalog
    assert not cat.complete
    assert len(cat) < 209


def test_progress_callback():
    seen = []
    enumerate_srings(EnumerationTask(make_group([2, 2, 2]), progress=seen.append))
    assert seen and all(isinstance(s, dict) for s in seen)


def test_make_catalog_deduplicates(e9_catalog):
    rings = e9_catalog.srings()
    assert len(make_catalog(rings[0].group, rings + rings)) == 10


def test_samples_are_distinct_closures():
    G = make_group([2, 3, 3])
    rings = sample_generated(G, 20, seed=3)
    assert len(rings) == 20
    assert len({canonical_key(A) for A in rings}) == 20
    assert sample_generated(G, 20, seed=3) == rings


@settings(max_examples=15)
@given(st.integers(0, 10_000))
def test_samples_land_in_full_catalog(seed):
    G = make_group([2, 3, 3])
    keys = {canonical_key(A) for A in _catalog18()}
    for A in sample_generated(G, 5, seed):
        assert canonical_key(A) in keys


_CACHE = {}


def _catalog18():
    if "c" not in _CACHE:
        _CACHE["c"] = enumerate_srings(make_group([2, 3, 3])).srings()
    return _CACHE["c"]


@settings(max_examples=25)
@given(st.lists(st.lists(st.integers(1, 17), min_size=1, max_size=6), min_size=1, max_size=3))
def test_closure_lands_in_catalog(blocks):
    keys = {canonical_key(A) for A in _catalog18()}
    assert canonical_key(closure(make_group([2, 3, 3]), blocks)) in keys


@pytest.mark.slow
def test_order27_golden():
    assert len(enumerate_srings(make_group([3, 3, 3]))) == 68


@pytest.mark.slow
@pytest.mark.parametrize("orders,count", list(SLOW_GOLDEN.items()))
def test_slow_golden_counts(orders, count):
    assert len(enumerate_srings(make_group(orders))) == count
