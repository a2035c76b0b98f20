"""Acceptance criteria A1-A11, one PASS/FAIL line each in the terminal summary."""
import time
from collections import Counter

import pytest

from schurlab.enumeration import brute_force_oracle, enumerate_srings, sample_generated
from schurlab.groups import make_group
from schurlab.invariants import (closure_suite, duality_suite, partition_suite, subdirect_suite, standard_groups_suite)
from schurlab.schurity import is_schurian
from schurlab.srings import SRing, canonical_key, is_cyclotomic, is_dense, verify_sring
from schurlab.structure import classify_e9, classify_trichotomy, singer_subgroups

ORACLE_GROUPS = [[2], [3], [4], [5], [6], [7], [8], [9], [2, 2], [2, 4], [2, 2, 2], [3, 3], [2, 3]]
SAMPLE_TARGET = 500
SAMPLE_ATTEMPTS = 20_000


@pytest.fixture(scope="module")
def report(acceptance_log):
    def emit(crit: str, ok: bool, detail: str) -> None:
        line = f"{crit} {'PASS' if ok else 'FAIL'}: {detail}"
        acceptance_log.append(line)
        print(line)
    return emit


@pytest.fixture(scope="module")
def timed_catalogs():
    out = {}
    for name, orders in [("E9", [3, 3]), ("order18", [3, 3, 2]), ("order27", [3, 3, 3])]:
        t = time.monotonic()
        cat = enumerate_srings(make_group(orders))
        out[name] = (cat, time.monotonic() - t)
    return out


def test_a1_e9_enumeration(report, timed_catalogs):
    cat, dt = timed_catalogs["E9"]
    census = Counter(classify_e9(A).tag for A in cat.srings())
    ok = (len(cat) == 10 and cat.ranks() == [2, 3, 3, 4, 4, 4, 5, 5, 6, 9]
          and census == {"cyclotomic-over-GF9": 3, "tensor-of-C3-rings": 3, "wreath-of-C3-rings": 4} and dt < 10)
    report("A1", ok, f"{len(cat)} S-rings, ranks {cat.ranks()}, census {dict(sorted(census.items()))}, {dt:.2f}s")
    assert ok


def test_a2_e9_schurian(report, timed_catalogs):
    cat, _ = timed_catalogs["E9"]
    worst, verdicts = 0.0, []
    for A in cat.srings():
        t = time.monotonic()
        verdicts.append(is_schurian(A).schurian)
        worst = max(worst, time.monotonic() - t)
    ok = all(verdicts) and worst < 1.0
    report("A2", ok, f"{sum(verdicts)}/10 schurian, slowest {worst:.3f}s")
    assert ok


def test_a3_small_catalogs_schurian(report, timed_catalogs):
    parts, ok = [], True
    for name, golden, budget in [("order18", 59, 1800), ("order27", 68, 4 * 3600)]:
        cat, dt = timed_catalogs[name]
        t = time.monotonic()
        bad = [A for A in cat.srings() if not is_schurian(A).schurian]
        ds = time.monotonic() - t
        good = cat.complete and len(cat) == golden and not bad and dt + ds <= budget
        ok &= good
        parts.append(f"{name}: {len(cat)} records (golden {golden}), {len(bad)} non-schurian, "
                     f"enum {dt:.1f}s + schurity {ds:.1f}s")
    report("A3", ok, "; ".join(parts))
    assert ok


def _check_ring(A: SRing) -> list[str]:
    problems = []
    if not isinstance(verify_sring(A.group, A.basic_sets), SRing):
        problems.append("verify")
    if not is_schurian(A).schurian:
        problems.append("schurian")
    if not classify_trichotomy(A).conforming:
        problems.append("nonconforming")
    if is_dense(A) and is_cyclotomic(A) is None:
        problems.append("dense-not-cyclotomic")
    return problems


@pytest.mark.parametrize("p", [5, 7])
def test_a4_sampling_campaign(report, p):
    G = make_group([3, 3, p])
    t = time.monotonic()
    catalog = enumerate_srings(G)
    full = {canonical_key(A) for A in catalog.srings()}
    samples = sample_generated(G, SAMPLE_TARGET, seed=0, max_attempts=SAMPLE_ATTEMPTS)
    outside = sum(canonical_key(A) not in full for A in samples)
    # (a)-(d) on every sample, and on the whole catalog as the stronger statement
    problems = Counter()
    for A in catalog.srings():
        problems.update(_check_ring(A))
    dt = time.monotonic() - t
    props_ok = not problems and outside == 0
    ok = props_ok and len(samples) >= SAMPLE_TARGET and dt <= 3600
    detail = (f"p={p}: {len(samples)} distinct closure samples (target {SAMPLE_TARGET}); the complete catalog has "
              f"only {len(catalog)} classes, so the target is unattainable; properties (a)-(d) "
              f"{'hold on every sample and every catalog record' if props_ok else f'violated: {dict(problems)}'}, "
              f"{dt:.0f}s")
    report("A4", ok, detail)
    assert ok


def test_a5_duality(report, timed_catalogs):
    rings = [A for cat, _ in timed_catalogs.values() for A in cat.srings()]
    res = duality_suite(rings)
    report("A5", res.passed, f"{res.checked} duality checks on {len(rings)} records, {len(res.failures)} failures")
    assert res.passed


def test_a6_partition_suites(report, timed_catalogs):
    rings = [A for cat, _ in timed_catalogs.values() for A in cat.srings()]
    res = partition_suite(rings)
    report("A6", res.passed, f"{res.checked} multiplier / coset-intersection checks on {len(rings)} records, "
                             f"{len(res.failures)} failures")
    assert res.passed


def test_a7_oracle_equivalence(report):
    t = time.monotonic()
    mismatches = []
    for orders in ORACLE_GROUPS:
        G = make_group(orders)
        a = [r.canonical for r in enumerate_srings(G).records]
        b = [r.canonical for r in brute_force_oracle(G).records]
        if a != b:
            mismatches.append(G.spec)
    dt = time.monotonic() - t
    ok = not mismatches and dt < 300
    report("A7", ok, f"{len(ORACLE_GROUPS)} groups, mismatches {mismatches or 'none'}, {dt:.1f}s")
    assert ok


def test_a8_standard_groups(report):
    res = standard_groups_suite()
    report("A8", res.passed, f"{res.checked} rows, {len(res.failures)} failures")
    assert res.passed


def test_a9_subdirect(report):
    res = subdirect_suite(seed=0, count=50)
    report("A9", res.passed, f"{res.checked} checks over 50 seeded instances, {len(res.failures)} failures")
    assert res.passed


def test_a10_singer_count(report):
    n = len(singer_subgroups())
    report("A10", n == 3, f"{n} cyclic subgroups of order 8 in Aut(E9)")
    assert n == 3


def test_a11_closure_coarsest(report):
    res = closure_suite(seed=0, count=200)
    report("A11", res.passed, f"{res.checked} checks over 200 seeded trials, {len(res.failures)} failures")
    assert res.passed
