"""Seeded property suites over S-rings.

Each suite returns a :class:`SuiteResult`; suites take explicit S-ring lists
or a seed so that results are reproducible.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .autgroups import AutSubgroup, automorphism_group, center_of_aut, enumerate_aut_subgroups
from .characters import orthogonal_subgroup
from .enumeration import all_sring_partitions, enumerate_srings
from .groups import AbelianGroup, Section, Subgroup, make_group, whole_group
from .srings import (SRing, a_subgroups, cayley_isomorphic, closure, direct_projections, dual_sring,
                     is_cyclotomic, is_dense, is_tensor_decomposition, is_wreath,
                     restrict_to_section, seed_labels, verify_sring, Violation)
from .structure import (SubdirectProduct, center_images, check_projection,
                        construct_k, orbit_sizes, projection_data, subdirect_product, standard_group,
                        FactorSetError)

# orbit-size multisets of the standard groups, one per fibre-count pair
STANDARD_GROUP_ORBITS = {
    (1, 1): [1, 2, 6],
    (1, 2): [1, 1, 1, 6],
    (2, 1): [1, 2, 3, 3],
    (2, 2): [1, 3, 3, 1, 1],
    (3, 1): [1, 2, 2, 2, 2],
    (6, 2): [1] * 9,
}


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def check(self, ok: bool, message: str) -> None:
        self.checked += 1
        if not ok:
            self.failures.append(message)

    def to_dict(self) -> dict:
        return {"suite": self.name, "passed": self.passed, "checked": self.checked, "failures": self.failures[:20]}


def _label(A: SRing) -> str:
    return f"{A.group.spec}/rank{A.rank}"


# -- partition invariants ---------------------------------------------------------------

def multiplier_invariance(A: SRing) -> bool:
    return all(A.image(s) == A for s in center_of_aut(A.group).perms)


def coset_intersections_constant(A: SRing) -> bool:
    G = A.group
    for H in a_subgroups(A):
        for X in A.basic_sets:
            x = np.array(X)
            cnt = H.mask[G.sub_table[np.ix_(x, x)]].sum(axis=1)
            if np.any(cnt != cnt[0]):
                return False
    return True


def factor_projection_checks(A: SRing) -> bool:
    """Projections onto complementary A-subgroups are basic; ``A`` refines the tensor product."""
    G = A.group
    subs = a_subgroups(A)
    for C, D in itertools.combinations(subs, 2):
        if C.order * D.order != G.order or len(set(C.elements) & set(D.elements)) != 1:
            continue
        pc, pd = direct_projections(G, C, D)
        basic = set(A.basic_sets)
        for X in A.basic_sets:
            if tuple(sorted(set(pc[list(X)].tolist()))) not in basic:
                return False
            if tuple(sorted(set(pd[list(X)].tolist()))) not in basic:
                return False
        tensor = A.labels[pc] * A.rank + A.labels[pd]
        if not A.refines(tensor):
            return False
        # equality when one factor restriction is the group ring
        c_full = len({int(A.labels[c]) for c in C.elements}) == C.order
        d_full = len({int(A.labels[d]) for d in D.elements}) == D.order
        if (c_full or d_full) and not is_tensor_decomposition(A, C, D):
            return False
    return True


def closure_fixpoint(A: SRing) -> bool:
    return closure(A.group, A.basic_sets) == A


def partition_suite(rings: Iterable[SRing]) -> SuiteResult:
    res = SuiteResult("partition")
    for A in rings:
        res.check(not isinstance(verify_sring(A.group, A.basic_sets), Violation), f"{_label(A)}: axioms")
        res.check(multiplier_invariance(A), f"{_label(A)}: central multipliers")
        res.check(coset_intersections_constant(A), f"{_label(A)}: coset intersections")
        res.check(factor_projection_checks(A), f"{_label(A)}: factor projections")
        res.check(closure_fixpoint(A), f"{_label(A)}: closure fixpoint")
    return res


# -- duality ---------------------------------------------------------------------------------

def _section_ring(A: SRing, U: Subgroup, L: Subgroup) -> SRing | None:
    S = Section(U, L)
    if S.quotient is None:
        return None
    return restrict_to_section(A, S)


def duality_checks(A: SRing) -> list[tuple[str, bool]]:
    G = A.group
    D = dual_sring(A)
    out = [("rank", D.rank == A.rank), ("double dual", cayley_isomorphic(dual_sring(D), A))]
    asubs = a_subgroups(A)
    dsubs = {H.elements for H in a_subgroups(D)}
    perp = {H.elements: orthogonal_subgroup(H) for H in asubs}
    # (1) lattice antiisomorphism
    images = {perp[H.elements].elements for H in asubs}
    lattice = images == dsubs and all(
        (H <= K) == (perp[K.elements] <= perp[H.elements]) for H in asubs for K in asubs)
    out.append(("antiisomorphism", lattice))
    # (2) sections
    ok2 = True
    one = Subgroup(G, (0,), ())
    full = whole_group(G)
    for H in asubs:
        Hp = perp[H.elements]
        a_h, d_q = _section_ring(A, H, one), _section_ring(D, full, Hp)
        if (a_h is None) != (d_q is None) or (a_h is not None and not cayley_isomorphic(dual_sring(a_h), d_q)):
            ok2 = False
        a_q, d_h = _section_ring(A, full, H), _section_ring(D, Hp, one)
        if (a_q is None) != (d_h is None) or (a_q is not None and not cayley_isomorphic(dual_sring(a_q), d_h)):
            ok2 = False
    out.append(("sections", ok2))
    # (3) cyclotomic iff dual cyclotomic, with the same group order
    MA, MD = is_cyclotomic(A), is_cyclotomic(D)
    out.append(("cyclotomic", (MA is None) == (MD is None) and (MA is None or MA.order == MD.order)))
    # (4) tensor decompositions correspond
    ok4 = True
    for C, E in itertools.combinations(asubs, 2):
        if C.order * E.order == G.order and len(set(C.elements) & set(E.elements)) == 1:
            if is_tensor_decomposition(A, C, E) != is_tensor_decomposition(D, perp[E.elements], perp[C.elements]):
                ok4 = False
    out.append(("tensor", ok4))
    # (5) U/L-wreath iff L^perp/U^perp-wreath
    ok5 = all(is_wreath(A, U, L) == is_wreath(D, perp[L.elements], perp[U.elements])
              for U in asubs for L in asubs if L <= U)
    out.append(("wreath", ok5))
    return out


def duality_suite(rings: Iterable[SRing]) -> SuiteResult:
    res = SuiteResult("dual")
    for A in rings:
        for name, ok in duality_checks(A):
            res.check(ok, f"{_label(A)}: {name}")
    return res


# -- closure ---------------------------------------------------------------------------------

SMALL_GROUPS = [[2], [3], [4], [5], [6], [7], [8], [9], [2, 2], [2, 4], [2, 2, 2], [3, 3], [2, 3]]

_ALL_RINGS: dict[AbelianGroup, list[SRing]] = {}


def _all_rings(G: AbelianGroup) -> list[SRing]:
    if G not in _ALL_RINGS:
        _ALL_RINGS[G] = all_sring_partitions(G)
    return _ALL_RINGS[G]


def random_seed_blocks(rng: random.Random, G: AbelianGroup) -> list[list[int]]:
    n = G.order
    blocks = []
    for _ in range(rng.randint(1, 3)):
        k = rng.randint(1, max(1, n - 1))
        blocks.append(sorted(rng.sample(range(1, n), k)))
    return blocks


def closure_trial(G: AbelianGroup, blocks) -> list[tuple[str, bool]]:
    A = closure(G, blocks)
    seed = seed_labels(G, blocks)
    refining = [B for B in _all_rings(G) if B.refines(seed)]
    coarsest = all(B.refines(A.labels) for B in refining)
    contains = any(B == A for B in refining)
    idem = closure(G, A.basic_sets) == A
    finer_seed = [list(b) for b in blocks] + [random.Random(len(blocks)).sample(range(1, G.order), 1)]
    monotone = closure(G, finer_seed).refines(A)
    return [("coarsest", coarsest and contains), ("idempotent", idem), ("monotone", monotone)]


def closure_suite(seed: int = 0, count: int = 200) -> SuiteResult:
    res = SuiteResult("closure")
    rng = random.Random(seed)
    for t in range(count):
        G = make_group(SMALL_GROUPS[t % len(SMALL_GROUPS)])
        blocks = random_seed_blocks(rng, G)
        for name, ok in closure_trial(G, blocks):
            res.check(ok, f"trial {t} on {G.spec} {blocks}: {name}")
    return res


# -- standard groups -------------------------------------------------------------------------

def standard_groups_suite() -> SuiteResult:
    res = SuiteResult("standard-groups")
    for k, expected in STANDARD_GROUP_ORBITS.items():
        U, U0 = standard_group(*k)
        res.check(orbit_sizes(U0) == sorted(expected), f"{k}: orbit sizes {orbit_sizes(U0)}")
    return res


# -- subdirect products ---------------------------------------------------------------------

SUBDIRECT_FACTORS = [
    ([3], [2]), ([3], [5]), ([3], [7]), ([3, 3], [5]), ([3, 3], [7]), ([3, 3], [2]), ([3, 3], [3]),
    ([5], [7]), ([7], [3]), ([2, 2], [7]), ([2, 2], [5]), ([4], [5]), ([9], [5]), ([5], [5]),
    ([2, 2], [3]), ([7], [7]), ([2, 2, 2], [7]), ([8], [7]), ([4, 2], [7]), ([3], [9]),
]


def _random_orbit_data(rng: random.Random, G: AbelianGroup):
    aut = automorphism_group(G)
    gens = [aut.perms[rng.randrange(aut.order)] for _ in range(rng.randint(1, 2))]
    U = AutSubgroup.generated(G, gens)
    x = rng.randrange(1, G.order)
    return U, U.orbit(x)


def _quotient_action(U: AutSubgroup, blocks) -> set[tuple[int, ...]] | None:
    from .structure import block_action
    act = block_action(U, blocks)
    return None if act is None else {tuple(int(v) for v in r) for r in act}


def random_subdirect_instance(rng: random.Random, max_tries: int = 500) -> SubdirectProduct:
    """Random data (U0 normal in U on A, V0 normal in V on P, bijection f) with isomorphic
    regular quotient actions, and the resulting subdirect product."""
    for _ in range(max_tries):
        fa, fp = rng.choice(SUBDIRECT_FACTORS)
        GA, GP = make_group(fa), make_group(fp)
        U, XA = _random_orbit_data(rng, GA)
        V, XP = _random_orbit_data(rng, GP)
        U0 = rng.choice([N for N in enumerate_aut_subgroups(U) if U.normalizes(N)])
        V0 = rng.choice([N for N in enumerate_aut_subgroups(V) if V.normalizes(N)])
        ba, bp = sorted(U0.orbits(XA)), sorted(V0.orbits(XP))
        k = len(ba)
        if k != len(bp) or k > 6:
            continue
        qa, qp = _quotient_action(U, ba), _quotient_action(V, bp)
        if qa is None or qp is None or len(qa) != k or len(qp) != k:
            continue
        # bijections sigma with block i of A paired to block sigma(i) of P
        good = []
        for sigma in itertools.permutations(range(k)):
            inv = np.argsort(sigma)
            conj = {tuple(int(sigma[r[inv[j]]]) for j in range(k)) for r in qa}
            if conj == qp:
                good.append(sigma)
        if not good:
            continue
        sigma = rng.choice(good)
        f = {ba[i]: bp[sigma[i]] for i in range(k)}
        return subdirect_product(U, V, U0, V0, f, XA, XP)
    raise RuntimeError("no admissible subdirect instance found")


def subdirect_suite(seed: int = 0, count: int = 50) -> SuiteResult:
    res = SuiteResult("subdirect")
    rng = random.Random(seed)
    for t in range(count):
        sd = random_subdirect_instance(rng)
        res.check(sd.is_orbit, f"instance {t}: union is not a single orbit")
        res.check(sd.in_aut, f"instance {t}: K is not inside Aut(A) x Aut(P)")
    return res


# -- dense S-rings over E9 x Cp -----------------------------------------------------------------

def dense_structure_checks(A: SRing) -> list[tuple[str, bool]]:
    out = []
    out.append(("cyclotomic", is_cyclotomic(A) is not None))
    for X in A.basic_sets:
        try:
            pd = projection_data(A, X)
            out.append((f"projection {X[:3]}", check_projection(A, pd).ok))
        except FactorSetError:
            pass
        sd = construct_k(A, X)
        out.append((f"K(X) for {X[:3]}", sd is not None))
        if sd is not None:
            # central images of X are orbits of K(X)
            K = sd.K
            orbs = set(K.orbits())
            out.append((f"central images {X[:3]}", all(Y in orbs for Y in center_images(A, X)
                                                        if Y in set(A.basic_sets))))
    return out


def structure_suite(rings: Iterable[SRing]) -> SuiteResult:
    res = SuiteResult("structure")
    for A in rings:
        if not is_dense(A):
            continue
        for name, ok in dense_structure_checks(A):
            res.check(ok, f"{_label(A)}: {name}")
    return res


# -- registry --------------------------------------------------------------------------------

def default_rings() -> list[SRing]:
    rings = []
    for orders in ([3, 3], [2, 3, 3]):
        rings.extend(enumerate_srings(make_group(orders)).srings())
    return rings


def run_suite(name: str, seed: int = 0, count: int | None = None) -> SuiteResult:
    if name == "partition":
        return partition_suite(default_rings())
    if name == "dual":
        return duality_suite(default_rings())
    if name == "closure":
        return closure_suite(seed, 200 if count is None else count)
    if name == "standard-groups":
        return standard_groups_suite()
    if name == "subdirect":
        return subdirect_suite(seed, 50 if count is None else count)
    if name == "structure":
        from .enumeration import sample_generated
        G = make_group([3, 3, 5])
        return structure_suite(sample_generated(G, 40 if count is None else count, seed))
    raise KeyError(name)


SUITES = ("partition", "dual", "closure", "standard-groups", "subdirect", "structure")
