"""Enumeration of S-rings up to Cayley isomorphism.

The search state is an S-ring ``R`` together with a set of *final* classes
that are already known to be basic sets of the target S-ring.  At each node
the smallest non-final class ``C`` is resolved: either ``C`` itself is a
basic set, or the basic set through its least element ``y`` is a proper
subset ``X`` of ``C``, in which case ``R`` is replaced by the closure of the
split partition.  Pruning:

* inverse closure and the Schur multiplier theorem: ``X`` is a union of
  orbits of ``Z' = Stab(X)`` in the centre ``Z(Aut G)`` and meets every
  ``Z``-orbit in at most one ``Z'``-orbit;
* cheap structure-constant and coset-intersection tests on ``X``;
* closure consistency: the closure of the split must keep ``X`` and the
  final classes intact (closure is the coarsest S-ring refinement);
* ``Aut(G)`` canonicity: candidates ``X`` are generated orderly up to the
  stabiliser of the state and ``y``, and states isomorphic to a visited one
  are skipped.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from sympy.utilities.iterables import multiset_partitions

from .autgroups import AutSubgroup, automorphism_group, center_of_aut, enumerate_aut_subgroups
from .groups import AbelianGroup, TooLargeError, enumerate_subgroups
from .srings import (SRing, Violation, canonical_key, canonical_labels, closure,
                     refine_to_sring, rgs_rows, verify_sring)


class BudgetExceeded(RuntimeError):
    def __init__(self, message: str, catalog: "Catalog"):
        super().__init__(message)
        self.catalog = catalog


@dataclass
class CatalogRecord:
    sring: SRing
    canonical: tuple[int, ...]
    annotations: dict = field(default_factory=dict)

    @property
    def rank(self) -> int:
        return self.sring.rank

    def to_dict(self) -> dict:
        d = self.sring.to_dict()
        d["rank"] = self.rank
        d["canonical"] = list(self.canonical)
        d.update(self.annotations)
        return d


@dataclass
class Catalog:
    group: AbelianGroup
    records: list[CatalogRecord]
    complete: bool = True
    elapsed_s: float = 0.0

    def __len__(self):
        return len(self.records)

    def ranks(self) -> list[int]:
        return sorted(r.rank for r in self.records)

    def srings(self) -> list[SRing]:
        return [r.sring for r in self.records]


def make_catalog(G: AbelianGroup, rings, complete=True, elapsed=0.0) -> Catalog:
    recs = {}
    for A in rings:
        can = canonical_labels(G, A.labels)
        key = can.astype(np.int16).tobytes()
        if key not in recs:
            rec_ring = SRing(G, can)
            recs[key] = CatalogRecord(rec_ring, tuple(int(x) for x in can))
    records = sorted(recs.values(), key=lambda r: (r.rank, r.canonical))
    return Catalog(G, records, complete, elapsed)


# -- main search ---------------------------------------------------------------------

@dataclass
class EnumerationTask:
    group: AbelianGroup
    time_budget: float | None = None
    canonical_only: bool = True
    progress: Callable[[dict], None] | None = None


@dataclass
class _Stats:
    nodes: int = 0
    skipped: int = 0
    candidates: int = 0
    closures: int = 0
    found: int = 0


class _Search:
    def __init__(self, task: EnumerationTask):
        self.G = G = task.group
        self.task = task
        self.P = automorphism_group(G).perms
        self.Z = center_of_aut(G)
        self.deadline = None if task.time_budget is None else time.monotonic() + task.time_budget
        self.visited: set[bytes] = set()
        self.found: list[SRing] = []
        self.stats = _Stats()
        self.neg = G.neg
        self.subgroups = enumerate_subgroups(G)
        self._zsubs: dict[bytes, list[AutSubgroup]] = {}
        # Z-orbit id of every element
        zorb = np.full(G.order, -1, dtype=np.int64)
        for i, o in enumerate(self.Z.orbits()):
            zorb[list(o)] = i
        self.zorb = zorb

    # state canonisation --------------------------------------------------------------
    def _state_codes(self, R: np.ndarray, fin: np.ndarray, perms: np.ndarray) -> np.ndarray:
        return rgs_rows(R[perms]) * 2 + fin[perms]

    def _canon(self, R, fin):
        codes = self._state_codes(R, fin, self.P)
        best = codes[np.lexsort(codes.T[::-1])[0]]
        ident = codes[0]  # row 0 of the sorted Aut(G) table is the identity
        stab = self.P[np.all(codes == ident, axis=1)]
        return best.astype(np.int16).tobytes(), stab

    def _check_time(self):
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise TimeoutError

    # search ---------------------------------------------------------------------------
    def run(self):
        G = self.G
        R = closure(G, [range(1, G.order)]).labels.copy()
        fin = np.zeros(G.order, dtype=bool)
        self._visit(R, fin)

    def _finalize_singletons(self, R, fin):
        sizes = np.bincount(R)
        return fin | (sizes[R] == 1)

    def _visit(self, R, fin):
        self._check_time()
        G = self.G
        fin = self._finalize_singletons(R, fin)
        key, stab = self._canon(R, fin)
        if key in self.visited:
            self.stats.skipped += 1
            return
        self.visited.add(key)
        self.stats.nodes += 1
        if self.task.progress and self.stats.nodes % 200 == 0:
            self.task.progress(vars(self.stats).copy())
        if fin.all():
            self.found.append(SRing(G, R))
            self.stats.found += 1
            return
        sizes = np.bincount(R)
        open_classes = np.unique(R[~fin])
        c = min(open_classes.tolist(), key=lambda i: (int(sizes[i]), int(np.flatnonzero(R == i)[0])))
        C = np.flatnonzero(R == c)
        y = int(C[0])
        cinv = int(R[self.neg[y]])
        # option 1: C itself is a basic set
        fin1 = fin.copy()
        fin1[(R == c) | (R == cinv)] = True
        self._visit(R, fin1)
        # option 2: a proper subset through y
        Hy = stab[stab[:, y] == y]
        for X in self._candidates(R, fin, C, y, Hy):
            self.stats.candidates += 1
            if not self._prefilter(R, fin, X):
                continue
            lab = R.copy()
            lab[X] = R.max() + 1
            self.stats.closures += 1
            R2 = refine_to_sring(G, lab)
            if not self._consistent(R2, R, fin, X):
                continue
            fin2 = fin.copy()
            fin2[X] = True
            fin2[self.neg[X]] = True
            self._visit(R2, fin2)

    def _consistent(self, R2, R, fin, X) -> bool:
        sizes2 = np.bincount(R2)
        lx = R2[X]
        if np.any(lx != lx[0]) or sizes2[lx[0]] != len(X):
            return False
        f = np.flatnonzero(fin)
        if len(f):
            # every final class of R must survive as a class of R2
            reps = {}
            for v in f:
                reps.setdefault(int(R[v]), int(R2[v]))
            for v in f:
                if R2[v] != reps[int(R[v])]:
                    return False
            for cls, l2 in reps.items():
                if sizes2[l2] != np.count_nonzero(R == cls):
                    return False
        return True

    def _prefilter(self, R, fin, X) -> bool:
        G = self.G
        n = G.order
        mask = np.zeros(n, dtype=bool)
        mask[X] = True
        # product X * X^-1 must be constant on X and on every final class
        sub = G.sub_table[np.ix_(X, X)]  # x - x'
        coef = np.bincount(sub.ravel(), minlength=n)
        if np.any(coef[X] != coef[X[0]]):
            return False
        for cls in np.unique(R[fin]):
            vals = coef[R == cls]
            if np.any(vals != vals[0]):
                return False
        # |X cap (H + x)| independent of x for every R-subgroup H
        for H in self._r_subgroups(R):
            hm = H.mask
            cnt = hm[G.sub_table[np.ix_(X, X)]].sum(axis=1)
            if np.any(cnt != cnt[0]):
                return False
        return True

    def _r_subgroups(self, R):
        key = R.tobytes()
        if getattr(self, "_rsub_key", None) != key:
            sizes = np.bincount(R)
            out = []
            for H in self.subgroups[1:-1]:
                labs = np.unique(R[list(H.elements)])
                if sizes[labs].sum() == H.order:
                    out.append(H)
            self._rsub_key, self._rsub = key, out
        return self._rsub

    def _zsubgroups(self, Zs: AutSubgroup) -> list[AutSubgroup]:
        if Zs.key not in self._zsubs:
            self._zsubs[Zs.key] = enumerate_aut_subgroups(Zs)
        return self._zsubs[Zs.key]

    def _candidates(self, R, fin, C, y, Hy):
        """Proper subsets ``X`` of ``C`` through ``y``, orderly up to ``Hy``."""
        G = self.G
        cmask = np.zeros(G.order, dtype=bool)
        cmask[C] = True
        zp = self.Z.perms
        Zs = AutSubgroup(G, zp[np.all(cmask[zp[:, C]], axis=1)])
        for Zp in self._zsubgroups(Zs):
            units = Zp.orbits(C.tolist())
            umin = np.array([u[0] for u in units])
            uid = np.full(G.order, -1, dtype=np.int64)
            for i, u in enumerate(units):
                uid[list(u)] = i
            uy = int(uid[y])
            ugroup = self.zorb[umin]
            free = [i for i in range(len(units)) if ugroup[i] != ugroup[uy]]
            if not free and len(units) == 1:
                continue
            # unit permutation induced by Hy
            UP = uid[Hy[:, umin]]
            yield from self._orderly(units, free, ugroup, uy, UP, Zp, len(C))

    def _orderly(self, units, free, ugroup, uy, UP, Zp, csize):
        free_arr = np.array(free, dtype=np.int64)
        nontrivial = len(UP) > 1

        def canonical(chosen):
            if not nontrivial or not chosen:
                return True
            s = np.array(chosen)
            img = np.sort(UP[:, s], axis=1)
            # lexicographically smaller image exists?
            diff = img != s
            first = np.argmax(diff, axis=1)
            has = diff.any(axis=1)
            rows = np.flatnonzero(has)
            return not np.any(img[rows, first[rows]] < s[first[rows]])

        def emit(chosen):
            X = sorted(x for i in [uy] + chosen for x in units[i])
            if len(X) == csize:
                return None
            X = np.array(X)
            # Z' must be exactly the central stabiliser of X
            return X

        stack = [([], -1, frozenset())]
        while stack:
            self._check_time()
            chosen, last, used = stack.pop()
            X = emit(chosen)
            if X is not None and self._exact_stabilizer(X, Zp):
                yield X
            for j in reversed(free_arr[free_arr > last].tolist()):
                g = ugroup[j]
                if g in used:
                    continue
                nxt = chosen + [j]
                if canonical(nxt):
                    stack.append((nxt, j, used | {g}))

    def _exact_stabilizer(self, X, Zp) -> bool:
        zp = self.Z.perms
        mask = np.zeros(self.G.order, dtype=bool)
        mask[X] = True
        return int(np.all(mask[zp[:, X]], axis=1).sum()) == Zp.order


def enumerate_srings(task: EnumerationTask | AbelianGroup, time_budget: float | None = None) -> Catalog:
    if isinstance(task, AbelianGroup):
        task = EnumerationTask(task, time_budget)
    start = time.monotonic()
    search = _Search(task)
    try:
        search.run()
    except TimeoutError:
        cat = make_catalog(task.group, search.found, complete=False, elapsed=time.monotonic() - start)
        raise BudgetExceeded(f"enumeration of {task.group.spec} exceeded its budget", cat) from None
    cat = make_catalog(task.group, search.found, complete=True, elapsed=time.monotonic() - start)
    cat.stats = vars(search.stats)
    if task.progress:
        task.progress(dict(cat.stats, done=True))
    return cat


# -- independent oracle -----------------------------------------------------------------

def all_sring_partitions(G: AbelianGroup) -> list[SRing]:
    """Every S-ring over ``G`` (not up to isomorphism), by scanning set partitions."""
    if G.order > 10:
        raise TooLargeError("partition scan is limited to |G| <= 10")
    out = []
    for part in multiset_partitions(list(range(1, G.order))):
        res = verify_sring(G, [[0]] + part)
        if not isinstance(res, Violation):
            out.append(res)
    return out


def brute_force_oracle(G: AbelianGroup) -> Catalog:
    return make_catalog(G, all_sring_partitions(G))


# -- sampling ------------------------------------------------------------------------------

def sample_generated(G: AbelianGroup, count: int, seed: int, max_attempts: int | None = None) -> list[SRing]:
    """``count`` pairwise non-isomorphic closures of pseudo-random seed families."""
    rng = random.Random(seed)
    aut = automorphism_group(G)
    subs = enumerate_subgroups(G)
    n = G.order
    neg = G.neg
    seen: set[bytes] = set()
    out: list[SRing] = []
    attempts = 0
    max_attempts = max_attempts if max_attempts is not None else 400 * count
    while len(out) < count and attempts < max_attempts:
        attempts += 1
        family = attempts % 6
        if family >= 4 and out:
            blocks = _random_lattice_step(rng, out, aut, refine=family == 5)
        elif family % 4 == 0:
            blocks = _random_subsets(rng, n, neg)
        elif family % 4 == 1:
            blocks = _random_subgroup_unions(rng, subs)
        elif family % 4 == 2:
            blocks = _random_orbit_unions(rng, G, aut, whole=False)
        else:
            # full orbit partition, coarsened or refined by one extra block
            blocks = _random_orbit_unions(rng, G, aut, whole=True)
            u = rng.random()
            if u < 0.35:
                blocks += _random_subgroup_unions(rng, subs)[:1]
            elif u < 0.7:
                blocks += _random_subsets(rng, n, neg)[:1]
        A = closure(G, blocks)
        key = canonical_key(A)
        if key in seen:
            continue
        seen.add(key)
        out.append(A)
    return out


def _random_subsets(rng: random.Random, n: int, neg: np.ndarray) -> list[list[int]]:
    blocks = []
    for _ in range(rng.randint(1, 3)):
        b = set(rng.sample(range(1, n), rng.randint(1, max(1, n // 3))))
        if rng.random() < 0.6:
            b |= {int(neg[x]) for x in b}
        blocks.append(sorted(b))
    return blocks


def _random_subgroup_unions(rng: random.Random, subs) -> list[list[int]]:
    blocks = []
    for _ in range(rng.randint(1, 3)):
        H1, H2 = rng.choice(subs), rng.choice(subs)
        op = rng.randint(0, 2)
        if op == 0:
            b = set(H1.elements) | set(H2.elements)
        elif op == 1:
            b = set(H1.elements) - set(H2.elements)
        else:
            b = set(H1.elements)
        b.discard(0)
        if b:
            blocks.append(sorted(b))
    return blocks


def _random_orbit_unions(rng: random.Random, G: AbelianGroup, aut: AutSubgroup, whole: bool) -> list[list[int]]:
    gens = [aut.perms[rng.randrange(aut.order)] for _ in range(rng.randint(1, 2))]
    M = AutSubgroup.generated(G, gens)
    orbs = [o for o in M.orbits() if o != (0,)]
    if whole:
        return [list(o) for o in orbs]
    blocks = []
    for _ in range(rng.randint(1, 3)):
        k = rng.randint(1, max(1, len(orbs) // 2))
        blocks.append(sorted(x for o in rng.sample(orbs, min(k, len(orbs))) for x in o))
    return blocks


def _random_lattice_step(rng: random.Random, found: list[SRing], aut: AutSubgroup, refine: bool) -> list[list[int]]:
    """Seeds from earlier samples: an automorphic join of two, or one class split at random."""
    A = rng.choice(found)
    blocks = [list(b) for b in A.basic_sets]
    if refine:
        big = [b for b in blocks if len(b) > 1]
        if big:
            b = rng.choice(big)
            blocks.append(rng.sample(b, rng.randint(1, len(b) - 1)))
        return blocks
    B = rng.choice(found)
    sigma = aut.perms[rng.randrange(aut.order)]
    return blocks + [list(b) for b in B.image(sigma).basic_sets]
