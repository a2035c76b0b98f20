"""Schurity of S-rings via the colour-automorphism group of the Cayley configuration.

An S-ring is schurian iff the orbits of the identity stabiliser of the full
colour-automorphism group coincide with its basic sets.  The stabiliser
orbits are found by an individualisation/refinement backtrack: for each
candidate pair ``(a, b)`` inside a basic set we look for one automorphism
fixing the identity vertex and sending ``a`` to ``b``.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass

import numpy as np

from .groups import TooLargeError
from .srings import SRing, cayley_stabilizer

DEFAULT_BUDGET = 300.0


class SchurityTimeout(RuntimeError):
    def __init__(self, message: str, partial: list[tuple[int, ...]]):
        super().__init__(message)
        self.partial = partial


@dataclass
class CayleyConfiguration:
    n: int
    colors: np.ndarray  # colors[g, h] = class of h - g

    @property
    def ncolors(self) -> int:
        return int(self.colors.max()) + 1

    def preserves(self, perm: np.ndarray) -> bool:
        perm = np.asarray(perm)
        return bool(np.array_equal(self.colors[np.ix_(perm, perm)], self.colors))


def cayley_configuration(A: SRing) -> CayleyConfiguration:
    G = A.group
    colors = A.labels[G.sub_table.T]
    cfg = CayleyConfiguration(G.order, np.ascontiguousarray(colors))
    for g in G.unit_generators:
        if not cfg.preserves(G.add_table[:, g]):
            raise AssertionError("right translation does not preserve colours")
    return cfg


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra

    def absorb(self, perm):
        for v, w in enumerate(perm):
            self.union(v, int(w))

    def classes(self):
        out: dict[int, list[int]] = {}
        for v in range(len(self.parent)):
            out.setdefault(self.find(v), []).append(v)
        return sorted(tuple(c) for c in out.values())


class _Refiner:
    """Equitable refinement of vertex colourings of a complete arc-coloured digraph."""

    def __init__(self, cfg: CayleyConfiguration):
        self.C = cfg.colors
        self.CT = np.ascontiguousarray(cfg.colors.T)
        self.n = cfg.n
        self.k = cfg.ncolors

    def _signature(self, lab):
        n, k = self.n, self.k
        r = int(lab.max()) + 1
        off = (np.arange(n) * k * r)[:, None]
        out = np.bincount((self.C * r + lab[None, :] + off).ravel(), minlength=n * k * r).reshape(n, -1)
        inn = np.bincount((self.CT * r + lab[None, :] + off).ravel(), minlength=n * k * r).reshape(n, -1)
        return np.concatenate([lab[:, None], out, inn], axis=1)

    def refine_pair(self, a, b):
        """Refine two colourings in lockstep; ``None`` if they become inequivalent."""
        while True:
            ra = int(a.max()) + 1
            ua, ia = np.unique(self._signature(a), axis=0, return_inverse=True)
            ub, ib = np.unique(self._signature(b), axis=0, return_inverse=True)
            ia, ib = ia.ravel(), ib.ravel()
            if ua.shape != ub.shape or not np.array_equal(ua, ub):
                return None
            if not np.array_equal(np.bincount(ia), np.bincount(ib)):
                return None
            if len(ua) == ra:
                return ia, ib
            a, b = ia, ib

    @staticmethod
    def individualize(lab, v):
        lab = lab.copy()
        lab[v] = lab.max() + 1
        return lab


def _find_automorphism(ref: _Refiner, a: int, b: int, deadline: float) -> np.ndarray | None:
    """An automorphism fixing vertex 0 and mapping ``a`` to ``b``, or ``None``."""
    n = ref.n
    base = np.zeros(n, dtype=np.int64)
    left = ref.individualize(ref.individualize(base, 0), a)
    right = ref.individualize(ref.individualize(base, 0), b)

    def rec(L, R):
        if time.monotonic() > deadline:
            raise TimeoutError
        res = ref.refine_pair(L, R)
        if res is None:
            return None
        L, R = res
        sizes = np.bincount(L)
        if len(sizes) == n:
            phi = np.empty(n, dtype=np.int64)
            pos = np.empty(n, dtype=np.int64)
            pos[R] = np.arange(n)
            phi[:] = pos[L]
            return phi if np.array_equal(ref.C[np.ix_(phi, phi)], ref.C) else None
        cell = int(np.flatnonzero(sizes > 1)[0])
        v = int(np.flatnonzero(L == cell)[0])
        L2 = ref.individualize(L, v)
        for w in np.flatnonzero(R == cell):
            found = rec(L2, ref.individualize(R, int(w)))
            if found is not None:
                return found
        return None

    return rec(left, right)


def stabilizer_orbits(cfg: CayleyConfiguration, known: np.ndarray | None = None,
                      budget: float = DEFAULT_BUDGET, domain_classes=None) -> list[tuple[int, ...]]:
    """Orbits of the identity-vertex stabiliser of the colour-automorphism group.

    ``known`` may hold colour automorphisms fixing vertex 0 (checked here);
    they only seed the orbit union-find.  Candidate pairs are restricted to
    vertices with the same colour from vertex 0, since the stabiliser cannot
    mix those.
    """
    if cfg.n > 128:
        raise ValueError("configurations with more than 128 vertices are out of scope")
    deadline = time.monotonic() + budget
    uf = _UnionFind(cfg.n)
    if known is not None:
        for p in known:
            if p[0] != 0 or not cfg.preserves(p):
                raise ValueError("seed permutation is not a colour automorphism fixing 0")
            uf.absorb(p)
    ref = _Refiner(cfg)
    row = cfg.colors[0]
    try:
        for c in range(cfg.ncolors):
            members = [int(x) for x in np.flatnonzero(row == c)]
            reps: list[int] = []
            for x in members:
                rx = uf.find(x)
                if any(uf.find(r) == rx for r in reps):
                    continue
                for r in reps:
                    phi = _find_automorphism(ref, r, x, deadline)
                    if phi is not None:
                        uf.absorb(phi)
                        break
                else:
                    reps.append(x)
    except TimeoutError:
        raise SchurityTimeout(f"stabilizer search exceeded {budget}s", uf.classes()) from None
    return uf.classes()


def brute_force_stabilizer_orbits(cfg: CayleyConfiguration, chunk: int = 40320) -> list[tuple[int, ...]]:
    """Scan every permutation of ``Sym(n)`` fixing 0; only for ``n <= 10``."""
    n = cfg.n
    if n > 10:
        raise ValueError("brute force is limited to n <= 10")
    C = cfg.colors
    uf = _UnionFind(n)
    it = itertools.permutations(range(1, n))
    while True:
        block = list(itertools.islice(it, chunk))
        if not block:
            break
        P = np.zeros((len(block), n), dtype=np.int64)
        P[:, 1:] = block
        ok = np.all(C[P[:, :, None], P[:, None, :]] == C, axis=(1, 2))
        for p in P[ok]:
            uf.absorb(p)
    return uf.classes()


@dataclass
class SchurityVerdict:
    schurian: bool
    stabilizer_orbits: list[tuple[int, ...]]
    witness: tuple | None = None

    def to_dict(self, group=None) -> dict:
        d: dict = {"schurian": self.schurian}
        if not self.schurian:
            enc = (lambda x: list(group.element(x))) if group is not None else int
            d["stabilizer_orbits"] = [[enc(x) for x in o] for o in self.stabilizer_orbits]
        return d


def is_schurian(A: SRing, budget: float = DEFAULT_BUDGET, use_known: bool = True) -> SchurityVerdict:
    """Decide schurity of ``A`` (``|G| <= 128``)."""
    if A.group.order > 128:
        raise ValueError("schurity decision is limited to groups of order <= 128")
    cfg = cayley_configuration(A)
    known = None
    if use_known:
        try:
            known = cayley_stabilizer(A).perms
        except TooLargeError:
            pass
    orbs = stabilizer_orbits(cfg, known=known, budget=budget)
    basic = sorted(A.basic_sets)
    if orbs == basic:
        return SchurityVerdict(True, orbs)
    for X in basic:
        inside = [o for o in orbs if o[0] in X]
        if len(inside) > 1:
            return SchurityVerdict(False, orbs, (X, tuple(inside)))
    raise AssertionError("stabilizer orbits must refine the basic sets")
