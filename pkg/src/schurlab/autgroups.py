"""Automorphism groups of finite abelian groups and their subgroups.

Automorphisms are stored as full permutation tables of the element indices
(row ``s`` of ``perms`` maps ``x -> perms[s, x]``).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from sympy import factorint

from .groups import AbelianGroup, TooLargeError, basis_search

MAX_AUT = 250_000
MAX_SUBGROUP_SEARCH = 512


@dataclass(frozen=True, eq=False)
class Automorphism:
    group: AbelianGroup
    table: tuple[int, ...]

    @property
    def generator_images(self) -> tuple[tuple[int, ...], ...]:
        return tuple(self.group.element(self.table[g]) for g in self.group.unit_generators)

    def __call__(self, x: int) -> int:
        return self.table[x]

    def __eq__(self, other):
        return isinstance(other, Automorphism) and self.table == other.table

    def __hash__(self):
        return hash(self.table)

    def is_homomorphism(self) -> bool:
        t = np.array(self.table)
        A = self.group.add_table
        return bool(np.array_equal(t[A], A[np.ix_(t, t)]))

    def is_bijective(self) -> bool:
        return sorted(self.table) == list(range(self.group.order))


def tables_from_images(G: AbelianGroup, images: np.ndarray) -> np.ndarray:
    """Permutation tables for automorphisms given by generator images.

    ``images`` has shape ``(count, rank)`` of element indices.
    """
    img_coords = G.coords[images]  # count x rank x rank
    full = np.einsum("nk,ckj->cnj", G.coords, img_coords)
    return G.index_array(full)


def _closure(perms: list[np.ndarray], n: int, limit: int = MAX_AUT) -> np.ndarray:
    ident = np.arange(n)
    seen = {ident.tobytes(): ident}
    frontier = [ident]
    gens = [np.asarray(p) for p in perms]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                c = g[a]
                key = c.tobytes()
                if key not in seen:
                    seen[key] = c
                    nxt.append(c)
        frontier = nxt
        if len(seen) > limit:
            raise TooLargeError(f"automorphism subgroup exceeds {limit} elements")
    arr = np.array(list(seen.values()))
    return _sorted_rows(arr)


def _sorted_rows(arr: np.ndarray) -> np.ndarray:
    order = np.lexsort(arr.T[::-1])
    return np.ascontiguousarray(arr[order])


class AutSubgroup:
    """A subgroup of ``Aut(G)`` with its closed element list (rows of ``perms``,
    sorted lexicographically so the identity comes first)."""

    def __init__(self, group: AbelianGroup, perms: np.ndarray, generators: Sequence[np.ndarray] | None = None):
        self.group = group
        self.perms = _sorted_rows(np.asarray(perms, dtype=np.int64).reshape(-1, group.order))
        self._generators = None if generators is None else [np.asarray(g) for g in generators]

    @classmethod
    def generated(cls, group: AbelianGroup, gens: Iterable[Sequence[int]]) -> "AutSubgroup":
        gens = [np.asarray(g, dtype=np.int64) for g in gens]
        return cls(group, _closure(gens, group.order), gens)

    @classmethod
    def trivial(cls, group: AbelianGroup) -> "AutSubgroup":
        return cls(group, np.arange(group.order)[None, :], [])

    def __len__(self):
        return len(self.perms)

    @property
    def order(self) -> int:
        return len(self.perms)

    def __repr__(self):
        return f"AutSubgroup(order={self.order} on {self.group.spec})"

    @cached_property
    def key(self) -> bytes:
        return self.perms.tobytes()

    def __eq__(self, other):
        return isinstance(other, AutSubgroup) and self.group == other.group and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    @cached_property
    def _index(self) -> dict[bytes, int]:
        return {row.tobytes(): i for i, row in enumerate(self.perms)}

    def index_of(self, perm: np.ndarray) -> int | None:
        return self._index.get(np.asarray(perm, dtype=np.int64).tobytes())

    def __contains__(self, perm) -> bool:
        return self.index_of(perm) is not None

    def issubgroup(self, other: "AutSubgroup") -> bool:
        return all(other.index_of(p) is not None for p in self.perms)

    @property
    def generators(self) -> list[np.ndarray]:
        if self._generators is None:
            self._generators = self._greedy_generators()
        return self._generators

    def _greedy_generators(self) -> list[np.ndarray]:
        gens: list[np.ndarray] = []
        have = {np.arange(self.group.order).tobytes()}
        for p in self.perms:
            if p.tobytes() in have:
                continue
            gens.append(p)
            have = {r.tobytes() for r in _closure(gens, self.group.order)}
            if len(have) == self.order:
                break
        return gens

    def automorphisms(self) -> list[Automorphism]:
        return [Automorphism(self.group, tuple(int(x) for x in p)) for p in self.perms]

    @cached_property
    def mult_table(self) -> np.ndarray:
        """``mult_table[i, j]`` = index of ``perms[i] o perms[j]``."""
        k = self.order
        out = np.empty((k, k), dtype=np.int64)
        idx = self._index
        for i in range(k):
            comp = self.perms[i][self.perms]
            out[i] = [idx[r.tobytes()] for r in comp]
        return out

    @cached_property
    def inverse_index(self) -> np.ndarray:
        return np.argmax(self.mult_table == 0, axis=1)

    def element_order(self, i: int) -> int:
        k, cur = 1, i
        while cur != 0:
            cur = self.mult_table[i, cur]
            k += 1
        return k

    @cached_property
    def is_abelian(self) -> bool:
        T = self.mult_table
        return bool(np.array_equal(T, T.T))

    @cached_property
    def is_cyclic(self) -> bool:
        return any(self.element_order(i) == self.order for i in range(self.order))

    def is_elementary_abelian(self, p: int) -> bool:
        return self.is_abelian and all(self.element_order(i) in (1, p) for i in range(self.order))

    def sub(self, indices: Iterable[int]) -> "AutSubgroup":
        return AutSubgroup(self.group, self.perms[sorted(indices)])

    def orbit(self, x: int) -> tuple[int, ...]:
        return tuple(sorted(set(self.perms[:, x].tolist())))

    def orbits(self, domain: Iterable[int] | None = None) -> list[tuple[int, ...]]:
        """Orbit partition of an invariant domain, classes sorted by minimum."""
        dom = list(range(self.group.order)) if domain is None else sorted(set(int(x) for x in domain))
        dset = set(dom)
        img = set(self.perms[:, dom].ravel().tolist())
        if not img <= dset:
            raise ValueError("domain is not invariant under the automorphism subgroup")
        seen = set()
        out = []
        for x in dom:
            if x not in seen:
                o = self.orbit(x)
                seen.update(o)
                out.append(o)
        return out

    def setwise_stabilizer(self, X: Iterable[int]) -> "AutSubgroup":
        mask = np.zeros(self.group.order, dtype=bool)
        Xl = list(X)
        mask[Xl] = True
        keep = np.all(mask[self.perms[:, Xl]], axis=1)
        return AutSubgroup(self.group, self.perms[keep])

    def conjugate(self, sigma: np.ndarray) -> "AutSubgroup":
        """``sigma^-1 M sigma`` (maps acting as ``x -> sigma^-1(m(sigma(x)))``)."""
        sigma = np.asarray(sigma)
        inv = np.argsort(sigma)
        return AutSubgroup(self.group, inv[self.perms[:, sigma]])

    def normalizes(self, other: "AutSubgroup") -> bool:
        """True if ``other`` is normalised by every element of ``self``."""
        for s in self.generators:
            if other.conjugate(s) != other:
                return False
        return True


_AUT_CACHE: dict[AbelianGroup, AutSubgroup] = {}


def automorphism_group(G: AbelianGroup, max_order: int = MAX_AUT) -> AutSubgroup:
    """The full ``Aut(G)``, found by searching generator images."""
    if G in _AUT_CACHE:
        if _AUT_CACHE[G].order > max_order:
            raise TooLargeError(f"|Aut(G)| exceeds {max_order}")
        return _AUT_CACHE[G]
    if G.order > 4096:
        raise TooLargeError(f"group order {G.order} too large for automorphism search")
    images = basis_search(G.add_table, G.orders, limit=max_order)
    if len(images) > max_order:
        raise TooLargeError(f"|Aut(G)| exceeds {max_order}")
    perms = tables_from_images(G, np.array(images, dtype=np.int64))
    A = AutSubgroup(G, perms)
    _AUT_CACHE[G] = A
    return A


def center_of_aut(G: AbelianGroup) -> AutSubgroup:
    A = automorphism_group(G)
    keep = np.ones(A.order, dtype=bool)
    for g in A.generators:
        keep &= np.all(A.perms[:, g] == g[A.perms], axis=1)
    return AutSubgroup(G, A.perms[keep])


def inversion(G: AbelianGroup) -> np.ndarray:
    return G.neg.copy()


def enumerate_aut_subgroups(A: AutSubgroup, bound: int = MAX_SUBGROUP_SEARCH) -> list[AutSubgroup]:
    """All subgroups of ``A`` (not up to conjugacy), sorted by order then elements."""
    if A.order > bound:
        raise TooLargeError(f"|A| = {A.order} exceeds subgroup-enumeration bound {bound}")
    key = ("subgroups", A.key)
    if key in _SUBS_CACHE:
        return _SUBS_CACHE[key]
    T = A.mult_table
    k = A.order

    def close(elems: set[int], gens: list[int]) -> int:
        todo = list(elems)
        while todo:
            nxt = []
            for a in todo:
                for g in gens:
                    c = int(T[a, g])
                    if c not in elems:
                        elems.add(c)
                        nxt.append(c)
            todo = nxt
        return sum(1 << e for e in elems)

    cyclic: dict[int, int] = {}
    for i in range(k):
        m = close({0}, [i])
        cyclic.setdefault(m, i)
    found: dict[int, list[int]] = {1: []}
    for m, g in cyclic.items():
        found.setdefault(m, [g])
    frontier = [m for m in found if m != 1]
    # every subgroup is generated by its elements of prime-power order
    cyc = [(m, g) for m, g in cyclic.items() if m != 1 and len(factorint(bin(m).count("1"))) == 1]
    while frontier:
        new = []
        for m in frontier:
            els = {i for i in range(k) if m >> i & 1}
            gens = found[m]
            for cm, g in cyc:
                if cm & ~m == 0:
                    continue
                m2 = close(set(els), gens + [g])
                if m2 not in found:
                    found[m2] = gens + [g]
                    new.append(m2)
        frontier = new
    subs = []
    for m, gens in found.items():
        idx = [i for i in range(k) if m >> i & 1]
        subs.append(AutSubgroup(A.group, A.perms[idx], [A.perms[g] for g in gens]))
    subs.sort(key=lambda H: (H.order, H.perms.tobytes()))
    _SUBS_CACHE[key] = subs
    return subs


_SUBS_CACHE: dict = {}


def orbits(M: AutSubgroup, domain: Iterable[int] | None = None) -> list[tuple[int, ...]]:
    return M.orbits(domain)
