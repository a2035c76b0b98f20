"""Schur rings over finite abelian groups.

An S-ring is stored as a class-label array over the element indices of its
group.  Labels are normalised so that classes are numbered by increasing
minimal element; class 0 is therefore always the identity.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .autgroups import AutSubgroup, automorphism_group
from .characters import character_sums_matrix
from .groups import (AbelianGroup, Section, Subgroup, enumerate_subgroups, find_isomorphism,
                     generated_subgroup, whole_group)


class InvalidPartitionError(ValueError):
    pass


class IncompatibleSectionError(ValueError):
    pass


class NotASectionError(ValueError):
    pass


def normalize_labels(labels: np.ndarray) -> np.ndarray:
    """Relabel so that classes are numbered in order of first occurrence."""
    labels = np.asarray(labels)
    _, first, inv = np.unique(labels, return_index=True, return_inverse=True)
    rank = np.empty(len(first), dtype=np.int64)
    rank[np.argsort(first)] = np.arange(len(first))
    return rank[inv.ravel()]


def row_classes(S: np.ndarray) -> np.ndarray:
    """Label rows of ``S`` by equality, numbered in order of first occurrence."""
    S = np.ascontiguousarray(S, dtype=np.int64)
    ids: dict[bytes, int] = {}
    return np.array([ids.setdefault(row.tobytes(), len(ids)) for row in S], dtype=np.int64)


def rgs_rows(M: np.ndarray) -> np.ndarray:
    """Row-wise restricted growth strings of an integer label matrix."""
    k, n = M.shape
    r = int(M.max()) + 1
    first = np.full((k, r), n, dtype=np.int64)
    rows = np.repeat(np.arange(k), n)
    cols = np.tile(np.arange(n), k)
    np.minimum.at(first, (rows, M.ravel()), cols)
    order = np.argsort(first, axis=1, kind="stable")
    rank = np.empty_like(order)
    rank[np.arange(k)[:, None], order] = np.arange(r)
    return np.take_along_axis(rank, M, axis=1)


def product_counts(G: AbelianGroup, labels: np.ndarray, r: int) -> np.ndarray:
    """``out[g, X*r + Y]`` = coefficient of ``g`` in the product of class sums X and Y."""
    n = G.order
    K = labels[None, :] * r + labels[G.sub_table]
    K = K + (np.arange(n) * r * r)[:, None]
    return np.bincount(K.ravel(), minlength=n * r * r).reshape(n, r * r)


@dataclass
class Violation:
    axiom: str
    message: str
    witnesses: tuple = ()

    def __bool__(self):
        return False


class SRing:
    """An S-ring over ``group``; construct through :func:`verify_sring`,
    :func:`closure` or the constructions below."""

    def __init__(self, group: AbelianGroup, labels: Sequence[int]):
        self.group = group
        self.labels = normalize_labels(np.asarray(labels, dtype=np.int64))
        self.labels.setflags(write=False)

    @classmethod
    def from_partition(cls, group: AbelianGroup, classes: Iterable[Iterable[int]]) -> "SRing":
        labels = np.full(group.order, -1, dtype=np.int64)
        for i, X in enumerate(classes):
            labels[list(X)] = i
        return cls(group, labels)

    @property
    def rank(self) -> int:
        return int(self.labels.max()) + 1

    def class_of(self, g: int) -> int:
        return int(self.labels[g])

    @cached_property
    def basic_sets(self) -> tuple[tuple[int, ...], ...]:
        order = np.argsort(self.labels, kind="stable")
        bounds = np.cumsum(np.bincount(self.labels))
        return tuple(tuple(int(x) for x in chunk) for chunk in np.split(order, bounds[:-1]))

    @cached_property
    def reps(self) -> np.ndarray:
        return np.array([X[0] for X in self.basic_sets])

    @cached_property
    def sizes(self) -> np.ndarray:
        return np.bincount(self.labels)

    @cached_property
    def inverse_class(self) -> np.ndarray:
        return self.labels[self.group.neg[self.reps]]

    @cached_property
    def structure_constants(self) -> np.ndarray:
        """``c[X, Y, Z]``: coefficient of any element of Z in the product X * Y."""
        r = self.rank
        counts = product_counts(self.group, self.labels, r)
        return counts[self.reps].reshape(r, r, r).transpose(1, 2, 0)

    def __eq__(self, other):
        return (isinstance(other, SRing) and self.group == other.group
                and np.array_equal(self.labels, other.labels))

    def __hash__(self):
        return hash((self.group, self.labels.tobytes()))

    def __repr__(self):
        return f"SRing({self.group.spec}, rank={self.rank})"

    def is_symmetric_class(self, i: int) -> bool:
        return int(self.inverse_class[i]) == i

    def refines(self, other: "SRing | np.ndarray") -> bool:
        """True if every class of ``self`` lies inside a class of ``other``."""
        ol = other.labels if isinstance(other, SRing) else np.asarray(other)
        return bool(np.all(ol[self.reps[self.labels]] == ol))

    def image(self, sigma: np.ndarray) -> "SRing":
        """The S-ring whose classes are ``sigma(X)``."""
        sigma = np.asarray(sigma)
        new = np.empty_like(self.labels)
        new[sigma] = self.labels
        return SRing(self.group, new)

    def is_union_of_classes(self, elements: Iterable[int]) -> bool:
        els = list(elements)
        hit = np.unique(self.labels[els])
        return int(self.sizes[hit].sum()) == len(set(els))

    def classes_inside(self, elements: Iterable[int]) -> list[tuple[int, ...]]:
        mask = np.zeros(self.group.order, dtype=bool)
        mask[list(elements)] = True
        return [X for X in self.basic_sets if mask[list(X)].all()]

    # JSON
    def to_dict(self) -> dict:
        G = self.group
        return {"group": list(G.orders),
                "basic_sets": [[list(G.element(x)) for x in X] for X in self.basic_sets]}

    @classmethod
    def from_dict(cls, d: dict, check: bool = True) -> "SRing":
        G = AbelianGroup(tuple(d["group"]))
        classes = [[G.index(c) for c in X] for X in d["basic_sets"]]
        if check:
            res = verify_sring(G, classes)
            if isinstance(res, Violation):
                raise InvalidPartitionError(f"not an S-ring: {res.axiom}: {res.message}")
            return res
        return cls.from_partition(G, classes)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _check_partition(G: AbelianGroup, partition) -> np.ndarray:
    labels = np.full(G.order, -1, dtype=np.int64)
    for i, X in enumerate(partition):
        X = list(X)
        if not X:
            raise InvalidPartitionError("empty class")
        if min(X) < 0 or max(X) >= G.order:
            raise InvalidPartitionError("element index out of range")
        if np.any(labels[X] >= 0) or len(set(X)) != len(X):
            raise InvalidPartitionError("classes are not disjoint")
        labels[X] = i
    if np.any(labels < 0):
        raise InvalidPartitionError("classes do not cover the group")
    return labels


def verify_sring(G: AbelianGroup, partition: Iterable[Iterable[int]]) -> SRing | Violation:
    """Check the S-ring axioms for a partition of ``G`` (element indices)."""
    labels = normalize_labels(_check_partition(G, partition))
    A = SRing(G, labels)
    if A.sizes[0] != 1:
        return Violation("S1", "identity is not a singleton class", (A.basic_sets[0],))
    inv = G.neg
    for i, X in enumerate(A.basic_sets):
        Xinv = tuple(sorted(int(inv[x]) for x in X))
        j = A.class_of(Xinv[0])
        if A.basic_sets[j] != Xinv:
            return Violation("S2", f"inverse of class {i} is not a class", (X, Xinv))
    r = A.rank
    counts = product_counts(G, A.labels, r)
    bad = np.any(counts != counts[A.reps[A.labels]], axis=1)
    if bad.any():
        g = int(np.flatnonzero(bad)[0])
        col = int(np.flatnonzero(counts[g] != counts[A.reps[A.labels[g]]])[0])
        X, Y = divmod(col, r)
        return Violation("S3", f"product of classes {X} and {Y} is not constant on class {A.class_of(g)}",
                         (A.basic_sets[X], A.basic_sets[Y], A.basic_sets[A.class_of(g)]))
    return A


# -- closure ---------------------------------------------------------------------

def seed_labels(G: AbelianGroup, blocks: Iterable[Iterable[int]]) -> np.ndarray:
    """Venn-complete the seed blocks, split off the identity, remainder as one block."""
    key = np.zeros((G.order, 0), dtype=np.int64)
    cols = []
    for B in blocks:
        col = np.zeros(G.order, dtype=np.int64)
        col[list(B)] = 1
        cols.append(col)
    ident = np.zeros(G.order, dtype=np.int64)
    ident[0] = 1
    cols.append(ident)
    key = np.stack(cols, axis=1)
    _, inv = np.unique(key, axis=0, return_inverse=True)
    return normalize_labels(inv.ravel())


def refine_to_sring(G: AbelianGroup, labels: np.ndarray) -> np.ndarray:
    """Coarsest S-ring partition refining ``labels`` (which must isolate 0)."""
    lab = normalize_labels(labels)
    neg = G.neg
    while True:
        r0 = int(lab.max()) + 1
        lab = row_classes(np.stack([lab, lab[neg]], axis=1))
        r = int(lab.max()) + 1
        counts = product_counts(G, lab, r)
        lab = row_classes(np.concatenate([lab[:, None], counts], axis=1))
        if int(lab.max()) + 1 == r0 == r:
            return lab


def closure(G: AbelianGroup, blocks: Iterable[Iterable[int]]) -> SRing:
    """The smallest S-ring in which every seed block is a union of basic sets."""
    return SRing(G, refine_to_sring(G, seed_labels(G, blocks)))


# -- standard S-rings and constructions -----------------------------------------------

def group_ring(G: AbelianGroup) -> SRing:
    return SRing(G, np.arange(G.order))


def trivial_sring(G: AbelianGroup) -> SRing:
    lab = np.ones(G.order, dtype=np.int64)
    lab[0] = 0
    return SRing(G, lab)


def cyclotomic_sring(M: AutSubgroup, G: AbelianGroup | None = None) -> SRing:
    G = M.group if G is None else G
    return SRing.from_partition(G, M.orbits())


def tensor_product(A1: SRing, A2: SRing) -> SRing:
    G = AbelianGroup(A1.group.orders + A2.group.orders)
    r2 = A2.rank
    lab = (A1.labels[:, None] * r2 + A2.labels[None, :]).ravel()
    return SRing(G, lab)


def transport(A: SRing, H: AbelianGroup) -> SRing:
    """Move ``A`` onto an isomorphic presentation ``H`` along a fixed isomorphism."""
    if A.group == H:
        return A
    phi = find_isomorphism(A.group, H)
    if phi is None:
        raise ValueError(f"{A.group.spec} is not isomorphic to {H.spec}")
    lab = np.empty(H.order, dtype=np.int64)
    lab[phi] = A.labels
    return SRing(H, lab)


def generalized_wreath(A_U: SRing, A_Q: SRing, U: Subgroup, L: Subgroup) -> SRing:
    """The S-ring over ``G`` equal to ``A_U`` inside ``U`` and to the ``L``-coset
    preimages of the classes of ``A_Q`` (over ``G/L``) outside ``U``."""
    G = U.ambient
    sec_u = Section(U, Subgroup(G, (0,), ()))
    sec_q = Section(whole_group(G), L)
    lab = np.full(G.order, -1, dtype=np.int64)
    nxt = 0
    if sec_u.quotient is None:
        lab[0] = 0
        nxt = 1
        au_classes: list[tuple[int, ...]] = [(0,)]
    else:
        A_U = transport(A_U, sec_u.quotient)
        au_classes = []
        for X in A_U.basic_sets:
            pre = sec_u.preimage(X)
            au_classes.append(pre)
            lab[list(pre)] = nxt
            nxt += 1
    if sec_q.quotient is None:
        raise IncompatibleSectionError("L = G leaves no quotient")
    A_Q = transport(A_Q, sec_q.quotient)
    piU = set(sec_q.project(U.elements))
    # agreement on U/L
    img = sorted(tuple(sorted(set(sec_q.projection[list(X)].tolist()))) for X in au_classes)
    img_set = set(img)
    qin = []
    for Y in A_Q.basic_sets:
        inside = [y in piU for y in Y]
        if any(inside) and not all(inside):
            raise IncompatibleSectionError("U/L is not an A_Q-subgroup")
        if all(inside):
            qin.append(tuple(Y))
        else:
            lab[list(sec_q.preimage(Y))] = nxt
            nxt += 1
    # the images of A_U classes must partition U/L exactly as A_Q does
    if len(img_set) != len(qin) or img_set != set(qin):
        raise IncompatibleSectionError("A_U and A_Q disagree on the section U/L")
    res = verify_sring(G, [np.flatnonzero(lab == i) for i in range(nxt)])
    if isinstance(res, Violation):
        raise IncompatibleSectionError(f"construction failed axiom {res.axiom}")
    return res


def wreath(A_U: SRing, A_Q: SRing, U: Subgroup) -> SRing:
    return generalized_wreath(A_U, A_Q, U, U)


def is_wreath(A: SRing, U: Subgroup, L: Subgroup) -> bool:
    """True if ``A`` is the U/L-wreath product (U, L A-subgroups, L <= rad(X) outside U)."""
    if not (L <= U and A.is_union_of_classes(U.elements) and A.is_union_of_classes(L.elements)):
        return False
    Lels = np.array(L.elements)
    add = A.group.add_table
    for i, X in enumerate(A.basic_sets):
        if U.mask[X[0]]:
            continue
        x = np.array(X)
        if not np.all(A.labels[add[np.ix_(x, Lels)]] == i):
            return False
    return True


def dual_sring(A: SRing) -> SRing:
    """Characters share a class iff their sums agree on every basic set."""
    G = A.group
    sig = np.concatenate([character_sums_matrix(G, X) for X in A.basic_sets], axis=1)
    _, inv = np.unique(sig, axis=0, return_inverse=True)
    return SRing(G, inv.ravel())


# -- subgroups and sections ---------------------------------------------------------------

def radical(G: AbelianGroup, X: Iterable[int]) -> Subgroup:
    x = np.array(sorted(set(X)))
    mask = np.zeros(G.order, dtype=bool)
    mask[x] = True
    rad = [g for g in range(G.order) if mask[G.add_table[g, x]].all()]
    return generated_subgroup(G, rad)


def a_subgroups(A: SRing) -> list[Subgroup]:
    """All subgroups of the group that are unions of basic sets."""
    return [H for H in enumerate_subgroups(A.group) if A.is_union_of_classes(H.elements)]


@dataclass
class BasicSetSubgroups:
    basic_set: tuple[int, ...]
    generated: Subgroup
    radical: Subgroup


def basic_set_subgroups(A: SRing) -> list[BasicSetSubgroups]:
    return [BasicSetSubgroups(X, generated_subgroup(A.group, X), radical(A.group, X))
            for X in A.basic_sets]


def restrict_to_section(A: SRing, S: Section) -> SRing:
    if not (A.is_union_of_classes(S.U.elements) and A.is_union_of_classes(S.L.elements)):
        raise NotASectionError("U and L must be A-subgroups")
    if S.quotient is None:
        raise NotASectionError("trivial section")
    classes = {S.project(X) for X in A.classes_inside(S.U.elements)}
    res = verify_sring(S.quotient, sorted(classes))
    if isinstance(res, Violation):
        raise NotASectionError(f"projection is not an S-ring ({res.axiom}); S is not an A-section")
    return res


def restrict_to_subgroup(A: SRing, H: Subgroup) -> SRing:
    return restrict_to_section(A, Section(H, Subgroup(A.group, (0,), ())))


def factor_subgroups(G: AbelianGroup, split: int) -> tuple[Subgroup, Subgroup]:
    """The subgroups on the first ``split`` coordinates and on the rest."""
    c = G.coords
    first = np.flatnonzero(np.all(c[:, split:] == 0, axis=1))
    second = np.flatnonzero(np.all(c[:, :split] == 0, axis=1))
    return generated_subgroup(G, first.tolist()), generated_subgroup(G, second.tolist())


def is_dense(A: SRing, split: int = 2) -> bool:
    """Both designated direct factors (coordinates ``[:split]`` and ``[split:]``) are A-subgroups."""
    F1, F2 = factor_subgroups(A.group, split)
    return A.is_union_of_classes(F1.elements) and A.is_union_of_classes(F2.elements)


def is_tensor_decomposition(A: SRing, C: Subgroup, D: Subgroup) -> bool:
    """True if ``G = C x D`` with both A-subgroups and every class equal to ``X_C + X_D``."""
    G = A.group
    if C.order * D.order != G.order or len(set(C.elements) & set(D.elements)) != 1:
        return False
    if not (A.is_union_of_classes(C.elements) and A.is_union_of_classes(D.elements)):
        return False
    proj_c, proj_d = direct_projections(G, C, D)
    for X in A.basic_sets:
        xc = set(proj_c[list(X)].tolist())
        xd = set(proj_d[list(X)].tolist())
        if len(X) != len(xc) * len(xd):
            return False
    return True


def direct_projections(G: AbelianGroup, C: Subgroup, D: Subgroup) -> tuple[np.ndarray, np.ndarray]:
    """For ``G = C x D``: arrays sending ``g`` to its ``C`` and ``D`` components."""
    add = G.add_table
    pc = np.empty(G.order, dtype=np.int64)
    pd = np.empty(G.order, dtype=np.int64)
    for c in C.elements:
        for d in D.elements:
            g = add[c, d]
            pc[g], pd[g] = c, d
    return pc, pd


# -- automorphisms and canonical forms -----------------------------------------------

def cayley_stabilizer(A: SRing, within: AutSubgroup | None = None) -> AutSubgroup:
    """``{s : X^s = X for every basic X}``."""
    P = (within or automorphism_group(A.group)).perms
    keep = np.all(A.labels[P] == A.labels, axis=1)
    return AutSubgroup(A.group, P[keep])


def is_cyclotomic(A: SRing) -> AutSubgroup | None:
    """The maximal ``M`` with ``orb(M) = S(A)``, or ``None`` if no such ``M`` exists."""
    M = cayley_stabilizer(A)
    orb = SRing.from_partition(A.group, M.orbits())
    return M if orb == A else None


def canonical_labels(G: AbelianGroup, labels: np.ndarray, perms: np.ndarray | None = None) -> np.ndarray:
    P = automorphism_group(G).perms if perms is None else perms
    R = rgs_rows(np.asarray(labels)[P])
    best = np.lexsort(R.T[::-1])[0]
    return R[best]


def canonical_key(A: SRing) -> bytes:
    return canonical_labels(A.group, A.labels).astype(np.int16).tobytes()


def canonical_form(A: SRing) -> tuple[tuple[int, ...], ...]:
    """Lexicographically least relabelling of ``A`` under ``Aut(G)``, as sorted classes."""
    return SRing(A.group, canonical_labels(A.group, A.labels)).basic_sets


def canonical_sring(A: SRing) -> SRing:
    return SRing(A.group, canonical_labels(A.group, A.labels))


def cayley_isomorphic(A: SRing, B: SRing) -> bool:
    if A.group.order != B.group.order or A.rank != B.rank:
        return False
    if A.group != B.group:
        try:
            A = transport(A, B.group)
        except ValueError:
            return False
    if sorted(A.sizes.tolist()) != sorted(B.sizes.tolist()):
        return False
    return canonical_key(A) == canonical_key(B)
