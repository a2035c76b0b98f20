"""Structure theory of S-rings over E9 and E9 x Cp.

Regular partitions of basic sets, standard pairs of automorphism groups over
E9, projection data and subdirect products for dense S-rings over E9 x Cp,
the standard groups of the wreath case, the E9 classification and the
trichotomy for S-rings over E9 x Cp.

Elements of ``G = E9 x Cp`` (orders ``(3, 3, p)``) are indexed as
``g = a * p + x`` with ``a`` an element of ``E9 = (3, 3)`` and ``x`` of ``Cp``.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from sympy import isprime

from .autgroups import AutSubgroup, automorphism_group, center_of_aut, enumerate_aut_subgroups
from .groups import AbelianGroup, Subgroup, enumerate_subgroups, make_group
from .srings import SRing, a_subgroups, is_cyclotomic, is_dense, is_tensor_decomposition, is_wreath

E9 = AbelianGroup((3, 3))


class NotRegularError(ValueError):
    pass


class NoConjugateError(ValueError):
    pass


class NotDenseError(ValueError):
    pass


class FactorSetError(ValueError):
    """The basic set lies inside one of the direct factors."""


class QuotientMismatchError(ValueError):
    pass


class PairNotInTableError(ValueError):
    pass


class GroupShapeError(ValueError):
    pass


# -- small permutation-group helpers -------------------------------------------------

def group_type(M: AutSubgroup) -> str:
    """Isomorphism type of a small group, from order, commutativity and element orders."""
    n = M.order
    if n == 1:
        return "1"
    if M.is_cyclic:
        return f"C{n}"
    orders = Counter(M.element_order(i) for i in range(n))
    if M.is_abelian:
        if n == 4:
            return "E4"
        if all(o in (1, 2) for o in orders):
            return f"E{n}"
        return f"abelian{n}"
    inv = orders[2]
    named = {(6, 3): "Sym(3)", (8, 5): "D8", (8, 1): "Q8", (12, 7): "D12", (12, 3): "A4",
             (12, 1): "Dic12", (16, 9): "D16", (16, 5): "SD16", (16, 1): "Q16", (24, 1): "SL(2,3)",
             (48, 13): "GL(2,3)"}
    return named.get((n, inv), f"nonabelian{n}")


def orbit_sizes(M: AutSubgroup) -> list[int]:
    return sorted(len(o) for o in M.orbits())


def block_action(M: AutSubgroup, blocks: list[tuple[int, ...]]) -> np.ndarray | None:
    """Row ``s``: permutation of block indices induced by ``M.perms[s]``; ``None`` if not invariant."""
    where = np.full(M.group.order, -1, dtype=np.int64)
    for i, b in enumerate(blocks):
        where[list(b)] = i
    reps = np.array([b[0] for b in blocks])
    act = where[M.perms[:, reps]]
    if np.any(act < 0):
        return None
    for i, b in enumerate(blocks):
        if np.any(where[M.perms[:, list(b)]] != act[:, [i]]):
            return None
    return act


def _as_partition(Pi) -> list[tuple[int, ...]]:
    return sorted(tuple(sorted(int(x) for x in Y)) for Y in Pi)


# -- regular partitions ---------------------------------------------------------------

@dataclass
class RegularPartitionReport:
    X: tuple[int, ...]
    Pi: list[tuple[int, ...]]
    uniform: bool
    r1: bool
    r2: bool
    r3: bool
    alpha: int | None
    symmetric: bool

    @property
    def regular(self) -> bool:
        return self.uniform and (not self.symmetric or (self.r1 and self.r2 and self.r3))


def check_regular_partition(A: SRing, X, Pi) -> RegularPartitionReport:
    G = A.group
    X = tuple(sorted(int(x) for x in X))
    Pi = _as_partition(Pi)
    if sorted(x for Y in Pi for x in Y) != list(X):
        raise ValueError("Pi does not partition X")
    neg = G.neg
    symmetric = set(neg[list(X)].tolist()) == set(X)
    uniform = len({len(Y) for Y in Pi}) == 1
    inv = [tuple(sorted(neg[list(Y)].tolist())) for Y in Pi]
    r1 = set(inv) == set(Pi)
    if r1:
        fixed = [Y == Yi for Y, Yi in zip(Pi, inv)]
        r2 = all(fixed) or not any(fixed)
    else:
        r2 = False
    # sum over Y of Y * Y^-1, restricted to X
    total = np.zeros(G.order, dtype=np.int64)
    for Y in Pi:
        y = np.array(Y)
        total += np.bincount(G.sub_table[np.ix_(y, y)].ravel(), minlength=G.order)
    vals = total[list(X)]
    r3 = bool(np.all(vals == vals[0]))
    alpha = int(vals[0]) if r3 else None
    return RegularPartitionReport(X, Pi, uniform, r1, r2, r3, alpha, symmetric)


def uniform_partitions(X) -> list[list[tuple[int, ...]]]:
    """All partitions of ``X`` into classes of one common size."""
    X = sorted(X)
    n = len(X)
    out = []
    for size in range(1, n + 1):
        if n % size:
            continue

        def rec(rest):
            if not rest:
                yield []
                return
            head, tail = rest[0], rest[1:]
            for comb in itertools.combinations(tail, size - 1):
                block = (head,) + comb
                remaining = [x for x in tail if x not in comb]
                for more in rec(remaining):
                    yield [block] + more

        out.extend(rec(X))
    return out


def regular_partitions(A: SRing, X) -> list[list[tuple[int, ...]]]:
    return [Pi for Pi in uniform_partitions(X) if check_regular_partition(A, X, Pi).regular]


# -- standard pairs ------------------------------------------------------------------

@dataclass
class StandardPair:
    M: AutSubgroup
    L: AutSubgroup

    def __repr__(self):
        return f"StandardPair(M={group_type(self.M)}, L={group_type(self.L)})"


def _pair_for(M: AutSubgroup, X: tuple[int, ...], Pi: list[tuple[int, ...]]) -> StandardPair | None:
    if M.orbit(X[0]) != X:
        return None
    act = block_action(M, Pi)
    if act is None:
        return None
    L = M.sub(np.flatnonzero(np.all(act == np.arange(len(Pi)), axis=1)).tolist())
    if _as_partition(L.orbits(X)) != Pi:
        return None
    return StandardPair(M, L)


def standard_pairs(A: SRing, X, Pi) -> list[StandardPair]:
    """All ``(M, L)`` with ``X`` an ``M``-orbit, ``Pi = orb(L, X)`` and ``L`` the kernel on ``Pi``."""
    rep = check_regular_partition(A, X, Pi)
    if not rep.regular:
        raise NotRegularError("partition is not regular")
    X, Pi = rep.X, rep.Pi
    out = []
    for M in enumerate_aut_subgroups(automorphism_group(A.group)):
        pair = _pair_for(M, X, Pi)
        if pair is not None:
            out.append(pair)
    return out


def _perm_set(perms: np.ndarray) -> set[tuple[int, ...]]:
    return {tuple(int(v) for v in p) for p in perms}


def conjugate_standard_pair(pair: StandardPair, C, X, Pi) -> StandardPair:
    """``(M^s, L)`` with ``(M^s)^Pi = C`` for some ``s`` in ``Aut(G)``.

    ``C`` is a collection of permutations of the block indices of
    ``sorted(Pi)``; it must be cyclic, regular and commute with the
    block inversion.
    """
    G = pair.M.group
    X = tuple(sorted(X))
    Pi = _as_partition(Pi)
    k = len(Pi)
    C = np.array([list(c) for c in C], dtype=np.int64).reshape(-1, k)
    Cset = _perm_set(C)
    if len(Cset) != k or not all(len({c[i] for c in Cset}) == k for i in range(k)):
        raise NoConjugateError("C is not a regular group of the blocks")
    act = block_action(pair.M, Pi)
    if act is None:
        raise NoConjugateError("M does not act on the blocks")
    MP = np.unique(act, axis=0)
    if not _is_cyclic_perm_group(MP):
        raise NoConjugateError("the induced group of M on the blocks is not cyclic")
    neg = G.neg
    iota = np.array([Pi.index(tuple(sorted(neg[list(Y)].tolist()))) for Y in Pi])
    for c in C:
        if not np.array_equal(c[iota], iota[c]):
            raise NoConjugateError("C does not centralize the block inversion")
    if not _is_cyclic_perm_group(C):
        raise NoConjugateError("C is not cyclic")
    for s in automorphism_group(G).perms:
        Ms = pair.M.conjugate(s)
        cand = _pair_for(Ms, X, Pi)
        if cand is None or cand.L != pair.L:
            continue
        if _perm_set(block_action(Ms, Pi)) == Cset:
            return cand
    raise NoConjugateError("no conjugate of M induces C on the blocks")


def _is_cyclic_perm_group(P: np.ndarray) -> bool:
    rows = _perm_set(P)
    n = len(rows)
    for p in rows:
        cur, k = p, 1
        ident = tuple(range(len(p)))
        while cur != ident:
            cur = tuple(p[i] for i in cur)
            k += 1
        if k == n:
            return True
    return False


# -- E9 x Cp coordinates ---------------------------------------------------------------

def e9_cp_prime(G: AbelianGroup) -> int:
    """``p`` for ``G`` presented as ``(3, 3, p)``; otherwise a shape error."""
    if len(G.orders) != 3 or G.orders[:2] != (3, 3) or not isprime(G.orders[2]):
        raise GroupShapeError(f"expected a group 3x3xp, got {G.spec}")
    return int(G.orders[2])


def factor_restrictions(A: SRing) -> tuple[SRing, SRing]:
    """Restrictions of a dense ``A`` to E9 and Cp, over the standalone factor groups."""
    p = e9_cp_prime(A.group)
    la = A.labels[np.arange(9) * p]
    lp = A.labels[np.arange(p)]
    return SRing(E9, la), SRing(make_group([p]), lp)


@dataclass
class ProjectionData:
    X: tuple[int, ...]
    XA: tuple[int, ...]
    XP: tuple[int, ...]
    fibers: dict[int, tuple[int, ...]]
    PiA: list[tuple[int, ...]]
    PiP: list[tuple[int, ...]]
    f: dict[tuple[int, ...], tuple[int, ...]]
    p: int

    @property
    def kX(self) -> int:
        return len(self.PiA)

    def reconstruct(self) -> tuple[int, ...]:
        return tuple(sorted(a * self.p + x for Y in self.PiA for a in Y for x in self.f[Y]))

    def pip_partitions_xp(self) -> bool:
        flat = [x for Z in self.PiP for x in Z]
        return len(flat) == len(set(flat)) and sorted(flat) == list(self.XP)


def projection_data(A: SRing, X, allow_factor: bool = False) -> ProjectionData:
    p = e9_cp_prime(A.group)
    if not is_dense(A):
        raise NotDenseError("E9 and Cp must both be A-subgroups")
    X = tuple(sorted(int(g) for g in X))
    fibers: dict[int, list[int]] = {}
    for g in X:
        fibers.setdefault(g // p, []).append(g % p)
    XA = tuple(sorted(fibers))
    XP = tuple(sorted({g % p for g in X}))
    if not allow_factor and (XA == (0,) or XP == (0,)):
        raise FactorSetError("X lies inside a direct factor")
    fib = {a: tuple(sorted(v)) for a, v in fibers.items()}
    groups: dict[tuple[int, ...], list[int]] = {}
    for a in XA:
        groups.setdefault(fib[a], []).append(a)
    PiA = sorted(tuple(v) for v in groups.values())
    f = {Y: fib[Y[0]] for Y in PiA}
    PiP = [f[Y] for Y in PiA]
    return ProjectionData(X, XA, XP, fib, PiA, PiP, f, p)


def cp_subgroup_of_order(p: int, d: int) -> AutSubgroup:
    P = make_group([p])
    aut = automorphism_group(P)
    for M in enumerate_aut_subgroups(aut, bound=max(512, aut.order)):
        if M.order == d:
            return M
    raise ValueError(f"Aut(C{p}) has no subgroup of order {d}")


@dataclass
class ProjectionChecks:
    reconstructs: bool
    pip_partition: bool
    xp_is_v_orbit: bool
    pip_blocks_of_v: bool
    pia_regular: bool
    sizes_match: bool

    @property
    def ok(self) -> bool:
        return all(vars(self).values())


def check_projection(A: SRing, pd: ProjectionData) -> ProjectionChecks:
    AA, _ = factor_restrictions(A)
    V = cp_subgroup_of_order(pd.p, len(pd.XP))
    xp_orbit = V.orbit(pd.XP[0]) == pd.XP
    blocks_ok = xp_orbit and block_action(V, [tuple(Z) for Z in pd.PiP]) is not None
    rep = check_regular_partition(AA, pd.XA, pd.PiA)
    return ProjectionChecks(
        reconstructs=pd.reconstruct() == pd.X,
        pip_partition=pd.pip_partitions_xp(),
        xp_is_v_orbit=xp_orbit,
        pip_blocks_of_v=blocks_ok,
        pia_regular=rep.regular,
        sizes_match=len(pd.PiA) == len(pd.PiP),
    )


# -- subdirect products ------------------------------------------------------------------

@dataclass
class SubdirectProduct:
    U: AutSubgroup
    V: AutSubgroup
    U0: AutSubgroup
    V0: AutSubgroup
    f: dict
    K: AutSubgroup
    union: tuple[int, ...]
    orbit: tuple[int, ...]
    in_aut: bool

    @property
    def is_orbit(self) -> bool:
        return self.union == self.orbit


def product_group(A: AbelianGroup, P: AbelianGroup) -> AbelianGroup:
    return AbelianGroup(A.orders + P.orders)


def subdirect_product(U: AutSubgroup, V: AutSubgroup, U0: AutSubgroup, V0: AutSubgroup,
                      f: dict, XA=None, XP=None) -> SubdirectProduct:
    """The pairs ``(u, v)`` whose induced block permutations correspond under ``f``.

    ``f`` maps the ``U0``-orbits in ``XA`` to the ``V0``-orbits in ``XP``;
    ``XA`` and ``XP`` default to the unions of the blocks of ``f``.
    """
    GA, GP = U.group, V.group
    if not (U0.issubgroup(U) and U.normalizes(U0) and V0.issubgroup(V) and V.normalizes(V0)):
        raise QuotientMismatchError("U0 and V0 must be normal subgroups of U and V")
    blocks_a = _as_partition(f.keys())
    XA = tuple(sorted(XA)) if XA is not None else tuple(sorted(x for b in blocks_a for x in b))
    XP = tuple(sorted(XP)) if XP is not None else tuple(sorted(x for b in f.values() for x in b))
    if U.orbit(XA[0]) != XA or V.orbit(XP[0]) != XP:
        raise QuotientMismatchError("XA and XP must be orbits of U and V")
    if _as_partition(U0.orbits(XA)) != blocks_a:
        raise QuotientMismatchError("the blocks of f are not the U0-orbits in XA")
    fmap = {tuple(sorted(k)): tuple(sorted(v)) for k, v in f.items()}
    blocks_p = [fmap[b] for b in blocks_a]
    if _as_partition(V0.orbits(XP)) != _as_partition(blocks_p):
        raise QuotientMismatchError("the images of f are not the V0-orbits in XP")
    phi = block_action(U, blocks_a)
    psi = block_action(V, blocks_p)
    if phi is None or psi is None:
        raise QuotientMismatchError("blocks are not invariant")
    if _perm_set(phi) != _perm_set(psi):
        raise QuotientMismatchError("f does not induce an isomorphism of the quotient actions")
    # f identifies block i of XA with block i of XP, so compatibility is equality of rows
    key_psi: dict[tuple, list[int]] = {}
    for j, row in enumerate(psi):
        key_psi.setdefault(tuple(row.tolist()), []).append(j)
    n_p = GP.order
    rows = []
    for i, row in enumerate(phi):
        for j in key_psi[tuple(row.tolist())]:
            rows.append((U.perms[i][:, None] * n_p + V.perms[j][None, :]).ravel())
    G = product_group(GA, GP)
    Kp = np.array(rows, dtype=np.int64)
    K = AutSubgroup(G, Kp)
    add = G.add_table
    in_aut = bool(all(np.array_equal(k[add], add[np.ix_(k, k)]) for k in K.perms[:64]))
    if K.order > 64:
        in_aut = in_aut and _closed_under_products(K)
    union = tuple(sorted(a * n_p + x for b in blocks_a for a in b for x in fmap[b]))
    orbit = K.orbit(union[0])
    return SubdirectProduct(U, V, U0, V0, fmap, K, union, orbit, in_aut)


def _closed_under_products(K: AutSubgroup) -> bool:
    gens = K.generators
    return all(K.index_of(g[k]) is not None for g in gens for k in K.perms)


def construct_k(A: SRing, X) -> SubdirectProduct | None:
    """A subdirect product ``K <= Aut(E9) x Aut(Cp)`` having ``X`` as an orbit, if one is found."""
    pd = projection_data(A, X, allow_factor=True)
    AA, _ = factor_restrictions(A)
    p = pd.p
    V = cp_subgroup_of_order(p, len(pd.XP))
    block = len(pd.PiP[0])
    V0 = cp_subgroup_of_order(p, block) if pd.XP != (0,) else V
    for pair in standard_pairs(AA, pd.XA, pd.PiA):
        try:
            sd = subdirect_product(pair.M, V, pair.L, V0, pd.f, pd.XA, pd.XP)
        except QuotientMismatchError:
            continue
        if sd.is_orbit and sd.union == pd.X:
            return sd
    return None


# -- standard groups of the wreath case ------------------------------------------------------

STANDARD_GROUPS = {
    (1, 1): ("C6", "C6"),
    (1, 2): ("D12", "Sym(3)"),
    (2, 1): ("D12", "Sym(3)"),
    (2, 2): ("C6", "C3"),
    (3, 1): ("C6", "C2"),
    (6, 2): ("C6", "1"),
}


@dataclass
class StandardGroupRow:
    kX: int
    kY: int
    U: AutSubgroup
    U0: AutSubgroup
    C: Subgroup


@lru_cache(maxsize=None)
def _standard_group_search(kX: int, kY: int) -> StandardGroupRow:
    tU, tU0 = STANDARD_GROUPS[(kX, kY)]
    aut = automorphism_group(E9)
    subs = enumerate_aut_subgroups(aut)
    order3 = [H for H in enumerate_subgroups(E9) if H.order == 3]
    for U in subs:
        if group_type(U) != tU:
            continue
        for C in order3:
            YA = tuple(x for x in C.elements if x != 0)
            XA = tuple(x for x in range(1, 9) if x not in C.elements)
            if U.orbit(XA[0]) != XA or U.orbit(YA[0]) != YA:
                continue
            for U0 in subs:
                if group_type(U0) != tU0 or not U0.issubgroup(U) or not U.normalizes(U0):
                    continue
                ox, oy = U0.orbits(XA), U0.orbits(YA)
                if (len(ox), len(oy)) != (kX, kY):
                    continue
                # U0 is the kernel of U on the U0-orbits of XA and YA
                act = block_action(U, ox + oy)
                kern = np.all(act == np.arange(len(ox) + len(oy)), axis=1)
                if int(kern.sum()) != U0.order:
                    continue
                return StandardGroupRow(kX, kY, U, U0, C)
    raise AssertionError(f"no standard group for ({kX}, {kY})")


def standard_group(kX: int, kY: int) -> tuple[AutSubgroup, AutSubgroup]:
    """Standard pair ``(U', U'0)`` of the wreath case for the fibre counts ``(kX, kY)``."""
    if (kX, kY) not in STANDARD_GROUPS:
        raise PairNotInTableError(f"({kX}, {kY}) is not an admissible pair")
    row = _standard_group_search(kX, kY)
    return row.U, row.U0


def standard_group_row(kX: int, kY: int) -> StandardGroupRow:
    if (kX, kY) not in STANDARD_GROUPS:
        raise PairNotInTableError(f"({kX}, {kY}) is not an admissible pair")
    return _standard_group_search(kX, kY)


# -- classification over E9 -----------------------------------------------------------------

E9_FAMILIES = ("cyclotomic-over-GF9", "tensor-of-C3-rings", "wreath-of-C3-rings")


@dataclass
class E9Classification:
    tag: str
    tags: list[str]
    witnesses: dict = field(default_factory=dict)


@lru_cache(maxsize=None)
def singer_subgroups() -> tuple[AutSubgroup, ...]:
    """The cyclic subgroups of order 8 of Aut(E9)."""
    return tuple(M for M in enumerate_aut_subgroups(automorphism_group(E9)) if M.order == 8 and M.is_cyclic)


def classify_e9(A: SRing) -> E9Classification:
    G = A.group
    if G.orders != (3, 3):
        raise GroupShapeError(f"expected 3x3, got {G.spec}")
    tags, wit = [], {}
    for si, S in enumerate(singer_subgroups()):
        for M in enumerate_aut_subgroups(S):
            if M.order > 1 and SRing.from_partition(G, M.orbits()) == A:
                wit.setdefault("cyclotomic-over-GF9", {"singer": si, "order": M.order})
    if "cyclotomic-over-GF9" in wit:
        tags.append("cyclotomic-over-GF9")
    order3 = [H for H in enumerate_subgroups(G) if H.order == 3]
    for C, D in itertools.combinations(order3, 2):
        if is_tensor_decomposition(A, C, D):
            tags.append("tensor-of-C3-rings")
            wit["tensor-of-C3-rings"] = {"C": list(C.elements), "D": list(D.elements)}
            break
    for C in order3:
        if is_wreath(A, C, C):
            tags.append("wreath-of-C3-rings")
            wit["wreath-of-C3-rings"] = {"C": list(C.elements)}
            break
    if not tags:
        return E9Classification("unmatched", [], {})
    return E9Classification(tags[0], tags, wit)


# -- trichotomy over E9 x Cp --------------------------------------------------------------

TRICHOTOMY_TAGS = ("TrivialOrCyclotomic", "TensorTrivialWithC3", "GeneralizedWreath")


@dataclass
class TrichotomyResult:
    tags: list[str]
    witnesses: dict = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        return self.tags[0] if self.tags else "NonConforming"

    @property
    def conforming(self) -> bool:
        return bool(self.tags)

    def to_dict(self, group: AbelianGroup | None = None) -> dict:
        return {"verdict": self.verdict, "tags": list(self.tags), "witnesses": self.witnesses}


def classify_trichotomy(A: SRing) -> TrichotomyResult:
    G = A.group
    e9_cp_prime(G)
    tags, wit = [], {}
    M = is_cyclotomic(A)
    if A.rank <= 2 or M is not None:
        tags.append("TrivialOrCyclotomic")
        wit["TrivialOrCyclotomic"] = {"rank": A.rank, "cyclotomic_order": None if M is None else M.order}
    asubs = a_subgroups(A)
    for C in (H for H in asubs if H.order == 3):
        for L in (H for H in asubs if H.order * 3 == G.order):
            if len(set(C.elements) & set(L.elements)) != 1:
                continue
            if is_tensor_decomposition(A, C, L):
                # the factor over L must be trivial (rank <= 2)
                if len({int(A.labels[x]) for x in L.elements}) <= 2:
                    tags.append("TensorTrivialWithC3")
                    wit["TensorTrivialWithC3"] = {"C": list(C.elements), "L": list(L.elements)}
                    break
        if "TensorTrivialWithC3" in tags:
            break
    best = None
    for U in asubs:
        if U.order == G.order:
            continue
        for L in asubs:
            if L.order == 1 or not L <= U or U.order // L.order > 3:
                continue
            if is_wreath(A, U, L):
                cand = (U.order // L.order, U.order, list(U.elements), list(L.elements))
                if best is None or cand[:2] < best[:2]:
                    best = cand
    if best is not None:
        tags.append("GeneralizedWreath")
        wit["GeneralizedWreath"] = {"section_order": best[0], "U": best[2], "L": best[3]}
    if not tags:
        wit["NonConforming"] = {"basic_sets": [list(X) for X in A.basic_sets]}
    return TrichotomyResult(tags, wit)


def verify_dense_cyclotomic(A: SRing) -> bool:
    e9_cp_prime(A.group)
    if not is_dense(A):
        raise NotDenseError("E9 and Cp must both be A-subgroups")
    return is_cyclotomic(A) is not None


def center_images(A: SRing, X) -> list[tuple[int, ...]]:
    """Images of ``X`` under the centre of ``Aut(G)``."""
    Z = center_of_aut(A.group)
    return sorted({tuple(sorted(s[list(X)].tolist())) for s in Z.perms})
