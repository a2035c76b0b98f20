"""Finite abelian groups presented as direct products of cyclic groups.

Elements are coordinate tuples; every group also numbers its elements
``0 .. order-1`` in lexicographic coordinate order, and almost all hot code
works with those integer indices.  Index 0 is always the identity.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, reduce
from typing import Iterable, Sequence

import numpy as np
from sympy import factorint

MAX_ORDER = 4096


class InvalidGroupError(ValueError):
    pass


class TooLargeError(ValueError):
    pass


@dataclass(frozen=True)
class AbelianGroup:
    orders: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "orders", tuple(int(n) for n in self.orders))
        if not self.orders or any(n < 2 for n in self.orders):
            raise InvalidGroupError(f"cyclic factor orders must be >= 2: {list(self.orders)}")

    def __repr__(self):
        return f"AbelianGroup({self.spec})"

    @property
    def spec(self) -> str:
        return "x".join(map(str, self.orders))

    @cached_property
    def order(self) -> int:
        return math.prod(self.orders)

    @cached_property
    def exponent(self) -> int:
        return reduce(math.lcm, self.orders, 1)

    @property
    def rank(self) -> int:
        return len(self.orders)

    @cached_property
    def _weights(self) -> np.ndarray:
        w = [1] * self.rank
        for i in range(self.rank - 2, -1, -1):
            w[i] = w[i + 1] * self.orders[i + 1]
        return np.array(w, dtype=np.int64)

    @cached_property
    def coords(self) -> np.ndarray:
        """``order x rank`` array; row ``i`` holds the coordinates of element ``i``."""
        grids = np.indices(self.orders).reshape(self.rank, -1).T
        return np.ascontiguousarray(grids, dtype=np.int64)

    def index(self, coords: Sequence[int]) -> int:
        c = [int(x) % n for x, n in zip(coords, self.orders)]
        if len(c) != self.rank:
            raise ValueError(f"expected {self.rank} coordinates, got {list(coords)}")
        return int(np.dot(c, self._weights))

    def index_array(self, coords: np.ndarray) -> np.ndarray:
        """Vectorised ``index`` over the last axis of ``coords`` (reduced mod orders)."""
        return (np.mod(coords, self.orders) * self._weights).sum(axis=-1)

    def element(self, i: int) -> tuple[int, ...]:
        return tuple(int(x) for x in self.coords[i])

    def elements(self) -> range:
        return range(self.order)

    @cached_property
    def add_table(self) -> np.ndarray:
        c = self.coords
        return self.index_array(c[:, None, :] + c[None, :, :])

    @cached_property
    def sub_table(self) -> np.ndarray:
        """``sub_table[g, x] = g - x``."""
        c = self.coords
        return self.index_array(c[:, None, :] - c[None, :, :])

    @cached_property
    def neg(self) -> np.ndarray:
        return self.index_array(-self.coords)

    def add(self, a: int, b: int) -> int:
        return int(self.index_array(self.coords[a] + self.coords[b]))

    def multiple(self, k: int, a: int) -> int:
        return int(self.index_array(k * self.coords[a]))

    @cached_property
    def element_orders(self) -> np.ndarray:
        c = self.coords
        out = np.ones(self.order, dtype=np.int64)
        for j, n in enumerate(self.orders):
            out = np.lcm(out, n // np.gcd(c[:, j], n))
        return out

    @cached_property
    def unit_generators(self) -> tuple[int, ...]:
        """Indices of the canonical generators ``(0,..,1,..,0)``."""
        gens = []
        for j in range(self.rank):
            e = [0] * self.rank
            e[j] = 1
            gens.append(self.index(e))
        return tuple(gens)


def make_group(orders: Iterable[int], bound: int = MAX_ORDER) -> AbelianGroup:
    G = AbelianGroup(tuple(orders))
    if G.order > bound:
        raise InvalidGroupError(f"group order {G.order} exceeds bound {bound}")
    return G


def parse_group_spec(spec: str, bound: int = MAX_ORDER) -> AbelianGroup:
    """Parse ``"3x3x5"`` style group specs."""
    try:
        orders = [int(tok) for tok in spec.lower().split("x")]
    except ValueError as exc:
        raise InvalidGroupError(f"bad group spec {spec!r}") from exc
    return make_group(orders, bound)


def primary_type(orders: Iterable[int]) -> tuple[int, ...]:
    """Sorted prime-power invariants of ``prod C_n``."""
    out = []
    for n in orders:
        out.extend(p**k for p, k in factorint(n).items())
    return tuple(sorted(out, key=lambda q: (min(factorint(q)), q)))


# -- abstract finite abelian groups given by an addition table ------------------

def _element_orders(table: np.ndarray) -> np.ndarray:
    q = table.shape[0]
    orders = np.ones(q, dtype=np.int64)
    cur = np.arange(q)
    k = 1
    done = cur == 0
    while not done.all():
        cur = table[cur, np.arange(q)]
        k += 1
        newly = (cur == 0) & ~done
        orders[newly] = k
        done |= newly
    orders[0] = 1
    return orders


def table_type(table: np.ndarray) -> tuple[int, ...]:
    """Primary invariants of an abelian group given by its addition table."""
    q = table.shape[0]
    eo = _element_orders(table)
    out = []
    for p in sorted(factorint(q)):
        sizes = [1]
        j = 1
        while True:
            size = int(np.count_nonzero(np.mod(p**j, eo) == 0))
            sizes.append(size)
            if size == sizes[-2] and j > 1:
                break
            j += 1
        logs = [round(math.log(s, p)) for s in sizes]
        # number of invariants p^a with a >= j is logs[j] - logs[j-1]
        ge = [logs[j] - logs[j - 1] for j in range(1, len(logs))]
        for j in range(len(ge)):
            nxt = ge[j + 1] if j + 1 < len(ge) else 0
            out.extend([p ** (j + 1)] * (ge[j] - nxt))
    return tuple(sorted(out, key=lambda x: (min(factorint(x)), x)))


def _span_add(table: np.ndarray, span: np.ndarray, h: int, n: int) -> np.ndarray:
    parts = [span]
    cur = span
    for _ in range(n - 1):
        cur = table[cur, h]
        parts.append(cur)
    return np.unique(np.concatenate(parts))


def basis_search(table: np.ndarray, orders: Sequence[int], first_only: bool = False,
                 limit: int | None = None) -> list[tuple[int, ...]]:
    """All tuples ``(h_1..h_k)`` such that ``e_i -> h_i`` is an isomorphism
    ``prod C_{orders[i]} -> (table)``.

    Images must have order dividing ``orders[i]``; injectivity is enforced
    by requiring the running span to grow by exactly ``orders[i]``.
    """
    eo = _element_orders(table)
    cands = [np.flatnonzero(np.mod(n, eo) == 0) for n in orders]
    results: list[tuple[int, ...]] = []

    def rec(i, chosen, span):
        if i == len(orders):
            results.append(tuple(chosen))
            return first_only or (limit is not None and len(results) > limit)
        n = orders[i]
        in_span = np.zeros(table.shape[0], dtype=bool)
        in_span[span] = True
        for h in cands[i]:
            if eo[h] != n and i < len(orders):
                # order must be exactly n for the span to grow by n
                continue
            if in_span[h]:
                continue
            new = _span_add(table, span, int(h), n)
            if len(new) != len(span) * n:
                continue
            chosen.append(int(h))
            stop = rec(i + 1, chosen, new)
            chosen.pop()
            if stop:
                return True
        return False

    rec(0, [], np.array([0]))
    return results


def coordinate_map(table: np.ndarray, orders: Sequence[int], basis: Sequence[int]) -> np.ndarray:
    """Element index reached by each coordinate vector (lexicographic order)."""
    Q = AbelianGroup(tuple(orders))
    out = np.zeros(Q.order, dtype=np.int64)
    for idx in range(Q.order):
        cur = 0
        for c, h in zip(Q.coords[idx], basis):
            for _ in range(int(c)):
                cur = table[cur, h]
        out[idx] = cur
    return out


def find_isomorphism(G: AbelianGroup, H: AbelianGroup) -> np.ndarray | None:
    """An isomorphism ``G -> H`` as an index array, or ``None``."""
    if G.order != H.order or primary_type(G.orders) != primary_type(H.orders):
        return None
    sols = basis_search(H.add_table, G.orders, first_only=True)
    if not sols:
        return None
    return coordinate_map(H.add_table, G.orders, sols[0])


# -- subgroups --------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Subgroup:
    ambient: AbelianGroup
    elements: tuple[int, ...]
    generators: tuple[int, ...]

    def __eq__(self, other):
        return (isinstance(other, Subgroup) and self.ambient == other.ambient
                and self.elements == other.elements)

    def __hash__(self):
        return hash((self.ambient, self.elements))

    def __repr__(self):
        return f"Subgroup(order={self.order}, gens={[self.ambient.element(g) for g in self.generators]})"

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.ambient.order, dtype=bool)
        m[list(self.elements)] = True
        return m

    def __contains__(self, g) -> bool:
        return bool(self.mask[g])

    def __le__(self, other: "Subgroup") -> bool:
        return bool(np.all(other.mask[list(self.elements)]))

    def cosets(self) -> list[tuple[int, ...]]:
        seen = np.zeros(self.ambient.order, dtype=bool)
        out = []
        els = np.array(self.elements)
        for g in range(self.ambient.order):
            if not seen[g]:
                c = np.sort(self.ambient.add_table[g, els])
                seen[c] = True
                out.append(tuple(int(x) for x in c))
        return out


def span(G: AbelianGroup, gens: Iterable[int]) -> np.ndarray:
    cur = np.array([0])
    table = G.add_table
    for g in gens:
        n = int(G.element_orders[g])
        cur = _span_add(table, cur, int(g), n)
    return cur


def generated_subgroup(G: AbelianGroup, gens: Iterable[int]) -> Subgroup:
    gens = list(gens)
    els = span(G, gens)
    chosen: list[int] = []
    cur = np.array([0])
    for g in gens:
        if g not in set(cur.tolist()):
            chosen.append(int(g))
            cur = span(G, chosen)
    return Subgroup(G, tuple(int(x) for x in els), tuple(chosen))


def subgroup_from_elements(G: AbelianGroup, elements: Iterable[int]) -> Subgroup:
    els = sorted(set(int(x) for x in elements))
    H = generated_subgroup(G, els)
    if list(H.elements) != els:
        raise ValueError("element set is not a subgroup")
    return H


def trivial_subgroup(G: AbelianGroup) -> Subgroup:
    return Subgroup(G, (0,), ())


def whole_group(G: AbelianGroup) -> Subgroup:
    return generated_subgroup(G, G.unit_generators)


_SUBGROUP_CACHE: dict[AbelianGroup, list[Subgroup]] = {}


def enumerate_subgroups(G: AbelianGroup) -> list[Subgroup]:
    """Every subgroup once, sorted by ``(order, element list)``."""
    if G in _SUBGROUP_CACHE:
        return _SUBGROUP_CACHE[G]
    cyclic: dict[tuple[int, ...], int] = {}
    for g in range(G.order):
        key = tuple(span(G, [g]).tolist())
        cyclic.setdefault(key, g)
    found: dict[tuple[int, ...], list[int]] = {(0,): []}
    for key, g in cyclic.items():
        found.setdefault(key, [g] if g else [])
    frontier = [k for k in found if k != (0,)]
    cyc_items = [(np.array(k), g) for k, g in cyclic.items() if g]
    while frontier:
        new = []
        for key in frontier:
            mask = np.zeros(G.order, dtype=bool)
            mask[list(key)] = True
            for ck, g in cyc_items:
                if mask[ck].all():
                    continue
                gens = found[key] + [g]
                k2 = tuple(span(G, gens).tolist())
                if k2 not in found:
                    found[k2] = gens
                    new.append(k2)
        frontier = new
    subs = [Subgroup(G, k, tuple(generated_subgroup(G, gens).generators)) for k, gens in found.items()]
    subs.sort(key=lambda H: (H.order, H.elements))
    _SUBGROUP_CACHE[G] = subs
    return subs


# -- sections ----------------------------------------------------------------------

class Section:
    """The quotient ``U/L`` with ``L <= U <= G``.

    ``quotient`` is presented in primary form (prime powers sorted by prime,
    then size); ``projection[g]`` is the quotient index of ``g`` for ``g`` in
    ``U`` and ``-1`` elsewhere.
    """

    def __init__(self, U: Subgroup, L: Subgroup):
        if not L <= U:
            raise ValueError("section needs L <= U")
        G = U.ambient
        self.G, self.U, self.L = G, U, L
        Lels = np.array(L.elements)
        label = np.full(G.order, -1, dtype=np.int64)
        reps = []
        for u in U.elements:
            if label[u] < 0:
                label[G.add_table[u, Lels]] = len(reps)
                reps.append(u)
        q = len(reps)
        reps_arr = np.array(reps)
        table = label[G.add_table[np.ix_(reps_arr, reps_arr)]]
        self.coset_reps = reps_arr
        orders = table_type(table) if q > 1 else (1,)
        if q == 1:
            self.quotient = None
            self.projection = np.where(label >= 0, 0, -1)
            self.lift = np.array([0])
            return
        self.quotient = AbelianGroup(orders)
        basis = basis_search(table, orders, first_only=True)[0]
        cmap = coordinate_map(table, orders, basis)  # quotient index -> coset label
        inv = np.empty(q, dtype=np.int64)
        inv[cmap] = np.arange(q)
        self.projection = np.where(label >= 0, inv[np.maximum(label, 0)], -1)
        self.lift = reps_arr[cmap]  # one preimage per quotient element

    @property
    def order(self) -> int:
        return len(self.coset_reps)

    def project(self, X: Iterable[int]) -> tuple[int, ...]:
        return tuple(sorted({int(self.projection[x]) for x in X}))

    def preimage(self, Q: Iterable[int]) -> tuple[int, ...]:
        Qs = set(int(x) for x in Q)
        return tuple(int(g) for g in np.flatnonzero(np.isin(self.projection, list(Qs))))
