"""Characters of finite abelian groups with exact values in Z[zeta_m].

The dual group is identified with ``G`` itself: the label ``y`` names the
character ``x -> zeta_m ** (sum_i x_i * y_i * m / n_i)`` where ``m`` is the
exponent of ``G``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import mpmath
import numpy as np
from sympy import Poly, cyclotomic_poly, symbols

from .groups import AbelianGroup, Subgroup, generated_subgroup

_x = symbols("x")


@lru_cache(maxsize=None)
def cyclotomic_coeffs(m: int) -> tuple[int, ...]:
    """Coefficients of the m-th cyclotomic polynomial, constant term first."""
    return tuple(int(c) for c in reversed(Poly(cyclotomic_poly(m, _x), _x).all_coeffs()))


@lru_cache(maxsize=None)
def power_reduction(m: int) -> np.ndarray:
    """Row ``k`` holds ``x**k mod Phi_m`` for ``0 <= k < m``."""
    phi = cyclotomic_coeffs(m)
    d = len(phi) - 1
    rows = np.zeros((m, d), dtype=object)
    cur = [0] * d
    cur[0] = 1
    for k in range(m):
        rows[k] = cur
        # multiply by x, then eliminate x**d using the monic Phi_m
        top = cur[-1]
        cur = [0] + cur[:-1]
        cur = [c - top * phi[i] for i, c in enumerate(cur)]
    return rows.astype(np.int64)


@dataclass(frozen=True)
class CyclotomicInteger:
    m: int
    coeffs: tuple[int, ...]

    @classmethod
    def from_exponent_counts(cls, m: int, counts: Iterable[int]) -> "CyclotomicInteger":
        c = np.asarray(list(counts), dtype=np.int64)
        return cls(m, tuple(int(v) for v in c @ power_reduction(m)))

    @classmethod
    def from_int(cls, m: int, k: int) -> "CyclotomicInteger":
        d = len(cyclotomic_coeffs(m)) - 1
        return cls(m, (k,) + (0,) * (d - 1))

    @classmethod
    def zeta_power(cls, m: int, k: int) -> "CyclotomicInteger":
        counts = [0] * m
        counts[k % m] = 1
        return cls.from_exponent_counts(m, counts)

    def _check(self, other):
        if not isinstance(other, CyclotomicInteger) or other.m != self.m:
            raise TypeError("cyclotomic integers over different rings")

    def __add__(self, other):
        self._check(other)
        return CyclotomicInteger(self.m, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return CyclotomicInteger(self.m, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._check(other)
        counts = [0] * self.m
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    counts[(i + j) % self.m] += a * b
        return CyclotomicInteger.from_exponent_counts(self.m, counts)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def to_complex(self, prec: int = 128) -> mpmath.mpc:
        with mpmath.workprec(prec):
            z = mpmath.exp(2j * mpmath.pi / self.m)
            return mpmath.fsum(c * z**k for k, c in enumerate(self.coeffs))


def pairing_exponents(G: AbelianGroup) -> np.ndarray:
    """``E[y, x]`` = exponent of zeta_m in ``chi_y(x)``."""
    m = G.exponent
    scale = np.array([m // n for n in G.orders], dtype=np.int64)
    return np.mod((G.coords * scale) @ G.coords.T, m)


@dataclass(frozen=True)
class Character:
    group: AbelianGroup
    label: int

    def exponent(self, x: int) -> int:
        m = self.group.exponent
        cy, cx = self.group.coords[self.label], self.group.coords[x]
        return int(sum(int(a) * int(b) * (m // n) for a, b, n in zip(cy, cx, self.group.orders)) % m)

    def value(self, x: int) -> CyclotomicInteger:
        return CyclotomicInteger.zeta_power(self.group.exponent, self.exponent(x))

    def is_trivial(self) -> bool:
        return self.label == 0


def character_sum(chi: Character, X: Iterable[int]) -> CyclotomicInteger:
    m = chi.group.exponent
    counts = np.zeros(m, dtype=np.int64)
    for x in X:
        counts[chi.exponent(x)] += 1
    return CyclotomicInteger.from_exponent_counts(m, counts)


def character_sums_matrix(G: AbelianGroup, X: Iterable[int]) -> np.ndarray:
    """Row ``y``: reduced coefficient vector of ``sum_{x in X} chi_y(x)``."""
    m = G.exponent
    E = pairing_exponents(G)[:, list(X)]
    counts = np.zeros((G.order, m), dtype=np.int64)
    rows = np.repeat(np.arange(G.order), E.shape[1])
    np.add.at(counts, (rows, E.ravel()), 1)
    return counts @ power_reduction(m)


def orthogonal_subgroup(H: Subgroup) -> Subgroup:
    """``H^perp``: labels of the characters trivial on ``H`` (a subgroup of the dual)."""
    G = H.ambient
    E = pairing_exponents(G)[:, list(H.elements)]
    perp = np.flatnonzero(np.all(E == 0, axis=1))
    return generated_subgroup(G, perp.tolist()) if len(perp) > 1 else Subgroup(G, (0,), ())
