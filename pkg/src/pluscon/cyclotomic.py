"""Exact arithmetic with roots of unity, and characters of finite groups.

Values of characters live in Z[zeta_m].  We compute in the slightly larger
ring Z[x]/(x^m - 1), where multiplication is plain cyclic convolution and
complex conjugation is index negation; an element is zero in Z[zeta_m]
exactly when the m-th cyclotomic polynomial divides it, which is an exact
integer polynomial division.  Nothing here ever rounds: floating point
appears only in :meth:`CyclotomicInteger.complex_value`, provided for
human-readable magnitudes.
"""

from __future__ import annotations

import cmath
import dataclasses
import functools
from math import gcd

from .errors import InvalidInput, NonAbelianGroup, RankMismatch
from .groups import (
    FiniteGroupRealization,
    abelian_basis,
    abelian_coordinates,
    abelianized_realization,
)


@functools.lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple:
    """Coefficients of Phi_m, low degree first, computed by exact division.

    x^m - 1 is the product of Phi_d over divisors d of m, so dividing out
    the proper divisors' polynomials leaves Phi_m.
    """
    if m < 1:
        raise InvalidInput("cyclotomic index must be positive")
    num = [-1] + [0] * (m - 1) + [1]  # x^m - 1
    for d in range(1, m):
        if m % d == 0:
            num = _polydiv_exact(num, list(cyclotomic_polynomial(d)))
    return tuple(num)


def _polydiv_exact(num: list, den: list) -> list:
    """Exact division of integer polynomials with monic divisor."""
    num = list(num)
    dd = len(den) - 1
    if den[-1] != 1:
        raise InvalidInput("divisor must be monic")
    out = [0] * (len(num) - dd)
    for k in range(len(num) - dd - 1, -1, -1):
        c = num[k + dd]
        out[k] = c
        if c:
            for i, b in enumerate(den):
                num[k + i] -= c * b
    if any(num):
        raise InvalidInput("polynomial division left a remainder")
    return out


def _polymod(num: list, den: tuple) -> list:
    """Remainder of an integer polynomial by a monic divisor."""
    num = list(num)
    dd = len(den) - 1
    for k in range(len(num) - dd - 1, -1, -1):
        c = num[k + dd]
        if c:
            for i, b in enumerate(den):
                num[k + i] -= c * b
    return num[:dd]


class CyclotomicInteger:
    """An element of Z[x]/(x^m - 1), used as a window onto Z[zeta_m]."""

    __slots__ = ("m", "coeffs")

    def __init__(self, m: int, coeffs=None):
        if m < 1:
            raise InvalidInput("modulus must be positive")
        self.m = m
        c = [0] * m
        if coeffs is not None:
            for k, v in enumerate(coeffs):
                c[k % m] += int(v)
        self.coeffs = tuple(c)

    @classmethod
    def zero(cls, m):
        return cls(m)

    @classmethod
    def one(cls, m):
        return cls(m, [1])

    @classmethod
    def root_of_unity(cls, m, k: int = 1, coefficient: int = 1):
        c = [0] * m
        c[k % m] = coefficient
        return cls(m, c)

    def _check(self, other):
        if not isinstance(other, CyclotomicInteger):
            raise InvalidInput("expected a cyclotomic integer")
        if other.m != self.m:
            raise InvalidInput(f"mixed cyclotomic moduli {self.m} and {other.m}")

    def __add__(self, other):
        if isinstance(other, int):
            other = CyclotomicInteger(self.m, [other])
        self._check(other)
        return CyclotomicInteger(self.m, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicInteger(self.m, [-a for a in self.coeffs])

    def __sub__(self, other):
        if isinstance(other, int):
            other = CyclotomicInteger(self.m, [other])
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return CyclotomicInteger(self.m, [other * a for a in self.coeffs])
        self._check(other)
        out = [0] * self.m
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[(i + j) % self.m] += a * b
        return CyclotomicInteger(self.m, out)

    __rmul__ = __mul__

    def conjugate(self) -> "CyclotomicInteger":
        out = [0] * self.m
        for k, v in enumerate(self.coeffs):
            out[(-k) % self.m] += v
        return CyclotomicInteger(self.m, out)

    def abs_squared(self) -> "CyclotomicInteger":
        return self * self.conjugate()

    def is_zero(self) -> bool:
        """Zero as an element of Z[zeta_m] (not merely of the convolution ring)."""
        return not any(_polymod(list(self.coeffs), cyclotomic_polynomial(self.m)))

    def __eq__(self, other):
        if isinstance(other, int):
            other = CyclotomicInteger(self.m, [other])
        if not isinstance(other, CyclotomicInteger):
            return NotImplemented
        if other.m != self.m:
            return False
        return (self - other).is_zero()

    def __hash__(self):
        return hash((self.m, tuple(_polymod(list(self.coeffs), cyclotomic_polynomial(self.m)))))

    def complex_value(self) -> complex:
        z = cmath.exp(2j * cmath.pi / self.m)
        acc = 0j
        power = 1 + 0j
        for c in self.coeffs:
            acc += c * power
            power *= z
        return acc

    def __repr__(self):
        terms = [f"{c}*z^{k}" for k, c in enumerate(self.coeffs) if c]
        return "CyclotomicInteger(" + (" + ".join(terms) or "0") + f"; m={self.m})"


def cyclotomic_determinant(rows, m: int) -> CyclotomicInteger:
    from .snf import generic_determinant
    return generic_determinant(rows, CyclotomicInteger.zero(m), CyclotomicInteger.one(m))


# ---------------------------------------------------------------------------
# characters


@dataclasses.dataclass(frozen=True)
class Character:
    """A 1-dimensional complex character of a finite group, held exactly.

    ``exponents[g]`` is k with chi(g) = zeta_m^k, where m is the exponent
    of the abelianization.  Characters of non-abelian groups factor through
    the abelianization, so this table is total.
    """

    modulus: int
    exponents: tuple

    def __call__(self, g: int) -> CyclotomicInteger:
        return CyclotomicInteger.root_of_unity(self.modulus, self.exponents[g])

    def is_trivial(self) -> bool:
        return not any(e % self.modulus for e in self.exponents)

    def conjugate(self) -> "Character":
        return Character(self.modulus,
                         tuple((-e) % self.modulus for e in self.exponents))

    def evaluate_ring_element(self, a) -> CyclotomicInteger:
        """chi extended linearly to the group ring."""
        out = [0] * self.modulus
        for g, c in a.coeffs.items():
            out[self.exponents[g] % self.modulus] += c
        return CyclotomicInteger(self.modulus, out)


def characters(r: FiniteGroupRealization) -> list:
    """All 1-dimensional characters, trivial first, in a pinned order.

    Computed from a basis of the abelianization: characters are indexed by
    exponent tuples (c_1, ..., c_k) with 0 <= c_i < d_i, enumerated
    lexicographically (so the all-zero trivial character leads).
    """
    ab, proj = abelianized_realization(r)
    basis = abelian_basis(ab)
    if not basis:
        return [Character(1, tuple(0 for _ in range(r.order)))]
    coords = abelian_coordinates(ab, basis)
    orders = [d for _, d in basis]
    m = 1
    for d in orders:
        m = m * d // gcd(m, d)
    out = []
    counters = [0] * len(orders)
    while True:
        exps = []
        for g in range(r.order):
            cs = coords[proj[g]]
            exps.append(sum(c * e * (m // d) for c, e, d in zip(counters, cs, orders)) % m)
        out.append(Character(m, tuple(exps)))
        # lexicographic increment
        i = len(counters) - 1
        while i >= 0:
            counters[i] += 1
            if counters[i] < orders[i]:
                break
            counters[i] = 0
            i -= 1
        if i < 0:
            break
    return out
