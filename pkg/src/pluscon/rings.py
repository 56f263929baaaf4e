"""Coefficient rings: Z, Z/n, and Z with a set of primes inverted.

Homology is always computed integrally first; a :class:`RingSpec` then says
how invariant factors transform under -- tensor R (and Tor(-, R) for the
finite quotient rings).  Z[1/S] is flat over Z, so for localized
coefficients tensoring the invariant factors is the whole story.
"""

from __future__ import annotations

import dataclasses
import re

from .errors import InvalidInput


def _prime_factors(n: int) -> tuple:
    n = abs(n)
    if n <= 1:
        raise InvalidInput("cannot invert 0 or units")
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return tuple(out)


@dataclasses.dataclass(frozen=True)
class RingSpec:
    """One of Z, Z/n (n >= 2), or Z[1/p1, ..., 1/pk]."""

    kind: str  # "Z" | "Zmod" | "Zloc"
    modulus: int = 0
    inverted: tuple = ()

    def __post_init__(self):
        if self.kind == "Z":
            if self.modulus or self.inverted:
                raise InvalidInput("Z takes no parameters")
        elif self.kind == "Zmod":
            if self.modulus < 2 or self.inverted:
                raise InvalidInput("Z/n needs a modulus n >= 2")
        elif self.kind == "Zloc":
            if self.modulus or not self.inverted:
                raise InvalidInput("a localization inverts at least one prime")
            if list(self.inverted) != sorted(set(self.inverted)):
                raise InvalidInput("inverted primes must be sorted and distinct")
            for p in self.inverted:
                if _prime_factors(p) != (p,):
                    raise InvalidInput(f"{p} is not prime")
        else:
            raise InvalidInput(f"unknown ring kind {self.kind!r}")

    @classmethod
    def integers(cls) -> "RingSpec":
        return cls("Z")

    @classmethod
    def mod(cls, n: int) -> "RingSpec":
        return cls("Zmod", modulus=n)

    @classmethod
    def localized_away_from(cls, primes) -> "RingSpec":
        inv = set()
        for n in primes:
            inv.update(_prime_factors(n))
        return cls("Zloc", inverted=tuple(sorted(inv)))

    @classmethod
    def parse(cls, text: str) -> "RingSpec":
        s = text.strip().replace(" ", "")
        if s == "Z":
            return cls.integers()
        m = re.fullmatch(r"Z/(\d+)", s)
        if m:
            return cls.mod(int(m.group(1)))
        m = re.fullmatch(r"Z\[((?:1/\d+,?)+)\]", s)
        if m:
            denominators = [int(part[2:]) for part in m.group(1).rstrip(",").split(",")]
            return cls.localized_away_from(denominators)
        raise InvalidInput(f"cannot parse ring {text!r}; try Z, Z/5, or Z[1/2,1/3]")

    def label(self) -> str:
        if self.kind == "Z":
            return "Z"
        if self.kind == "Zmod":
            return f"Z/{self.modulus}"
        return "Z[" + ",".join(f"1/{p}" for p in self.inverted) + "]"

    # -- arithmetic helpers ------------------------------------------------

    def strip_inverted(self, n: int) -> int:
        """Remove all inverted-prime factors from n (Zloc only; else n)."""
        if self.kind != "Zloc" or n == 0:
            return n
        for p in self.inverted:
            while n % p == 0:
                n //= p
        return n

    def is_s_number(self, n: int) -> bool:
        """Does n become a unit in this ring?"""
        if n == 0:
            return False
        n = abs(n)
        if self.kind == "Z":
            return n == 1
        if self.kind == "Zmod":
            from math import gcd
            return gcd(n, self.modulus) == 1
        return self.strip_inverted(n) == 1

    def tensor_factor(self, d: int) -> int:
        """Invariant factor of (Z/d) tensor R, with d = 0 meaning Z.

        Returns 0 for a free summand, 1 for a vanishing one, else the
        torsion order.
        """
        if self.kind == "Z":
            return d
        if self.kind == "Zmod":
            if d == 0:
                return self.modulus
            from math import gcd
            return gcd(d, self.modulus)
        return 0 if d == 0 else self.strip_inverted(d)

    def tor_factor(self, d: int) -> int:
        """Invariant factor of Tor(Z/d, R); 1 means it vanishes."""
        if d == 0:
            return 1
        if self.kind == "Z":
            return 1
        if self.kind == "Zmod":
            from math import gcd
            return gcd(d, self.modulus)
        return 1  # Z[1/S] is torsion-free, hence flat

    def __str__(self):
        return self.label()


Z = RingSpec.integers()
