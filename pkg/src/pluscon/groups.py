"""Finite groups as multiplication tables, plus presentations and homs.

A :class:`FiniteGroupRealization` is a full multiplication table with
0-based element indices and the identity pinned at index 0.  Tables rather
than permutation machinery keep every operation elementary and exactly
checkable; the intended scale (orders up to a few hundred, with an
exhaustive-validation bound in the budgets) makes the O(n^2)/O(n^3) costs a
non-issue.

Presentations are lists of relator words over named generators.  Group
homomorphisms out of a presentation are given on generators and validated
by evaluating every relator; homomorphisms between two realizations are
stored as full element maps and validated on all pairs.  There is no word
problem solver anywhere in this package — everything that looks like one is
either evaluation in a finite realization or integer linear algebra.
"""

from __future__ import annotations

import dataclasses
import itertools
from typing import Optional, Sequence

import numpy as np

from .config import DEFAULT, Budgets
from .errors import InvalidInput, NonAbelianGroup, NotNormal, OrderTooLarge
from .snf import smith_normal_form
from .words import Word, parse_word


class FiniteGroupRealization:
    """A finite group given by its full multiplication table.

    ``table[i, j]`` is the index of the product g_i * g_j; index 0 is the
    identity.  ``name`` is cosmetic and never affects equality semantics.
    """

    def __init__(self, table, name: str = ""):
        t = np.asarray(table, dtype=np.int64)
        if t.ndim != 2 or t.shape[0] != t.shape[1]:
            raise InvalidInput("multiplication table must be square")
        self.table = t
        self.order = t.shape[0]
        self.name = name
        if self.order == 0:
            raise InvalidInput("a group has at least the identity element")
        if (t < 0).any() or (t >= self.order).any():
            raise InvalidInput("table entries must be element indices")
        if (t[0] != np.arange(self.order)).any() or (t[:, 0] != np.arange(self.order)).any():
            raise InvalidInput("index 0 must act as the identity")
        inv = np.full(self.order, -1, dtype=np.int64)
        for i in range(self.order):
            js = np.flatnonzero(t[i] == 0)
            if len(js) != 1:
                raise InvalidInput(f"element {i} has no unique inverse")
            inv[i] = js[0]
        self.inverse = inv
        self._digest = hash(t.tobytes())

    def same_as(self, other) -> bool:
        """Structural identity: same multiplication table.

        Group ring code mixes values freely across realizations that pass
        this check, so independently constructed copies of one group
        interoperate.
        """
        if self is other:
            return True
        return (isinstance(other, FiniteGroupRealization)
                and self.order == other.order
                and self._digest == other._digest
                and bool((self.table == other.table).all()))

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def conj(self, g: int, x: int) -> int:
        """g x g^-1."""
        return self.mul(self.mul(g, x), self.inv(g))

    def element_order(self, a: int) -> int:
        n, x = 1, a
        while x != 0:
            x = self.mul(x, a)
            n += 1
        return n

    def exponent(self) -> int:
        out = 1
        for a in range(self.order):
            o = self.element_order(a)
            out = out * o // _gcd(out, o)
        return out

    def is_abelian(self) -> bool:
        return bool((self.table == self.table.T).all())

    def evaluate_word(self, w: Word, images: Sequence[int]) -> int:
        acc = 0
        for g, e in w:
            x = images[g]
            acc = self.mul(acc, x if e == 1 else self.inv(x))
        return acc

    def __repr__(self):
        label = self.name or f"order {self.order}"
        return f"<FiniteGroupRealization {label}>"


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


# ---------------------------------------------------------------------------
# constructors


def trivial_group() -> FiniteGroupRealization:
    return FiniteGroupRealization([[0]], name="1")


def cyclic_group(n: int) -> FiniteGroupRealization:
    if n < 1:
        raise InvalidInput("cyclic group order must be positive")
    idx = np.arange(n)
    return FiniteGroupRealization((idx[:, None] + idx[None, :]) % n, name=f"Z/{n}")


def direct_product(a: FiniteGroupRealization, b: FiniteGroupRealization) -> FiniteGroupRealization:
    """Product group with index encoding i*|B| + j (so (0,0) stays 0)."""
    na, nb = a.order, b.order
    table = np.empty((na * nb, na * nb), dtype=np.int64)
    for i, j in itertools.product(range(na), range(nb)):
        row = a.table[i][:, None] * nb + b.table[j][None, :]
        table[i * nb + j] = row.reshape(-1)
    name = f"{a.name} x {b.name}" if a.name and b.name else ""
    return FiniteGroupRealization(table, name=name)


def from_permutations(perms: Sequence[Sequence[int]], name: str = "") -> FiniteGroupRealization:
    """Close a set of permutations under composition and build the table.

    Products compose right-to-left: (p*q)(x) = p(q(x)).  Elements are indexed
    in BFS discovery order from the identity, which keeps the construction
    deterministic.
    """
    if not perms:
        raise InvalidInput("need at least one generating permutation")
    degree = len(perms[0])
    gens = []
    for p in perms:
        tp = tuple(p)
        if sorted(tp) != list(range(degree)):
            raise InvalidInput(f"not a permutation of 0..{degree - 1}: {p}")
        gens.append(tp)
    ident = tuple(range(degree))
    index = {ident: 0}
    elements = [ident]
    frontier = [ident]
    while frontier:
        nxt = []
        for q in frontier:
            for g in gens:
                prod = tuple(g[q[x]] for x in range(degree))
                if prod not in index:
                    index[prod] = len(elements)
                    elements.append(prod)
                    nxt.append(prod)
        frontier = nxt
    n = len(elements)
    table = np.empty((n, n), dtype=np.int64)
    for i, p in enumerate(elements):
        for j, q in enumerate(elements):
            table[i, j] = index[tuple(p[q[x]] for x in range(degree))]
    r = FiniteGroupRealization(table, name=name)
    r.permutations = elements
    r.generators = [index[g] for g in gens]
    return r


def symmetric_group(n: int) -> FiniteGroupRealization:
    if n <= 1:
        return trivial_group()
    swap = [1, 0] + list(range(2, n))
    cycle = list(range(1, n)) + [0]
    return from_permutations([swap, cycle], name=f"S{n}")


def alternating_group(n: int) -> FiniteGroupRealization:
    if n <= 2:
        return trivial_group()
    threes = []
    for i in range(n - 2):
        p = list(range(n))
        p[i], p[i + 1], p[i + 2] = p[i + 1], p[i + 2], p[i]
        threes.append(p)
    return from_permutations(threes, name=f"A{n}")


def dihedral_group(n: int) -> FiniteGroupRealization:
    """Symmetries of the regular n-gon (order 2n)."""
    rot = list(range(1, n)) + [0]
    refl = [(-x) % n for x in range(n)]
    return from_permutations([rot, refl], name=f"D{n}")


def quaternion_group() -> FiniteGroupRealization:
    """Q8 with elements 1, i, j, k, -1, -i, -j, -k in that index order."""
    units = ["1", "i", "j", "k", "-1", "-i", "-j", "-k"]
    prod = {}
    base = {("i", "i"): "-1", ("j", "j"): "-1", ("k", "k"): "-1",
            ("i", "j"): "k", ("j", "k"): "i", ("k", "i"): "j",
            ("j", "i"): "-k", ("k", "j"): "-i", ("i", "k"): "-j"}

    def mul(u, v):
        su, sv = u.startswith("-"), v.startswith("-")
        cu, cv = u.lstrip("-"), v.lstrip("-")
        if cu == "1":
            w = cv
        elif cv == "1":
            w = cu
        else:
            w = base[(cu, cv)]
        neg = su ^ sv ^ w.startswith("-")
        w = w.lstrip("-")
        return ("-" if neg else "") + w

    idx = {u: i for i, u in enumerate(units)}
    table = [[idx[mul(u, v)] for v in units] for u in units]
    return FiniteGroupRealization(table, name="Q8")


# ---------------------------------------------------------------------------
# validation and structure


def validate_realization(r: FiniteGroupRealization, budgets: Budgets = DEFAULT) -> bool:
    """Exhaustively check the group axioms on the table.

    Uses vectorized triple products, slicing over the last index to bound
    memory.  Raises OrderTooLarge above the configured bound instead of
    silently burning hours.
    """
    n = r.order
    if n > budgets.validate_order_bound:
        raise OrderTooLarge(
            f"order {n} exceeds validate_order_bound={budgets.validate_order_bound}"
        )
    t = r.table
    for i in range(n):
        if sorted(t[i]) != list(range(n)) or sorted(t[:, i]) != list(range(n)):
            return False
    step = max(1, min(n, 2**24 // max(n * n, 1)))
    for k0 in range(0, n, step):
        ks = np.arange(k0, min(k0 + step, n))
        left = t[t][:, :, ks]            # (i*j)*k
        right = t[:, t[:, ks].reshape(-1)].reshape(n, n, len(ks))  # i*(j*k)
        if (left != right).any():
            return False
    return True


def find_generators(r: FiniteGroupRealization) -> list:
    """A small generating set, built greedily (deterministic)."""
    if getattr(r, "generators", None):
        return list(r.generators)
    gens: list = []
    have = {0}
    for x in range(1, r.order):
        if x not in have:
            gens.append(x)
            have = subgroup_closure(r, gens)
            if len(have) == r.order:
                break
    return gens


def element_orders(r: FiniteGroupRealization) -> list:
    return [r.element_order(x) for x in range(r.order)]


def is_cyclic(r: FiniteGroupRealization) -> bool:
    return any(r.element_order(x) == r.order for x in range(r.order))


def cyclic_generator(r: FiniteGroupRealization) -> Optional[int]:
    """Lowest-index element of full order, or None if not cyclic."""
    for x in range(r.order):
        if r.element_order(x) == r.order:
            return x
    return None


# ---------------------------------------------------------------------------
# presentations


@dataclasses.dataclass(frozen=True)
class FinitePresentation:
    """Finitely many named generators and relator words."""

    generators: tuple
    relators: tuple  # tuple[Word, ...]

    def __post_init__(self):
        seen = set()
        for g in self.generators:
            if g in seen:
                raise InvalidInput(f"duplicate generator name {g!r}")
            seen.add(g)
        for w in self.relators:
            for g, e in w:
                if not 0 <= g < len(self.generators) or e not in (1, -1):
                    raise InvalidInput(f"relator letter {(g, e)} out of range")

    @classmethod
    def parse(cls, generators: Sequence[str], relator_texts: Sequence[str]) -> "FinitePresentation":
        gens = tuple(generators)
        rels = tuple(parse_word(s, list(gens)) for s in relator_texts)
        return cls(gens, rels)

    def exponent_matrix(self) -> np.ndarray:
        """Rows are relators, columns generators, entries exponent sums."""
        m = np.zeros((len(self.relators), len(self.generators)), dtype=object)
        for i, w in enumerate(self.relators):
            for g, e in w:
                m[i, g] += e
        return m


def abelianization(p: FinitePresentation) -> list:
    """Invariant factors of the abelianized group.

    Factors > 1 come first in divisibility order, then one 0 per free rank,
    so <x | x^5> gives [5] and <x, y | [x,y]> gives [0, 0].
    """
    sf = smith_normal_form(p.exponent_matrix())
    torsion = sf.invariant_factors()
    free = len(p.generators) - sf.rank
    return torsion + [0] * free


@dataclasses.dataclass(frozen=True)
class GroupHom:
    """A homomorphism from a presented group into a finite realization.

    Validated at construction: every relator must evaluate to the identity
    under the generator images.
    """

    source: FinitePresentation
    target: FiniteGroupRealization
    images: tuple

    def __post_init__(self):
        if len(self.images) != len(self.source.generators):
            raise InvalidInput("one image per generator required")
        for x in self.images:
            if not 0 <= x < self.target.order:
                raise InvalidInput(f"image {x} is not an element index")
        for i, w in enumerate(self.source.relators):
            if self.target.evaluate_word(w, self.images) != 0:
                raise InvalidInput(f"relator #{i} does not map to the identity")

    def evaluate(self, w: Word) -> int:
        return self.target.evaluate_word(w, self.images)

    def is_surjective(self) -> bool:
        return len(subgroup_closure(self.target, self.images)) == self.target.order


class RealizationHom:
    """An element-level homomorphism between two finite realizations.

    The full map is stored and multiplicativity is checked on every pair,
    so instances are sound certificates, not promises.
    """

    def __init__(self, source: FiniteGroupRealization, target: FiniteGroupRealization,
                 mapping: Sequence[int]):
        if len(mapping) != source.order:
            raise InvalidInput("mapping must cover every source element")
        self.source = source
        self.target = target
        self.mapping = tuple(int(x) for x in mapping)
        if self.mapping[0] != 0:
            raise InvalidInput("identity must map to identity")
        m = np.asarray(self.mapping, dtype=np.int64)
        if (target.table[m[:, None], m[None, :]] != m[source.table]).any():
            raise InvalidInput("mapping is not multiplicative")

    def __call__(self, x: int) -> int:
        return self.mapping[x]

    def is_surjective(self) -> bool:
        return len(set(self.mapping)) == self.target.order


def hom_from_generator_images(source: FiniteGroupRealization,
                              target: FiniteGroupRealization,
                              source_gens: Sequence[int],
                              images: Sequence[int]) -> RealizationHom:
    """Extend generator-wise images to a full RealizationHom.

    Every source element is factored through a BFS word in the generators;
    the resulting map is then validated pairwise, which catches images that
    do not satisfy the source relations.
    """
    if len(source_gens) != len(images):
        raise InvalidInput("need one image per generator")
    mapping = {0: 0}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for g, img in zip(source_gens, images):
                y = source.mul(x, g)
                if y not in mapping:
                    mapping[y] = target.mul(mapping[x], img)
                    nxt.append(y)
        frontier = nxt
    if len(mapping) != source.order:
        raise InvalidInput("the given elements do not generate the source group")
    return RealizationHom(source, target, [mapping[x] for x in range(source.order)])


# ---------------------------------------------------------------------------
# subgroups


@dataclasses.dataclass(frozen=True)
class Subgroup:
    """A subgroup of a realization, stored as a sorted member tuple."""

    ambient: FiniteGroupRealization
    members: tuple

    def __post_init__(self):
        mem = set(self.members)
        if 0 not in mem:
            raise InvalidInput("a subgroup contains the identity")
        for a in self.members:
            if self.ambient.inv(a) not in mem:
                raise InvalidInput("subgroup not closed under inverse")
            for b in self.members:
                if self.ambient.mul(a, b) not in mem:
                    raise InvalidInput("subgroup not closed under product")

    @property
    def order(self) -> int:
        return len(self.members)

    def is_normal(self) -> bool:
        mem = set(self.members)
        return all(self.ambient.conj(g, x) in mem
                   for g in range(self.ambient.order) for x in self.members)

    def __contains__(self, x: int) -> bool:
        return x in set(self.members)


def subgroup_closure(r: FiniteGroupRealization, seeds) -> set:
    """Smallest subset containing seeds, closed under product and inverse."""
    have = {0}
    frontier = []
    for s in seeds:
        if s not in have:
            have.add(s)
            frontier.append(s)
    for s in list(have):
        i = r.inv(s)
        if i not in have:
            have.add(i)
            frontier.append(i)
    while frontier:
        x = frontier.pop()
        for y in list(have):
            for z in (r.mul(x, y), r.mul(y, x)):
                if z not in have:
                    have.add(z)
                    frontier.append(z)
        xi = r.inv(x)
        if xi not in have:
            have.add(xi)
            frontier.append(xi)
    return have


def generated_subgroup(r: FiniteGroupRealization, seeds) -> Subgroup:
    return Subgroup(r, tuple(sorted(subgroup_closure(r, seeds))))


def normal_closure(r: FiniteGroupRealization, seeds) -> Subgroup:
    """Smallest normal subgroup containing the seeds."""
    conj_orbit = set()
    for s in seeds:
        for g in range(r.order):
            conj_orbit.add(r.conj(g, s))
    # The subgroup generated by a conjugation-closed set is normal.
    return generated_subgroup(r, conj_orbit)


def commutator_subgroup_with(r: FiniteGroupRealization, a: Subgroup, b: Subgroup) -> Subgroup:
    """[A, B]: generated by a x a^-1 x^-1 over a in A, x in B.

    For normal A, B the result is normal; no normality is assumed here, the
    commutator *generators* are simply closed into a subgroup.
    """
    if a.ambient is not r or b.ambient is not r:
        raise InvalidInput("subgroups must live in the stated ambient group")
    comms = set()
    for x in a.members:
        for y in b.members:
            comms.add(r.mul(r.mul(x, y), r.mul(r.inv(x), r.inv(y))))
    return generated_subgroup(r, comms)


def whole_group(r: FiniteGroupRealization) -> Subgroup:
    return Subgroup(r, tuple(range(r.order)))


def derived_subgroup(r: FiniteGroupRealization) -> Subgroup:
    g = whole_group(r)
    return commutator_subgroup_with(r, g, g)


def is_perfect(r: FiniteGroupRealization, s: Optional[Subgroup] = None) -> bool:
    """Is S equal to [S, S]?  Defaults to the whole group."""
    if s is None:
        s = whole_group(r)
    return _restricted_commutator(r, s) == set(s.members)


def _restricted_commutator(r: FiniteGroupRealization, s: Subgroup) -> set:
    comms = set()
    for x in s.members:
        for y in s.members:
            comms.add(r.mul(r.mul(x, y), r.mul(r.inv(x), r.inv(y))))
    return subgroup_closure(r, comms)


def is_relatively_perfect(r: FiniteGroupRealization, n: Subgroup) -> bool:
    """Whether [G, N] = N for a normal subgroup N."""
    if not n.is_normal():
        raise NotNormal("relative perfection is defined for normal subgroups")
    return set(commutator_subgroup_with(r, whole_group(r), n).members) == set(n.members)


def weight_le_one(r: FiniteGroupRealization):
    """(True, witness) if one element normally generates the group.

    The witness is the lowest-index element whose normal closure is all of
    G; abelian groups of non-cyclic ... rank fail, as do most products.
    """
    for x in range(r.order):
        if normal_closure(r, [x]).order == r.order:
            return True, x
    return False, None


def quotient_realization(r: FiniteGroupRealization, n: Subgroup):
    """(quotient realization, projection list) for a normal subgroup."""
    if not n.is_normal():
        raise NotNormal("can only form quotients by normal subgroups")
    mem = list(n.members)
    coset_of = {}
    reps = []
    for x in range(r.order):
        if x in coset_of:
            continue
        coset = sorted(r.mul(x, m) for m in mem)
        idx = len(reps)
        reps.append(coset[0])
        for y in coset:
            coset_of[y] = idx
    # Identity's coset contains 0, and 0 is discovered first, so index 0
    # is the identity coset already.
    k = len(reps)
    table = [[coset_of[r.mul(reps[i], reps[j])] for j in range(k)] for i in range(k)]
    q = FiniteGroupRealization(table, name=f"{r.name}/N" if r.name else "")
    return q, [coset_of[x] for x in range(r.order)]


def conjugacy_classes(r: FiniteGroupRealization) -> list:
    seen = set()
    classes = []
    for x in range(r.order):
        if x in seen:
            continue
        orbit = sorted({r.conj(g, x) for g in range(r.order)})
        seen.update(orbit)
        classes.append(tuple(orbit))
    return classes


def enumerate_perfect_normal_subgroups(r: FiniteGroupRealization,
                                       budgets: Budgets = DEFAULT) -> list:
    """All perfect normal subgroups, as Subgroups sorted by order.

    Normal subgroups are exactly the joins of normal closures of single
    conjugacy classes, so the lattice is produced by closing that finite
    generating family under pairwise join.
    """
    if r.order > budgets.enumeration_order_bound:
        raise OrderTooLarge(
            f"order {r.order} exceeds enumeration_order_bound="
            f"{budgets.enumeration_order_bound}"
        )
    atoms = {tuple(sorted(normal_closure(r, [cls[0]]).members))
             for cls in conjugacy_classes(r)}
    lattice = set(atoms)
    lattice.add((0,))
    while True:
        new = set()
        for a in lattice:
            for b in lattice:
                j = tuple(sorted(subgroup_closure(r, set(a) | set(b))))
                if j not in lattice:
                    new.add(j)
        if not new:
            break
        lattice.update(new)
    out = []
    for mem in sorted(lattice, key=lambda m: (len(m), m)):
        s = Subgroup(r, mem)
        if is_perfect(r, s):
            out.append(s)
    return out


# ---------------------------------------------------------------------------
# abelian structure


def abelian_invariants(r: FiniteGroupRealization) -> list:
    """Invariant factors d_1 | d_2 | ... of a finite abelian realization."""
    basis = abelian_basis(r)
    return _orders_to_invariant_factors([o for _, o in basis])


def _orders_to_invariant_factors(orders: list) -> list:
    # Merge per-element cyclic orders into an invariant-factor chain by
    # combining prime-power parts, largest with largest.
    from collections import defaultdict
    slots = defaultdict(list)
    for o in orders:
        left = o
        p = 2
        while p * p <= left:
            if left % p == 0:
                q = 1
                while left % p == 0:
                    left //= p
                    q *= p
                slots[p].append(q)
            p += 1
        if left > 1:
            slots[left].append(left)
    if not slots:
        return []
    depth = max(len(v) for v in slots.values())
    factors = []
    for i in range(depth):
        f = 1
        for p, qs in slots.items():
            qs_sorted = sorted(qs, reverse=True)
            if i < len(qs_sorted):
                f *= qs_sorted[i]
        factors.append(f)
    return sorted(f for f in factors if f > 1)


def abelian_basis(r: FiniteGroupRealization) -> list:
    """A list of (element, order) generating r as an internal direct product.

    Classical peeling argument: an element of maximal order spans a pure
    cyclic subgroup, hence a direct summand; recurse on the quotient and
    lift each quotient basis element to one of the same order.
    """
    if not r.is_abelian():
        raise NonAbelianGroup("abelian_basis needs an abelian group")
    if r.order == 1:
        return []
    orders = element_orders(r)
    g = int(np.lexsort((np.arange(r.order), -np.asarray(orders)))[0])
    d = orders[g]
    cyc = generated_subgroup(r, [g])
    q, proj = quotient_realization(r, cyc)
    out = [(g, d)]
    for qe, qo in abelian_basis(q):
        lift = next(x for x in range(r.order)
                    if proj[x] == qe and r.element_order(x) == qo)
        out.append((lift, qo))
    return out


def abelian_coordinates(r: FiniteGroupRealization, basis: list) -> dict:
    """Map each element to its exponent tuple over the given basis."""
    coords = {0: tuple(0 for _ in basis)}
    for i, (g, d) in enumerate(basis):
        new = {}
        for x, cx in coords.items():
            acc = x
            for e in range(1, d):
                acc = r.mul(acc, g)
                c = list(cx)
                c[i] = e
                new[acc] = tuple(c)
        coords.update(new)
    if len(coords) != r.order:
        raise NonAbelianGroup("basis does not span the group")
    return coords


def abelianized_realization(r: FiniteGroupRealization):
    """(G/[G,G] as a realization, projection list)."""
    return quotient_realization(r, derived_subgroup(r))
