"""Based free chain complexes over Z[G], and exact homology with coordinates.

Conventions, used consistently everywhere:

* A based free module keeps its basis along **rows**; a chain is a row
  vector, and boundary maps act on the right: the boundary matrix in degree
  q has shape (rank_q, rank_{q-1}) and its i-th row is the boundary of the
  i-th q-cell.  With this choice d(d(x)) = 0 reads B_q @ B_{q-1} = 0 in
  left-to-right matrix order, which is also the order that makes the Fox
  calculus fundamental identity come out as a literal matrix product.

* Homology is always computed integrally and exactly.  A degree's homology
  comes with usable coordinates: a saturated basis of cycles, a Smith basis
  of the quotient, representative cycles for every generator, and a
  class-of-a-cycle map.  Induced maps on homology, epi/iso verdicts, mapping
  cones and long-exact-sequence checks are all built from those coordinates.

* Coefficients: "augmented" means C (x)_{Z[G]} Z (collapse each group ring
  element to its coefficient sum), the complex of the base space;
  "covering" means the underlying Z-complex of C (rank multiplies by |G|),
  the complex of the universal cover.  Other coefficient rings are then a
  universal-coefficients bookkeeping step on the integral answer.
"""

from __future__ import annotations

import dataclasses
from typing import Optional

import numpy as np

from .config import DEFAULT, Budgets
from .errors import InvalidBoundary, InvalidInput, MixedGroups, RankMismatch
from .groups import FiniteGroupRealization, trivial_group
from .grouprings import (
    GroupRingElement,
    GroupRingMatrix,
    format_element,
    parse_element,
    row_action_matrix,
)
from .rings import RingSpec
from .snf import as_object_matrix, mat_mul, smith_normal_form, zeros_object


# ---------------------------------------------------------------------------
# complexes


class BasedChainComplex:
    """A bounded complex of based free Z[G]-modules.

    ``ranks[q]`` is the number of q-cells; ``boundaries[q]`` maps degree q
    to degree q-1 with the row convention above.  Degrees not in ``ranks``
    are zero.  ``labels`` names cells for readable reports and is purely
    cosmetic.
    """

    def __init__(self, group: FiniteGroupRealization, ranks: dict,
                 boundaries: dict, labels: Optional[dict] = None):
        self.group = group
        self.ranks = {int(q): int(r) for q, r in ranks.items() if r}
        self.boundaries = {}
        self.labels = {int(q): list(v) for q, v in (labels or {}).items()}
        for q, b in boundaries.items():
            q = int(q)
            if not isinstance(b, GroupRingMatrix):
                raise InvalidInput(f"boundary in degree {q} is not a matrix over Z[G]")
            if not b.group.same_as(group):
                raise MixedGroups("boundary matrix over the wrong group ring")
            expect = (self.rank(q), self.rank(q - 1))
            if b.shape != expect:
                raise RankMismatch(
                    f"boundary in degree {q} has shape {b.shape}, expected {expect}")
            if b.shape[0] and b.shape[1]:
                self.boundaries[q] = b

    def rank(self, q: int) -> int:
        return self.ranks.get(q, 0)

    def degrees(self) -> list:
        return sorted(self.ranks)

    def boundary(self, q: int) -> GroupRingMatrix:
        if q in self.boundaries:
            return self.boundaries[q]
        return GroupRingMatrix.zeros(self.group, self.rank(q), self.rank(q - 1))

    def validate(self) -> None:
        """Raise InvalidBoundary unless every composite d(d(x)) vanishes."""
        for q in self.degrees():
            if self.rank(q) and self.rank(q - 1) and self.rank(q - 2):
                prod = self.boundary(q) @ self.boundary(q - 1)
                if not prod.is_zero():
                    raise InvalidBoundary(
                        f"d∘d is nonzero from degree {q} to degree {q - 2}")

    def total_rank(self) -> int:
        return sum(self.ranks.values())

    # -- integral shadows ------------------------------------------------

    def augmented_complex(self) -> "IntegerComplex":
        """C (x)_{Z[G]} Z with the trivial action: the base-space complex."""
        bounds = {q: b.augmentation() for q, b in self.boundaries.items()}
        return IntegerComplex(dict(self.ranks), bounds)

    def covering_complex(self) -> "IntegerComplex":
        """The underlying Z-complex (free rank multiplied by |G|)."""
        n = self.group.order
        ranks = {q: r * n for q, r in self.ranks.items()}
        bounds = {q: row_action_matrix(b) for q, b in self.boundaries.items()}
        return IntegerComplex(ranks, bounds)

    def shift(self, k: int) -> "BasedChainComplex":
        """The same complex with every degree raised by k (no sign games:
        callers that need signs put them into the matrices)."""
        return BasedChainComplex(
            self.group,
            {q + k: r for q, r in self.ranks.items()},
            {q + k: b for q, b in self.boundaries.items()},
            {q + k: v for q, v in self.labels.items()})

    def direct_sum(self, other: "BasedChainComplex") -> "BasedChainComplex":
        if not self.group.same_as(other.group):
            raise MixedGroups("direct sum needs a common group ring")
        ranks = {}
        for q in set(self.ranks) | set(other.ranks):
            ranks[q] = self.rank(q) + other.rank(q)
        bounds = {}
        for q in sorted(ranks):
            if ranks[q] and ranks.get(q - 1, 0):
                bounds[q] = _padded_block_diag(
                    self.group, self.boundary(q), other.boundary(q),
                    self.rank(q), other.rank(q), self.rank(q - 1), other.rank(q - 1))
        return BasedChainComplex(self.group, ranks, bounds)

    # -- serialization ------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "group_table": self.group.table.tolist(),
            "ranks": {str(q): r for q, r in sorted(self.ranks.items())},
            "boundaries": {
                str(q): [[format_element(b[i, j]) for j in range(b.shape[1])]
                         for i in range(b.shape[0])]
                for q, b in sorted(self.boundaries.items())},
            "labels": {str(q): v for q, v in sorted(self.labels.items())},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "BasedChainComplex":
        group = FiniteGroupRealization(data["group_table"])
        ranks = {int(q): r for q, r in data["ranks"].items()}
        bounds = {}
        for q, rows in data.get("boundaries", {}).items():
            entries = [[parse_element(x, group) for x in row] for row in rows]
            bounds[int(q)] = GroupRingMatrix(group, entries)
        labels = {int(q): v for q, v in data.get("labels", {}).items()}
        return cls(group, ranks, bounds, labels)

    def __repr__(self):
        span = ", ".join(f"{q}:{r}" for q, r in sorted(self.ranks.items()))
        return f"<BasedChainComplex over {self.group!r} ranks {{{span}}}>"


def _padded_block_diag(group, a, b, ra, rb, ca, cb):
    zero = GroupRingElement.zero(group)
    out = [[zero] * (ca + cb) for _ in range(ra + rb)]
    for i in range(ra):
        for j in range(ca):
            out[i][j] = a[i, j]
    for i in range(rb):
        for j in range(cb):
            out[ra + i][ca + j] = b[i, j]
    return GroupRingMatrix(group, out)


def integer_complex_over(ranks: dict, boundaries: dict) -> BasedChainComplex:
    """Build a plain-Z complex (group ring Z[1]) from integer matrices."""
    g = trivial_group()
    bounds = {}
    for q, m in boundaries.items():
        m = as_object_matrix(m)
        bounds[int(q)] = GroupRingMatrix(
            g, [[GroupRingElement.from_integer(g, int(x)) for x in row] for row in m])
    return BasedChainComplex(g, ranks, bounds)


class IntegerComplex:
    """The integer-matrix shadow of a based complex (same row convention)."""

    def __init__(self, ranks: dict, boundaries: dict):
        self.ranks = {int(q): int(r) for q, r in ranks.items() if r}
        self.boundaries = {}
        for q, b in boundaries.items():
            b = as_object_matrix(b)
            if b.shape != (self.rank(int(q)), self.rank(int(q) - 1)):
                raise RankMismatch(f"boundary shape mismatch in degree {q}")
            if b.size:
                self.boundaries[int(q)] = b

    def rank(self, q: int) -> int:
        return self.ranks.get(q, 0)

    def degrees(self) -> list:
        return sorted(self.ranks)

    def boundary(self, q: int) -> np.ndarray:
        if q in self.boundaries:
            return self.boundaries[q]
        return zeros_object(self.rank(q), self.rank(q - 1))

    def validate(self) -> None:
        for q in self.degrees():
            if self.rank(q) and self.rank(q - 1) and self.rank(q - 2):
                if (mat_mul(self.boundary(q), self.boundary(q - 1)) != 0).any():
                    raise InvalidBoundary(f"d∘d nonzero at degree {q}")

    def homology_at(self, q: int, budgets: Budgets = DEFAULT) -> "DegreeHomology":
        return DegreeHomology(self.boundary(q), self.boundary(q + 1), budgets)


# ---------------------------------------------------------------------------
# homology of one degree, with coordinates


class DegreeHomology:
    """H_q of an integer complex, carrying exact coordinates.

    Built from the two boundary matrices around degree q:

    1. rows of K span ker(B_low) (a saturated direct summand of the chains);
    2. each row of B_high is rewritten in K-coordinates, giving Y;
    3. the Smith form of Y presents the quotient: generator i of H_q is the
       i-th row of Vinv (in K-coordinates) with order d_i (0 meaning free).
    """

    def __init__(self, b_low: np.ndarray, b_high: np.ndarray,
                 budgets: Budgets = DEFAULT):
        b_low = as_object_matrix(b_low)
        b_high = as_object_matrix(b_high)
        self.chain_rank = b_low.shape[0]
        if b_high.shape[1] != self.chain_rank:
            raise RankMismatch("boundary shapes around the degree disagree")
        self._sf_low = smith_normal_form(b_low.T, budgets)
        self.cycles = self._sf_low.kernel_basis().T  # rows span ker
        k = self.cycles.shape[0]
        # rewrite boundaries in cycle coordinates: solve Y @ K = B_high
        cols = []
        for i in range(b_high.shape[0]):
            y = smith_solve_cached(self, b_high[i, :])
            if y is None:
                raise InvalidBoundary(
                    "a boundary row is not a cycle; the complex is invalid")
            cols.append(y)
        y_mat = np.array(cols, dtype=object).reshape(b_high.shape[0], k) if cols \
            else zeros_object(0, k)
        self._sf_y = smith_normal_form(y_mat, budgets)
        diag = list(self._sf_y.d)
        self.orders = [int(d) for d in diag] + [0] * (k - len(diag))
        self.quotient_rank = k

    # -- coordinates -------------------------------------------------------

    def cycle_coordinates(self, v) -> Optional[np.ndarray]:
        """Coordinates of a cycle row-vector v over the kernel basis."""
        return smith_solve_cached(self, v)

    def class_of(self, v) -> list:
        """The homology class of a cycle: one residue per generator.

        Entries are reduced mod the generator's order (free generators are
        reported as plain integers).  Raises InvalidInput if v is not a
        cycle.
        """
        c = self.cycle_coordinates(v)
        if c is None:
            raise InvalidInput("vector is not a cycle")
        alpha = mat_mul(np.array([c], dtype=object), self._sf_y.V)[0]
        return [int(a % d) if d else int(a) for a, d in zip(alpha, self.orders)]

    def generator_cycle(self, i: int) -> np.ndarray:
        """A representative cycle (row vector) for the i-th generator."""
        vinv_row = self._sf_y.Vinv[i, :]
        return mat_mul(np.array([vinv_row], dtype=object), self.cycles)[0]

    def is_zero_class(self, v) -> bool:
        return all(x == 0 for x in self.class_of(v))

    # -- structure -----------------------------------------------------------

    def invariant_factors(self) -> list:
        """Torsion factors > 1 in divisibility order, then one 0 per free rank."""
        tor = [d for d in self.orders if d > 1]
        free = sum(1 for d in self.orders if d == 0)
        return tor + [0] * free

    def betti(self) -> int:
        return sum(1 for d in self.orders if d == 0)

    def is_trivial(self) -> bool:
        return all(d == 1 for d in self.orders)

    def nontrivial_indices(self) -> list:
        return [i for i, d in enumerate(self.orders) if d != 1]


def smith_solve_cached(h: DegreeHomology, v) -> Optional[np.ndarray]:
    """Solve c @ K = v for c using the stored Smith form of K^T."""
    v = np.array([int(x) for x in v], dtype=object)
    if h.cycles.shape[0] == 0:
        return zeros_object(1, 0)[0] if not v.size or not (v != 0).any() else None
    # K^T c^T = v^T; reuse the kernel's own Smith data is not directly
    # possible (it factored B_low^T), so factor K^T once and memoize.
    sf = getattr(h, "_sf_kt", None)
    if sf is None:
        sf = smith_normal_form(h.cycles.T)
        h._sf_kt = sf
    return sf.solve(v)


# ---------------------------------------------------------------------------
# reports


def _merge_invariant_factors(factors: list) -> list:
    """Canonicalize a list of cyclic orders into an invariant-factor chain."""
    from collections import defaultdict
    slots = defaultdict(list)
    free = 0
    for o in factors:
        if o == 0:
            free += 1
            continue
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
    depth = max((len(v) for v in slots.values()), default=0)
    out = []
    for i in range(depth):
        f = 1
        for p, qs in slots.items():
            qs_sorted = sorted(qs, reverse=True)
            if i < len(qs_sorted):
                f *= qs_sorted[i]
        out.append(f)
    return sorted(f for f in out if f > 1) + [0] * free


@dataclasses.dataclass
class HomologyReport:
    """Homology of a complex over a coefficient ring, degree by degree.

    ``factors[q]`` follows the abelianization convention: torsion invariant
    factors in divisibility order, then one 0 per free summand.

    ``partial`` marks reports whose factor lists are rank-level data rather
    than a certified group structure (some torsion exponents undetermined);
    ``detail`` then carries whatever partial evidence the computation has.
    """

    ring: RingSpec
    factors: dict
    partial: bool = False
    detail: Optional[dict] = None

    def betti(self, q: int) -> int:
        return sum(1 for d in self.factors.get(q, []) if d == 0)

    def torsion(self, q: int) -> list:
        return [d for d in self.factors.get(q, []) if d > 1]

    def is_zero(self, q: int) -> bool:
        return not self.factors.get(q, [])

    def group_text(self, q: int) -> str:
        parts = [("Z" if d == 0 else f"Z/{d}") for d in self.factors.get(q, [])]
        return " + ".join(parts) if parts else "0"

    def to_dict(self) -> dict:
        out = {"ring": self.ring.label(),
               "factors": {str(q): list(v) for q, v in sorted(self.factors.items())}}
        if self.partial:
            out["partial"] = True
        return out


def homology(complex_or_int, ring: RingSpec = RingSpec.integers(),
             mode: str = "augmented", budgets: Budgets = DEFAULT) -> HomologyReport:
    """Homology over Z, Z/n, or Z[1/S], via exact integral computation + UCT.

    ``mode`` selects the integral shadow of a Z[G] complex: "augmented" for
    the base space, "covering" for the universal cover's Z-complex.  Passing
    an IntegerComplex uses it directly.
    """
    if isinstance(complex_or_int, BasedChainComplex):
        icx = (complex_or_int.augmented_complex() if mode == "augmented"
               else complex_or_int.covering_complex())
    else:
        icx = complex_or_int
    degrees = icx.degrees()
    integral = {q: icx.homology_at(q, budgets) for q in degrees}
    factors = {}
    for q in degrees:
        ints = integral[q].invariant_factors()
        if ring.kind == "Z":
            out = list(ints)
        else:
            out = [ring.tensor_factor(d) for d in ints]
            prev = integral.get(q - 1)
            if prev is not None and ring.kind == "Zmod":
                out += [ring.tor_factor(d) for d in prev.invariant_factors()]
        merged = _merge_invariant_factors([d for d in out if d != 1])
        if merged:
            factors[q] = merged
    return HomologyReport(ring, factors)


def is_acyclic(cx: BasedChainComplex, budgets: Budgets = DEFAULT) -> bool:
    """Is the covering complex exact (no homology in any degree)?"""
    icx = cx.covering_complex()
    return all(icx.homology_at(q, budgets).is_trivial() for q in icx.degrees())


# ---------------------------------------------------------------------------
# chain maps, cones, induced maps


class ChainMap:
    """A degreewise map of based complexes over one group ring.

    ``blocks[q]`` has shape (rank_q(source), rank_q(target)); chains push
    forward by v |-> v @ block.  Commutation with the boundaries is checked
    at construction, missing blocks are zero.
    """

    def __init__(self, source: BasedChainComplex, target: BasedChainComplex,
                 blocks: dict):
        if not source.group.same_as(target.group):
            raise MixedGroups("chain maps need a common group ring")
        self.source = source
        self.target = target
        self.blocks = {}
        for q, b in blocks.items():
            q = int(q)
            expect = (source.rank(q), target.rank(q))
            if b.shape != expect:
                raise RankMismatch(f"block {q} has shape {b.shape}, expected {expect}")
            if b.shape[0] and b.shape[1]:
                self.blocks[q] = b
        for q in source.degrees():
            lhs = source.boundary(q) @ self.block(q - 1)
            rhs = self.block(q) @ target.boundary(q)
            if not (lhs - rhs).is_zero():
                raise InvalidBoundary(f"map does not commute with d at degree {q}")

    def block(self, q: int) -> GroupRingMatrix:
        if q in self.blocks:
            return self.blocks[q]
        return GroupRingMatrix.zeros(self.source.group,
                                     self.source.rank(q), self.target.rank(q))

    @classmethod
    def identity(cls, cx: BasedChainComplex) -> "ChainMap":
        return cls(cx, cx, {q: GroupRingMatrix.identity(cx.group, cx.rank(q))
                            for q in cx.degrees()})


def mapping_cone(f: ChainMap) -> BasedChainComplex:
    """cone(f)_q = source_{q-1} (+) target_q, with the usual twisted boundary.

    The boundary block form is [[-B_source, F], [0, B_target]]; the source
    half is shifted up one degree.
    """
    src, tgt = f.source, f.target
    group = src.group
    ranks = {}
    for q in set(d + 1 for d in src.degrees()) | set(tgt.degrees()):
        r = src.rank(q - 1) + tgt.rank(q)
        if r:
            ranks[q] = r
    bounds = {}
    zero = GroupRingElement.zero(group)
    for q in sorted(ranks):
        rows = ranks[q]
        cols = ranks.get(q - 1, 0)
        if not cols:
            continue
        m = [[zero] * cols for _ in range(rows)]
        bs = src.boundary(q - 1)   # (src_{q-1} x src_{q-2})
        fb = f.block(q - 1)        # (src_{q-1} x tgt_{q-1})
        bt = tgt.boundary(q)       # (tgt_q x tgt_{q-1})
        sr, so = src.rank(q - 1), src.rank(q - 2)
        for i in range(sr):
            for j in range(so):
                m[i][j] = -bs[i, j]
            for j in range(tgt.rank(q - 1)):
                m[i][so + j] = fb[i, j]
        for i in range(tgt.rank(q)):
            for j in range(tgt.rank(q - 1)):
                m[sr + i][so + j] = bt[i, j]
        bounds[q] = GroupRingMatrix(group, m)
    cone = BasedChainComplex(group, ranks, bounds)
    cone.validate()
    return cone


@dataclasses.dataclass
class InducedMap:
    """A map between two computed homology groups, in their Smith bases."""

    source: DegreeHomology
    target: DegreeHomology
    matrix: np.ndarray  # (source.quotient_rank x target.quotient_rank)

    def image_generators(self) -> list:
        return [list(self.matrix[i, :]) for i in range(self.matrix.shape[0])]

    def is_epi(self, budgets: Budgets = DEFAULT) -> bool:
        rows = [list(self.matrix[i, :]) for i in range(self.matrix.shape[0])]
        return _spans_quotient(rows, self.target.orders, budgets)

    def is_iso(self, budgets: Budgets = DEFAULT) -> bool:
        # A surjection between isomorphic finitely generated abelian groups
        # is an isomorphism, so epi + equal invariant factors suffices.
        return (self.is_epi(budgets)
                and self.source.invariant_factors() == self.target.invariant_factors())

    def kernel_generators(self, budgets: Budgets = DEFAULT) -> list:
        return _kernel_into_quotient(self.matrix, self.source.orders,
                                     self.target.orders, budgets)


def induced_map(hs: DegreeHomology, ht: DegreeHomology, f_matrix,
                budgets: Budgets = DEFAULT) -> InducedMap:
    """Push each source generator's cycle through f and classify it."""
    f_matrix = as_object_matrix(f_matrix)
    rows = []
    for i in range(hs.quotient_rank):
        z = hs.generator_cycle(i)
        w = mat_mul(np.array([z], dtype=object), f_matrix)[0]
        rows.append(ht.class_of(w))
    m = np.array(rows, dtype=object).reshape(hs.quotient_rank, ht.quotient_rank) \
        if rows else zeros_object(0, ht.quotient_rank)
    return InducedMap(hs, ht, m)


# -- subgroups of a computed quotient group ---------------------------------


def _relation_rows(orders: list) -> list:
    out = []
    for j, d in enumerate(orders):
        if d:
            row = [0] * len(orders)
            row[j] = d
            out.append(row)
    return out


def _membership(vec, gens: list, orders: list, budgets: Budgets) -> bool:
    """Is vec in the subgroup generated by gens inside (+) Z/d_j?"""
    rows = [list(g) for g in gens] + _relation_rows(orders)
    if not rows:
        return all(x == 0 for x in vec)
    a = as_object_matrix(rows)
    sf = smith_normal_form(a.T, budgets)
    return sf.solve(np.array([int(x) for x in vec], dtype=object)) is not None


def _subgroup_leq(gens1: list, gens2: list, orders: list, budgets: Budgets) -> bool:
    return all(_membership(g, gens2, orders, budgets) for g in gens1)


def subgroups_equal(gens1: list, gens2: list, orders: list,
                    budgets: Budgets = DEFAULT) -> bool:
    return (_subgroup_leq(gens1, gens2, orders, budgets)
            and _subgroup_leq(gens2, gens1, orders, budgets))


def _spans_quotient(gens: list, orders: list, budgets: Budgets) -> bool:
    k = len(orders)
    if k == 0:
        return True
    unit_rows = [[1 if i == j else 0 for j in range(k)] for i in range(k)]
    return _subgroup_leq(unit_rows, gens, orders, budgets)


def _kernel_into_quotient(m: np.ndarray, src_orders: list, tgt_orders: list,
                          budgets: Budgets) -> list:
    """Generators of ker(source quotient -> target quotient)."""
    m = as_object_matrix(m)
    rows = [list(m[i, :]) for i in range(m.shape[0])] + _relation_rows(tgt_orders)
    if not rows:
        # target trivial: kernel is everything
        return [[1 if i == j else 0 for j in range(len(src_orders))]
                for i in range(len(src_orders))]
    a = as_object_matrix(rows)
    left_kernel = smith_normal_form(a.T, budgets).kernel_basis().T
    gens = [list(left_kernel[i, : m.shape[0]]) for i in range(left_kernel.shape[0])]
    # torsion relations of the source are in the kernel of any well-defined map
    gens += _relation_rows(src_orders)
    return gens


# ---------------------------------------------------------------------------
# long exact sequence of a mapping cone


def les_consistency(f: ChainMap, mode: str = "augmented",
                    budgets: Budgets = DEFAULT) -> bool:
    """Check exactness of ... -> H_q(T) -> H_q(cone f) -> H_{q-1}(S) -> ...

    All three structure maps of the cone sequence are computed as explicit
    induced maps, and exactness (im = ker) is verified at every degree by
    mutual membership of generators.  Returns True only when every check
    passes.
    """
    cone = mapping_cone(f)
    if mode == "augmented":
        s_i, t_i, c_i = (f.source.augmented_complex(), f.target.augmented_complex(),
                         cone.augmented_complex())
        fmats = {q: f.block(q).augmentation() for q in f.source.degrees()}
    else:
        s_i, t_i, c_i = (f.source.covering_complex(), f.target.covering_complex(),
                         cone.covering_complex())
        fmats = {q: row_action_matrix(f.block(q)) for q in f.source.degrees()}
    degrees = sorted(set(s_i.degrees()) | set(t_i.degrees()) | set(c_i.degrees()))
    if not degrees:
        return True
    lo, hi = degrees[0] - 1, degrees[-1] + 1
    hs = {q: s_i.homology_at(q, budgets) for q in range(lo - 1, hi + 2)}
    ht = {q: t_i.homology_at(q, budgets) for q in range(lo - 1, hi + 2)}
    hc = {q: c_i.homology_at(q, budgets) for q in range(lo - 1, hi + 2)}

    def inclusion_matrix(q):
        # target_q -> cone_q = source_{q-1} (+) target_q
        rows, cols = t_i.rank(q), c_i.rank(q)
        m = zeros_object(rows, cols)
        off = s_i.rank(q - 1)
        for i in range(rows):
            m[i, off + i] = 1
        return m

    def projection_matrix(q):
        # cone_q -> source_{q-1}
        rows, cols = c_i.rank(q), s_i.rank(q - 1)
        m = zeros_object(rows, cols)
        for i in range(cols):
            m[i, i] = 1
        return m

    ok = True
    for q in range(lo, hi + 1):
        j_q = induced_map(ht[q], hc[q], inclusion_matrix(q), budgets)
        p_q = induced_map(hc[q], hs[q - 1], projection_matrix(q), budgets)
        f_qm1 = induced_map(hs[q - 1], ht[q - 1],
                            fmats.get(q - 1, zeros_object(s_i.rank(q - 1),
                                                          t_i.rank(q - 1))),
                            budgets)
        # exactness at H_q(cone): im j = ker p
        ok = ok and subgroups_equal(j_q.image_generators(),
                                    p_q.kernel_generators(budgets),
                                    hc[q].orders, budgets)
        # exactness at H_{q-1}(source): im p = ker f
        ok = ok and subgroups_equal(p_q.image_generators(),
                                    f_qm1.kernel_generators(budgets),
                                    hs[q - 1].orders, budgets)
        # exactness at H_{q-1}(target): im f = ker j_{q-1}
        j_qm1 = induced_map(ht[q - 1], hc[q - 1], inclusion_matrix(q - 1), budgets)
        ok = ok and subgroups_equal(f_qm1.image_generators(),
                                    j_qm1.kernel_generators(budgets),
                                    ht[q - 1].orders, budgets)
        if not ok:
            return False
    return ok
