"""Chain models of one-sided h-cobordisms and their torsion classification.

A one-sided h-cobordism, seen through its cellular chains, is a triple of
based complexes over one group ring Z[G]: a base M, a total complex W, and
an end N, with inclusions M -> W and N -> W.  The end inclusion is a
homology equivalence (its cone is acyclic over Z[G]); the base inclusion
is a plus construction, killing a perfect normal subgroup P of pi_1(M).
Such a model is classified by the pair (P, tau(W, N)): the subgroup it
kills and the Whitehead torsion of the pair at the equivalence end.

This module verifies the defining conditions (:func:`verify_one_sided_h`),
reads off the classifying pair (:func:`classify`), realizes any prescribed
pair over a presented base (:func:`realize`), and doubles two models along
their common base to check the gluing formula tau_1 + (-1)^n bar(tau_2)
(:func:`glue`).  :func:`enumerate_classes` lists, for a finite fundamental
group, the perfect normal subgroups indexing the classification together
with the part of each Whitehead group the torsion module can detect.

Two conventions keep everything exact.  Inclusions are required to be
*sub-basis embeddings* -- each source cell lands on a distinct target cell
with a trivial-unit coefficient -- so the cokernel of an inclusion is
itself a based complex on the complementary cells.  The cone of such an
inclusion deformation-retracts onto that cokernel (the retracted part is
the cone of an isomorphism, which is simply trivial), so acyclicity and
torsion are computed on the complementary complex; this is what makes the
classification representative-exact rather than exact only up to folding.

The end complex of :func:`realize` is synthesized algebraically: N is the
plus construction itself, and W adds one layer of trivially-attached
2-cells capped by 3-cells whose boundary is the requested representative,
so the pair (W, N) carries exactly the requested torsion.  No manifold
content is claimed; the model is the chain shadow of the handle argument,
with the ambient-dimension parity kept as bookkeeping on the classes.
"""

from __future__ import annotations

import dataclasses
from typing import Optional, Sequence

import numpy as np

from .chains import BasedChainComplex, ChainMap, is_acyclic
from .config import DEFAULT, Budgets
from .cyclotomic import characters
from .errors import (
    InvalidInput,
    MismatchedBase,
    NotOneSidedH,
    RankMismatch,
)
from .foxcw import AttachmentRecord, PresentationComplex, attach_cells
from .groups import (
    FiniteGroupRealization,
    GroupHom,
    Subgroup,
    abelian_invariants,
    abelianized_realization,
    enumerate_perfect_normal_subgroups,
    is_perfect,
    normal_closure,
    quotient_realization,
)
from .grouprings import GroupRingElement, GroupRingMatrix
from .plusconstruction import _seed_words, plus_with_torsion
from .torsion import TorsionClass, compose, dual_sign, invariant, torsion_of_pair
from .words import format_word


# ---------------------------------------------------------------------------
# sub-basis embeddings and their cokernels


def _is_trivial_unit(x: GroupRingElement) -> bool:
    return len(x.coeffs) == 1 and next(iter(x.coeffs.values())) in (1, -1)


def _embedded_columns(block: GroupRingMatrix, degree: int) -> list:
    """Target columns hit by a sub-basis embedding block, in row order.

    Each row must carry exactly one nonzero entry, that entry must be a
    trivial unit (+-g), and no two rows may share a column; anything else
    is rejected, because the complementary-cell constructions below only
    make sense for honest based subcomplex inclusions.
    """
    rows, _ = block.shape
    hit = []
    for i in range(rows):
        support = [j for j, x in enumerate(block.row(i)) if x]
        if len(support) != 1 or not _is_trivial_unit(block[i, support[0]]):
            raise InvalidInput(
                f"inclusion row {i} in degree {degree} is not a based cell"
                " embedding (need a single +-g entry)")
        hit.append(support[0])
    if len(set(hit)) != len(hit):
        raise InvalidInput(
            f"inclusion in degree {degree} sends two cells to one target cell")
    return hit


def _complement_indices(f: ChainMap) -> dict:
    """Per degree, the target cells not hit by the inclusion, in order."""
    out = {}
    for q in f.target.degrees():
        hit = set()
        if f.source.rank(q):
            hit = set(_embedded_columns(f.block(q), q))
        out[q] = [j for j in range(f.target.rank(q)) if j not in hit]
    return out


def _quotient_complex(f: ChainMap) -> BasedChainComplex:
    """The based cokernel of a sub-basis embedding.

    Cells are the complementary cells of the target; the boundary is the
    complementary block of the target boundary (the dropped columns land
    in the embedded subcomplex, which is closed under the boundary because
    the chain map commutes with it).
    """
    comp = _complement_indices(f)
    tgt = f.target
    ranks = {q: len(idx) for q, idx in comp.items() if idx}
    boundaries = {}
    labels = {}
    for q, idx in comp.items():
        if not idx:
            continue
        named = tgt.labels.get(q, [])
        labels[q] = [named[j] if j < len(named) else f"e{q}_{j}" for j in idx]
        low = comp.get(q - 1, [])
        if not low:
            continue
        b = tgt.boundary(q)
        m = GroupRingMatrix.zeros(tgt.group, len(idx), len(low))
        m.entries[:, :] = b.entries[np.ix_(idx, low)]
        boundaries[q] = m
    out = BasedChainComplex(tgt.group, ranks, boundaries, labels)
    out.validate()
    return out


def _prefix_inclusion(sub: BasedChainComplex, amb: BasedChainComplex) -> ChainMap:
    """The chain map embedding a leading-cells subcomplex."""
    blocks = {}
    one = GroupRingElement.one(sub.group)
    for q in sub.degrees():
        if sub.rank(q) > amb.rank(q):
            raise RankMismatch(
                f"subcomplex has more {q}-cells than the ambient complex")
        b = GroupRingMatrix.zeros(sub.group, sub.rank(q), amb.rank(q))
        for i in range(sub.rank(q)):
            b.entries[i, i] = one
        blocks[q] = b
    return ChainMap(sub, amb, blocks)


def _is_identity_prefix(f: ChainMap) -> bool:
    one = GroupRingElement.one(f.source.group)
    for q in f.source.degrees():
        block = f.block(q)
        for i in range(f.source.rank(q)):
            for j, x in enumerate(block.row(i)):
                if (x != one) if i == j else bool(x):
                    return False
    return True


# ---------------------------------------------------------------------------
# the model and its verdicts


@dataclasses.dataclass
class ChainCobordismModel:
    """Based-chain data of a candidate one-sided h-cobordism (W; M, N).

    All three complexes live over Z[G] for the quotient group G; the
    group-level data lives one floor up: ``pi_hom`` realizes pi_1(M) as a
    finite group, ``alpha_m`` is the composed map onto G, and ``p_seeds``
    are words normally generating the kernel.  ``parity`` is the ambient
    manifold dimension mod 2 and only matters for duality bookkeeping.

    Construction enforces the shape invariants (one group ring throughout,
    inclusions connecting the stored complexes, both inclusions sub-basis
    embeddings); the homological conditions are the business of
    :func:`verify_one_sided_h` and are *not* assumed here.
    """

    m_complex: BasedChainComplex
    w_complex: BasedChainComplex
    n_complex: BasedChainComplex
    incl_m: ChainMap
    incl_n: ChainMap
    pi_hom: GroupHom
    alpha_m: GroupHom
    p_seeds: tuple = ()
    parity: int = 0

    def __post_init__(self):
        self.parity = int(self.parity) % 2
        self.p_seeds = tuple(tuple(w) for w in self.p_seeds)
        group = self.w_complex.group
        for cx in (self.m_complex, self.n_complex):
            if not cx.group.same_as(group):
                raise MismatchedBase("all three complexes must share one group ring")
        if not self.alpha_m.target.same_as(group):
            raise MismatchedBase("alpha_m must land in the group of the complexes")
        if self.alpha_m.source != self.pi_hom.source:
            raise InvalidInput("alpha_m and pi_hom must share the presentation")
        if self.incl_m.source is not self.m_complex or self.incl_m.target is not self.w_complex:
            raise InvalidInput("incl_m must map the stored M complex into W")
        if self.incl_n.source is not self.n_complex or self.incl_n.target is not self.w_complex:
            raise InvalidInput("incl_n must map the stored N complex into W")
        _complement_indices(self.incl_m)
        _complement_indices(self.incl_n)

    def to_dict(self) -> dict:
        gens = list(self.pi_hom.source.generators)
        return {
            "group": self.w_complex.group.name,
            "parity": self.parity,
            "ranks": {
                side: {str(q): cx.rank(q) for q in cx.degrees()}
                for side, cx in (("M", self.m_complex), ("W", self.w_complex),
                                 ("N", self.n_complex))
            },
            "p_seeds": [format_word(w, gens) or "1" for w in self.p_seeds],
        }


@dataclasses.dataclass
class OneSidedHReport:
    """Three verdicts and the reasons for any failure.

    Truthiness is the conjunction, so ``if verify_one_sided_h(m):`` reads
    as intended; ``diagnostics`` names each failing condition.
    """

    n_side_acyclic: bool
    m_side_acyclic: bool
    seeds_perfect: bool
    diagnostics: list
    details: dict

    def __bool__(self) -> bool:
        return self.n_side_acyclic and self.m_side_acyclic and self.seeds_perfect

    def to_dict(self) -> dict:
        return {
            "verdict": bool(self),
            "n_side_acyclic": self.n_side_acyclic,
            "m_side_acyclic": self.m_side_acyclic,
            "seeds_perfect": self.seeds_perfect,
            "diagnostics": list(self.diagnostics),
            "details": dict(self.details),
        }


def verify_one_sided_h(m: ChainCobordismModel,
                       budgets: Budgets = DEFAULT) -> OneSidedHReport:
    """Check the defining conditions of a one-sided h-cobordism model.

    Three things must hold: the cone of N -> W is acyclic over Z[G] (the
    end inclusion is a homology equivalence), the cone of M -> W is
    acyclic over Z[G] (the base inclusion is a plus construction), and the
    seeds close up to a perfect subgroup of the realized pi_1(M).  The two
    cone conditions are decided on the complementary-cell complexes, which
    the cones deformation-retract onto.  Never raises; read the verdict.
    """
    diagnostics = []
    details = {}

    n_ok = is_acyclic(_quotient_complex(m.incl_n), budgets)
    if not n_ok:
        diagnostics.append(
            "the end inclusion N -> W is not a homology equivalence over"
            " Z[G]: its cone has nonzero homology")
    m_ok = is_acyclic(_quotient_complex(m.incl_m), budgets)
    if not m_ok:
        diagnostics.append(
            "the base inclusion M -> W is not relatively acyclic over Z[G],"
            " so W is not a plus construction of M")

    pi = m.pi_hom.target
    elements = [m.pi_hom.evaluate(w) for w in m.p_seeds]
    sub = normal_closure(pi, elements)
    p_ok = is_perfect(pi, sub)
    details["subgroup_order"] = sub.order
    if not p_ok:
        diagnostics.append(
            f"the seeds normally generate a subgroup of order {sub.order}"
            " that is not perfect")

    return OneSidedHReport(n_ok, m_ok, p_ok, diagnostics, details)


# ---------------------------------------------------------------------------
# classification


@dataclasses.dataclass
class CobordismClass:
    """The classifying pair of a one-sided h-cobordism model.

    ``subgroup`` is the perfect normal subgroup of pi_1(M) being killed
    and ``torsion`` the Whitehead torsion of the pair (W, N) over the
    quotient's group ring.  Both halves are certified on construction.
    """

    subgroup: Subgroup
    torsion: TorsionClass
    seeds: tuple = ()

    def __post_init__(self):
        if not self.subgroup.is_normal():
            raise InvalidInput("a cobordism class needs a normal subgroup")
        if not is_perfect(self.subgroup.ambient, self.subgroup):
            raise InvalidInput("a cobordism class needs a perfect subgroup")

    def to_dict(self) -> dict:
        return {
            "subgroup_order": self.subgroup.order,
            "subgroup_members": list(self.subgroup.members),
            "torsion": self.torsion.to_dict(),
        }


def classify(m: ChainCobordismModel, budgets: Budgets = DEFAULT) -> CobordismClass:
    """Assign a verified model its pair (P, tau(W, N)).

    The torsion is folded from the complementary cells of the end
    inclusion, so a model built by :func:`realize` classifies back to the
    very representative it was built from.  Raises :class:`NotOneSidedH`
    (with the verification report as certificate) when the model fails
    :func:`verify_one_sided_h`.
    """
    report = verify_one_sided_h(m, budgets)
    if not report:
        raise NotOneSidedH("the model is not a one-sided h-cobordism",
                           certificate=report.to_dict())
    pi = m.pi_hom.target
    sub = normal_closure(pi, [m.pi_hom.evaluate(w) for w in m.p_seeds])
    tau = torsion_of_pair(_quotient_complex(m.incl_n), parity=m.parity,
                          budgets=budgets)
    return CobordismClass(subgroup=sub, torsion=tau, seeds=m.p_seeds)


# ---------------------------------------------------------------------------
# realization


def realize(m_data: PresentationComplex, p_seeds: Sequence,
            tau: TorsionClass, budgets: Budgets = DEFAULT) -> ChainCobordismModel:
    """Build a model killing <<p_seeds>> with end torsion exactly ``tau``.

    The total complex is assembled in two moves.  First the plus
    construction of the base runs with the matrix ``dual(tau) (+)
    tau^-1`` -- the dual-sign representative the handle argument attaches
    on the base side, stabilized by the inverse so that the base pair
    (W, M) carries exactly (-1)^parity bar(tau) once the end layer is
    counted.  Then the end layer itself: ``tau.size`` trivially-attached
    2-cells, capped by 3-cells whose boundary rows are the rows of
    ``tau.representative``.  N is the plus construction (everything but
    the end layer), so the pair (W, N) is two free layers with boundary
    the requested representative: acyclic, with torsion ``tau`` on the
    nose.  The ambient parity is read off ``tau.parity``.

    Raises :class:`NotPerfect` when the seeds close up badly and
    :class:`MixedGroups` when ``tau`` lives over a different group than
    the quotient (build it over ``plus_quotient(m_data, p_seeds)``).
    """
    if not isinstance(m_data, PresentationComplex):
        raise InvalidInput("realize starts from a presentation complex")
    if not isinstance(tau, TorsionClass):
        raise InvalidInput("the prescribed torsion must be a TorsionClass")
    parity = tau.parity
    dual = dual_sign(tau, parity=parity)
    a_plus = dual.representative.block_diag(tau.inverse)
    a_plus_inv = dual.inverse.block_diag(tau.representative)
    plus = plus_with_torsion(m_data, p_seeds, a_plus, parity=parity,
                             a_inverse=a_plus_inv, budgets=budgets)

    n_cx = plus.plus_complex
    n = tau.size
    records = [AttachmentRecord(2, (0,) * n_cx.rank(1), label=f"side{i}")
               for i in range(n)]
    zero = GroupRingElement.zero(plus.group)
    base2 = n_cx.rank(2)
    for i in range(n):
        row = [zero] * (base2 + n)
        for j, x in enumerate(tau.representative.row(i)):
            row[base2 + j] = x
        records.append(AttachmentRecord(3, tuple(row), label=f"plug{i}"))
    w_cx = attach_cells(n_cx, records)

    alpha_m = GroupHom(m_data.presentation, plus.group,
                       tuple(plus.projection[i] for i in m_data.hom.images))
    return ChainCobordismModel(
        m_complex=plus.x_complex,
        w_complex=w_cx,
        n_complex=n_cx,
        incl_m=_prefix_inclusion(plus.x_complex, w_cx),
        incl_n=_prefix_inclusion(n_cx, w_cx),
        pi_hom=m_data.hom,
        alpha_m=alpha_m,
        p_seeds=tuple(_seed_words(m_data.presentation, p_seeds)),
        parity=parity,
    )


# ---------------------------------------------------------------------------
# gluing two models along the base


@dataclasses.dataclass
class GlueReport:
    """The double of two models and its end torsion, against the formula.

    ``end_torsion`` is tau(N_1 -> X) for X = W_1 cup_M W_2; ``predicted``
    is tau_1 + (-1)^parity bar(tau_2).  ``matches`` compares their K1
    invariants exactly.  Truthiness is ``matches``.
    """

    x_complex: BasedChainComplex
    end_torsion: TorsionClass
    predicted: TorsionClass
    matches: bool
    report: dict

    def __bool__(self) -> bool:
        return self.matches

    def to_dict(self) -> dict:
        return dict(self.report)


def _require_common_base(m1: ChainCobordismModel, m2: ChainCobordismModel) -> None:
    if not m1.w_complex.group.same_as(m2.w_complex.group):
        raise MismatchedBase("models live over different group rings")
    if m1.parity != m2.parity:
        raise MismatchedBase("models disagree on the ambient parity")
    a, b = m1.m_complex, m2.m_complex
    if {q: a.rank(q) for q in a.degrees()} != {q: b.rank(q) for q in b.degrees()}:
        raise MismatchedBase("base complexes have different cell counts")
    for q in a.degrees():
        if a.boundary(q) != b.boundary(q):
            raise MismatchedBase(f"base boundaries differ in degree {q}")
    for f in (m1.incl_m, m2.incl_m):
        if not _is_identity_prefix(f):
            raise MismatchedBase(
                "gluing requires both models to embed the base as the"
                " leading cells of W")


def glue(m1: ChainCobordismModel, m2: ChainCobordismModel,
         budgets: Budgets = DEFAULT) -> GlueReport:
    """Double two models along their shared base and test the formula.

    X = W_1 cup_M W_2 is assembled cell by cell: all of W_1, then the
    cells of W_2 outside M, with M-coordinates of their boundaries
    redirected into the W_1 copy.  X is an h-cobordism between the two
    ends, and the torsion of N_1 -> X must be tau_1 + (-1)^parity
    bar(tau_2); both sides are computed and compared at invariant level.
    Raises :class:`MismatchedBase` when the bases do not agree.
    """
    _require_common_base(m1, m2)
    group = m1.w_complex.group
    parity = m1.parity
    w1, w2, base = m1.w_complex, m2.w_complex, m1.m_complex
    comp2 = _complement_indices(m2.incl_m)

    ranks = {}
    labels = {}
    for q in sorted(set(w1.degrees()) | set(w2.degrees())):
        r = w1.rank(q) + len(comp2.get(q, []))
        if not r:
            continue
        ranks[q] = r
        named1 = w1.labels.get(q, [])
        named2 = w2.labels.get(q, [])
        labels[q] = [named1[i] if i < len(named1) else f"e{q}_{i}"
                     for i in range(w1.rank(q))]
        labels[q] += [(named2[j] if j < len(named2) else f"e{q}_{j}") + "'"
                      for j in comp2.get(q, [])]

    boundaries = {}
    for q in sorted(ranks):
        cols = ranks.get(q - 1, 0)
        if not cols:
            continue
        m = GroupRingMatrix.zeros(group, ranks[q], cols)
        b1 = w1.boundary(q)
        m.entries[:w1.rank(q), :w1.rank(q - 1)] = b1.entries
        b2 = w2.boundary(q)
        low_base = base.rank(q - 1)
        low_comp = comp2.get(q - 1, [])
        for i, cell in enumerate(comp2.get(q, [])):
            row = w1.rank(q) + i
            for j in range(low_base):
                m.entries[row, j] = b2[cell, j]
            for jj, col in enumerate(low_comp):
                m.entries[row, w1.rank(q - 1) + jj] = b2[cell, col]
        boundaries[q] = m
    x_cx = BasedChainComplex(group, ranks, boundaries, labels)
    x_cx.validate()

    blocks = {}
    for q in m1.n_complex.degrees():
        b = GroupRingMatrix.zeros(group, m1.n_complex.rank(q), x_cx.rank(q))
        b.entries[:, :w1.rank(q)] = m1.incl_n.block(q).entries
        blocks[q] = b
    end_incl = ChainMap(m1.n_complex, x_cx, blocks)

    end_torsion = torsion_of_pair(_quotient_complex(end_incl), parity=parity,
                                  budgets=budgets)
    tau1 = torsion_of_pair(_quotient_complex(m1.incl_n), parity=parity,
                           budgets=budgets)
    tau2 = torsion_of_pair(_quotient_complex(m2.incl_n), parity=parity,
                           budgets=budgets)
    predicted = compose(tau1, dual_sign(tau2, parity=parity))
    inv_end = invariant(end_torsion, budgets)
    inv_pred = invariant(predicted, budgets)
    matches = inv_end == inv_pred

    report = {
        "parity": parity,
        "glue_formula": "tau_1 + (-1)^parity bar(tau_2)",
        "end_torsion": inv_end.to_dict(),
        "predicted": inv_pred.to_dict(),
        "matches": matches,
        "x_ranks": {str(q): x_cx.rank(q) for q in x_cx.degrees()},
    }
    return GlueReport(x_complex=x_cx, end_torsion=end_torsion,
                      predicted=predicted, matches=matches, report=report)


# ---------------------------------------------------------------------------
# enumerating the classification over a finite fundamental group


@dataclasses.dataclass
class ClassIndexEntry:
    """One index of the classification: a perfect normal P and its quotient.

    ``detected`` describes the slice of Wh(quotient) the torsion module
    can see: the abelianized-determinant lattice and one exact cyclotomic
    magnitude per nontrivial character.  No claim about the full Whitehead
    group is made.
    """

    subgroup: Subgroup
    quotient: FiniteGroupRealization
    projection: list
    detected: dict

    def to_dict(self) -> dict:
        return {
            "subgroup_order": self.subgroup.order,
            "subgroup_members": list(self.subgroup.members),
            "quotient_order": self.quotient.order,
            "quotient_name": self.quotient.name,
            "detected": dict(self.detected),
        }


def enumerate_classes(r: FiniteGroupRealization,
                      budgets: Budgets = DEFAULT) -> list:
    """All classification indices over a finite realization of pi_1(M).

    One entry per perfect normal subgroup P, carrying the quotient
    realization G = pi_1(M)/P and the invariant lattice detectable over
    Z[G].  Raises :class:`OrderTooLarge` past the enumeration budget.
    """
    out = []
    for sub in enumerate_perfect_normal_subgroups(r, budgets):
        g, proj = quotient_realization(r, sub)
        ab, _ = abelianized_realization(g)
        detected = {
            "abelian_invariants": abelian_invariants(ab),
            "nontrivial_characters": len(characters(g)) - 1,
        }
        out.append(ClassIndexEntry(subgroup=sub, quotient=g,
                                   projection=list(proj), detected=detected))
    return out
