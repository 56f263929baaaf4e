"""Presentation 2-complexes and Fox-calculus boundaries over Z[G].

A finite presentation <x_1..x_m | r_1..r_k> together with a homomorphism
``hom`` onto a finite group G determines a based chain complex: the
cellular chains of the G-cover of the presentation 2-complex.  Degree 0 is
the lifted vertex, degree 1 has one cell per generator with boundary
hom(x) - 1, and degree 2 has one cell per relator whose boundary row is
the vector of Fox derivatives of the relator, pushed through ``hom``.

The identity sum_x (dr/dx)(hom(x) - 1) = hom(r) - 1 = 0 is exactly the
statement that these matrices compose to zero, so constructing the complex
re-proves it on every call (``BasedChainComplex`` validates d(d) = 0).

Beyond construction, this module attaches extra cells at the chain level
(``attach_cells``) and solves the lifting problem that drives the higher
constructions: find 2-cycles of the cover whose coordinates on a chosen
set of "new" cells are prescribed (``kernel_lift_solve``).  Cells only
ever enter through their boundary rows; a cell attached along a 2-cycle
stands in for an element of pi_2 via its Hurewicz image.
"""

from __future__ import annotations

import dataclasses
import math
from typing import Optional, Sequence

import numpy as np

from .chains import BasedChainComplex
from .config import DEFAULT, Budgets
from .errors import (
    InvalidBoundary,
    InvalidInput,
    NotLiftable,
    RankMismatch,
)
from .groups import FinitePresentation, GroupHom
from .grouprings import (
    GroupRingElement,
    GroupRingMatrix,
    row_action_matrix,
    vector_to_coefficients,
)
from .rings import RingSpec
from .snf import smith_normal_form
from .words import Word, format_word


def fox_derivative(w: Word, gen: int, hom: GroupHom) -> GroupRingElement:
    """Free derivative d(w)/d(x_gen), pushed through ``hom`` into Z[G].

    The product rule d(uv) = du + u.dv, together with d(x)/dx = 1 and
    d(x^-1)/dx = -x^-1, unrolls to a single left-to-right pass: a +1
    occurrence of the generator after prefix p contributes +p, and a -1
    occurrence contributes -(p x^-1), where p is the image of the prefix
    read so far.
    """
    target = hom.target
    out = GroupRingElement.zero(target)
    prefix = 0
    for letter, exp in w:
        image = hom.images[letter]
        if exp == 1:
            if letter == gen:
                out = out + GroupRingElement.basis(target, prefix)
            prefix = target.mul(prefix, image)
        else:
            prefix = target.mul(prefix, target.inv(image))
            if letter == gen:
                out = out - GroupRingElement.basis(target, prefix)
    return out


def fox_row(w: Word, hom: GroupHom) -> list:
    """All Fox derivatives of ``w`` as a row over the generators."""
    return [fox_derivative(w, i, hom) for i in range(len(hom.source.generators))]


@dataclasses.dataclass
class PresentationComplex:
    """A presentation, a hom onto finite G, and the Z[G] chain complex.

    ``complex`` has ranks (1, #generators, #relators) in degrees 0..2.
    """

    presentation: FinitePresentation
    hom: GroupHom
    complex: BasedChainComplex

    @property
    def group(self):
        return self.hom.target


def build_presentation_complex(p: FinitePresentation, hom: GroupHom) -> PresentationComplex:
    """Cellular chains of the G-cover of the presentation 2-complex.

    With G trivial this is the ordinary cellular complex: boundaries
    collapse to exponent sums.
    """
    if hom.source != p:
        raise InvalidInput("hom is not defined on this presentation")
    g = hom.target
    m, k = len(p.generators), len(p.relators)
    d1 = GroupRingMatrix.zeros(g, m, 1)
    for i in range(m):
        d1.entries[i, 0] = (GroupRingElement.basis(g, hom.images[i])
                            - GroupRingElement.one(g))
    d2 = GroupRingMatrix.zeros(g, k, m)
    for i, w in enumerate(p.relators):
        for j, der in enumerate(fox_row(w, hom)):
            d2.entries[i, j] = der
    labels = {0: ["pt"], 1: list(p.generators),
              2: [format_word(w, list(p.generators)) or "1" for w in p.relators]}
    cx = BasedChainComplex(g, {0: 1, 1: m, 2: k}, {1: d1, 2: d2}, labels)
    cx.validate()
    return PresentationComplex(p, hom, cx)


@dataclasses.dataclass
class AttachmentRecord:
    """One cell attached at the chain level.

    ``boundary_row`` lives in the cell basis one degree down -- the basis
    of the *result* complex, so a 3-cell in the same batch may hit 2-cells
    attached just before it.  Rows given in the shorter pre-attachment
    basis are accepted and zero-padded.
    """

    dimension: int
    boundary_row: tuple
    label: str = ""

    def __post_init__(self):
        if self.dimension not in (2, 3):
            raise InvalidInput("only 2- and 3-cells are attached")
        self.boundary_row = tuple(self.boundary_row)


def _coerce_row(group, row, width: int, old_width: int, what: str) -> list:
    out = [GroupRingElement.from_integer(group, 0) for _ in range(width)]
    if len(row) not in (width, old_width):
        raise RankMismatch(
            f"{what} boundary row has length {len(row)}, expected {old_width} or {width}")
    for j, entry in enumerate(row):
        if isinstance(entry, GroupRingElement):
            if not entry.group.same_as(group):
                raise InvalidInput(f"{what} boundary entry over the wrong group")
            out[j] = entry
        else:
            out[j] = GroupRingElement.from_integer(group, int(entry))
    return out


def attach_cells(c: BasedChainComplex, records: Sequence[AttachmentRecord]) -> BasedChainComplex:
    """Attach cells along prescribed boundary rows; d(d) = 0 is re-checked.

    New cells are appended after the existing basis in each degree, in
    record order.  Raises InvalidBoundary if any new row fails to compose
    to zero with the (new) boundary one degree down.
    """
    adds: dict = {}
    for rec in records:
        adds.setdefault(rec.dimension, []).append(rec)
    ranks = {q: c.rank(q) for q in c.degrees()}
    for d, recs in adds.items():
        ranks[d] = ranks.get(d, 0) + len(recs)

    boundaries = {}
    labels = {q: list(c.labels.get(q, [])) for q in ranks}
    for q in sorted(ranks):
        rows_new, cols_new = ranks.get(q, 0), ranks.get(q - 1, 0)
        if not rows_new or not cols_new:
            continue
        old = c.boundary(q)
        mat = GroupRingMatrix.zeros(c.group, rows_new, cols_new)
        mat.entries[:old.shape[0], :old.shape[1]] = old.entries
        for i, rec in enumerate(adds.get(q, [])):
            label = rec.label or f"cell{q}_{i}"
            row = _coerce_row(c.group, rec.boundary_row, cols_new,
                              c.rank(q - 1), label)
            mat.entries[c.rank(q) + i, :] = row
            while len(labels.setdefault(q, [])) < c.rank(q):
                labels[q].append(f"e{q}_{len(labels[q])}")
            labels[q].append(label)
        boundaries[q] = mat

    out = BasedChainComplex(c.group, ranks, boundaries, labels)
    # Check the new rows first so the error names the offending cell.
    for q, recs in sorted(adds.items()):
        low = out.boundary(q - 1)
        for i, rec in enumerate(recs):
            row = GroupRingMatrix.from_array(
                out.group, out.boundary(q).entries[c.rank(q) + i:c.rank(q) + i + 1, :])
            if not (row @ low).is_zero():
                raise InvalidBoundary(
                    f"attached cell {rec.label or i} in dimension {q} "
                    "does not compose to zero")
    out.validate()
    return out


def _unflatten(group, flat, width: int) -> list:
    n = group.order
    out = []
    for j in range(width):
        coeffs = {g: int(flat[j * n + g]) for g in range(n)
                  if int(flat[j * n + g]) != 0}
        out.append(GroupRingElement(group, coeffs))
    return out


def kernel_lift_solve(c: BasedChainComplex, new_indices: Sequence[int], targets,
                      degree: int = 2, ring: Optional[RingSpec] = None,
                      budgets: Budgets = DEFAULT) -> GroupRingMatrix:
    """2-cycles of the cover with prescribed coordinates on chosen cells.

    For each target row a, find x in ker(d_degree) over Z[G] whose
    coordinates on the cells ``new_indices`` equal a.  Targets are rows of
    a GroupRingMatrix (exact mode, ``ring`` None).  With ``ring`` given,
    targets are integer rows and only the *augmentation* of the new
    coordinates is prescribed, in the ring's sense: exactly over Z, modulo
    p over Z/p, and up to a unit (an invertible S-number) over Z[1/S] --
    the returned chains are still integral.

    Existence is equivalent to the vanishing of an obstruction class in
    H_1 of the cover of the subcomplex spanned by the remaining cells; on
    failure NotLiftable carries that class and the H_1 invariants.
    """
    group = c.group
    n = group.order
    r = c.rank(degree)
    new_indices = [int(i) for i in new_indices]
    if any(not 0 <= i < r for i in new_indices) or len(set(new_indices)) != len(new_indices):
        raise InvalidInput("new cell indices must be distinct cells of the degree")
    old_indices = [i for i in range(r) if i not in set(new_indices)]
    b = c.boundary(degree)
    target_rows = _coerce_targets(group, targets, len(new_indices), ring)

    # Split the cycle condition x.B = 0 along old/new coordinates and
    # flatten Z[G] to Z: rows of B act on coefficient vectors through the
    # regular representation.
    b_old = GroupRingMatrix.from_array(group, b.entries[old_indices, :]) \
        if old_indices else GroupRingMatrix.zeros(group, 0, b.shape[1])
    b_new = GroupRingMatrix.from_array(group, b.entries[new_indices, :]) \
        if new_indices else GroupRingMatrix.zeros(group, 0, b.shape[1])
    m_old = row_action_matrix(b_old) if old_indices else \
        np.zeros((0, b.shape[1] * n), dtype=object)

    if ring is None:
        return _solve_exact(c, degree, old_indices, new_indices,
                            b_new, m_old, target_rows, budgets)
    return _solve_augmented(c, degree, old_indices, new_indices,
                            b, ring, target_rows, budgets)


def _coerce_targets(group, targets, width: int, ring):
    if isinstance(targets, GroupRingMatrix):
        if ring is not None:
            raise InvalidInput("ring-level lifting takes integer target rows")
        if targets.shape[1] != width:
            raise RankMismatch(
                f"target rows have {targets.shape[1]} coordinates, expected {width}")
        return [list(targets.row(i)) for i in range(targets.shape[0])]
    rows = [list(row) for row in targets]
    for row in rows:
        if len(row) != width:
            raise RankMismatch(
                f"target row has {len(row)} coordinates, expected {width}")
    if ring is None:
        return [[x if isinstance(x, GroupRingElement)
                 else GroupRingElement.from_integer(group, int(x)) for x in row]
                for row in rows]
    return [[int(x) for x in row] for row in rows]


def _obstruction(c: BasedChainComplex, degree: int, old_indices, index: int,
                 rhs_flat: np.ndarray, budgets: Budgets):
    """NotLiftable certificate: the class of the unreachable boundary in
    H_1 of the cover of the old-cell subcomplex."""
    group = c.group
    sub_ranks = {q: c.rank(q) for q in c.degrees() if q < degree}
    sub_ranks[degree] = len(old_indices)
    sub_bounds = {}
    for q in list(sub_ranks):
        if q == degree and old_indices:
            sub_bounds[q] = GroupRingMatrix.from_array(
                group, c.boundary(degree).entries[old_indices, :])
        elif q < degree and c.rank(q) and c.rank(q - 1):
            sub_bounds[q] = c.boundary(q)
    sub = BasedChainComplex(group, sub_ranks, sub_bounds)
    h1 = sub.covering_complex().homology_at(degree - 1, budgets)
    cls = h1.class_of([int(x) for x in rhs_flat])
    cert = {
        "target_index": index,
        "h1_invariants": h1.invariant_factors(),
        "obstruction_class": cls,
    }
    return NotLiftable(
        "no equivariant cycle has the prescribed relative coordinates: "
        f"target {index} meets a nonzero class in H1 of the base subcomplex",
        cert)


def _solve_exact(c, degree, old_indices, new_indices, b_new, m_old,
                 target_rows, budgets):
    group = c.group
    n = group.order
    sf = smith_normal_form(m_old.T, budgets) if old_indices else None
    out_rows = []
    for idx, row in enumerate(target_rows):
        prescribed = GroupRingMatrix.from_array(group, np.array([row], dtype=object))
        rhs = -(prescribed @ b_new)
        rhs_flat = np.array(
            [int(x) for x in vector_to_coefficients(list(rhs.row(0)))], dtype=object)
        if old_indices:
            sol = sf.solve(rhs_flat)
        else:
            sol = np.zeros(0, dtype=object) if not rhs_flat.any() else None
        if sol is None:
            raise _obstruction(c, degree, old_indices, idx, -rhs_flat, budgets)
        old_part = _unflatten(group, sol, len(old_indices))
        full = [None] * c.rank(degree)
        for j, i in enumerate(old_indices):
            full[i] = old_part[j]
        for j, i in enumerate(new_indices):
            full[i] = row[j]
        out_rows.append(full)
    return GroupRingMatrix.from_array(group, np.array(out_rows, dtype=object)) \
        if out_rows else GroupRingMatrix.zeros(group, 0, c.rank(degree))


def _solve_augmented(c, degree, old_indices, new_indices, b, ring,
                     target_rows, budgets):
    """Full-width unknown x with x.B = 0 and aug(x[new]) = target per ring."""
    group = c.group
    n = group.order
    r = c.rank(degree)
    m_cycle = row_action_matrix(b)
    sel = np.zeros((r * n, len(new_indices)), dtype=object)
    for j, i in enumerate(new_indices):
        sel[i * n:(i + 1) * n, j] = 1
    if ring.kind == "Zmod":
        # aug(x[new]) = target mod p: give each constraint a p-divisible slack.
        p = ring.modulus
        slack = np.zeros((len(new_indices), m_cycle.shape[1] + len(new_indices)),
                         dtype=object)
        for j in range(len(new_indices)):
            slack[j, m_cycle.shape[1] + j] = p
        system = np.vstack([np.hstack([m_cycle, sel]), slack])
    else:
        system = np.hstack([m_cycle, sel])
    sf = smith_normal_form(system.T, budgets)

    out_rows = []
    for idx, row in enumerate(target_rows):
        rhs = np.concatenate([np.zeros(m_cycle.shape[1], dtype=object),
                              np.array([int(x) for x in row], dtype=object)])
        sol = sf.solve(rhs)
        if sol is None and ring.kind == "Zloc":
            scale = _s_number_scale(sf.cokernel_class(rhs), ring)
            if scale is not None and scale > 1:
                sol = sf.solve(scale * rhs)
        if sol is None:
            lifted = GroupRingMatrix.from_array(group, np.array([
                [GroupRingElement.from_integer(group, int(x)) for x in row]],
                dtype=object))
            b_new = GroupRingMatrix.from_array(group, b.entries[new_indices, :]) \
                if new_indices else GroupRingMatrix.zeros(group, 0, b.shape[1])
            rhs_b = vector_to_coefficients(list((lifted @ b_new).row(0)))
            raise _obstruction(c, degree, old_indices, idx,
                               np.array([int(x) for x in rhs_b], dtype=object),
                               budgets)
        out_rows.append(_unflatten(group, sol[:r * n], r))
    return GroupRingMatrix.from_array(group, np.array(out_rows, dtype=object)) \
        if out_rows else GroupRingMatrix.zeros(group, 0, r)


def _s_number_scale(classes: list, ring: RingSpec):
    """Least multiple of the target, a unit in the ring, that kills the
    cokernel class — None when no invertible multiple can."""
    scale = 1
    for value, order in classes:
        if value == 0:
            continue
        if order == 0:
            return None
        need = int(order) // math.gcd(int(order), int(value))
        if not ring.is_s_number(need):
            return None
        scale = scale * need // math.gcd(scale, need)
    return scale
