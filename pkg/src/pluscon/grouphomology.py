"""Low-degree group homology, straight from the normalized bar complex.

The star of the module is `h2_group`: the second integral homology of a
finite group (its Schur multiplier), together with H1 as a bonus, computed
by one of two engines.

* The *Smith route* materializes degrees 0..3 of the normalized bar
  complex (`BarComplexSlice`) and runs exact integral Smith reduction.
  It produces generators and receives induced maps, but its matrices grow
  like (n-1)^3, so it is reserved for small groups.

* The *cocycle route* never builds bar chains.  A normalized 2-cocycle is
  determined by its values on pairs (x, s) with s in a fixed generating
  set; walking a BFS spanning tree of the Cayley graph expresses every
  f(g, h) as an integer functional in those unknowns, and the cocycle
  identities along non-tree edges become an integer constraint matrix C.
  Ranks of C modulo several primes then give dim H^2(G; F_p), and the
  universal coefficient bookkeeping collapses to two clean formulas:

      t_p   = dim_p ker(C mod p) - (n - 1)          # p-rank of H2
      s2_p  = 2 dim_p ker(C mod p) - rk - 2(n - 1)  # sum of min(2, e_i)

  where rk measures how much the kernel fails to lift mod p^2.  Exponents
  above p^2 are resolved whenever p^3 does not divide |G|; otherwise the
  report is flagged `partial` and keeps rank-level factors.

On top of the two engines sit `h2_induced_map` (functorial maps on H2),
comparison maps from a presentation 2-complex into the bar complex, and
three homological criteria: Moore-space admissibility, homology-sphere
fundamental groups (superperfectness), and necessary conditions for being
a knot group.
"""

from __future__ import annotations

import dataclasses
from typing import Optional, Sequence

import numpy as np
import scipy.sparse as sp

from .chains import (
    DegreeHomology,
    HomologyReport,
    InducedMap,
    _merge_invariant_factors,
    induced_map,
)
from .config import DEFAULT, Budgets
from .errors import BudgetExceeded, InvalidBoundary, InvalidInput
from .groups import (
    FiniteGroupRealization,
    FinitePresentation,
    GroupHom,
    RealizationHom,
    abelian_invariants,
    abelianization,
    abelianized_realization,
    find_generators,
    normal_closure,
)
from .rings import RingSpec
from .snf import as_object_matrix, smith_normal_form
from .words import Word, format_word, parse_word

Z = RingSpec.integers()


# ---------------------------------------------------------------------------
# the normalized bar complex, degrees 0..3


class BarComplexSlice:
    """Degrees 0..3 of the normalized bar complex of a finite group.

    Degree d is free on tuples [g1|...|gd] of *non-identity* elements,
    ordered lexicographically; the tuple with entries g1..gd sits at index
    sum((gi - 1) * (n-1)^(d-i)).  Boundaries are scipy CSR matrices with
    rows indexed by d-cells, so a chain x pushes forward as x @ boundary(d).
    Terms whose tuple acquires an identity entry are dropped (that is the
    normalization), and d1 is the zero map onto the single 0-cell.
    """

    def __init__(self, group: FiniteGroupRealization, budgets: Budgets = DEFAULT):
        n = group.order
        m = n - 1
        if m ** 3 > budgets.bar_sparse_budget:
            raise BudgetExceeded(
                f"bar slice would have {m ** 3} 3-cells, over the sparse "
                f"budget {budgets.bar_sparse_budget}")
        self.group = group
        self._table = np.asarray(group.table, dtype=np.int64)
        self._d3: Optional[sp.csr_matrix] = None

    @property
    def _m(self) -> int:
        return self.group.order - 1

    def rank(self, d: int) -> int:
        if d == 0:
            return 1
        if d in (1, 2, 3):
            return self._m ** d
        return 0

    def pair_index(self, g: int, h: int) -> int:
        if g == 0 or h == 0:
            raise InvalidInput("normalized cells carry non-identity entries")
        return (g - 1) * self._m + (h - 1)

    def boundary(self, d: int) -> sp.csr_matrix:
        if d == 1:
            return sp.csr_matrix((self.rank(1), 1), dtype=np.int64)
        if d == 2:
            return self._boundary2()
        if d == 3:
            if self._d3 is None:
                self._d3 = self._boundary3()
            return self._d3
        raise InvalidInput(f"no boundary out of degree {d} in a 0..3 slice")

    def _boundary2(self) -> sp.csr_matrix:
        m, t = self._m, self._table
        g = np.repeat(np.arange(1, m + 1), m)
        h = np.tile(np.arange(1, m + 1), m)
        rows = np.arange(m * m)
        gh = t[g, h]
        keep = gh != 0
        r = np.concatenate([rows, rows[keep], rows])
        c = np.concatenate([h - 1, gh[keep] - 1, g - 1])
        v = np.concatenate([np.ones(m * m, dtype=np.int64),
                            -np.ones(int(keep.sum()), dtype=np.int64),
                            np.ones(m * m, dtype=np.int64)])
        return sp.coo_matrix((v, (r, c)), shape=(m * m, m)).tocsr()

    def _boundary3(self) -> sp.csr_matrix:
        # d[g|h|k] = [h|k] - [gh|k] + [g|hk] - [g|h], identity tuples dropped
        m, t = self._m, self._table
        idx = np.arange(m ** 3)
        g = idx // (m * m) + 1
        h = (idx // m) % m + 1
        k = idx % m + 1
        gh = t[g, h]
        hk = t[h, k]
        keep_gh = gh != 0
        keep_hk = hk != 0
        r = np.concatenate([idx, idx[keep_gh], idx[keep_hk], idx])
        c = np.concatenate([(h - 1) * m + (k - 1),
                            (gh[keep_gh] - 1) * m + (k[keep_gh] - 1),
                            (g[keep_hk] - 1) * m + (hk[keep_hk] - 1),
                            (g - 1) * m + (h - 1)])
        v = np.concatenate([np.ones(m ** 3, dtype=np.int64),
                            -np.ones(int(keep_gh.sum()), dtype=np.int64),
                            np.ones(int(keep_hk.sum()), dtype=np.int64),
                            -np.ones(m ** 3, dtype=np.int64)])
        return sp.coo_matrix((v, (r, c)), shape=(m ** 3, m * m)).tocsr()

    def dense_boundary(self, d: int) -> np.ndarray:
        return np.asarray(self.boundary(d).toarray(), dtype=object)

    def validate(self) -> None:
        for d in (2, 3):
            prod = self.boundary(d) @ self.boundary(d - 1)
            if prod.nnz and np.any(prod.data):
                raise InvalidBoundary(f"d{d} then d{d - 1} is not zero")


# ---------------------------------------------------------------------------
# F_p linear algebra on int64 matrices


def _echelon_mod(mat: np.ndarray, p: int):
    """Reduced row echelon mod p.  Returns (rank, pivot columns, rref)."""
    a = np.asarray(mat, dtype=np.int64) % p
    rows, cols = a.shape
    rank = 0
    pivots = []
    for c in range(cols):
        if rank == rows:
            break
        below = np.nonzero(a[rank:, c])[0]
        if below.size == 0:
            continue
        i = rank + int(below[0])
        if i != rank:
            a[[rank, i]] = a[[i, rank]]
        a[rank] = (a[rank] * pow(int(a[rank, c]), p - 2, p)) % p
        col = a[:, c].copy()
        col[rank] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            a[hit] = (a[hit] - np.outer(col[hit], a[rank])) % p
        pivots.append(c)
        rank += 1
    return rank, pivots, a


def _rank_mod(mat: np.ndarray, p: int) -> int:
    return _echelon_mod(mat, p)[0]


def _kernel_mod(mat: np.ndarray, p: int) -> np.ndarray:
    """Rows span the null space of mat over F_p (entries in 0..p-1)."""
    cols = mat.shape[1]
    rank, pivots, rref = _echelon_mod(mat, p)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for row, f in enumerate(free):
        basis[row, f] = 1
        for i, c in enumerate(pivots):
            basis[row, c] = (-int(rref[i, f])) % p
    return basis


def _prime_factors(n: int) -> dict:
    out = {}
    left = n
    p = 2
    while p * p <= left:
        while left % p == 0:
            out[p] = out.get(p, 0) + 1
            left //= p
        p += 1
    if left > 1:
        out[left] = out.get(left, 0) + 1
    return out


# ---------------------------------------------------------------------------
# the cocycle engine


class _CocycleSystem:
    """Normalized 2-cocycles of a finite group in generating-set coordinates.

    Unknowns are the values f(x, s) for x != e and s in a generating set S,
    laid out at (x - 1) * |S| + j.  The table L holds, for every pair
    (g, h), the integer functional with f(g, h) = L[g, h] . unknowns; it is
    filled along a BFS spanning tree of the right-Cayley graph, where the
    cocycle identity f(g, hs) = f(g, h) + f(gh, s) - f(h, s) *defines* the
    next value.  The same identity instances along non-tree edges are
    obligations, and become the rows of the constraint matrix; solutions of
    C x = 0 over any coefficient ring biject with normalized 2-cocycles.
    """

    def __init__(self, group: FiniteGroupRealization, budgets: Budgets = DEFAULT):
        n = group.order
        gens = find_generators(group)
        k = len(gens)
        self.group = group
        self.gens = gens
        self.unknowns = (n - 1) * k

        tree = []          # (h, j, h*s_j) in discovery order
        tree_set = set()
        seen = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for h in frontier:
                for j, s in enumerate(gens):
                    y = group.mul(h, s)
                    if y not in seen:
                        seen.add(y)
                        tree.append((h, j, y))
                        tree_set.add((h, j))
                        nxt.append(y)
            frontier = nxt

        P = self.unknowns
        L = np.zeros((n, n, P), dtype=np.int64)
        for g in range(1, n):
            lg = L[g]
            for h, j, y in tree:
                row = lg[h].copy()
                gh = group.mul(g, h)
                if gh != 0:
                    row[(gh - 1) * k + j] += 1
                if h != 0:
                    row[(h - 1) * k + j] -= 1
                lg[y] = row
        self.values = L

        nontree = [(h, j) for h in range(n) for j in range(k)
                   if (h, j) not in tree_set]
        rows = np.zeros((len(nontree) * (n - 1), P), dtype=np.int64)
        at = 0
        for h, j in nontree:
            y = group.mul(h, gens[j])
            for g in range(1, n):
                row = L[g, y] - L[g, h]
                gh = group.mul(g, h)
                if gh != 0:
                    row[(gh - 1) * k + j] -= 1
                if h != 0:
                    row[(h - 1) * k + j] += 1
                rows[at] = row
                at += 1
        self.constraints = rows
        self._rank: dict = {}
        self._kernel: dict = {}

    def rank_mod(self, p: int) -> int:
        if p not in self._rank:
            self._rank[p] = _rank_mod(self.constraints, p)
        return self._rank[p]

    def kernel_mod(self, p: int) -> np.ndarray:
        if p not in self._kernel:
            self._kernel[p] = _kernel_mod(self.constraints, p)
        return self._kernel[p]

    def h2_rank_mod(self, p: int) -> int:
        """t_p = dim H2 (x) F_p, by counting cocycles minus coboundaries."""
        z = self.unknowns - self.rank_mod(p)
        return z - (self.group.order - 1)

    def exponent_probe(self, p: int) -> int:
        """s2 = sum over p-power factors p^e of H2 of min(2, e).

        Counts solutions of C x = 0 mod p^2 by lifting the mod-p kernel:
        a kernel vector x lifts iff (C x)/p lands in the mod-p column
        space of C, so the lift defect is a rank increment.
        """
        kernel = self.kernel_mod(p)
        z = kernel.shape[0]
        if z == 0:
            return 0
        carry = self.constraints @ kernel.T
        if np.any(carry % p):
            raise RuntimeError("mod-p kernel failed to be a kernel; "
                               "cocycle bookkeeping is inconsistent")
        lifted = (carry // p) % p
        rk = _rank_mod(np.hstack([self.constraints % p, lifted]), p) \
            - self.rank_mod(p)
        return 2 * z - rk - 2 * (self.group.order - 1)


def _h1_invariants(group: FiniteGroupRealization) -> list:
    ab, _ = abelianized_realization(group)
    return abelian_invariants(ab)


def _modular_h2_structure(group: FiniteGroupRealization,
                          budgets: Budgets) -> tuple:
    """(_CocycleSystem, per-prime dict, control prime) for a finite group.

    The per-prime dict maps p | |G| to {"t", "a", "b", "resolved", "s2"}:
    t p-power factors of H2 in total, a of exponent exactly 1, b of
    exponent >= 2 ("resolved" when the split and the exponents are exact;
    an unresolved prime leaves a/b as None).  The control prime q does not
    divide |G|, where dim H^2(G; F_q) must vanish -- a cheap full-engine
    self-check run on every call.
    """
    system = _CocycleSystem(group, budgets)
    n = group.order
    per_prime = {}
    for p, v in sorted(_prime_factors(n).items()):
        t = system.h2_rank_mod(p)
        if t < 0:
            raise RuntimeError(f"negative mod-{p} rank for H2; "
                               "cocycle bookkeeping is inconsistent")
        info = {"t": t, "a": None, "b": None, "s2": None, "resolved": True}
        if t:
            if v == 1:
                # exp(H2) divides |G|, so every factor at p is exactly p
                info["a"], info["b"] = t, 0
            else:
                s2 = system.exponent_probe(p)
                info["s2"] = s2
                if not t <= s2 <= 2 * t:
                    raise RuntimeError(f"mod-{p} exponent probe out of range")
                a, b = 2 * t - s2, s2 - t
                if b == 0 or v == 2:
                    info["a"], info["b"] = a, b
                else:
                    info["resolved"] = False
        per_prime[p] = info
    control = 2
    while n % control == 0:
        control += 1 + (control > 2)
    if system.h2_rank_mod(control) != 0:
        raise RuntimeError(f"control prime {control} sees phantom cohomology; "
                           "cocycle bookkeeping is inconsistent")
    return system, per_prime, control


# ---------------------------------------------------------------------------
# h2_group and its report


def _tensor_tor_factors(h1_ints: list, h2_ints: list, ring: RingSpec) -> dict:
    """Degree 1-2 factor lists over `ring` from exact integral factors."""
    if ring.kind == "Z":
        f1, f2 = list(h1_ints), list(h2_ints)
    else:
        f1 = [ring.tensor_factor(d) for d in h1_ints]
        f2 = [ring.tensor_factor(d) for d in h2_ints]
        if ring.kind == "Zmod":
            f2 += [ring.tor_factor(d) for d in h1_ints]
    out = {}
    for q, f in ((1, f1), (2, f2)):
        merged = _merge_invariant_factors([d for d in f if d != 1])
        if merged:
            out[q] = merged
    return out


def _modular_factors(per_prime: dict, h1_ints: list,
                     ring: RingSpec) -> tuple:
    """(factors dict, partial flag) over `ring` from per-prime H2 data."""
    powers = []
    partial = False
    for p, info in per_prime.items():
        t = info["t"]
        if t == 0:
            continue
        if ring.kind == "Zloc" and p in ring.inverted:
            continue
        if ring.kind == "Zmod":
            k = _prime_factors(ring.modulus).get(p, 0)
            if k == 0:
                continue
            if k == 1:
                powers += [p] * t        # exact: only the p-rank matters
                continue
            if info["resolved"]:
                powers += [p] * info["a"] + [p * p] * info["b"]
            else:
                # every unresolved factor has exponent >= 2, so its image
                # in Z/p^2 terms is exact; beyond that it is a lower bound
                a, b = 2 * t - info["s2"], info["s2"] - t
                powers += [p] * a + [p * p] * b
                if k >= 3:
                    partial = True
            continue
        if info["resolved"]:
            powers += [p] * info["a"] + [p * p] * info["b"]
        else:
            powers += [p] * t            # rank-level profile only
            partial = True
    if ring.kind == "Z":
        f1 = list(h1_ints)
        f2 = powers
    else:
        f1 = [ring.tensor_factor(d) for d in h1_ints]
        f2 = list(powers)                # already reduced per prime
        if ring.kind == "Zmod":
            f2 += [ring.tor_factor(d) for d in h1_ints]
    out = {}
    for q, f in ((1, f1), (2, f2)):
        merged = _merge_invariant_factors([d for d in f if d != 1])
        if merged:
            out[q] = merged
    return out, partial


def h2_group(group: FiniteGroupRealization, ring: RingSpec = Z,
             method: str = "auto", budgets: Budgets = DEFAULT) -> HomologyReport:
    """H1 and H2 of a finite group over `ring`, as a HomologyReport.

    `method` picks the engine: "smith" runs exact integral reduction on the
    bar slice (generators available, cost ~(n-1)^3 rows), "modular" runs
    the cocycle engine (ranks mod each prime dividing |G|, plus a mod-p^2
    lifting probe for exponents).  "auto" routes by `budgets.zsnf_max_cols`.
    Asking for "smith" beyond that budget raises BudgetExceeded rather than
    looping for hours; every route first checks `budgets.bar_sparse_budget`
    against the (n-1)^3 bar cells the computation conceptually owns.

    The cocycle engine cannot always pin torsion exponents: when p^3 | |G|
    and the mod-p^2 probe reports exponents >= 2, the affected prime keeps
    rank-level factors and the report is flagged `partial` (the `detail`
    dict carries the per-prime evidence).  Over Z/p with p prime the answer
    is always exact.
    """
    n = group.order
    if n == 1:
        return HomologyReport(ring, {}, detail={"method": "trivial"})
    m = n - 1
    if m ** 3 > budgets.bar_sparse_budget:
        raise BudgetExceeded(
            f"group of order {n} owns {m ** 3} bar 3-cells, over the sparse "
            f"budget {budgets.bar_sparse_budget}")
    if method == "auto":
        method = "smith" if m ** 3 <= budgets.zsnf_max_cols else "modular"
    if method == "smith":
        if m ** 3 > budgets.zsnf_max_cols:
            raise BudgetExceeded(
                f"integral Smith route on {m ** 3} bar 3-cells is over "
                f"zsnf_max_cols={budgets.zsnf_max_cols}; use the modular route")
        h1, h2 = _smith_bar_homology(group, budgets)
        factors = _tensor_tor_factors(h1.invariant_factors(),
                                      h2.invariant_factors(), ring)
        return HomologyReport(ring, factors, detail={"method": "smith"})
    if method != "modular":
        raise InvalidInput(f"unknown method {method!r}")
    _, per_prime, control = _modular_h2_structure(group, budgets)
    h1_ints = _h1_invariants(group)
    factors, partial = _modular_factors(per_prime, h1_ints, ring)
    detail = {"method": "modular", "primes": per_prime,
              "control_prime": control}
    return HomologyReport(ring, factors, partial=partial, detail=detail)


def _smith_bar_homology(group: FiniteGroupRealization,
                        budgets: Budgets) -> tuple:
    """(H1, H2) of the bar slice as DegreeHomology objects."""
    s = BarComplexSlice(group, budgets)
    d2 = s.dense_boundary(2)
    d3 = s.dense_boundary(3)
    h1 = DegreeHomology(np.zeros((s.rank(1), 1), dtype=object), d2, budgets)
    h2 = DegreeHomology(d2, d3, budgets)
    return h1, h2


# ---------------------------------------------------------------------------
# induced maps on H2


@dataclasses.dataclass
class InducedH2Report:
    """The verdict of h2_induced_map.

    Over a ring R the verdicts concern H2(-; Z) (x) R -- the functorial
    image of the integral Schur multiplier -- not the full H2(-; R) of the
    universal coefficient theorem (whose Tor(H1) summand is not compared).
    `matrix` gives the map in the target's Smith basis when the integral
    route computed one, and None when only rank evidence exists; `iso` is
    None in the rare case that an epimorphism onto a partially-resolved
    target cannot be promoted or refuted.
    """

    ring: RingSpec
    source_factors: list
    target_factors: list
    epi: bool
    iso: Optional[bool]
    matrix: Optional[np.ndarray]
    detail: dict

    def to_dict(self) -> dict:
        return {"ring": self.ring.label(),
                "source_factors": [int(d) for d in self.source_factors],
                "target_factors": [int(d) for d in self.target_factors],
                "epi": bool(self.epi),
                "iso": None if self.iso is None else bool(self.iso),
                "route": self.detail.get("route", "")}


def _bar2_chain_map(alpha: RealizationHom) -> np.ndarray:
    """[g|h] -> [alpha g|alpha h] on bar 2-chains, degenerate images dropped."""
    ms = alpha.source.order - 1
    mt = alpha.target.order - 1
    f = np.zeros((ms * ms, mt * mt), dtype=object)
    for g in range(1, ms + 1):
        ag = alpha(g)
        if ag == 0:
            continue
        for h in range(1, ms + 1):
            ah = alpha(h)
            if ah == 0:
                continue
            f[(g - 1) * ms + (h - 1), (ag - 1) * mt + (ah - 1)] = 1
    return f


def _tensored_epi_iso(matrix: np.ndarray, src_factors: list, tgt_orders: list,
                      tgt_factors: list, ring: RingSpec,
                      budgets: Budgets) -> tuple:
    """(epi, iso) of the induced map after tensoring with `ring`."""
    rows = [list(matrix[i, :]) for i in range(matrix.shape[0])]
    for j, d in enumerate(tgt_orders):
        if d:
            row = [0] * len(tgt_orders)
            row[j] = d
            rows.append(row)
    if rows:
        sf = smith_normal_form(as_object_matrix(rows), budgets)
        diag = [int(d) for d in sf.d]
        coker = [d for d in diag if d != 1] + [0] * (len(tgt_orders) - len(diag))
    else:
        coker = [0] * len(tgt_orders)
    epi = all(ring.tensor_factor(d) == 1 for d in coker)
    src_r = _merge_invariant_factors(
        [f for f in (ring.tensor_factor(d) for d in src_factors) if f != 1])
    tgt_r = _merge_invariant_factors(
        [f for f in (ring.tensor_factor(d) for d in tgt_factors) if f != 1])
    return epi, (epi and src_r == tgt_r)


def h2_induced_map(alpha: RealizationHom, ring: RingSpec = Z,
                   budgets: Budgets = DEFAULT) -> InducedH2Report:
    """The map a group homomorphism induces on second homology.

    Routing mirrors h2_group.  When both groups fit the integral Smith
    budget, the bar chain map [g|h] -> [alpha g|alpha h] is pushed through
    `chains.induced_map`, giving the matrix in Smith bases plus exact
    epi/iso verdicts (tensored with `ring` when it is not Z).  Otherwise:
    the identity map short-circuits to an isomorphism, a target with
    vanishing H2 makes every map onto it epi, and for a small source into
    a large target the cocycle engine pairs pulled-back mod-p cocycles of
    the target against the source's torsion generators -- an exact
    surjectivity test prime by prime, with no matrix to report.  Anything
    else raises BudgetExceeded, as do the cocycle-era routes over rings
    other than Z (their tensored verdicts would need structure the engine
    has not certified).
    """
    src, tgt = alpha.source, alpha.target
    ms, mt = src.order - 1, tgt.order - 1
    for which, m in (("source", ms), ("target", mt)):
        if m ** 3 > budgets.bar_sparse_budget:
            raise BudgetExceeded(
                f"{which} group owns {m ** 3} bar 3-cells, over the sparse "
                f"budget {budgets.bar_sparse_budget}")

    if ms ** 3 <= budgets.zsnf_max_cols and mt ** 3 <= budgets.zsnf_max_cols:
        _, hs = _smith_bar_homology(src, budgets)
        _, ht = _smith_bar_homology(tgt, budgets)
        im = induced_map(hs, ht, _bar2_chain_map(alpha), budgets)
        sf, tf = hs.invariant_factors(), ht.invariant_factors()
        if ring.kind == "Z":
            epi, iso = im.is_epi(budgets), im.is_iso(budgets)
            rf_s, rf_t = sf, tf
        else:
            epi, iso = _tensored_epi_iso(im.matrix, sf, ht.orders, tf,
                                         ring, budgets)
            rf_s = _merge_invariant_factors(
                [f for f in (ring.tensor_factor(d) for d in sf) if f != 1])
            rf_t = _merge_invariant_factors(
                [f for f in (ring.tensor_factor(d) for d in tf) if f != 1])
        return InducedH2Report(ring, rf_s, rf_t, epi, iso, im.matrix,
                               {"route": "smith"})

    identity = tgt.same_as(src) and alpha.mapping == tuple(range(src.order))
    if identity:
        rep = h2_group(src, ring, budgets=budgets)
        fac = rep.factors.get(2, [])
        return InducedH2Report(ring, list(fac), list(fac), True, True, None,
                               {"route": "identity", "partial": rep.partial})

    if ring.kind != "Z":
        raise BudgetExceeded(
            "induced-map verdicts over rings other than Z need both groups "
            "within the integral Smith budget")

    rep_t = h2_group(tgt, Z, budgets=budgets)
    tfac = rep_t.factors.get(2, [])
    if not tfac:
        rep_s = h2_group(src, Z, budgets=budgets)
        sfac = rep_s.factors.get(2, [])
        return InducedH2Report(Z, list(sfac), [], True, not sfac, None,
                               {"route": "trivial-target"})

    if ms ** 3 > budgets.zsnf_max_cols:
        raise BudgetExceeded(
            "pairing route needs the source group within the integral "
            "Smith budget")
    system, per_prime, _ = _modular_h2_structure(tgt, budgets)
    _, hs = _smith_bar_homology(src, budgets)
    ranks = {}
    epi = True
    for p, info in per_prime.items():
        t = info["t"]
        if t == 0:
            continue
        gens = [j for j, d in enumerate(hs.orders)
                if d != 1 and (d == 0 or d % p == 0)]
        funcs = np.zeros((len(gens), system.unknowns), dtype=object)
        for at, j in enumerate(gens):
            cyc = hs.generator_cycle(j)
            row = np.zeros(system.unknowns, dtype=object)
            for pos, coeff in enumerate(cyc):
                if coeff == 0:
                    continue
                g, h = divmod(pos, ms)
                row += int(coeff) * system.values[alpha(g + 1), alpha(h + 1)]
            funcs[at] = row
        if len(gens) == 0:
            rank = 0
        else:
            pairing = (system.kernel_mod(p) @
                       np.asarray(funcs, dtype=np.int64).T) % p
            rank = _rank_mod(pairing, p)
        ranks[p] = rank
        if rank != t:
            epi = False
    sfac = hs.invariant_factors()
    if not epi:
        iso: Optional[bool] = False
    elif rep_t.partial:
        iso = None
    else:
        iso = sfac == tfac
    return InducedH2Report(Z, sfac, list(tfac), epi, iso, None,
                           {"route": "cocycle-pairing", "ranks": ranks,
                            "target_partial": rep_t.partial})


# ---------------------------------------------------------------------------
# comparison maps from a presentation 2-complex


def presentation_to_bar_rows(pres: FinitePresentation,
                             hom: GroupHom) -> tuple:
    """(phi1, phi2): generator and relator rows into the bar slice of G.

    phi1 sends a presentation generator to the bar 1-cell of its image;
    phi2 walks each relator w = y1^e1 ... and emits [prefix | image] per
    letter (sign ei, prefix taken *after* the letter when ei = -1), which
    is a chain map precisely because relators die in G.  Rows of phi2 are
    indexed like the relators, columns like bar 2-cells.
    """
    g = hom.target
    m = g.order - 1
    phi1 = np.zeros((len(pres.generators), m), dtype=object)
    for i, img in enumerate(hom.images):
        if img != 0:
            phi1[i, img - 1] = 1
    phi2 = np.zeros((len(pres.relators), m * m), dtype=object)
    for r, w in enumerate(pres.relators):
        prefix = 0
        for letter, exp in w:
            img = hom.images[letter]
            if exp == 1:
                if prefix != 0 and img != 0:
                    phi2[r, (prefix - 1) * m + (img - 1)] += 1
                prefix = g.mul(prefix, img)
            else:
                prefix = g.mul(prefix, g.inv(img))
                if prefix != 0 and img != 0:
                    phi2[r, (prefix - 1) * m + (img - 1)] -= 1
    return phi1, phi2


def presentation_h2_map(pres: FinitePresentation, hom: GroupHom,
                        budgets: Budgets = DEFAULT) -> InducedMap:
    """H2(presentation 2-complex) -> H2(group), through the bar complex.

    The source is the kernel of the exponent matrix (the 2-complex has no
    3-cells); the target is the bar-slice H2 of the realization, so this
    is only available on Smith-route groups.  The classical exactness of
    pi2 -> H2(X) -> H2(pi1) -> 0 says the induced map must be onto.
    """
    g = hom.target
    m = g.order - 1
    if m ** 3 > budgets.zsnf_max_cols:
        raise BudgetExceeded(
            "presentation comparison needs the group within the integral "
            "Smith budget")
    exponents = as_object_matrix(pres.exponent_matrix())
    hs = DegreeHomology(exponents, np.zeros((0, len(pres.relators)),
                                            dtype=object), budgets)
    _, ht = _smith_bar_homology(g, budgets)
    _, phi2 = presentation_to_bar_rows(pres, hom)
    return induced_map(hs, ht, phi2, budgets)


# ---------------------------------------------------------------------------
# criteria


def moore_criterion(group: FiniteGroupRealization,
                    budgets: Budgets = DEFAULT) -> bool:
    """Can the group's classifying space be one point, one cell dimension?

    True exactly when H2 vanishes, the homological obstruction this module
    can see; cyclic groups pass, the Klein four group already fails.
    """
    return h2_group(group, Z, budgets=budgets).is_zero(2)


def homology_sphere_criterion(group: FiniteGroupRealization,
                              budgets: Budgets = DEFAULT) -> bool:
    """Superperfectness: H1 = H2 = 0, as for fundamental groups of
    integral homology spheres."""
    rep = h2_group(group, Z, budgets=budgets)
    return rep.is_zero(1) and rep.is_zero(2)


@dataclasses.dataclass
class KnotVerdict:
    """Outcome of the knot-group necessary-condition battery.

    status is "refuted" (some necessary condition failed, `reasons` says
    which, soundly), "pass_with_certificate" (all conditions hold and a
    weight witness killed every supplied finite quotient), or
    "pass_necessary" (nothing failed; no witness was exercised).
    """

    status: str
    h1: list
    reasons: list
    certificate: Optional[dict] = None

    @property
    def refuted(self) -> bool:
        return self.status == "refuted"

    def to_dict(self) -> dict:
        return {"status": self.status,
                "h1": [int(d) for d in self.h1],
                "reasons": list(self.reasons),
                "certificate": self.certificate}


def _h2_image_classes(pres: FinitePresentation, beta: GroupHom,
                      budgets: Budgets) -> list:
    """Classes of H2(presentation complex) pushed into bar H2 of a quotient."""
    exponents = as_object_matrix(pres.exponent_matrix())
    hs = DegreeHomology(exponents, np.zeros((0, len(pres.relators)),
                                            dtype=object), budgets)
    if all(d == 1 for d in hs.orders):
        return []
    g = beta.target
    if (g.order - 1) ** 3 > budgets.zsnf_max_cols:
        raise BudgetExceeded(
            f"H2 probe through a quotient of order {g.order} is over the "
            f"integral Smith budget")
    _, ht = _smith_bar_homology(g, budgets)
    _, phi2 = presentation_to_bar_rows(pres, beta)
    im = induced_map(hs, ht, phi2, budgets)
    out = []
    for i in range(im.matrix.shape[0]):
        hits = [[j, int(x), ht.orders[j]]
                for j, x in enumerate(im.matrix[i, :]) if x != 0]
        if hits:
            out.append({"source_generator": i, "components": hits})
    return out


def knot_group_criterion(pres: FinitePresentation,
                         weight_witness=None,
                         quotient_probes: Sequence[GroupHom] = (),
                         budgets: Budgets = DEFAULT) -> KnotVerdict:
    """Necessary conditions for presenting a classical knot group.

    Three checks, refutation-sound and confirmation-partial:

    1. H1 must be infinite cyclic (exact, from the exponent matrix).
    2. H2 of the group must vanish.  That is probed through the supplied
       finite quotients: a nonzero image of H2(presentation complex) in
       H2(quotient) certifies H2 != 0 and refutes; silence proves nothing.
    3. A knot group has weight one.  If `weight_witness` (a word, or its
       text) is supplied, its image must normally generate every supplied
       finite quotient; a quotient where it fails refutes this
       (presentation, witness) pair, and killing them all upgrades the
       verdict to "pass_with_certificate".
    """
    if isinstance(weight_witness, str):
        weight_witness = parse_word(weight_witness, list(pres.generators))
    h1 = abelianization(pres)
    if h1 != [0]:
        pretty = " + ".join("Z" if d == 0 else f"Z/{d}" for d in h1) or "0"
        return KnotVerdict("refuted", h1,
                           [f"H1 is {pretty}, not Z"])
    for num, beta in enumerate(quotient_probes):
        if beta.source != pres:
            raise InvalidInput(f"probe #{num} starts at a different presentation")
        classes = _h2_image_classes(pres, beta, budgets)
        if classes:
            return KnotVerdict(
                "refuted", h1,
                [f"H2 of the group surjects onto nonzero classes in H2 of "
                 f"the order-{beta.target.order} quotient (probe #{num}), "
                 f"so H2 != 0"],
                certificate={"probe": num, "classes": classes})
    if weight_witness is None:
        return KnotVerdict("pass_necessary", h1,
                           ["H1 = Z; no H2 obstruction found in the "
                            "supplied quotients"])
    killed = []
    for num, beta in enumerate(quotient_probes):
        image = beta.evaluate(weight_witness)
        closure = normal_closure(beta.target, [image])
        if closure.order != beta.target.order:
            return KnotVerdict(
                "refuted", h1,
                [f"the witness normally generates only {closure.order} of "
                 f"{beta.target.order} elements in probe #{num}, refuting "
                 f"this (presentation, witness) weight-one claim"],
                certificate={"probe": num,
                             "witness": format_word(weight_witness,
                                                    list(pres.generators)),
                             "closure_order": closure.order})
        killed.append({"probe": num, "order": beta.target.order})
    return KnotVerdict(
        "pass_with_certificate", h1,
        ["H1 = Z; no H2 obstruction; the witness normally generates every "
         "supplied finite quotient"],
        certificate={"witness": format_word(weight_witness,
                                            list(pres.generators)),
                     "killed": killed})
