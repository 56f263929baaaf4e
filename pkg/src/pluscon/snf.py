"""Exact integer matrix algebra: Smith normal form, kernels, linear solves.

All routines work on numpy arrays with ``dtype=object`` holding Python ints,
so coefficients are arbitrary precision.  The Smith reduction uses a pinned
pivot rule — smallest nonzero magnitude, ties broken by lowest (row, col) in
row-major order — so every run of every routine is bit-for-bit reproducible.

The factorization convention is ``D = U @ A @ V`` with U, V unimodular.
Inverse transforms are accumulated alongside (cheaply, one mirrored
elementary op each), because downstream homology bookkeeping needs them.

A bit-size budget guards against coefficient explosion: if any intermediate
entry exceeds ``budgets.int_bit_bound`` bits the reduction aborts with
:class:`~pluscon.errors.BudgetExceeded` instead of thrashing.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from .config import DEFAULT, Budgets
from .errors import BudgetExceeded, RankMismatch


def as_object_matrix(rows) -> np.ndarray:
    """Coerce a list-of-lists / ndarray of ints into a 2-D object array."""
    if isinstance(rows, np.ndarray) and rows.dtype == object and rows.ndim == 2:
        return rows
    arr = np.array(rows, dtype=object)
    if arr.ndim == 1:
        # Comes up for [] (an empty matrix with zero rows).
        arr = arr.reshape((arr.shape[0], 0)) if arr.size == 0 else arr.reshape((1, -1))
    if arr.ndim != 2:
        raise RankMismatch(f"expected a matrix, got array of ndim {arr.ndim}")
    out = np.empty(arr.shape, dtype=object)
    for i in range(arr.shape[0]):
        for j in range(arr.shape[1]):
            out[i, j] = int(arr[i, j])
    return out


def zeros_object(r: int, c: int) -> np.ndarray:
    m = np.empty((r, c), dtype=object)
    m[...] = 0
    return m


def identity_object(n: int) -> np.ndarray:
    m = zeros_object(n, n)
    for i in range(n):
        m[i, i] = 1
    return m


def mat_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact product of two object matrices."""
    if a.shape[1] != b.shape[0]:
        raise RankMismatch(f"cannot multiply {a.shape} by {b.shape}")
    if a.shape[0] == 0 or b.shape[1] == 0 or a.shape[1] == 0:
        return zeros_object(a.shape[0], b.shape[1])
    return np.dot(a, b)


def is_zero_matrix(a: np.ndarray) -> bool:
    return a.size == 0 or not np.any(a != 0)


@dataclasses.dataclass
class SmithForm:
    """Result of a Smith reduction: ``diag == U @ a @ V`` elementwise."""

    d: list            # nonnegative diagonal entries, divisibility chain
    U: np.ndarray
    V: np.ndarray
    Uinv: np.ndarray
    Vinv: np.ndarray
    shape: tuple

    @property
    def rank(self) -> int:
        return sum(1 for x in self.d if x != 0)

    def diagonal_matrix(self) -> np.ndarray:
        m = zeros_object(*self.shape)
        for i, x in enumerate(self.d):
            m[i, i] = x
        return m

    def invariant_factors(self) -> list:
        """Nontrivial part of the chain: factors > 1 (units dropped)."""
        return [x for x in self.d if x not in (0, 1)]

    def solve(self, b: np.ndarray):
        """One integral solution x of A x = b, or None if there is none."""
        sols = self.solve_many(b.reshape(-1, 1))
        return None if sols is None else sols[:, 0]

    def solve_many(self, B: np.ndarray):
        """Solve A X = B column-wise; None unless every column is solvable."""
        rows, cols = self.shape
        if B.shape[0] != rows:
            raise RankMismatch(f"rhs has {B.shape[0]} rows, expected {rows}")
        Y = mat_mul(self.U, B)
        X = zeros_object(cols, B.shape[1])
        for i in range(rows):
            di = self.d[i] if i < len(self.d) else 0
            for j in range(B.shape[1]):
                y = Y[i, j]
                if di == 0:
                    if y != 0:
                        return None
                else:
                    q, r = divmod(y, di)
                    if r != 0:
                        return None
                    if i < cols:
                        X[i, j] = q
        return mat_mul(self.V, X)

    def kernel_basis(self) -> np.ndarray:
        """Columns form a basis of the right kernel {x : A x = 0}.

        The kernel of an integer matrix is saturated, so this basis spans a
        direct summand of Z^cols.
        """
        cols = self.shape[1]
        free = [j for j in range(cols) if j >= len(self.d) or self.d[j] == 0]
        return self.V[:, free] if free else zeros_object(cols, 0)

    def cokernel_class(self, b: np.ndarray) -> list:
        """Coordinates of b in coker(A) = Z^rows / im(A).

        Returns a list pairing each coordinate with its order datum: entries
        are (value mod d_i, d_i) for torsion rows and (value, 0) for free
        rows; unit rows are dropped.
        """
        y = mat_mul(self.U, b.reshape(-1, 1))[:, 0]
        out = []
        for i in range(self.shape[0]):
            di = self.d[i] if i < len(self.d) else 0
            if di == 1:
                continue
            out.append((y[i] % di if di else y[i], di))
        return out


def _find_pivot(a: np.ndarray, t: int):
    """Smallest-magnitude nonzero in a[t:, t:]; ties to lowest (i, j)."""
    sub = a[t:, t:]
    if sub.size == 0:
        return None
    abssub = abs(sub)
    nz = abssub != 0
    if not nz.any():
        return None
    vals = abssub[nz]
    m = vals.min()
    flat = np.flatnonzero((abssub == m) & nz)[0]
    i, j = divmod(int(flat), sub.shape[1])
    return t + i, t + j, int(m)


class _Tracker:
    """Working matrix plus accumulated transforms and their inverses."""

    def __init__(self, a: np.ndarray, budgets: Budgets):
        self.a = a.copy()
        r, c = a.shape
        self.U = identity_object(r)
        self.Uinv = identity_object(r)
        self.V = identity_object(c)
        self.Vinv = identity_object(c)
        self.bit_bound = budgets.int_bit_bound

    def row_sub(self, i, t, q):
        # row_i -= q * row_t  (E = I - q e_i e_t^T; Uinv picks up E^{-1})
        self.a[i, :] -= q * self.a[t, :]
        self.U[i, :] -= q * self.U[t, :]
        self.Uinv[:, t] += q * self.Uinv[:, i]

    def col_sub(self, j, t, q):
        self.a[:, j] -= q * self.a[:, t]
        self.V[:, j] -= q * self.V[:, t]
        self.Vinv[t, :] += q * self.Vinv[j, :]

    def row_swap(self, i, t):
        if i != t:
            self.a[[i, t], :] = self.a[[t, i], :]
            self.U[[i, t], :] = self.U[[t, i], :]
            self.Uinv[:, [i, t]] = self.Uinv[:, [t, i]]

    def col_swap(self, j, t):
        if j != t:
            self.a[:, [j, t]] = self.a[:, [t, j]]
            self.V[:, [j, t]] = self.V[:, [t, j]]
            self.Vinv[[j, t], :] = self.Vinv[[t, j], :]

    def row_negate(self, i):
        self.a[i, :] = -self.a[i, :]
        self.U[i, :] = -self.U[i, :]
        self.Uinv[:, i] = -self.Uinv[:, i]

    def check_budget(self, t):
        sub = self.a[t:, t:]
        if sub.size == 0:
            return
        m = abs(sub).max()
        if m != 0 and int(m).bit_length() > self.bit_bound:
            raise BudgetExceeded(
                f"matrix entry reached {int(m).bit_length()} bits "
                f"(bound {self.bit_bound}) during Smith reduction"
            )


def smith_normal_form(a, budgets: Budgets = DEFAULT) -> SmithForm:
    """Smith form with transforms: diag(d) = U @ a @ V, U and V unimodular.

    The diagonal satisfies d[0] | d[1] | ... and every d[i] >= 0.  Pivoting
    is deterministic (see module docstring), so identical inputs produce
    identical transforms on every run.
    """
    a = as_object_matrix(a)
    w = _Tracker(a, budgets)
    r, c = a.shape
    t = 0
    steps = 0
    while t < min(r, c):
        found = _find_pivot(w.a, t)
        if found is None:
            break
        pi, pj, _ = found
        w.row_swap(pi, t)
        w.col_swap(pj, t)
        while True:
            # Reduce column t, then row t, re-pivoting on remainders until
            # the pivot divides everything it faces.
            dirty = False
            for i in range(t + 1, r):
                if w.a[i, t] != 0:
                    q = w.a[i, t] // w.a[t, t]
                    if q:
                        w.row_sub(i, t, q)
                    if w.a[i, t] != 0:
                        dirty = True
            if dirty:
                found = _find_pivot(w.a, t)
                w.row_swap(found[0], t)
                w.col_swap(found[1], t)
                continue
            for j in range(t + 1, c):
                if w.a[t, j] != 0:
                    q = w.a[t, j] // w.a[t, t]
                    if q:
                        w.col_sub(j, t, q)
                    if w.a[t, j] != 0:
                        dirty = True
            if dirty:
                found = _find_pivot(w.a, t)
                w.row_swap(found[0], t)
                w.col_swap(found[1], t)
                continue
            # Divisibility fix-up: drag a bad entry into row t and restart.
            d = w.a[t, t]
            bad = None
            for i in range(t + 1, r):
                for j in range(t + 1, c):
                    if w.a[i, j] % d != 0:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            w.row_sub(t, bad, -1)  # row_t += row_bad
        if w.a[t, t] < 0:
            w.row_negate(t)
        steps += 1
        if steps % 16 == 0:
            w.check_budget(t)
        t += 1
    d = [int(w.a[i, i]) for i in range(min(r, c))]
    return SmithForm(d=d, U=w.U, V=w.V, Uinv=w.Uinv, Vinv=w.Vinv, shape=(r, c))


def rank(a, budgets: Budgets = DEFAULT) -> int:
    return smith_normal_form(a, budgets).rank


def kernel_basis(a, budgets: Budgets = DEFAULT) -> np.ndarray:
    return smith_normal_form(a, budgets).kernel_basis()


def solve(a, b, budgets: Budgets = DEFAULT):
    b = np.array([int(x) for x in b], dtype=object)
    return smith_normal_form(a, budgets).solve(b)


def determinant(a, budgets: Budgets = DEFAULT):
    """Exact determinant via Bareiss fraction-free elimination."""
    a = as_object_matrix(a).copy()
    n, m = a.shape
    if n != m:
        raise RankMismatch(f"determinant needs a square matrix, got {a.shape}")
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k, k] == 0:
            nz = [i for i in range(k + 1, n) if a[i, k] != 0]
            if not nz:
                return 0
            a[[k, nz[0]], :] = a[[nz[0], k], :]
            sign = -sign
        pivot = a[k, k]
        for i in range(k + 1, n):
            # Bareiss update: exact division by the previous pivot.
            a[i, k + 1:] = (pivot * a[i, k + 1:] - a[i, k] * a[k, k + 1:]) // prev
            a[i, k] = 0
        prev = pivot
        if int(abs(pivot)).bit_length() > budgets.int_bit_bound:
            raise BudgetExceeded("determinant pivot exceeded the bit budget")
    return sign * int(a[n - 1, n - 1])


def invert_unimodular(u: np.ndarray, budgets: Budgets = DEFAULT) -> np.ndarray:
    """Exact inverse of an integer matrix with determinant +-1."""
    u = as_object_matrix(u)
    n = u.shape[0]
    sf = smith_normal_form(u, budgets)
    if sf.rank != n or any(x != 1 for x in sf.d):
        raise RankMismatch("matrix is not unimodular")
    # u = Uinv @ I @ Vinv, so u^-1 = V @ U.
    return mat_mul(sf.V, sf.U)


def generic_determinant(rows, zero, one):
    """Determinant over any commutative ring whose elements support +, *, -.

    Laplace expansion organized as a subset DP: process rows one at a time,
    keeping the minor determinants for every set of used columns.  This is
    O(2^n * n) ring multiplications — fine for the small matrices (torsion
    representatives) it is used on, and it needs no division at all.
    """
    rows = [list(r) for r in rows]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise RankMismatch("determinant needs a square matrix")
    if n == 0:
        return one
    minors = {0: one}
    for r in range(n):
        nxt = {}
        for cols, val in minors.items():
            # sign of appending column j = parity of used columns above j
            parity = 0
            for j in range(n - 1, -1, -1):
                bit = 1 << j
                if cols & bit:
                    parity ^= 1
                    continue
                term = val * rows[r][j]
                if parity:
                    term = zero - term
                key = cols | bit
                nxt[key] = nxt[key] + term if key in nxt else term
        minors = nxt
    return minors[(1 << n) - 1]
