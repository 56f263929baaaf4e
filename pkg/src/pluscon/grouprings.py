"""Integral group rings Z[G] for finite G: elements, matrices, encodings.

Everything downstream rides on two faithful integer encodings of Z[G]
matrices:

* the block **regular representation** ``rho(A)``, a ring homomorphism into
  integer matrices — A is invertible over Z[G] exactly when rho(A) is
  unimodular, and the inverse reads back off the identity column of each
  block;

* the **row-action matrix** of A, which turns the Z[G]-linear map
  v |-> v . A on row vectors into plain integer linear algebra on
  coefficient vectors, so kernels and linear solves reduce to Smith form.

Matrices follow the row convention used throughout the package: a based
free module has its basis along rows, and maps act on the right of row
vectors.
"""

from __future__ import annotations

import re

import numpy as np

from .errors import InvalidInput, MixedGroups, ParseError, RankMismatch
from .groups import FiniteGroupRealization, cyclic_generator
from .snf import as_object_matrix, generic_determinant, identity_object, zeros_object


class GroupRingElement:
    """An element of Z[G], stored as {element index: nonzero coefficient}."""

    __slots__ = ("group", "coeffs")

    def __init__(self, group: FiniteGroupRealization, coeffs=None):
        self.group = group
        self.coeffs = {}
        if coeffs:
            for g, c in coeffs.items():
                c = int(c)
                if c:
                    if not 0 <= g < group.order:
                        raise InvalidInput(f"no element with index {g}")
                    self.coeffs[int(g)] = c

    # -- constructors --------------------------------------------------

    @classmethod
    def zero(cls, group):
        return cls(group)

    @classmethod
    def one(cls, group):
        return cls(group, {0: 1})

    @classmethod
    def basis(cls, group, g: int, coefficient: int = 1):
        return cls(group, {g: coefficient})

    @classmethod
    def from_integer(cls, group, n: int):
        return cls(group, {0: n})

    # -- ring structure --------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, int):
            return GroupRingElement.from_integer(self.group, other)
        if isinstance(other, GroupRingElement):
            if not self.group.same_as(other.group):
                raise MixedGroups("elements live over different groups")
            return other
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self.coeffs)
        for g, c in other.coeffs.items():
            out[g] = out.get(g, 0) + c
        return GroupRingElement(self.group, out)

    __radd__ = __add__

    def __neg__(self):
        return GroupRingElement(self.group, {g: -c for g, c in self.coeffs.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        mul = self.group.mul
        out = {}
        for g, a in self.coeffs.items():
            for h, b in other.coeffs.items():
                k = mul(g, h)
                out[k] = out.get(k, 0) + a * b
        return GroupRingElement(self.group, out)

    def __rmul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self

    def __eq__(self, other):
        if isinstance(other, int):
            return self.coeffs == ({0: other} if other else {})
        if not isinstance(other, GroupRingElement):
            return NotImplemented
        return self.group.same_as(other.group) and self.coeffs == other.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __hash__(self):
        return hash((self.group.order, tuple(sorted(self.coeffs.items()))))

    # -- structure maps ----------------------------------------------------

    def involution(self) -> "GroupRingElement":
        """The standard anti-automorphism sum a_g g  |->  sum a_g g^-1."""
        inv = self.group.inv
        return GroupRingElement(self.group, {inv(g): c for g, c in self.coeffs.items()})

    def augmentation(self) -> int:
        return sum(self.coeffs.values())

    def support(self):
        return sorted(self.coeffs)

    def __repr__(self):
        return f"GroupRingElement({format_element(self)!r})"


# ---------------------------------------------------------------------------
# text form


_TERM_TOKEN = re.compile(r"\s*(\[g\d+\]|[A-Za-z_][A-Za-z0-9_]*|\d+|\^|\*|\+|-)")


def parse_element(text: str, group: FiniteGroupRealization,
                  symbol: str = "t") -> GroupRingElement:
    """Parse expressions like ``3*t^2 - t + 1`` or ``2*[g3] - [g0]``.

    The power-of-``symbol`` form needs a cyclic group (the symbol means its
    canonical generator); the ``[gN]`` form indexes elements of any group
    directly.  A bare integer is that multiple of the identity.
    """
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TERM_TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise ParseError(f"bad character in {text!r} at position {pos}")
            break
        tokens.append(m.group(1))
        pos = m.end()
    gen = None
    n = group.order

    def generator():
        nonlocal gen
        if gen is None:
            gen = cyclic_generator(group)
            if gen is None:
                raise ParseError(
                    f"{symbol!r} notation needs a cyclic group; use [gN] instead")
        return gen

    out = GroupRingElement.zero(group)
    i = 0
    while i < len(tokens):
        sign = 1
        while i < len(tokens) and tokens[i] in "+-":
            if tokens[i] == "-":
                sign = -sign
            i += 1
        if i >= len(tokens):
            raise ParseError(f"dangling sign in {text!r}")
        coeff = 1
        have_coeff = False
        if tokens[i].isdigit():
            coeff = int(tokens[i])
            have_coeff = True
            i += 1
            if i < len(tokens) and tokens[i] == "*":
                i += 1
        elt = None
        if i < len(tokens) and tokens[i].startswith("[g"):
            idx = int(tokens[i][2:-1])
            if not 0 <= idx < n:
                raise ParseError(f"element index {idx} out of range for order {n}")
            elt = idx
            i += 1
        elif i < len(tokens) and tokens[i] == symbol:
            i += 1
            power = 1
            if i < len(tokens) and tokens[i] == "^":
                i += 1
                neg = False
                if i < len(tokens) and tokens[i] == "-":
                    neg = True
                    i += 1
                if i >= len(tokens) or not tokens[i].isdigit():
                    raise ParseError(f"expected an exponent in {text!r}")
                power = -int(tokens[i]) if neg else int(tokens[i])
                i += 1
            g = generator()
            elt = 0
            for _ in range(power % group.order):
                elt = group.mul(elt, g)
        elif not have_coeff:
            raise ParseError(f"expected a term in {text!r} near token {i}")
        if elt is None:
            elt = 0  # bare integer: multiple of the identity
        out = out + GroupRingElement.basis(group, elt, sign * coeff)
    return out


def format_element(a: GroupRingElement, symbol: str = "t") -> str:
    """Deterministic inverse of :func:`parse_element`.

    Cyclic groups print as polynomials in the canonical generator; other
    groups use the indexed ``[gN]`` basis form.  The zero element prints as
    ``0``.
    """
    if not a.coeffs:
        return "0"
    gen = cyclic_generator(a.group)
    if gen is not None:
        # exponent of each element with respect to the canonical generator
        exp_of = {}
        x, e = 0, 0
        while x not in exp_of:
            exp_of[x] = e
            x = a.group.mul(x, gen)
            e += 1
        items = sorted((exp_of[g], c) for g, c in a.coeffs.items())
        parts = []
        for e, c in items:
            if e == 0:
                body = str(abs(c))
            else:
                mag = "" if abs(c) == 1 else f"{abs(c)}*"
                body = f"{mag}{symbol}" + (f"^{e}" if e != 1 else "")
            parts.append(("- " if c < 0 else "+ ") + body)
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]
    parts = []
    for g in sorted(a.coeffs):
        c = a.coeffs[g]
        mag = "" if abs(c) == 1 else f"{abs(c)}*"
        parts.append(("- " if c < 0 else "+ ") + f"{mag}[g{g}]")
    text = " ".join(parts)
    return text[2:] if text.startswith("+ ") else "-" + text[2:]


# ---------------------------------------------------------------------------
# matrices


class GroupRingMatrix:
    """A matrix over Z[G], stored as an object ndarray of ring elements.

    Rows index the source basis and maps act on the right of row vectors,
    matching the boundary-matrix convention of the chain complex layer.
    """

    def __init__(self, group: FiniteGroupRealization, entries):
        self.group = group
        arr = np.empty((len(entries), len(entries[0]) if entries else 0), dtype=object)
        width = arr.shape[1]
        for i, row in enumerate(entries):
            if len(row) != width:
                raise RankMismatch("ragged rows in matrix")
            for j, x in enumerate(row):
                if isinstance(x, int):
                    x = GroupRingElement.from_integer(group, x)
                if not isinstance(x, GroupRingElement) or not group.same_as(x.group):
                    raise MixedGroups("entry is not an element of this group ring")
                arr[i, j] = x
        self.entries = arr

    @classmethod
    def zeros(cls, group, rows: int, cols: int):
        z = GroupRingElement.zero(group)
        out = cls(group, [[z] * cols for _ in range(rows)])
        if rows == 0:  # keep the column count on empty matrices
            out.entries = np.empty((0, cols), dtype=object)
        return out

    @classmethod
    def identity(cls, group, n: int):
        one = GroupRingElement.one(group)
        zero = GroupRingElement.zero(group)
        return cls(group, [[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def from_array(cls, group, arr):
        return cls(group, [list(row) for row in arr])

    @property
    def shape(self):
        return self.entries.shape

    def __getitem__(self, ij):
        return self.entries[ij]

    def row(self, i):
        return list(self.entries[i, :])

    def __eq__(self, other):
        if not isinstance(other, GroupRingMatrix):
            return NotImplemented
        return (self.group.same_as(other.group) and self.shape == other.shape
                and all(self.entries[i, j] == other.entries[i, j]
                        for i in range(self.shape[0]) for j in range(self.shape[1])))

    def __add__(self, other):
        self._check(other)
        if self.shape != other.shape:
            raise RankMismatch("shape mismatch in sum")
        return GroupRingMatrix(self.group, (self.entries + other.entries).tolist())

    def __sub__(self, other):
        self._check(other)
        if self.shape != other.shape:
            raise RankMismatch("shape mismatch in difference")
        return GroupRingMatrix(self.group, (self.entries - other.entries).tolist())

    def __neg__(self):
        return GroupRingMatrix(self.group, (-self.entries).tolist())

    def _check(self, other):
        if not isinstance(other, GroupRingMatrix) or not self.group.same_as(other.group):
            raise MixedGroups("matrices live over different group rings")

    def __matmul__(self, other):
        self._check(other)
        if self.shape[1] != other.shape[0]:
            raise RankMismatch(f"cannot multiply {self.shape} by {other.shape}")
        m, k = self.shape
        n = other.shape[1]
        zero = GroupRingElement.zero(self.group)
        out = [[zero] * n for _ in range(m)]
        for i in range(m):
            for jj in range(n):
                acc = zero
                for t in range(k):
                    a = self.entries[i, t]
                    b = other.entries[t, jj]
                    if a.coeffs and b.coeffs:
                        acc = acc + a * b
                out[i][jj] = acc
        return GroupRingMatrix(self.group, out)

    def is_zero(self) -> bool:
        return all(not x for x in self.entries.flat)

    def conjugate_transpose(self) -> "GroupRingMatrix":
        """Apply the involution entrywise and transpose (duality operator)."""
        m, n = self.shape
        return GroupRingMatrix(
            self.group,
            [[self.entries[j, i].involution() for j in range(m)] for i in range(n)])

    def augmentation(self) -> np.ndarray:
        """Entrywise augmentation: the induced integer matrix over Z."""
        m, n = self.shape
        out = zeros_object(m, n)
        for i in range(m):
            for j in range(n):
                out[i, j] = self.entries[i, j].augmentation()
        return out

    def block_diag(self, other: "GroupRingMatrix") -> "GroupRingMatrix":
        self._check(other)
        m1, n1 = self.shape
        m2, n2 = other.shape
        zero = GroupRingElement.zero(self.group)
        out = [[zero] * (n1 + n2) for _ in range(m1 + m2)]
        for i in range(m1):
            for j in range(n1):
                out[i][j] = self.entries[i, j]
        for i in range(m2):
            for j in range(n2):
                out[m1 + i][n1 + j] = other.entries[i, j]
        return GroupRingMatrix(self.group, out)

    def __repr__(self):
        m, n = self.shape
        return f"<GroupRingMatrix {m}x{n} over {self.group!r}>"


def hstack(a: GroupRingMatrix, b: GroupRingMatrix) -> GroupRingMatrix:
    a._check(b)
    if a.shape[0] != b.shape[0]:
        raise RankMismatch("row counts differ")
    return GroupRingMatrix(a.group, [a.row(i) + b.row(i) for i in range(a.shape[0])])


def vstack(a: GroupRingMatrix, b: GroupRingMatrix) -> GroupRingMatrix:
    a._check(b)
    if a.shape[1] != b.shape[1]:
        raise RankMismatch("column counts differ")
    return GroupRingMatrix(a.group, [a.row(i) for i in range(a.shape[0])]
                           + [b.row(i) for i in range(b.shape[0])])


# ---------------------------------------------------------------------------
# integer encodings


def regular_representation(a: GroupRingMatrix) -> np.ndarray:
    """Block integer matrix rho(A): a ring homomorphism Z[G] -> M_|G|(Z).

    Per entry, rho(x)[u, v] = x(g_u g_v^-1), i.e. the matrix of left
    multiplication by x on Z[G] with its element basis.  rho(AB) equals
    rho(A) rho(B), so unimodularity of rho(A) is exactly invertibility of A
    over the group ring.
    """
    g = a.group
    n = g.order
    m, k = a.shape
    out = zeros_object(m * n, k * n)
    for i in range(m):
        for j in range(k):
            x = a.entries[i, j]
            for s, c in x.coeffs.items():
                for v in range(n):
                    out[i * n + g.mul(s, v), j * n + v] += c
    return out


def from_regular_representation(group: FiniteGroupRealization,
                                big: np.ndarray, rows: int, cols: int) -> GroupRingMatrix:
    """Read a block integer matrix back into Z[G] entries.

    Only valid on matrices that genuinely lie in the image of the regular
    representation (e.g. inverses of represented matrices); the identity
    column of each block carries all the coefficients.
    """
    n = group.order
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            coeffs = {}
            for u in range(n):
                c = int(big[i * n + u, j * n + 0])
                if c:
                    coeffs[u] = c
            row.append(GroupRingElement(group, coeffs))
        out.append(row)
    cand = GroupRingMatrix(group, out)
    return cand


def row_action_matrix(a: GroupRingMatrix) -> np.ndarray:
    """Integer matrix of the map v |-> v . A on row-vector coefficients.

    Row coordinates are (i, g) flattened as i*|G| + g, columns likewise
    (k, h); the block entry is A[i, k](g^-1 h).  Multiplying a coefficient
    row vector by this matrix performs the group-ring product exactly.
    """
    g = a.group
    n = g.order
    m, k = a.shape
    out = zeros_object(m * n, k * n)
    for i in range(m):
        for kk in range(k):
            x = a.entries[i, kk]
            for s, c in x.coeffs.items():
                for u in range(n):
                    out[i * n + u, kk * n + g.mul(u, s)] += c
    return out


def vector_to_coefficients(v) -> np.ndarray:
    """Flatten a list of GroupRingElements into one integer coefficient row."""
    if not len(v):
        return zeros_object(1, 0)[0]
    n = v[0].group.order
    out = zeros_object(1, len(v) * n)[0]
    for i, x in enumerate(v):
        for g, c in x.coeffs.items():
            out[i * n + g] = c
    return out

def coefficients_to_vector(group: FiniteGroupRealization, row) -> list:
    """Inverse of :func:`vector_to_coefficients`."""
    n = group.order
    if len(row) % n:
        raise RankMismatch("coefficient row length is not a multiple of |G|")
    out = []
    for i in range(len(row) // n):
        coeffs = {g: int(row[i * n + g]) for g in range(n) if row[i * n + g]}
        out.append(GroupRingElement(group, coeffs))
    return out


def invert_matrix(a: GroupRingMatrix, budgets=None):
    """Inverse of A over Z[G], or None when A is not invertible.

    Goes through the regular representation: invert the integer image (if
    unimodular), read the blocks back, and verify the product — the final
    check makes the answer a certificate rather than a computation trusted
    on faith.
    """
    from .config import DEFAULT
    from .snf import invert_unimodular
    if budgets is None:
        budgets = DEFAULT
    m, k = a.shape
    if m != k:
        raise RankMismatch("only square matrices can be inverted")
    big = regular_representation(a)
    try:
        big_inv = invert_unimodular(big, budgets)
    except RankMismatch:
        return None
    cand = from_regular_representation(a.group, big_inv, m, m)
    prod = a @ cand
    if prod != GroupRingMatrix.identity(a.group, m):
        return None
    return cand


def is_invertible(a: GroupRingMatrix, budgets=None) -> bool:
    return invert_matrix(a, budgets) is not None


def ring_determinant(a: GroupRingMatrix) -> GroupRingElement:
    """Determinant of a matrix over a commutative group ring.

    Only meaningful when the group is abelian; used for invariants of
    torsion classes after abelianization.
    """
    if not a.group.is_abelian():
        raise InvalidInput("determinants need a commutative coefficient ring")
    return generic_determinant(
        [a.row(i) for i in range(a.shape[0])],
        GroupRingElement.zero(a.group),
        GroupRingElement.one(a.group))
